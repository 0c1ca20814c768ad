//! Grafting a δ inference below an existing proof and regrowing the proof
//! on top of it.
//!
//! Given a proof θ rooted at Γ and a set B of its open leaves that all
//! contain the δ formula P, each b ∈ B is weakened down to Γ, P, the δ rule
//! is applied with witness δ (fresh there, since Γ mentions no Skolem
//! term), P is weakened away and a copy of θ is regrown on the new leaf
//! with the instance D as an extra side formula. The copy keeps D only
//! on the branches that lead back to B.
//!
//! Replaying a δ inference of θ inside a copy can clash with D when its
//! witness ε occurs in D. If ε is δ itself the inference is already done:
//! D is its conclusion. Otherwise ε has strictly smaller rank than δ and
//! the offending leaves are first grafted for ε, recursively.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Stats, TranslateError};
use crate::formula::{Components, Formula, Symbol, Term};
use crate::gs3::{Freshness, GsProof, GsRule, Inference, NodeId};
use crate::multiset;
use crate::path::Path;

/// How the open leaves of a grafted proof relate to the leaves of θ.
/// Every open leaf is in exactly one of the two maps.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bilink {
    /// Leaves carrying the sequent of a B leaf plus exactly D.
    pub into_b: BTreeMap<NodeId, NodeId>,
    /// Leaves carrying exactly the sequent of a θ leaf outside B.
    pub elsewhere: BTreeMap<NodeId, NodeId>,
}

impl Bilink {
    /// The θ leaf an open leaf of the grafted proof stands for.
    pub fn target(&self, s: NodeId) -> Option<(NodeId, bool)> {
        self.into_b
            .get(&s)
            .map(|&t| (t, true))
            .or_else(|| self.elsewhere.get(&s).map(|&t| (t, false)))
    }
}

/// Open leaves of the proof being regrown, each standing at a node of θ
/// with or without the side formula D.
#[derive(Default)]
struct Positions {
    of: BTreeMap<NodeId, (NodeId, bool)>,
    at: BTreeMap<NodeId, Vec<NodeId>>,
}

impl Positions {
    fn insert(&mut self, leaf: NodeId, node: NodeId, side: bool) {
        self.of.insert(leaf, (node, side));
        self.at.entry(node).or_default().push(leaf);
    }

    fn take_at(&mut self, node: NodeId) -> Vec<(NodeId, bool)> {
        let leaves = self.at.remove(&node).unwrap_or_default();
        leaves.into_iter().map(|l| (l, self.of.remove(&l).expect("indexed leaf").1)).collect()
    }
}

pub(crate) struct Grafter<'a> {
    pub ranks: &'a BTreeMap<Symbol, usize>,
    pub stats: &'a mut Stats,
    pub node_limit: usize,
    pub from_root: bool,
}

fn invariant(msg: String) -> TranslateError {
    TranslateError::Invariant(msg)
}

fn step(pi: &mut GsProof, at: NodeId, inf: Inference) -> Result<Vec<NodeId>, TranslateError> {
    let name = inf.rule.name();
    pi.build_step_with(at, inf, Freshness::Term)
        .map_err(|r| invariant(format!("replayed {name} inference rejected: {r}")))
}

fn sorted(mut fs: Vec<Formula>) -> Vec<Formula> {
    fs.sort_by_cached_key(Formula::print);
    fs
}

/// The formula a δ or γ inference with `witness` adds to its premise.
pub(crate) fn instance(principal: &Formula, witness: &Term) -> Option<Formula> {
    match principal.decompose().ok()? {
        Components::Gamma(q) | Components::Delta(q) => Some(q.instance(witness)),
        _ => None,
    }
}

impl Grafter<'_> {
    fn rank(&self, t: &Term) -> Result<usize, TranslateError> {
        match t {
            Term::App(sym, _) => {
                self.ranks.get(sym).copied().ok_or_else(|| invariant(format!("{t} is not a Skolem term of the tableau")))
            }
            _ => Err(invariant(format!("{t} is not a Skolem term"))),
        }
    }

    /// The deepest common ancestor of `b` whose sequent Γ lacks `delta`
    /// and is kept by every leaf of `b`, with Γ and the sequent the leaves
    /// are cleaned down to. Regrowing only above it keeps the copy small;
    /// the root always qualifies when θ starts from a Skolem-free sequent.
    fn base(
        &self,
        theta: &GsProof,
        b: &[NodeId],
        delta: &Term,
        principal: &Formula,
    ) -> Result<(NodeId, Vec<Formula>, Vec<Formula>), TranslateError> {
        let mut bits: Option<&[u8]> = None;
        for &leaf in b {
            let p = theta.node(leaf).path().bits();
            bits = Some(match bits {
                None => p,
                Some(q) => &q[..q.iter().zip(p).take_while(|(x, y)| x == y).count()],
            });
        }
        let mut candidate = if self.from_root { Some(Path::root()) } else { bits.and_then(Path::from_bits) };
        while let Some(p) = candidate {
            candidate = p.parent();
            let Some(id) = theta.find(&p) else { continue };
            let gamma = theta.sequent(id);
            if gamma.iter().any(|f| f.contains_term(delta)) {
                continue;
            }
            let mut keep = gamma.to_vec();
            if !multiset::contains(gamma, principal) {
                keep.push(principal.clone());
            }
            if b.iter().all(|&leaf| multiset::difference(theta.sequent(leaf), &keep).is_some()) {
                return Ok((id, gamma.to_vec(), keep));
            }
        }
        Err(invariant(format!("no node below the leaves grafted for {delta} can carry the δ inference")))
    }

    /// Grafts the δ inference for `principal` with witness `delta` below
    /// every leaf of `b` and regrows `theta` above the grafts.
    pub fn graft(
        &mut self,
        theta: &GsProof,
        b: &[NodeId],
        delta: &Term,
        principal: &Formula,
    ) -> Result<(GsProof, Bilink), TranslateError> {
        let d = instance(principal, delta).ok_or_else(|| invariant(format!("{principal} is not a δ formula")))?;
        let rule = GsRule::for_principal(principal, Some(delta.clone()))
            .filter(GsRule::is_delta)
            .ok_or_else(|| invariant(format!("{principal} is not a δ formula")))?;
        let (base, gamma, keep) = self.base(theta, b, delta, principal)?;
        let base_path = theta.node(base).path().clone();
        let b_set: BTreeSet<NodeId> = b.iter().copied().collect();
        let mut toward_b: BTreeSet<Path> = BTreeSet::new();
        for &leaf in b {
            let mut p = Some(theta.node(leaf).path().clone());
            while let Some(q) = p {
                p = q.parent();
                toward_b.insert(q);
            }
        }
        self.stats.grafts += 1;

        let mut pi = theta.clone();
        let mut pos = Positions::default();
        for leaf in theta.open_leaves() {
            if !b_set.contains(&leaf) {
                pos.insert(leaf, leaf, false);
            }
        }

        // clean each leaf of B, apply the δ rule, clean again
        let principal_in_gamma = multiset::contains(&gamma, principal);
        for &leaf in b {
            let seq = theta.sequent(leaf);
            if !multiset::contains(seq, principal) {
                return Err(invariant(format!("δ formula {principal} missing at {}", theta.node(leaf).path())));
            }
            let dropped = multiset::difference(seq, &keep)
                .ok_or_else(|| invariant(format!("leaf {} does not contain the base sequent", theta.node(leaf).path())))?;
            let mut at = leaf;
            if !dropped.is_empty() {
                at = step(&mut pi, at, Inference::weaken(sorted(dropped)))?[0];
            }
            at = step(&mut pi, at, Inference::new(rule.clone(), principal.clone()))?[0];
            if !principal_in_gamma {
                at = step(&mut pi, at, Inference::weaken(alloc::vec![principal.clone()]))?[0];
            }
            pos.insert(at, base, true);
        }

        // regrow the part of θ above the base on every grafted leaf
        for m in theta.preorder() {
            if !base_path.is_prefix_of(theta.node(m).path()) {
                continue;
            }
            let Some(inf) = theta.node(m).inference() else { continue };
            let here = pos.take_at(m);
            if here.is_empty() {
                continue;
            }
            let children = theta.node(m).children().to_vec();
            let leads_to_b = |c: NodeId| toward_b.contains(theta.node(c).path());
            let mut nested = Vec::new();
            for (s, side) in here {
                if pi.len() > self.node_limit {
                    return Err(TranslateError::TooLarge(self.node_limit));
                }
                match &inf.rule {
                    GsRule::Weaken { dropped } if !side && multiset::contains(dropped, &d) && leads_to_b(children[0]) => {
                        let mut rest = dropped.clone();
                        multiset::remove_one(&mut rest, &d);
                        let at = if rest.is_empty() { s } else { step(&mut pi, s, Inference::weaken(rest))?[0] };
                        pos.insert(at, children[0], true);
                    }
                    r if side && r.is_delta() => {
                        let eps = r.witness().expect("δ witness");
                        if eps == delta {
                            let added = instance(inf.principal.as_ref().expect("principal"), eps);
                            if added.as_ref() != Some(&d) {
                                return Err(invariant(format!("δ inference with witness {eps} adds a different formula")));
                            }
                            pos.insert(s, children[0], false);
                        } else if d.contains_term(eps) {
                            nested.push(s);
                        } else {
                            let kids = step(&mut pi, s, inf.clone())?;
                            pos.insert(kids[0], children[0], true);
                        }
                    }
                    _ => {
                        let kids = step(&mut pi, s, inf.clone())?;
                        for (&k, &c) in kids.iter().zip(&children) {
                            if side && !leads_to_b(c) {
                                let w = step(&mut pi, k, Inference::weaken(alloc::vec![d.clone()]))?[0];
                                pos.insert(w, c, false);
                            } else {
                                pos.insert(k, c, side);
                            }
                        }
                    }
                }
            }
            if pi.len() > self.node_limit {
                return Err(TranslateError::TooLarge(self.node_limit));
            }
            if nested.is_empty() {
                continue;
            }

            let eps = inf.rule.witness().expect("δ witness").clone();
            let q = inf.principal.clone().expect("principal");
            let outer = (self.rank(delta)?, theta.len());
            let inner = (self.rank(&eps)?, pi.len());
            self.stats.measures.push((outer, inner));
            if inner.0 >= outer.0 {
                return Err(invariant(format!(
                    "nested graft for {eps} does not decrease the rank ({} >= {})",
                    inner.0, outer.0
                )));
            }
            self.stats.nested_grafts += 1;
            let (grown, link) = self.graft(&pi, &nested, &eps, &q)?;
            let mut next = Positions::default();
            for (&s2, &t) in &link.into_b {
                next.insert(s2, children[0], true);
                debug_assert!(nested.contains(&t));
            }
            for (&s2, t) in &link.elsewhere {
                let &(node, side) = pos
                    .of
                    .get(t)
                    .ok_or_else(|| invariant(format!("leaf {} lost its position", pi.node(*t).path())))?;
                next.insert(s2, node, side);
            }
            pi = grown;
            pos = next;
        }

        // every open leaf must now stand at a leaf of θ
        let open = pi.open_leaves();
        if open.len() != pos.of.len() {
            return Err(invariant(String::from("grafted proof leaves are not covered by the bilink")));
        }
        let mut link = Bilink::default();
        for s in open {
            self.stats.bilink_checks += 1;
            let &(t, side) = pos
                .of
                .get(&s)
                .ok_or_else(|| invariant(format!("open leaf {} is not linked", pi.node(s).path())))?;
            if !theta.node(t).is_open() {
                return Err(invariant(format!("leaf {} stopped short of a θ leaf", pi.node(s).path())));
            }
            let mut expected = theta.sequent(t).to_vec();
            if side {
                expected.push(d.clone());
            }
            if !multiset::equal(pi.sequent(s), &expected) {
                return Err(invariant(format!("side formulas at {} are not as expected", pi.node(s).path())));
            }
            match (b_set.contains(&t), side) {
                (true, true) => link.into_b.insert(s, t),
                (false, false) => link.elsewhere.insert(s, t),
                (true, false) => {
                    return Err(invariant(format!("leaf {} maps into B without the side formula", pi.node(s).path())))
                }
                (false, true) => {
                    return Err(invariant(format!("leaf {} keeps a side formula outside B", pi.node(s).path())))
                }
            };
        }
        Ok((pi, link))
    }
}
