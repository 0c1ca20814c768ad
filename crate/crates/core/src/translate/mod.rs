//! Translation of closed free-variable tableaux into ground GS3 proofs.
//!
//! The tableau's rules are replayed in pre-order, each one on every
//! sequent leaf linked to the tableau leaf it applies at. A link maps each
//! open sequent leaf s to an open tableau leaf b with σΔ_b ⊆ Γ_s. α, β and
//! γ rules and closures carry over directly. A δ rule cannot, because its
//! witness is a Skolem term that may already occur on the branch; it is
//! handled by grafting (see [`graft`]). Once every rule is replayed, each
//! Skolem term is renamed to a distinct new constant, which turns the
//! relaxed freshness used during construction into the calculus' own.

mod graft;
mod part;

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Formula, Symbol, Term};
use crate::gs3::{self, Freshness, GsProof, GsRule, Inference, NodeId};
use crate::multiset;
use crate::path::Path;
use crate::tableau::{ClosedTableau, RuleInstance, RuleKind};

pub use graft::Bilink;
pub use part::{InitialPart, PartError};

/// Default cap on the number of nodes of the sequent proof.
pub const NODE_LIMIT: usize = 1 << 18;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TranslateError {
    /// A construction invariant failed. Unreachable from an audited
    /// closed tableau; reported rather than hidden.
    Invariant(String),
    Part(PartError),
    /// The proof outgrew the node limit.
    TooLarge(usize),
}

impl fmt::Display for TranslateError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TranslateError::Invariant(m) => write!(f, "translation invariant violated: {m}"),
            TranslateError::Part(e) => write!(f, "{e}"),
            TranslateError::TooLarge(n) => write!(f, "sequent proof exceeds {n} nodes"),
        }
    }
}

/// Counters collected while translating.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Stats {
    /// Tableau rules replayed.
    pub steps: usize,
    /// Link containments σΔ_{μ(s)} ⊆ Γ_s verified.
    pub link_checks: usize,
    /// Grafted leaves checked against their bilink targets.
    pub bilink_checks: usize,
    pub grafts: usize,
    pub nested_grafts: usize,
    /// `(outer, inner)` (rank, proof size) pairs at every nested graft.
    pub measures: Vec<((usize, usize), (usize, usize))>,
}

/// Translation state: the sequent proof built so far, its link into the
/// tableau and the replayed part of the tableau.
pub struct Translator<'a> {
    closed: &'a ClosedTableau,
    rules: Vec<(Path, RuleInstance)>,
    next: usize,
    proof: GsProof,
    link: BTreeMap<NodeId, Path>,
    part: InitialPart,
    ranks: BTreeMap<Symbol, usize>,
    stats: Stats,
    audit_all: bool,
    node_limit: usize,
    from_root: bool,
}

impl<'a> Translator<'a> {
    pub fn new(closed: &'a ClosedTableau) -> Result<Translator<'a>, TranslateError> {
        let tableau = closed.tableau();
        let sigma = closed.unifier();
        let gamma: Vec<Formula> = tableau.root().formulas().iter().map(|f| sigma.apply(f)).collect();
        let proof = GsProof::new(gamma);
        let mut link = BTreeMap::new();
        link.insert(proof.root(), Path::root());
        Ok(Translator {
            closed,
            rules: tableau.rules().into_iter().map(|(p, r)| (p.clone(), r.clone())).collect(),
            next: 0,
            proof,
            link,
            part: InitialPart::new(),
            ranks: skolem_ranks(closed)?,
            stats: Stats::default(),
            audit_all: false,
            node_limit: NODE_LIMIT,
            from_root: false,
        })
    }

    /// Re-verify the link at every open leaf after each step, not only at
    /// the leaves the step touched.
    pub fn audit_all(mut self, on: bool) -> Self {
        self.audit_all = on;
        self
    }

    /// Regrow the whole proof at every δ step instead of only the part
    /// above the deepest usable ancestor. Much larger output; kept for
    /// comparison and to exercise nested grafts.
    pub fn regrow_from_root(mut self, on: bool) -> Self {
        self.from_root = on;
        self
    }

    pub fn node_limit(mut self, limit: usize) -> Self {
        self.node_limit = limit;
        self
    }

    pub fn proof(&self) -> &GsProof {
        &self.proof
    }

    pub fn link(&self) -> &BTreeMap<NodeId, Path> {
        &self.link
    }

    pub fn part(&self) -> &InitialPart {
        &self.part
    }

    pub fn stats(&self) -> &Stats {
        &self.stats
    }

    pub fn is_done(&self) -> bool {
        self.next == self.rules.len()
    }

    /// Replays the next tableau rule on every sequent leaf linked to its
    /// leaf. Returns false once all rules are replayed.
    pub fn step(&mut self) -> Result<bool, TranslateError> {
        let Some((b, rule)) = self.rules.get(self.next).cloned() else {
            return Ok(false);
        };
        self.next += 1;
        self.part = self.part.extend(self.closed.tableau(), &b).map_err(TranslateError::Part)?;
        self.stats.steps += 1;
        let sigma = self.closed.unifier();
        let targets: Vec<NodeId> =
            self.proof.open_leaves().into_iter().filter(|s| self.link.get(s) == Some(&b)).collect();
        let principal = sigma.apply(&rule.principal);
        let mut touched = Vec::new();
        match rule.kind {
            RuleKind::Alpha | RuleKind::Beta | RuleKind::Gamma => {
                let witness = rule.meta.map(|m| sigma.apply_term(&Term::Meta(m)));
                let gs_rule = GsRule::for_principal(&principal, witness)
                    .ok_or_else(|| TranslateError::Invariant(format!("no GS3 rule for {principal}")))?;
                for s in targets {
                    self.link.remove(&s);
                    let kids = self
                        .proof
                        .build_step_with(s, Inference::new(gs_rule.clone(), principal.clone()), Freshness::Term)
                        .map_err(|r| TranslateError::Invariant(format!("{} at {b}: {r}", rule.kind)))?;
                    for (i, k) in kids.into_iter().enumerate() {
                        self.link.insert(k, b.child(i as u8));
                        touched.push(k);
                    }
                }
            }
            RuleKind::Closure => {
                for s in targets {
                    self.link.remove(&s);
                    self.proof
                        .build_step_with(s, Inference::new(GsRule::Axiom, principal.clone()), Freshness::Term)
                        .map_err(|r| TranslateError::Invariant(format!("closure at {b}: {r}")))?;
                }
            }
            RuleKind::Delta => {
                let delta = sigma.apply_term(rule.skolem.as_ref().expect("δ rules carry a Skolem term"));
                let mut grafter =
                    graft::Grafter {
                    ranks: &self.ranks,
                    stats: &mut self.stats,
                    node_limit: self.node_limit,
                    from_root: self.from_root,
                };
                let (grown, bilink) = grafter.graft(&self.proof, &targets, &delta, &principal)?;
                let mut link = BTreeMap::new();
                for &s in bilink.into_b.keys() {
                    link.insert(s, b.child(0));
                }
                for (&s, t) in &bilink.elsewhere {
                    let target = self.link.get(t).ok_or_else(|| {
                        TranslateError::Invariant(format!("leaf {} was not linked", self.proof.node(*t).path()))
                    })?;
                    link.insert(s, target.clone());
                }
                touched = link.keys().copied().collect();
                self.proof = grown;
                self.link = link;
            }
        }
        if self.proof.len() > self.node_limit {
            return Err(TranslateError::TooLarge(self.node_limit));
        }
        let check: Vec<NodeId> = if self.audit_all { self.link.keys().copied().collect() } else { touched };
        for s in check {
            self.check_link(s)?;
        }
        Ok(true)
    }

    fn check_link(&mut self, s: NodeId) -> Result<(), TranslateError> {
        self.stats.link_checks += 1;
        let b = &self.link[&s];
        let node = self.closed.tableau().node(b).expect("linked to a tableau node");
        if !self.part.open_leaves(self.closed.tableau()).contains(b) {
            return Err(TranslateError::Invariant(format!("leaf linked to {b}, which is not open in the part")));
        }
        let sigma = self.closed.unifier();
        let inst: Vec<Formula> = node.formulas().iter().map(|f| sigma.apply(f)).collect();
        if !multiset::is_submultiset(&inst, self.proof.sequent(s)) {
            return Err(TranslateError::Invariant(format!(
                "sequent at {} does not contain the instances at {b}",
                self.proof.node(s).path()
            )));
        }
        Ok(())
    }

    /// Replays the remaining rules and renames Skolem terms to constants.
    pub fn finish(mut self) -> Result<(GsProof, Stats), TranslateError> {
        while self.step()? {}
        if !self.link.is_empty() || !self.proof.is_complete() {
            return Err(TranslateError::Invariant(String::from("open leaves remain after the last rule")));
        }
        if !self.part.is_complete(self.closed.tableau()) {
            return Err(TranslateError::Invariant(String::from("initial part does not cover the tableau")));
        }
        if let Err(r) = gs3::check_with(&self.proof, Freshness::Term) {
            return Err(TranslateError::Invariant(format!("relaxed proof rejected: {r}")));
        }
        let proof = rename_skolem_terms(&self.proof)?;
        if let Err(r) = gs3::check(&proof) {
            return Err(TranslateError::Invariant(format!("final proof rejected: {r}")));
        }
        Ok((proof, self.stats))
    }
}

/// Translates a closed tableau into a GS3 proof of σΓ ⊢.
pub fn translate(closed: &ClosedTableau) -> Result<GsProof, TranslateError> {
    Translator::new(closed)?.finish().map(|(p, _)| p)
}

/// Like [`translate`], but re-checks the link at every open leaf after
/// every step and returns the collected counters.
pub fn translate_audited(closed: &ClosedTableau) -> Result<(GsProof, Stats), TranslateError> {
    Translator::new(closed)?.audit_all(true).finish()
}

/// rank(sko) = 1 + the largest rank of a Skolem term occurring in the
/// σ-instance of the δ formula that introduced `sko`. Nested grafts
/// strictly decrease it.
fn skolem_ranks(closed: &ClosedTableau) -> Result<BTreeMap<Symbol, usize>, TranslateError> {
    let sigma = closed.unifier();
    let mut principal: BTreeMap<Symbol, Formula> = BTreeMap::new();
    for (_, r) in closed.tableau().rules() {
        if let Some(Term::App(sym, _)) = &r.skolem {
            principal.insert(sym.clone(), sigma.apply(&r.principal));
        }
    }
    let mut ranks = BTreeMap::new();
    for sym in principal.keys() {
        rank_of(sym, &principal, &mut ranks, &mut BTreeSet::new())?;
    }
    Ok(ranks)
}

fn rank_of(
    sym: &Symbol,
    principal: &BTreeMap<Symbol, Formula>,
    ranks: &mut BTreeMap<Symbol, usize>,
    visiting: &mut BTreeSet<Symbol>,
) -> Result<usize, TranslateError> {
    if let Some(&r) = ranks.get(sym) {
        return Ok(r);
    }
    if !visiting.insert(sym.clone()) {
        return Err(TranslateError::Invariant(format!("Skolem symbol {sym} depends on itself")));
    }
    let f = principal
        .get(sym)
        .ok_or_else(|| TranslateError::Invariant(format!("Skolem symbol {sym} has no δ rule")))?;
    let mut inner = Vec::new();
    for s in f.function_symbols() {
        if s.is_skolem() {
            inner.push(s);
        }
    }
    let mut r = 1;
    for s in inner {
        r = r.max(1 + rank_of(&s, principal, ranks, visiting)?);
    }
    visiting.remove(sym);
    ranks.insert(sym.clone(), r);
    Ok(r)
}

/// Replaces every outermost Skolem term by a new constant, one per
/// Skolem symbol. Each symbol must occur with a single argument vector.
fn rename_skolem_terms(proof: &GsProof) -> Result<GsProof, TranslateError> {
    let mut seen: BTreeMap<Symbol, Term> = BTreeMap::new();
    let mut taken: BTreeSet<String> = BTreeSet::new();
    let mut clash = None;
    let mut note = |t: &Term| {
        t.for_each_subterm(&mut |u| {
            if let Term::App(sym, _) = u {
                if sym.is_skolem() {
                    match seen.get(sym) {
                        Some(prev) if prev != u => clash = Some(sym.clone()),
                        Some(_) => {}
                        None => {
                            seen.insert(sym.clone(), u.clone());
                        }
                    }
                }
            }
        });
    };
    for id in proof.preorder() {
        let node = proof.node(id);
        let mut formulas: Vec<&Formula> = node.sequent().iter().collect();
        if let Some(inf) = node.inference() {
            formulas.extend(inf.principal.iter());
            if let GsRule::Weaken { dropped } = &inf.rule {
                formulas.extend(dropped.iter());
            }
            if let Some(w) = inf.rule.witness() {
                note(w);
                let mut syms = Vec::new();
                w.collect_symbols(&mut syms);
                taken.extend(syms.iter().map(|s| String::from(s.as_str())));
            }
        }
        for f in formulas {
            f.for_each_term(&mut |t| note(t));
            let mut names = BTreeSet::new();
            crate::tableau::collect_names(f, &mut names);
            taken.extend(names.into_iter().filter(|n| !crate::formula::is_skolem_name(n)));
        }
    }
    if let Some(sym) = clash {
        return Err(TranslateError::Invariant(format!("Skolem symbol {sym} occurs with different arguments")));
    }
    let mut order: Vec<&Symbol> = seen.keys().collect();
    order.sort_by_key(|s| s.as_str()[3..].parse::<u64>().unwrap_or(u64::MAX));
    let mut names: BTreeMap<Symbol, Term> = BTreeMap::new();
    let mut counter = 0usize;
    for sym in order {
        let name = loop {
            counter += 1;
            let n = format!("c{counter}");
            if !taken.contains(&n) {
                break n;
            }
        };
        names.insert(sym.clone(), Term::constant(&name));
    }
    Ok(proof.map_terms(&mut |t| match t {
        Term::App(sym, _) if sym.is_skolem() => names.get(sym).cloned(),
        _ => None,
    }))
}
