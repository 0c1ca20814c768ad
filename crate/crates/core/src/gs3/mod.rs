//! The GS3 one-sided sequent calculus: rule schemas, proof trees and an
//! independent checker.
//!
//! Sequents are multisets read as `Δ ⊢`. Every logical rule keeps its
//! principal formula in the premises (implicit contraction); weakening is
//! the only rule that removes formulas. This module depends on the formula
//! syntax only; it shares no code with the prover or the translator.

mod check;

use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Components, Formula, Term};
use crate::multiset;
use crate::path::Path;

pub use check::{check, check_with, Freshness, Reason, Rejection};

#[derive(Clone, Debug, PartialEq)]
pub enum GsRule {
    NotNot,
    NotImplies,
    And,
    NotOr,
    Implies,
    NotAnd,
    Or,
    /// δ group: the witness must be fresh for the conclusion.
    Exists { witness: Term },
    NotForall { witness: Term },
    /// γ group: any ground witness.
    NotExists { witness: Term },
    Forall { witness: Term },
    Axiom,
    /// Drops the listed occurrences; has no principal formula.
    Weaken { dropped: Vec<Formula> },
}

impl GsRule {
    pub fn name(&self) -> &'static str {
        match self {
            GsRule::NotNot => "~~",
            GsRule::NotImplies => "~=>",
            GsRule::And => "&",
            GsRule::NotOr => "~|",
            GsRule::Implies => "=>",
            GsRule::NotAnd => "~&",
            GsRule::Or => "|",
            GsRule::Exists { .. } => "exists",
            GsRule::NotForall { .. } => "~forall",
            GsRule::NotExists { .. } => "~exists",
            GsRule::Forall { .. } => "forall",
            GsRule::Axiom => "ax",
            GsRule::Weaken { .. } => "w",
        }
    }

    /// Builds a rule from its name; quantifier rules need a witness,
    /// weakening a dropped list.
    pub fn from_name(name: &str, witness: Option<Term>, dropped: Vec<Formula>) -> Option<GsRule> {
        Some(match name {
            "~~" => GsRule::NotNot,
            "~=>" => GsRule::NotImplies,
            "&" => GsRule::And,
            "~|" => GsRule::NotOr,
            "=>" => GsRule::Implies,
            "~&" => GsRule::NotAnd,
            "|" => GsRule::Or,
            "exists" => GsRule::Exists { witness: witness? },
            "~forall" => GsRule::NotForall { witness: witness? },
            "~exists" => GsRule::NotExists { witness: witness? },
            "forall" => GsRule::Forall { witness: witness? },
            "ax" => GsRule::Axiom,
            "w" => GsRule::Weaken { dropped },
            _ => return None,
        })
    }

    pub fn witness(&self) -> Option<&Term> {
        match self {
            GsRule::Exists { witness }
            | GsRule::NotForall { witness }
            | GsRule::NotExists { witness }
            | GsRule::Forall { witness } => Some(witness),
            _ => None,
        }
    }

    pub fn is_delta(&self) -> bool {
        matches!(self, GsRule::Exists { .. } | GsRule::NotForall { .. })
    }

    /// The rule decomposing `principal`, with `witness` for quantifiers.
    pub fn for_principal(principal: &Formula, witness: Option<Term>) -> Option<GsRule> {
        use Formula::*;
        Some(match principal {
            And(..) => GsRule::And,
            Or(..) => GsRule::Or,
            Implies(..) => GsRule::Implies,
            Forall(..) => GsRule::Forall { witness: witness? },
            Exists(..) => GsRule::Exists { witness: witness? },
            Not(inner) => match &**inner {
                Not(..) => GsRule::NotNot,
                Implies(..) => GsRule::NotImplies,
                Or(..) => GsRule::NotOr,
                And(..) => GsRule::NotAnd,
                Exists(..) => GsRule::NotExists { witness: witness? },
                Forall(..) => GsRule::NotForall { witness: witness? },
                Atom(..) => return None,
            },
            Atom(..) => return None,
        })
    }
}

impl fmt::Display for GsRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A rule together with its principal formula (absent for weakening).
#[derive(Clone, Debug, PartialEq)]
pub struct Inference {
    pub rule: GsRule,
    pub principal: Option<Formula>,
}

impl Inference {
    pub fn new(rule: GsRule, principal: Formula) -> Inference {
        Inference { rule, principal: Some(principal) }
    }

    pub fn weaken(dropped: Vec<Formula>) -> Inference {
        Inference { rule: GsRule::Weaken { dropped }, principal: None }
    }
}

/// Why an inference does not fit its schema. Mirrors the checker's
/// reasons so construction errors and check results agree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StepError {
    Schema,
    Freshness,
    Axiom,
}

/// Premises required by `inf` applied to `conclusion`, or the reason the
/// schema does not apply. Freshness of δ witnesses is checked according
/// to `fresh`.
pub fn premises(conclusion: &[Formula], inf: &Inference, fresh: Freshness) -> Result<Vec<Vec<Formula>>, StepError> {
    if let GsRule::Weaken { dropped } = &inf.rule {
        if inf.principal.is_some() || dropped.is_empty() {
            return Err(StepError::Schema);
        }
        return multiset::difference(conclusion, dropped)
            .map(|rest| alloc::vec![rest])
            .ok_or(StepError::Schema);
    }
    let principal = inf.principal.as_ref().ok_or(StepError::Schema)?;
    if !multiset::contains(conclusion, principal) {
        return Err(match inf.rule {
            GsRule::Axiom => StepError::Axiom,
            _ => StepError::Schema,
        });
    }
    if inf.rule == GsRule::Axiom {
        let neg = Formula::not(principal.clone());
        return if multiset::contains(conclusion, &neg) { Ok(Vec::new()) } else { Err(StepError::Axiom) };
    }
    let witness = inf.rule.witness().cloned();
    if let Some(w) = &witness {
        if !w.is_ground() {
            return Err(StepError::Schema);
        }
    }
    if GsRule::for_principal(principal, witness.clone()).as_ref() != Some(&inf.rule) {
        return Err(StepError::Schema);
    }
    if inf.rule.is_delta() && !fresh.admits(witness.as_ref().expect("δ witness"), conclusion) {
        return Err(StepError::Freshness);
    }
    let with = |extra: Vec<Formula>| {
        let mut s = conclusion.to_vec();
        s.extend(extra);
        s
    };
    Ok(match principal.decompose().map_err(|_| StepError::Schema)? {
        Components::Alpha(v) => alloc::vec![with(v)],
        Components::Beta(a, b) => alloc::vec![with(alloc::vec![a]), with(alloc::vec![b])],
        Components::Gamma(q) | Components::Delta(q) => {
            alloc::vec![with(alloc::vec![q.instance(witness.as_ref().expect("quantifier witness"))])]
        }
    })
}

/// Index of a node inside its [`GsProof`]. Stable under cloning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(usize);

#[derive(Clone, Debug)]
pub struct GsNode {
    path: Path,
    sequent: Vec<Formula>,
    inference: Option<Inference>,
    children: Vec<NodeId>,
}

impl GsNode {
    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn sequent(&self) -> &[Formula] {
        &self.sequent
    }

    pub fn inference(&self) -> Option<&Inference> {
        self.inference.as_ref()
    }

    pub fn children(&self) -> &[NodeId] {
        &self.children
    }

    pub fn is_open(&self) -> bool {
        self.inference.is_none()
    }
}

/// A GS3 derivation, possibly with open leaves.
#[derive(Clone, Debug)]
pub struct GsProof {
    nodes: Vec<GsNode>,
}

impl GsProof {
    /// The one-node proof of `sequent`, an open leaf.
    pub fn new(sequent: Vec<Formula>) -> GsProof {
        GsProof {
            nodes: alloc::vec![GsNode { path: Path::root(), sequent, inference: None, children: Vec::new() }],
        }
    }

    pub fn root(&self) -> NodeId {
        NodeId(0)
    }

    pub fn node(&self, id: NodeId) -> &GsNode {
        &self.nodes[id.0]
    }

    pub fn sequent(&self, id: NodeId) -> &[Formula] {
        &self.nodes[id.0].sequent
    }

    pub fn find(&self, p: &Path) -> Option<NodeId> {
        let mut id = self.root();
        for &b in p.bits() {
            id = *self.node(id).children.get(b as usize)?;
        }
        Some(id)
    }

    pub fn preorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = alloc::vec![self.root()];
        while let Some(id) = stack.pop() {
            out.push(id);
            stack.extend(self.node(id).children.iter().rev().copied());
        }
        out
    }

    pub fn open_leaves(&self) -> Vec<NodeId> {
        self.preorder().into_iter().filter(|&id| self.node(id).is_open()).collect()
    }

    pub fn is_complete(&self) -> bool {
        self.nodes.iter().all(|n| !n.is_open())
    }

    pub fn inference_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.inference.is_some()).count()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Inference names along the leftmost branch, root first.
    pub fn spine(&self) -> Vec<&'static str> {
        let mut out = Vec::new();
        let mut id = self.root();
        while let Some(inf) = &self.node(id).inference {
            out.push(inf.rule.name());
            match self.node(id).children.first() {
                Some(&c) => id = c,
                None => break,
            }
        }
        out
    }

    /// Applies `rule` with `principal` at the open leaf `leaf`, checking
    /// the schema and strict freshness eagerly. Returns the new premises.
    pub fn build_step(
        &mut self,
        leaf: NodeId,
        rule: GsRule,
        principal: Option<Formula>,
    ) -> Result<Vec<NodeId>, Rejection> {
        self.build_step_with(leaf, Inference { rule, principal }, Freshness::Strict)
    }

    pub fn build_step_with(
        &mut self,
        leaf: NodeId,
        inf: Inference,
        fresh: Freshness,
    ) -> Result<Vec<NodeId>, Rejection> {
        let node = self.node(leaf);
        let reject = |reason| Rejection { path: node.path.clone(), reason };
        if !node.is_open() {
            return Err(reject(Reason::SchemaMismatch));
        }
        if !node.sequent.iter().all(Formula::is_ground) {
            return Err(reject(Reason::SchemaMismatch));
        }
        let premises = premises(&node.sequent, &inf, fresh).map_err(|e| reject(e.into()))?;
        Ok(self.extend_unchecked(leaf, inf, premises))
    }

    /// Attaches `inf` and the given premises to `leaf` without checking
    /// anything. Used when reading proofs from files; run [`check`] on the
    /// result.
    pub fn extend_unchecked(&mut self, leaf: NodeId, inf: Inference, premises: Vec<Vec<Formula>>) -> Vec<NodeId> {
        let path = self.node(leaf).path.clone();
        let mut ids = Vec::with_capacity(premises.len());
        for (bit, sequent) in premises.into_iter().enumerate() {
            let id = NodeId(self.nodes.len());
            self.nodes.push(GsNode { path: path.child(bit as u8), sequent, inference: None, children: Vec::new() });
            ids.push(id);
        }
        let n = &mut self.nodes[leaf.0];
        n.inference = Some(inf);
        n.children = ids.clone();
        ids
    }

    /// Rewrites every term of every sequent, principal, witness and
    /// dropped formula with `f`.
    pub fn map_terms(&self, f: &mut dyn FnMut(&Term) -> Option<Term>) -> GsProof {
        let nodes = self
            .nodes
            .iter()
            .map(|n| GsNode {
                path: n.path.clone(),
                sequent: n.sequent.iter().map(|g| g.map_terms(f)).collect(),
                inference: n.inference.as_ref().map(|inf| Inference {
                    rule: map_rule(&inf.rule, f),
                    principal: inf.principal.as_ref().map(|p| p.map_terms(f)),
                }),
                children: n.children.clone(),
            })
            .collect();
        GsProof { nodes }
    }
}

fn map_rule(rule: &GsRule, f: &mut dyn FnMut(&Term) -> Option<Term>) -> GsRule {
    match rule {
        GsRule::Exists { witness } => GsRule::Exists { witness: witness.rewrite(f) },
        GsRule::NotForall { witness } => GsRule::NotForall { witness: witness.rewrite(f) },
        GsRule::NotExists { witness } => GsRule::NotExists { witness: witness.rewrite(f) },
        GsRule::Forall { witness } => GsRule::Forall { witness: witness.rewrite(f) },
        GsRule::Weaken { dropped } => GsRule::Weaken { dropped: dropped.iter().map(|g| g.map_terms(f)).collect() },
        other => other.clone(),
    }
}
