use core::fmt;

use super::{premises, GsProof, StepError};
use crate::formula::{Formula, Term};
use crate::multiset;
use crate::path::Path;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Reason {
    SchemaMismatch,
    FreshnessViolation,
    BadAxiom,
    OpenLeaf,
}

impl Reason {
    pub fn name(self) -> &'static str {
        match self {
            Reason::SchemaMismatch => "schema-mismatch",
            Reason::FreshnessViolation => "freshness-violation",
            Reason::BadAxiom => "bad-axiom",
            Reason::OpenLeaf => "open-leaf",
        }
    }
}

impl From<StepError> for Reason {
    fn from(e: StepError) -> Reason {
        match e {
            StepError::Schema => Reason::SchemaMismatch,
            StepError::Freshness => Reason::FreshnessViolation,
            StepError::Axiom => Reason::BadAxiom,
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The first failing node in pre-order and why it fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub path: Path,
    pub reason: Reason,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at path {}", self.reason, self.path)
    }
}

/// What counts as a fresh witness for a δ inference.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Freshness {
    /// A constant that does not occur in the conclusion. This is the
    /// calculus proper.
    Strict,
    /// Any ground term that does not occur as a subterm of the
    /// conclusion. Used on intermediate proofs whose witnesses are still
    /// Skolem terms; it is sound once each such term is renamed to a
    /// distinct new constant.
    Term,
}

impl Freshness {
    pub(crate) fn admits(self, witness: &Term, conclusion: &[Formula]) -> bool {
        match self {
            Freshness::Strict => {
                let Term::App(sym, args) = witness else { return false };
                args.is_empty() && !conclusion.iter().any(|f| f.mentions_symbol(sym))
            }
            Freshness::Term => witness.is_ground() && !conclusion.iter().any(|f| f.contains_term(witness)),
        }
    }
}

/// Checks a complete GS3 proof with strict freshness.
pub fn check(proof: &GsProof) -> Result<(), Rejection> {
    check_with(proof, Freshness::Strict)
}

/// Checks every node in pre-order against its schema and reports the
/// first failure. Each node is judged from its own conclusion and
/// premises only.
pub fn check_with(proof: &GsProof, fresh: Freshness) -> Result<(), Rejection> {
    for id in proof.preorder() {
        let node = proof.node(id);
        let reject = |reason| Err(Rejection { path: node.path().clone(), reason });
        let Some(inf) = node.inference() else {
            return reject(Reason::OpenLeaf);
        };
        if !node.sequent().iter().all(Formula::is_ground) {
            return reject(Reason::SchemaMismatch);
        }
        let expected = match premises(node.sequent(), inf, fresh) {
            Ok(p) => p,
            Err(e) => return reject(e.into()),
        };
        let children = node.children();
        if children.len() != expected.len() {
            return reject(Reason::SchemaMismatch);
        }
        for (&c, want) in children.iter().zip(&expected) {
            if !multiset::equal(proof.sequent(c), want) {
                return reject(Reason::SchemaMismatch);
            }
        }
    }
    Ok(())
}
