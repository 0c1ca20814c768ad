use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::fmt;

use crate::path::Path;
use crate::tableau::Tableau;

/// A prefix of a tableau: the set of nodes whose rule has been replayed.
/// Its open leaves are the root (before anything is replayed) and the
/// children of replayed nodes that are not replayed themselves.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct InitialPart {
    applied: BTreeSet<Path>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PartError {
    /// The path is not an open leaf of the part.
    NotOpen(Path),
    /// The tableau has no rule at that path to replay.
    NothingToApply(Path),
}

impl fmt::Display for PartError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PartError::NotOpen(p) => write!(f, "{p} is not an open leaf of the initial part"),
            PartError::NothingToApply(p) => write!(f, "the tableau has no rule at {p}"),
        }
    }
}

impl InitialPart {
    pub fn new() -> InitialPart {
        InitialPart::default()
    }

    pub fn is_applied(&self, p: &Path) -> bool {
        self.applied.contains(p)
    }

    pub fn len(&self) -> usize {
        self.applied.len()
    }

    pub fn is_empty(&self) -> bool {
        self.applied.is_empty()
    }

    fn contains_node(&self, p: &Path) -> bool {
        match p.parent() {
            None => true,
            Some(parent) => self.applied.contains(&parent),
        }
    }

    /// Open leaves of the part, in pre-order.
    pub fn open_leaves(&self, t: &Tableau) -> Vec<Path> {
        t.preorder()
            .into_iter()
            .map(|n| n.path())
            .filter(|p| self.contains_node(p) && !self.applied.contains(*p))
            .cloned()
            .collect()
    }

    /// Marks the rule `t` applies at `leaf` as replayed.
    pub fn extend(&self, t: &Tableau, leaf: &Path) -> Result<InitialPart, PartError> {
        if !self.contains_node(leaf) || self.applied.contains(leaf) {
            return Err(PartError::NotOpen(leaf.clone()));
        }
        match t.node(leaf) {
            Some(n) if n.rule().is_some() => {}
            _ => return Err(PartError::NothingToApply(leaf.clone())),
        }
        let mut next = self.clone();
        next.applied.insert(leaf.clone());
        Ok(next)
    }

    /// Every replayed node is a node of `t` with a rule and its parent is
    /// replayed too.
    pub fn is_initial_part_of(&self, t: &Tableau) -> bool {
        self.applied.iter().all(|p| {
            matches!(t.node(p), Some(n) if n.rule().is_some())
                && p.parent().is_none_or(|q| self.applied.contains(&q))
        })
    }

    /// Whether every rule of `t` has been replayed.
    pub fn is_complete(&self, t: &Tableau) -> bool {
        self.applied.len() == t.rule_count() && self.is_initial_part_of(t)
    }
}
