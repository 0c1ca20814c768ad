//! Deterministic, bounded proof search.
//!
//! The leftmost open leaf is worked on first. Closure is attempted before
//! any expansion; a closure whose constraint already holds is taken without
//! leaving a choice point, any other closure is a choice that is undone on
//! failure. Expansion picks the oldest formula of the highest priority class
//! (α, then δ, then β, then γ); γ formulas may be reused up to the gamma
//! limit per branch, the others once.

use alloc::vec::Vec;
use core::fmt;

use super::{closure_rule, AuditError, ClosedTableau, RuleInstance, Tableau};
use crate::formula::{Formula, RuleClass};
use crate::path::Path;
use crate::unify::{self, Substitution};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProverConfig {
    /// Instantiations allowed per γ formula per branch.
    pub gamma_limit: usize,
    /// Rules allowed on a single branch.
    pub depth_limit: usize,
    /// Check the global store at every closure; when off, closures only
    /// need to be unifiable on their own and the store is solved once all
    /// branches are closed.
    pub eager_close: bool,
    /// Rule applications allowed over the whole search, backtracking
    /// included.
    pub step_budget: usize,
}

impl Default for ProverConfig {
    fn default() -> Self {
        ProverConfig { gamma_limit: 2, depth_limit: 200, eager_close: true, step_budget: 100_000 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProveError {
    /// The limits were reached before every branch closed. Says nothing
    /// about validity.
    Exhausted,
    InvalidConfig(&'static str),
    /// The search produced a tableau that failed its own audit.
    Audit(AuditError),
}

impl fmt::Display for ProveError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProveError::Exhausted => f.write_str("search exhausted without closing the tableau"),
            ProveError::InvalidConfig(why) => write!(f, "invalid configuration: {why}"),
            ProveError::Audit(e) => write!(f, "internal error: {e}"),
        }
    }
}

/// Refutes the multiset `gamma`: returns a closed tableau for it.
pub fn prove(gamma: &[Formula], config: &ProverConfig) -> Result<ClosedTableau, ProveError> {
    if config.gamma_limit == 0 {
        return Err(ProveError::InvalidConfig("gamma limit must be at least 1"));
    }
    if config.depth_limit == 0 {
        return Err(ProveError::InvalidConfig("depth limit must be at least 1"));
    }
    let mut search = Search { config, steps: 0, out_of_budget: false };
    match search.run(Tableau::new(gamma.to_vec())) {
        Some(t) => ClosedTableau::new(t).map_err(ProveError::Audit),
        None => Err(ProveError::Exhausted),
    }
}

struct Search<'a> {
    config: &'a ProverConfig,
    steps: usize,
    out_of_budget: bool,
}

enum Move {
    Close(RuleInstance),
    Expand(Formula),
}

impl Search<'_> {
    fn run(&mut self, mut t: Tableau) -> Option<Tableau> {
        loop {
            if self.out_of_budget {
                return None;
            }
            let Some(leaf) = t.first_open_leaf() else {
                if self.config.eager_close || unify::solve(t.store()).is_ok() {
                    return Some(t);
                }
                return None;
            };
            let mut moves = Vec::new();
            let mut forced = None;
            for rule in self.closures(&t, &leaf) {
                let c = rule.constraint().expect("closure");
                if matches!(t.solution(), Ok(s) if s.satisfies(&c)) {
                    forced = Some(rule);
                    break;
                }
                moves.push(Move::Close(rule));
            }
            if let Some(rule) = forced {
                self.step(&mut t, &leaf, Move::Close(rule));
                continue;
            }
            if let Some(f) = self.pick_expansion(&t, &leaf) {
                moves.push(Move::Expand(f));
            }
            let last = moves.pop()?;
            for m in moves {
                let mut branch = t.clone();
                self.step(&mut branch, &leaf, m);
                if let Some(done) = self.run(branch) {
                    return Some(done);
                }
                if self.out_of_budget {
                    return None;
                }
            }
            self.step(&mut t, &leaf, last);
        }
    }

    fn step(&mut self, t: &mut Tableau, leaf: &Path, m: Move) {
        self.steps += 1;
        if self.steps > self.config.step_budget {
            self.out_of_budget = true;
        }
        let r = match m {
            Move::Close(rule) => t.apply(leaf, rule),
            Move::Expand(f) => t.expand(leaf, &f),
        };
        debug_assert!(r.is_ok(), "search produced an invalid rule: {r:?}");
    }

    /// Candidate closures at `leaf`, positive literals outer, in formula
    /// order.
    fn closures(&self, t: &Tableau, leaf: &Path) -> Vec<RuleInstance> {
        let formulas = t.node(leaf).expect("leaf").formulas();
        let mut out: Vec<RuleInstance> = Vec::new();
        for pos in formulas.iter().filter(|f| matches!(f, Formula::Atom(..))) {
            for neg in formulas.iter().filter(|f| matches!(f, Formula::Not(a) if matches!(**a, Formula::Atom(..)))) {
                let Some(rule) = closure_rule(pos, neg) else { continue };
                if out.iter().any(|r| r.closure_pair == rule.closure_pair) {
                    continue;
                }
                let c = rule.constraint().expect("closure");
                let ok = if self.config.eager_close {
                    match t.solution() {
                        Ok(s) => s.clone().extend(&c).is_ok(),
                        Err(_) => false,
                    }
                } else {
                    Substitution::identity().extend(&c).is_ok()
                };
                if ok {
                    out.push(rule);
                }
            }
        }
        out
    }

    fn pick_expansion(&self, t: &Tableau, leaf: &Path) -> Option<Formula> {
        if leaf.len() >= self.config.depth_limit {
            return None;
        }
        let formulas = t.node(leaf).expect("leaf").formulas();
        let mut best: Option<((usize, usize, usize), &Formula)> = None;
        for (i, f) in formulas.iter().enumerate() {
            if formulas[..i].contains(f) {
                continue;
            }
            let class = f.classify();
            let rank = match class {
                RuleClass::Alpha => 0,
                RuleClass::Delta => 1,
                RuleClass::Beta => 2,
                RuleClass::Gamma => 3,
                RuleClass::Literal => continue,
            };
            let uses = t.uses_on_branch(leaf, f);
            let limit = if class == RuleClass::Gamma { self.config.gamma_limit } else { 1 };
            if uses >= limit {
                continue;
            }
            let key = (rank, if class == RuleClass::Gamma { uses } else { 0 }, i);
            if best.as_ref().is_none_or(|(k, _)| key < *k) {
                best = Some((key, f));
            }
        }
        best.map(|(_, f)| f.clone())
    }
}
