//! Free-variable tableaux with on-the-fly inner Skolemization, and a
//! syntactic translation of closed tableaux into ground, cut-free GS3
//! sequent proofs that an independent checker can verify.
//!
//! The crate is `no_std` and only needs `alloc`. File formats, the command
//! line and IO live in the companion `skograft` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod formula;
pub mod gs3;
pub mod multiset;
pub mod path;
pub mod tableau;
pub mod translate;
pub mod unify;

pub use formula::{parse, Formula, Meta, RuleClass, Symbol, Term};
pub use gs3::{check, GsProof, GsRule, Rejection};
pub use path::Path;
pub use tableau::{prove, ClosedTableau, ProverConfig, Tableau};
pub use translate::translate;
pub use unify::{solve, ConstraintStore, Substitution};
