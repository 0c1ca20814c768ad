//! Multiset operations on formula slices, using alpha-equivalence.

use alloc::vec::Vec;

use crate::formula::Formula;

pub fn count(items: &[Formula], f: &Formula) -> usize {
    items.iter().filter(|g| *g == f).count()
}

pub fn contains(items: &[Formula], f: &Formula) -> bool {
    items.iter().any(|g| g == f)
}

/// Removes one occurrence; returns false if there was none.
pub fn remove_one(items: &mut Vec<Formula>, f: &Formula) -> bool {
    match items.iter().position(|g| g == f) {
        Some(i) => {
            items.remove(i);
            true
        }
        None => false,
    }
}

/// `small ⊆ big` as multisets.
pub fn is_submultiset(small: &[Formula], big: &[Formula]) -> bool {
    difference(big, small).is_some()
}

/// `big \ small`, or `None` when `small` is not contained in `big`.
pub fn difference(big: &[Formula], small: &[Formula]) -> Option<Vec<Formula>> {
    let mut rest = big.to_vec();
    for f in small {
        if !remove_one(&mut rest, f) {
            return None;
        }
    }
    Some(rest)
}

pub fn equal(a: &[Formula], b: &[Formula]) -> bool {
    a.len() == b.len() && is_submultiset(a, b)
}
