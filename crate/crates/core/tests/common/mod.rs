//! Random formulas and terms shared by the property tests.
#![allow(dead_code)]

use proptest::prelude::*;
use skograft_core::formula::{Formula, Symbol, Term};

/// A formula shape whose variable references are resolved against the
/// enclosing binders when it is built.
#[derive(Clone, Debug)]
pub enum Raw {
    Atom(u8, Vec<RawTerm>),
    Not(Box<Raw>),
    And(Box<Raw>, Box<Raw>),
    Or(Box<Raw>, Box<Raw>),
    Implies(Box<Raw>, Box<Raw>),
    Forall(Box<Raw>),
    Exists(Box<Raw>),
}

#[derive(Clone, Debug)]
pub enum RawTerm {
    Var(u8),
    Const(u8),
    App(u8, Vec<RawTerm>),
}

const PREDS: [&str; 4] = ["P", "Q", "R", "D"];
const CONSTS: [&str; 3] = ["a", "b", "c"];
const FUNS: [&str; 2] = ["f", "g"];

fn raw_term() -> impl Strategy<Value = RawTerm> {
    let leaf = prop_oneof![(0u8..4).prop_map(RawTerm::Var), (0u8..3).prop_map(RawTerm::Const)];
    leaf.prop_recursive(2, 6, 2, |inner| {
        (0u8..2, prop::collection::vec(inner, 1..3)).prop_map(|(f, args)| RawTerm::App(f, args))
    })
}

pub fn raw_formula(depth: u32) -> impl Strategy<Value = Raw> {
    let leaf = (0u8..4, prop::collection::vec(raw_term(), 0..3)).prop_map(|(p, args)| Raw::Atom(p, args));
    leaf.prop_recursive(depth, 40, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(|a| Raw::Not(Box::new(a))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Raw::And(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Raw::Or(Box::new(a), Box::new(b))),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Raw::Implies(Box::new(a), Box::new(b))),
            inner.clone().prop_map(|a| Raw::Forall(Box::new(a))),
            inner.prop_map(|a| Raw::Exists(Box::new(a))),
        ]
    })
}

fn build_term(t: &RawTerm, scope: &[String]) -> Term {
    match t {
        RawTerm::Var(i) if !scope.is_empty() => {
            Term::Var(Symbol::new(&scope[scope.len() - 1 - (*i as usize % scope.len())]))
        }
        RawTerm::Var(i) | RawTerm::Const(i) => Term::constant(CONSTS[*i as usize % CONSTS.len()]),
        RawTerm::App(f, args) => Term::app(FUNS[*f as usize % FUNS.len()], args.iter().map(|a| build_term(a, scope)).collect()),
    }
}

/// Predicate arity is fixed per symbol so closures can fire.
fn build(r: &Raw, scope: &mut Vec<String>, fresh: &mut usize) -> Formula {
    match r {
        Raw::Atom(p, args) => {
            let arity = *p as usize % 3;
            let mut terms: Vec<Term> = args.iter().take(arity).map(|a| build_term(a, scope)).collect();
            while terms.len() < arity {
                terms.push(build_term(&RawTerm::Var(0), scope));
            }
            Formula::atom(PREDS[*p as usize], terms)
        }
        Raw::Not(a) => Formula::not(build(a, scope, fresh)),
        Raw::And(a, b) => Formula::and(build(a, scope, fresh), build(b, scope, fresh)),
        Raw::Or(a, b) => Formula::or(build(a, scope, fresh), build(b, scope, fresh)),
        Raw::Implies(a, b) => Formula::implies(build(a, scope, fresh), build(b, scope, fresh)),
        Raw::Forall(a) | Raw::Exists(a) => {
            *fresh += 1;
            let v = format!("x{fresh}");
            scope.push(v.clone());
            let body = build(a, scope, fresh);
            scope.pop();
            if matches!(r, Raw::Forall(_)) {
                Formula::forall(&v, body)
            } else {
                Formula::exists(&v, body)
            }
        }
    }
}

pub fn closed_formula(depth: u32) -> impl Strategy<Value = Formula> {
    raw_formula(depth).prop_map(|r| build(&r, &mut Vec::new(), &mut 0))
}

/// Ground terms over a small signature.
pub fn ground_term() -> impl Strategy<Value = Term> {
    raw_term().prop_map(|t| build_term(&t, &[]))
}
