//! First-order syntax: terms, formulas, substitution and the α/β/γ/δ
//! classification used by both the tableau and the sequent calculus.

mod parse;
mod print;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

pub use parse::{parse, parse_term, parse_with, ParseError, ParseErrorKind, ParseMode};

/// An interned-ish identifier. Cheap to clone.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// Skolem symbols are spelled `sko<digits>`; user input may not use them.
    pub fn is_skolem(&self) -> bool {
        is_skolem_name(&self.0)
    }
}

impl fmt::Debug for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Symbol {
    fn from(s: &str) -> Self {
        Symbol::new(s)
    }
}

fn digits_after<'a>(name: &'a str, prefix: &str) -> Option<&'a str> {
    let rest = name.strip_prefix(prefix)?;
    (!rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit())).then_some(rest)
}

pub(crate) fn is_skolem_name(name: &str) -> bool {
    digits_after(name, "sko").is_some()
}

pub(crate) fn meta_index(name: &str) -> Option<u32> {
    digits_after(name, "X").and_then(|d| d.parse().ok())
}

/// A free variable introduced by a γ-rule, printed `X<n>`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Meta(pub u32);

impl fmt::Debug for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

impl fmt::Display for Meta {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "X{}", self.0)
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    /// A quantifier-bound variable.
    Var(Symbol),
    Meta(Meta),
    /// Function application; constants have no arguments.
    App(Symbol, Vec<Term>),
}

impl Term {
    pub fn constant(name: &str) -> Term {
        Term::App(Symbol::new(name), Vec::new())
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(name), args)
    }

    pub fn is_skolem(&self) -> bool {
        matches!(self, Term::App(s, _) if s.is_skolem())
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, Term::App(_, args) if args.is_empty())
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) | Term::Meta(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Meta(_) => 1,
            Term::App(_, args) => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    /// Whether `needle` occurs in `self`, `self` included.
    pub fn contains(&self, needle: &Term) -> bool {
        if self == needle {
            return true;
        }
        match self {
            Term::App(_, args) => args.iter().any(|a| a.contains(needle)),
            _ => false,
        }
    }

    pub fn contains_meta(&self, m: Meta) -> bool {
        match self {
            Term::Meta(x) => *x == m,
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.contains_meta(m)),
        }
    }

    pub fn mentions_symbol(&self, sym: &Symbol) -> bool {
        match self {
            Term::App(s, args) => s == sym || args.iter().any(|a| a.mentions_symbol(sym)),
            _ => false,
        }
    }

    pub(crate) fn collect_metas(&self, out: &mut Vec<Meta>) {
        match self {
            Term::Meta(m) => {
                if !out.contains(m) {
                    out.push(*m);
                }
            }
            Term::Var(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_metas(out)),
        }
    }

    pub(crate) fn collect_symbols(&self, out: &mut Vec<Symbol>) {
        if let Term::App(s, args) = self {
            if !out.contains(s) {
                out.push(s.clone());
            }
            args.iter().for_each(|a| a.collect_symbols(out));
        }
    }

    /// Visits every subterm, outermost first.
    pub fn for_each_subterm<'a>(&'a self, f: &mut dyn FnMut(&'a Term)) {
        f(self);
        if let Term::App(_, args) = self {
            for a in args {
                a.for_each_subterm(f);
            }
        }
    }

    /// Bottom-up rewrite where `f` may replace a subterm outright.
    pub fn rewrite(&self, f: &mut dyn FnMut(&Term) -> Option<Term>) -> Term {
        if let Some(t) = f(self) {
            return t;
        }
        match self {
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| a.rewrite(f)).collect()),
            other => other.clone(),
        }
    }

    fn replace_var(&self, var: &Symbol, by: &Term) -> Term {
        match self {
            Term::Var(v) if v == var => by.clone(),
            Term::App(s, args) => {
                Term::App(s.clone(), args.iter().map(|a| a.replace_var(var, by)).collect())
            }
            other => other.clone(),
        }
    }

    pub fn apply(&self, sigma: &dyn Fn(Meta) -> Option<Term>) -> Term {
        match self {
            Term::Meta(m) => sigma(*m).unwrap_or(Term::Meta(*m)),
            Term::App(s, args) => Term::App(s.clone(), args.iter().map(|a| a.apply(sigma)).collect()),
            Term::Var(_) => self.clone(),
        }
    }
}

#[derive(Clone, Debug)]
pub enum Formula {
    Atom(Symbol, Vec<Term>),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Symbol, Box<Formula>),
    Exists(Symbol, Box<Formula>),
}

/// Tableau rule families, plus literals which no rule decomposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleClass {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Literal,
}

impl RuleClass {
    pub fn name(self) -> &'static str {
        match self {
            RuleClass::Alpha => "alpha",
            RuleClass::Beta => "beta",
            RuleClass::Gamma => "gamma",
            RuleClass::Delta => "delta",
            RuleClass::Literal => "literal",
        }
    }
}

/// What a rule extracts from its principal formula.
#[derive(Clone, Debug, PartialEq)]
pub enum Components {
    /// One or two formulas added to the same branch.
    Alpha(Vec<Formula>),
    /// Left and right branch formulas.
    Beta(Formula, Formula),
    Gamma(Quantified),
    Delta(Quantified),
}

/// A quantifier body awaiting its instance term. `negated` marks the
/// `¬∀` / `¬∃` shapes whose instances carry a leading negation.
#[derive(Clone, Debug, PartialEq)]
pub struct Quantified {
    pub var: Symbol,
    pub body: Formula,
    pub negated: bool,
}

impl Quantified {
    pub fn instance(&self, t: &Term) -> Formula {
        let inst = self.body.instantiate(&self.var, t);
        if self.negated {
            Formula::not(inst)
        } else {
            inst
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LiteralError;

impl fmt::Display for LiteralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("literals have no components")
    }
}

impl Formula {
    pub fn atom(pred: &str, args: Vec<Term>) -> Formula {
        Formula::Atom(Symbol::new(pred), args)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(var: &str, body: Formula) -> Formula {
        Formula::Forall(Symbol::new(var), Box::new(body))
    }

    pub fn exists(var: &str, body: Formula) -> Formula {
        Formula::Exists(Symbol::new(var), Box::new(body))
    }

    pub fn classify(&self) -> RuleClass {
        use Formula::*;
        match self {
            Atom(..) => RuleClass::Literal,
            And(..) => RuleClass::Alpha,
            Or(..) | Implies(..) => RuleClass::Beta,
            Forall(..) => RuleClass::Gamma,
            Exists(..) => RuleClass::Delta,
            Not(inner) => match &**inner {
                Atom(..) => RuleClass::Literal,
                Not(..) | Or(..) | Implies(..) => RuleClass::Alpha,
                And(..) => RuleClass::Beta,
                Exists(..) => RuleClass::Gamma,
                Forall(..) => RuleClass::Delta,
            },
        }
    }

    pub fn is_literal(&self) -> bool {
        self.classify() == RuleClass::Literal
    }

    /// Pushes a leading negation one level down (De Morgan) and splits the
    /// connective.
    pub fn decompose(&self) -> Result<Components, LiteralError> {
        use Formula::*;
        let q = |var: &Symbol, body: &Formula, negated| Quantified {
            var: var.clone(),
            body: body.clone(),
            negated,
        };
        Ok(match self {
            Atom(..) => return Err(LiteralError),
            And(a, b) => Components::Alpha(alloc::vec![(**a).clone(), (**b).clone()]),
            Or(a, b) => Components::Beta((**a).clone(), (**b).clone()),
            Implies(a, b) => Components::Beta(Formula::not((**a).clone()), (**b).clone()),
            Forall(x, body) => Components::Gamma(q(x, body, false)),
            Exists(x, body) => Components::Delta(q(x, body, false)),
            Not(inner) => match &**inner {
                Atom(..) => return Err(LiteralError),
                Not(a) => Components::Alpha(alloc::vec![(**a).clone()]),
                Or(a, b) => Components::Alpha(alloc::vec![
                    Formula::not((**a).clone()),
                    Formula::not((**b).clone())
                ]),
                Implies(a, b) => {
                    Components::Alpha(alloc::vec![(**a).clone(), Formula::not((**b).clone())])
                }
                And(a, b) => {
                    Components::Beta(Formula::not((**a).clone()), Formula::not((**b).clone()))
                }
                Exists(x, body) => Components::Gamma(q(x, body, true)),
                Forall(x, body) => Components::Delta(q(x, body, true)),
            },
        })
    }

    /// Replaces the free occurrences of bound variable `var` by `t`.
    /// `t` never contains bound variables in this crate, so no capture.
    pub fn instantiate(&self, var: &Symbol, t: &Term) -> Formula {
        use Formula::*;
        match self {
            Atom(p, args) => Atom(p.clone(), args.iter().map(|a| a.replace_var(var, t)).collect()),
            Not(a) => Formula::not(a.instantiate(var, t)),
            And(a, b) => Formula::and(a.instantiate(var, t), b.instantiate(var, t)),
            Or(a, b) => Formula::or(a.instantiate(var, t), b.instantiate(var, t)),
            Implies(a, b) => Formula::implies(a.instantiate(var, t), b.instantiate(var, t)),
            Forall(x, _) | Exists(x, _) if x == var => self.clone(),
            Forall(x, body) => Forall(x.clone(), Box::new(body.instantiate(var, t))),
            Exists(x, body) => Exists(x.clone(), Box::new(body.instantiate(var, t))),
        }
    }

    /// Rewrites every term position with `f` (see [`Term::rewrite`]).
    pub fn map_terms(&self, f: &mut dyn FnMut(&Term) -> Option<Term>) -> Formula {
        use Formula::*;
        match self {
            Atom(p, args) => Atom(p.clone(), args.iter().map(|a| a.rewrite(f)).collect()),
            Not(a) => Formula::not(a.map_terms(f)),
            And(a, b) => {
                let a = a.map_terms(f);
                Formula::and(a, b.map_terms(f))
            }
            Or(a, b) => {
                let a = a.map_terms(f);
                Formula::or(a, b.map_terms(f))
            }
            Implies(a, b) => {
                let a = a.map_terms(f);
                Formula::implies(a, b.map_terms(f))
            }
            Forall(x, body) => Forall(x.clone(), Box::new(body.map_terms(f))),
            Exists(x, body) => Exists(x.clone(), Box::new(body.map_terms(f))),
        }
    }

    pub fn for_each_term<'a>(&'a self, f: &mut dyn FnMut(&'a Term)) {
        use Formula::*;
        match self {
            Atom(_, args) => args.iter().for_each(&mut *f),
            Not(a) => a.for_each_term(f),
            And(a, b) | Or(a, b) | Implies(a, b) => {
                a.for_each_term(f);
                b.for_each_term(f);
            }
            Forall(_, body) | Exists(_, body) => body.for_each_term(f),
        }
    }

    /// Metas in first-occurrence order (left to right, depth first).
    pub fn free_metas(&self) -> Vec<Meta> {
        let mut out = Vec::new();
        self.for_each_term(&mut |t| t.collect_metas(&mut out));
        out
    }

    /// Function and constant symbols in first-occurrence order.
    pub fn function_symbols(&self) -> Vec<Symbol> {
        let mut out = Vec::new();
        self.for_each_term(&mut |t| t.collect_symbols(&mut out));
        out
    }

    pub fn is_ground(&self) -> bool {
        let mut ground = true;
        self.for_each_term(&mut |t| {
            if !ground_in_formula(t) {
                ground = false;
            }
        });
        ground
    }

    /// Whether term `needle` occurs anywhere as a subterm.
    pub fn contains_term(&self, needle: &Term) -> bool {
        let mut found = false;
        self.for_each_term(&mut |t| found |= t.contains(needle));
        found
    }

    pub fn mentions_symbol(&self, sym: &Symbol) -> bool {
        let mut found = false;
        self.for_each_term(&mut |t| found |= t.mentions_symbol(sym));
        found
    }

    /// Applies a meta substitution given as a lookup function.
    pub fn apply(&self, sigma: &dyn Fn(Meta) -> Option<Term>) -> Formula {
        self.map_terms(&mut |t| match t {
            Term::Meta(m) => Some(sigma(*m).unwrap_or(Term::Meta(*m))),
            _ => None,
        })
    }

    /// Number of connectives, quantifiers and atoms.
    pub fn size(&self) -> usize {
        use Formula::*;
        match self {
            Atom(..) => 1,
            Not(a) => 1 + a.size(),
            And(a, b) | Or(a, b) | Implies(a, b) => 1 + a.size() + b.size(),
            Forall(_, b) | Exists(_, b) => 1 + b.size(),
        }
    }

    /// Canonical fully parenthesized rendering; same as `Display`.
    pub fn print(&self) -> String {
        alloc::format!("{}", self)
    }
}

// Bound variables are fine inside a formula; only metas break groundness.
fn ground_in_formula(t: &Term) -> bool {
    match t {
        Term::Meta(_) => false,
        Term::Var(_) => true,
        Term::App(_, args) => args.iter().all(ground_in_formula),
    }
}

/// Structural equality up to renaming of bound variables.
impl PartialEq for Formula {
    fn eq(&self, other: &Formula) -> bool {
        let mut env = Vec::new();
        alpha_eq(self, other, &mut env)
    }
}

impl Eq for Formula {}

fn alpha_eq<'a>(a: &'a Formula, b: &'a Formula, env: &mut Vec<(&'a Symbol, &'a Symbol)>) -> bool {
    use Formula::*;
    match (a, b) {
        (Atom(p, xs), Atom(q, ys)) => {
            p == q && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha_eq(x, y, env))
        }
        (Not(x), Not(y)) => alpha_eq(x, y, env),
        (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) | (Implies(a1, a2), Implies(b1, b2)) => {
            alpha_eq(a1, b1, env) && alpha_eq(a2, b2, env)
        }
        (Forall(x, p), Forall(y, q)) | (Exists(x, p), Exists(y, q)) => {
            env.push((x, y));
            let r = alpha_eq(p, q, env);
            env.pop();
            r
        }
        _ => false,
    }
}

fn term_alpha_eq(a: &Term, b: &Term, env: &[(&Symbol, &Symbol)]) -> bool {
    match (a, b) {
        (Term::Var(x), Term::Var(y)) => {
            let lx = env.iter().rposition(|(l, _)| *l == x);
            let ly = env.iter().rposition(|(_, r)| *r == y);
            match (lx, ly) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            }
        }
        (Term::Meta(x), Term::Meta(y)) => x == y,
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g && xs.len() == ys.len() && xs.iter().zip(ys).all(|(x, y)| term_alpha_eq(x, y, env))
        }
        _ => false,
    }
}
