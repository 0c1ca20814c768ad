//! Syntactic unification over metas, the global constraint store, and
//! groundification of solutions.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Formula, Meta, Symbol, Term};

/// A pair that must become syntactically equal.
#[derive(Clone, Debug, PartialEq)]
pub enum Constraint {
    Terms(Term, Term),
    /// Produced by closing a branch on `A` and `¬A'`: `A ≈ A'`.
    Formulas(Formula, Formula),
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Constraint::Terms(a, b) => write!(f, "{a} ~ {b}"),
            Constraint::Formulas(a, b) => write!(f, "{a} ~ {b}"),
        }
    }
}

/// Grows monotonically; nothing is ever removed.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ConstraintStore {
    constraints: Vec<Constraint>,
}

impl ConstraintStore {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, c: Constraint) {
        self.constraints.push(c);
    }

    pub fn iter(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter()
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }
}

impl FromIterator<Constraint> for ConstraintStore {
    fn from_iter<I: IntoIterator<Item = Constraint>>(iter: I) -> Self {
        ConstraintStore { constraints: iter.into_iter().collect() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Unsatisfiable {
    /// Different symbols, arities or connectives.
    Clash,
    OccursCheck,
}

impl fmt::Display for Unsatisfiable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Unsatisfiable::Clash => f.write_str("symbol clash"),
            Unsatisfiable::OccursCheck => f.write_str("occurs check failure"),
        }
    }
}

/// Idempotent meta substitution. Once groundified, no range term mentions
/// a meta.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Substitution {
    bindings: BTreeMap<Meta, Term>,
    ground: bool,
}

impl Substitution {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Builds a substitution from explicit bindings; the ground flag is
    /// set when every range term is ground. Callers are responsible for
    /// idempotence.
    pub fn from_bindings(bindings: impl IntoIterator<Item = (Meta, Term)>) -> Self {
        let bindings: BTreeMap<_, _> = bindings.into_iter().collect();
        let ground = bindings.values().all(Term::is_ground);
        Substitution { bindings, ground }
    }

    pub fn get(&self, m: Meta) -> Option<&Term> {
        self.bindings.get(&m)
    }

    pub fn bindings(&self) -> impl Iterator<Item = (&Meta, &Term)> {
        self.bindings.iter()
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn is_ground(&self) -> bool {
        self.ground
    }

    pub fn is_idempotent(&self) -> bool {
        self.bindings.values().all(|t| self.apply_term(t) == *t)
    }

    pub fn apply_term(&self, t: &Term) -> Term {
        t.apply(&|m| self.bindings.get(&m).cloned())
    }

    pub fn apply(&self, f: &Formula) -> Formula {
        f.apply(&|m| self.bindings.get(&m).cloned())
    }

    /// Extends the substitution so that it also solves `c`. Leaves `self`
    /// untouched on failure.
    pub fn extend(&mut self, c: &Constraint) -> Result<(), Unsatisfiable> {
        let mut next = self.bindings.clone();
        match c {
            Constraint::Terms(a, b) => unify_terms(&mut next, a, b, &[])?,
            Constraint::Formulas(a, b) => unify_formulas(&mut next, a, b, &mut Vec::new())?,
        }
        self.ground = next.values().all(Term::is_ground);
        self.bindings = next;
        Ok(())
    }

    /// Whether `c` already holds under this substitution.
    pub fn satisfies(&self, c: &Constraint) -> bool {
        match c {
            Constraint::Terms(a, b) => self.apply_term(a) == self.apply_term(b),
            Constraint::Formulas(a, b) => self.apply(a) == self.apply(b),
        }
    }

    /// `meta := term` lines, ordered by meta index.
    pub fn to_lines(&self) -> Vec<String> {
        self.bindings.iter().map(|(m, t)| format!("{m} := {t}")).collect()
    }
}

fn resolve(sub: &BTreeMap<Meta, Term>, t: &Term) -> Term {
    t.apply(&|m| sub.get(&m).cloned())
}

fn has_var(t: &Term) -> bool {
    match t {
        Term::Var(_) => true,
        Term::Meta(_) => false,
        Term::App(_, args) => args.iter().any(has_var),
    }
}

fn bind(sub: &mut BTreeMap<Meta, Term>, x: Meta, t: Term) -> Result<(), Unsatisfiable> {
    if has_var(&t) {
        // a meta can never capture a bound variable
        return Err(Unsatisfiable::Clash);
    }
    if t.contains_meta(x) {
        return Err(Unsatisfiable::OccursCheck);
    }
    for v in sub.values_mut() {
        if v.contains_meta(x) {
            *v = v.apply(&|m| (m == x).then(|| t.clone()));
        }
    }
    sub.insert(x, t);
    Ok(())
}

fn unify_terms(
    sub: &mut BTreeMap<Meta, Term>,
    a: &Term,
    b: &Term,
    env: &[(&Symbol, &Symbol)],
) -> Result<(), Unsatisfiable> {
    let (a, b) = (resolve(sub, a), resolve(sub, b));
    match (&a, &b) {
        (Term::Meta(x), Term::Meta(y)) if x == y => Ok(()),
        (Term::Meta(x), t) | (t, Term::Meta(x)) => bind(sub, *x, t.clone()),
        (Term::Var(x), Term::Var(y)) => {
            let lx = env.iter().rposition(|(l, _)| *l == x);
            let ly = env.iter().rposition(|(_, r)| *r == y);
            let same = match (lx, ly) {
                (Some(i), Some(j)) => i == j,
                (None, None) => x == y,
                _ => false,
            };
            if same {
                Ok(())
            } else {
                Err(Unsatisfiable::Clash)
            }
        }
        (Term::App(f, xs), Term::App(g, ys)) if f == g && xs.len() == ys.len() => {
            for (x, y) in xs.iter().zip(ys) {
                unify_terms(sub, x, y, env)?;
            }
            Ok(())
        }
        _ => Err(Unsatisfiable::Clash),
    }
}

fn unify_formulas<'a>(
    sub: &mut BTreeMap<Meta, Term>,
    a: &'a Formula,
    b: &'a Formula,
    env: &mut Vec<(&'a Symbol, &'a Symbol)>,
) -> Result<(), Unsatisfiable> {
    use Formula::*;
    match (a, b) {
        (Atom(p, xs), Atom(q, ys)) if p == q && xs.len() == ys.len() => {
            for (x, y) in xs.iter().zip(ys) {
                unify_terms(sub, x, y, env)?;
            }
            Ok(())
        }
        (Not(x), Not(y)) => unify_formulas(sub, x, y, env),
        (And(a1, a2), And(b1, b2)) | (Or(a1, a2), Or(b1, b2)) | (Implies(a1, a2), Implies(b1, b2)) => {
            unify_formulas(sub, a1, b1, env)?;
            unify_formulas(sub, a2, b2, env)
        }
        (Forall(x, p), Forall(y, q)) | (Exists(x, p), Exists(y, q)) => {
            env.push((x, y));
            let r = unify_formulas(sub, p, q, env);
            env.pop();
            r
        }
        _ => Err(Unsatisfiable::Clash),
    }
}

/// Most general idempotent unifier of every constraint in the store.
pub fn solve(store: &ConstraintStore) -> Result<Substitution, Unsatisfiable> {
    let mut sigma = Substitution::identity();
    for c in store.iter() {
        sigma.extend(c)?;
    }
    if sigma.is_empty() {
        sigma.ground = true;
    }
    Ok(sigma)
}

/// Would the store stay solvable with `extra` added? The store is not
/// modified.
pub fn consistent(store: &ConstraintStore, extra: &[Constraint]) -> bool {
    let mut sigma = match solve(store) {
        Ok(s) => s,
        Err(_) => return false,
    };
    extra.iter().all(|c| sigma.extend(c).is_ok())
}

/// Composes `σ` with a map sending every remaining meta (those in the range
/// of `σ` and those of `metas` left unbound) to a distinct fresh constant
/// `k<n>`, skipping names listed in `taken`.
pub fn groundify(sigma: &Substitution, metas: &[Meta], taken: &BTreeSet<String>) -> Substitution {
    let mut kappa: BTreeMap<Meta, Term> = BTreeMap::new();
    let mut counter = 0usize;
    let mut fresh = || loop {
        counter += 1;
        let name = format!("k{counter}");
        if !taken.contains(&name) {
            return Term::constant(&name);
        }
    };
    let mut order: Vec<Meta> = metas.to_vec();
    for m in sigma.bindings.keys() {
        if !order.contains(m) {
            order.push(*m);
        }
    }
    for &m in &order {
        let pending = match sigma.get(m) {
            Some(t) => {
                let mut inner = Vec::new();
                t.collect_metas(&mut inner);
                inner
            }
            None => alloc::vec![m],
        };
        for y in pending {
            kappa.entry(y).or_insert_with(&mut fresh);
        }
    }
    let bindings = order.iter().map(|&m| {
        let t = match sigma.get(m) {
            Some(t) => t.apply(&|y| kappa.get(&y).cloned()),
            None => kappa[&m].clone(),
        };
        (m, t)
    });
    let out = Substitution { bindings: bindings.collect(), ground: true };
    debug_assert!(out.bindings.values().all(Term::is_ground));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn m(i: u32) -> Term {
        Term::Meta(Meta(i))
    }
    fn c(n: &str) -> Term {
        Term::constant(n)
    }
    fn d(t: Term) -> Formula {
        Formula::atom("D", vec![t])
    }
    fn terms(a: Term, b: Term) -> Constraint {
        Constraint::Terms(a, b)
    }

    #[test]
    fn drinker_store() {
        let store: ConstraintStore = [Constraint::Formulas(d(m(1)), d(c("c")))].into_iter().collect();
        let sigma = solve(&store).unwrap();
        assert_eq!(sigma.get(Meta(1)), Some(&c("c")));
        assert_eq!(sigma.len(), 1);
        assert!(sigma.is_ground());
    }

    #[test]
    fn empty_store_is_identity() {
        let sigma = solve(&ConstraintStore::new()).unwrap();
        assert!(sigma.is_empty());
    }

    #[test]
    fn occurs_check() {
        let store: ConstraintStore = [terms(m(1), Term::app("f", vec![m(1)]))].into_iter().collect();
        assert_eq!(solve(&store), Err(Unsatisfiable::OccursCheck));
    }

    #[test]
    fn consistency() {
        let empty = ConstraintStore::new();
        assert!(consistent(&empty, &[Constraint::Formulas(d(m(1)), d(c("c")))]));

        let store: ConstraintStore = [terms(m(1), c("a"))].into_iter().collect();
        assert!(!consistent(&store, &[terms(m(1), c("b"))]));
        assert_eq!(store.len(), 1);

        // oracle: X = f(Y) then Y = X forces Y = f(Y)
        let store: ConstraintStore = [terms(m(1), Term::app("f", vec![m(2)]))].into_iter().collect();
        let extra = [terms(m(2), m(1))];
        let mut joint = store.clone();
        joint.add(extra[0].clone());
        assert!(solve(&joint).is_err());
        assert!(!consistent(&store, &extra));
    }

    #[test]
    fn resolved_bindings_stay_idempotent() {
        let store: ConstraintStore = [
            terms(m(1), Term::app("f", vec![m(2)])),
            terms(m(2), Term::app("g", vec![m(3)])),
            terms(m(3), c("a")),
        ]
        .into_iter()
        .collect();
        let sigma = solve(&store).unwrap();
        assert!(sigma.is_idempotent());
        assert_eq!(
            sigma.get(Meta(1)),
            Some(&Term::app("f", vec![Term::app("g", vec![c("a")])]))
        );
    }

    #[test]
    fn formulas_with_binders() {
        let x = Term::Var("x".into());
        let z = Term::Var("z".into());
        let a = Formula::forall("x", Formula::atom("P", vec![x, m(1)]));
        let b = Formula::forall("z", Formula::atom("P", vec![z, c("a")]));
        let mut sigma = Substitution::identity();
        sigma.extend(&Constraint::Formulas(a.clone(), b)).unwrap();
        assert_eq!(sigma.get(Meta(1)), Some(&c("a")));
        // a meta may not be bound to a bound variable
        let x = Term::Var("x".into());
        let e = Formula::forall("x", Formula::atom("P", vec![x.clone(), x]));
        assert_eq!(
            Substitution::identity().extend(&Constraint::Formulas(a, e)),
            Err(Unsatisfiable::Clash)
        );
    }

    #[test]
    fn groundify_examples() {
        let taken = BTreeSet::new();
        let sigma = Substitution::from_bindings([(Meta(1), m(2))]);
        let g = groundify(&sigma, &[Meta(1), Meta(2)], &taken);
        assert_eq!(g.get(Meta(1)), Some(&c("k1")));
        assert_eq!(g.get(Meta(2)), Some(&c("k1")));
        assert!(g.is_ground());

        let ground = Substitution::from_bindings([(Meta(1), c("a"))]);
        assert_eq!(groundify(&ground, &[Meta(1)], &taken), ground);

        let g = groundify(&Substitution::identity(), &[Meta(1)], &taken);
        assert_eq!(g.get(Meta(1)), Some(&c("k1")));

        let taken: BTreeSet<String> = ["k1".into()].into_iter().collect();
        let g = groundify(&Substitution::identity(), &[Meta(4), Meta(5)], &taken);
        assert_eq!(g.get(Meta(4)), Some(&c("k2")));
        assert_eq!(g.get(Meta(5)), Some(&c("k3")));
    }

    #[test]
    fn groundify_subsumes() {
        let sigma = Substitution::from_bindings([(Meta(1), Term::app("f", vec![m(2), m(3)]))]);
        let g = groundify(&sigma, &[Meta(1), Meta(2), Meta(3), Meta(4)], &BTreeSet::new());
        // σ' = κ∘σ, so σ' agrees with σ followed by κ on every meta
        for i in 1..=4 {
            let through = g.apply_term(&sigma.apply_term(&m(i)));
            assert_eq!(g.apply_term(&m(i)), through);
            assert!(g.apply_term(&m(i)).is_ground());
        }
        assert_ne!(g.get(Meta(2)), g.get(Meta(3)));
    }
}
