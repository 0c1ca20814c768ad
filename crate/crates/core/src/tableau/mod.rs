//! Free-variable tableaux: rule-labelled trees addressed by paths, the
//! expansion and closure rules, and the closed-tableau audit.
//!
//! Trees grow non-destructively: every node carries the full multiset of
//! formulas on its branch. A closure is recorded as a rule on the leaf it
//! closes, so a closed leaf is a node whose rule is a closure and which has
//! no children.

mod search;

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::formula::{Components, Formula, Meta, RuleClass, Symbol, Term};
use crate::multiset;
use crate::path::Path;
use crate::unify::{self, Constraint, ConstraintStore, Substitution, Unsatisfiable};

pub use search::{prove, ProveError, ProverConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum RuleKind {
    Alpha,
    Beta,
    Gamma,
    Delta,
    Closure,
}

impl RuleKind {
    pub fn name(self) -> &'static str {
        match self {
            RuleKind::Alpha => "alpha",
            RuleKind::Beta => "beta",
            RuleKind::Gamma => "gamma",
            RuleKind::Delta => "delta",
            RuleKind::Closure => "closure",
        }
    }

    pub fn from_name(s: &str) -> Option<RuleKind> {
        Some(match s {
            "alpha" => RuleKind::Alpha,
            "beta" => RuleKind::Beta,
            "gamma" => RuleKind::Gamma,
            "delta" => RuleKind::Delta,
            "closure" => RuleKind::Closure,
            _ => return None,
        })
    }

    fn of_class(c: RuleClass) -> Option<RuleKind> {
        match c {
            RuleClass::Alpha => Some(RuleKind::Alpha),
            RuleClass::Beta => Some(RuleKind::Beta),
            RuleClass::Gamma => Some(RuleKind::Gamma),
            RuleClass::Delta => Some(RuleKind::Delta),
            RuleClass::Literal => None,
        }
    }
}

impl fmt::Display for RuleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One application of a tableau rule. For a closure, `principal` is the
/// positive literal and `closure_pair` holds `(A, ¬A')`.
#[derive(Clone, Debug, PartialEq)]
pub struct RuleInstance {
    pub kind: RuleKind,
    pub principal: Formula,
    /// Formulas added to each child, in child order.
    pub introduced: Vec<Vec<Formula>>,
    pub skolem: Option<Term>,
    pub meta: Option<Meta>,
    pub closure_pair: Option<(Formula, Formula)>,
}

impl RuleInstance {
    /// The constraint `A ≈ A'` generated by a closure.
    pub fn constraint(&self) -> Option<Constraint> {
        let (pos, neg) = self.closure_pair.as_ref()?;
        match neg {
            Formula::Not(inner) => Some(Constraint::Formulas(pos.clone(), (**inner).clone())),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TableauError {
    NoSuchNode(Path),
    NotALeaf(Path),
    AbsentPrincipal(Path, String),
    /// The principal's class does not match the rule kind (literals included).
    WrongClass(Path, String),
    BadIntroduced(Path),
    StaleMeta(Path, Meta),
    StaleSkolem(Path, String),
    /// The Skolem term is not a fresh `sko` symbol over the principal's metas.
    BadSkolem(Path),
    NotComplementary(Path),
    /// The closure would make the constraint store unsatisfiable.
    Refused(Path),
}

impl fmt::Display for TableauError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableauError::NoSuchNode(p) => write!(f, "no node at path {p}"),
            TableauError::NotALeaf(p) => write!(f, "node {p} is not an open leaf"),
            TableauError::AbsentPrincipal(p, a) => write!(f, "{a} does not occur at {p}"),
            TableauError::WrongClass(p, a) => write!(f, "rule does not apply to {a} at {p}"),
            TableauError::BadIntroduced(p) => write!(f, "introduced formulas at {p} do not match the rule"),
            TableauError::StaleMeta(p, m) => write!(f, "meta {m} at {p} is not fresh"),
            TableauError::StaleSkolem(p, s) => write!(f, "Skolem symbol {s} at {p} is not fresh"),
            TableauError::BadSkolem(p) => write!(f, "malformed Skolem term at {p}"),
            TableauError::NotComplementary(p) => write!(f, "closure pair at {p} is not complementary"),
            TableauError::Refused(p) => write!(f, "closure at {p} makes the constraints unsatisfiable"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct TabNode {
    path: Path,
    formulas: Vec<Formula>,
    rule: Option<RuleInstance>,
    children: Vec<usize>,
}

impl TabNode {
    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn rule(&self) -> Option<&RuleInstance> {
        self.rule.as_ref()
    }

    pub fn child_count(&self) -> usize {
        self.children.len()
    }

    pub fn is_closed(&self) -> bool {
        matches!(&self.rule, Some(r) if r.kind == RuleKind::Closure)
    }

    pub fn is_open_leaf(&self) -> bool {
        self.rule.is_none()
    }
}

/// A tableau under construction together with its constraint store.
#[derive(Clone, Debug)]
pub struct Tableau {
    nodes: Vec<TabNode>,
    store: ConstraintStore,
    solution: Result<Substitution, Unsatisfiable>,
    metas: BTreeSet<Meta>,
    skolems: BTreeSet<Symbol>,
    next_meta: u32,
    next_skolem: u32,
}

impl Tableau {
    pub fn new(gamma: Vec<Formula>) -> Tableau {
        let mut t = Tableau {
            nodes: alloc::vec![TabNode {
                path: Path::root(),
                formulas: Vec::new(),
                rule: None,
                children: Vec::new(),
            }],
            store: ConstraintStore::new(),
            solution: Ok(Substitution::identity()),
            metas: BTreeSet::new(),
            skolems: BTreeSet::new(),
            next_meta: 1,
            next_skolem: 1,
        };
        for f in &gamma {
            t.note_names(f);
        }
        t.nodes[0].formulas = gamma;
        t
    }

    fn note_names(&mut self, f: &Formula) {
        for m in f.free_metas() {
            self.metas.insert(m);
            self.next_meta = self.next_meta.max(m.0 + 1);
        }
        for s in f.function_symbols() {
            if s.is_skolem() {
                self.note_skolem(&s);
            }
        }
    }

    fn note_skolem(&mut self, s: &Symbol) {
        let n: u32 = s.as_str()[3..].parse().unwrap_or(0);
        self.next_skolem = self.next_skolem.max(n.saturating_add(1));
        self.skolems.insert(s.clone());
    }

    fn index(&self, p: &Path) -> Option<usize> {
        let mut i = 0;
        for &b in p.bits() {
            i = *self.nodes[i].children.get(b as usize)?;
        }
        Some(i)
    }

    pub fn node(&self, p: &Path) -> Option<&TabNode> {
        self.index(p).map(|i| &self.nodes[i])
    }

    pub fn root(&self) -> &TabNode {
        &self.nodes[0]
    }

    pub fn children<'a>(&'a self, n: &'a TabNode) -> impl Iterator<Item = &'a TabNode> + 'a {
        n.children.iter().map(move |&i| &self.nodes[i])
    }

    /// All nodes in pre-order (node, then left subtree, then right).
    pub fn preorder(&self) -> Vec<&TabNode> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = alloc::vec![0usize];
        while let Some(i) = stack.pop() {
            out.push(&self.nodes[i]);
            for &c in self.nodes[i].children.iter().rev() {
                stack.push(c);
            }
        }
        out
    }

    /// Applied rules in pre-order, each with the path it labels.
    pub fn rules(&self) -> Vec<(&Path, &RuleInstance)> {
        self.preorder()
            .into_iter()
            .filter_map(|n| n.rule.as_ref().map(|r| (&n.path, r)))
            .collect()
    }

    pub fn rule_count(&self) -> usize {
        self.nodes.iter().filter(|n| n.rule.is_some()).count()
    }

    pub fn open_leaves(&self) -> Vec<&Path> {
        self.preorder().into_iter().filter(|n| n.is_open_leaf()).map(|n| &n.path).collect()
    }

    pub fn first_open_leaf(&self) -> Option<Path> {
        self.preorder().into_iter().find(|n| n.is_open_leaf()).map(|n| n.path.clone())
    }

    pub fn is_closed(&self) -> bool {
        self.nodes.iter().all(|n| !n.is_open_leaf())
    }

    pub fn store(&self) -> &ConstraintStore {
        &self.store
    }

    /// Most general solution of the current store, maintained incrementally.
    pub fn solution(&self) -> Result<&Substitution, Unsatisfiable> {
        self.solution.as_ref().map_err(|e| *e)
    }

    /// Every meta occurring in the tree or introduced by a γ rule (a
    /// vacuous quantifier leaves no trace in the formulas), in order of
    /// first introduction.
    pub fn metas(&self) -> Vec<Meta> {
        let mut out: Vec<Meta> = Vec::new();
        for n in self.preorder() {
            let introduced = n.rule.as_ref().and_then(|r| r.meta);
            for m in n.formulas.iter().flat_map(Formula::free_metas).chain(introduced) {
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
        out
    }

    /// Names a fresh constant must avoid: every function symbol and bound
    /// variable name in the tree.
    pub fn used_names(&self) -> BTreeSet<String> {
        let mut names = BTreeSet::new();
        for n in &self.nodes {
            for f in &n.formulas {
                collect_names(f, &mut names);
            }
        }
        names
    }

    pub fn fresh_meta(&self) -> Meta {
        Meta(self.next_meta)
    }

    pub fn fresh_skolem(&self, args: Vec<Term>) -> Term {
        Term::App(Symbol::new(&format!("sko{}", self.next_skolem)), args)
    }

    /// Applies the expansion rule for `principal` at the open leaf `leaf`,
    /// drawing fresh metas and Skolem symbols from this tableau's counters.
    pub fn expand(&mut self, leaf: &Path, principal: &Formula) -> Result<(), TableauError> {
        let kind = RuleKind::of_class(principal.classify())
            .ok_or_else(|| TableauError::WrongClass(leaf.clone(), principal.print()))?;
        let (meta, skolem) = match kind {
            RuleKind::Gamma => (Some(self.fresh_meta()), None),
            RuleKind::Delta => {
                let args = principal.free_metas().into_iter().map(Term::Meta).collect();
                (None, Some(self.fresh_skolem(args)))
            }
            _ => (None, None),
        };
        let introduced = expected_introduced(principal, kind, meta, skolem.as_ref())
            .ok_or_else(|| TableauError::WrongClass(leaf.clone(), principal.print()))?;
        self.apply(
            leaf,
            RuleInstance { kind, principal: principal.clone(), introduced, skolem, meta, closure_pair: None },
        )
    }

    /// Closes `leaf` on `pos` and `neg = ¬A'` if the store stays
    /// satisfiable; otherwise returns `Refused` and changes nothing.
    pub fn close(&mut self, leaf: &Path, pos: &Formula, neg: &Formula) -> Result<(), TableauError> {
        let rule = closure_rule(pos, neg).ok_or_else(|| TableauError::NotComplementary(leaf.clone()))?;
        let c = rule.constraint().expect("closure rules carry a pair");
        let ok = match &self.solution {
            Ok(s) => s.clone().extend(&c).is_ok(),
            Err(_) => false,
        };
        if !ok {
            return Err(TableauError::Refused(leaf.clone()));
        }
        self.apply(leaf, rule)
    }

    /// Records `rule` at the open leaf `leaf` after checking it against the
    /// rule schemas. Closures are recorded whether or not the store stays
    /// satisfiable; use [`Tableau::close`] for the checking variant.
    pub fn apply(&mut self, leaf: &Path, rule: RuleInstance) -> Result<(), TableauError> {
        let idx = self.index(leaf).ok_or_else(|| TableauError::NoSuchNode(leaf.clone()))?;
        if self.nodes[idx].rule.is_some() {
            return Err(TableauError::NotALeaf(leaf.clone()));
        }
        let formulas = &self.nodes[idx].formulas;
        if !multiset::contains(formulas, &rule.principal) {
            return Err(TableauError::AbsentPrincipal(leaf.clone(), rule.principal.print()));
        }
        if rule.kind == RuleKind::Closure {
            let (pos, neg) = rule
                .closure_pair
                .as_ref()
                .ok_or_else(|| TableauError::NotComplementary(leaf.clone()))?;
            let expected = closure_rule(pos, neg).ok_or_else(|| TableauError::NotComplementary(leaf.clone()))?;
            if expected != rule || !multiset::contains(formulas, neg) {
                return Err(TableauError::NotComplementary(leaf.clone()));
            }
            let c = rule.constraint().expect("checked above");
            if let Ok(s) = &mut self.solution {
                if let Err(e) = s.extend(&c) {
                    self.solution = Err(e);
                }
            }
            self.store.add(c);
            self.nodes[idx].rule = Some(rule);
            return Ok(());
        }
        if RuleKind::of_class(rule.principal.classify()) != Some(rule.kind) {
            return Err(TableauError::WrongClass(leaf.clone(), rule.principal.print()));
        }
        if rule.closure_pair.is_some()
            || rule.meta.is_some() != (rule.kind == RuleKind::Gamma)
            || rule.skolem.is_some() != (rule.kind == RuleKind::Delta)
        {
            return Err(TableauError::BadIntroduced(leaf.clone()));
        }
        if let Some(m) = rule.meta {
            if self.metas.contains(&m) {
                return Err(TableauError::StaleMeta(leaf.clone(), m));
            }
        }
        if let Some(sko) = &rule.skolem {
            let Term::App(sym, args) = sko else {
                return Err(TableauError::BadSkolem(leaf.clone()));
            };
            let metas: Vec<Term> = rule.principal.free_metas().into_iter().map(Term::Meta).collect();
            if !sym.is_skolem() || *args != metas {
                return Err(TableauError::BadSkolem(leaf.clone()));
            }
            if self.skolems.contains(sym) {
                return Err(TableauError::StaleSkolem(leaf.clone(), sym.as_str().into()));
            }
        }
        let expected = expected_introduced(&rule.principal, rule.kind, rule.meta, rule.skolem.as_ref())
            .ok_or_else(|| TableauError::WrongClass(leaf.clone(), rule.principal.print()))?;
        if expected.len() != rule.introduced.len()
            || expected.iter().zip(&rule.introduced).any(|(a, b)| a != b)
        {
            return Err(TableauError::BadIntroduced(leaf.clone()));
        }

        let parent_formulas = self.nodes[idx].formulas.clone();
        let path = self.nodes[idx].path.clone();
        for (bit, extra) in rule.introduced.iter().enumerate() {
            let mut formulas = parent_formulas.clone();
            formulas.extend(extra.iter().cloned());
            for f in extra {
                self.note_names(f);
            }
            let child = self.nodes.len();
            self.nodes.push(TabNode {
                path: path.child(bit as u8),
                formulas,
                rule: None,
                children: Vec::new(),
            });
            self.nodes[idx].children.push(child);
        }
        if let Some(m) = rule.meta {
            self.metas.insert(m);
            self.next_meta = self.next_meta.max(m.0 + 1);
        }
        if let Some(Term::App(sym, _)) = &rule.skolem {
            self.note_skolem(sym);
        }
        self.nodes[idx].rule = Some(rule);
        Ok(())
    }

    /// How often `f` has been the principal of an expansion on the branch
    /// ending at `leaf`.
    pub fn uses_on_branch(&self, leaf: &Path, f: &Formula) -> usize {
        let mut i = 0;
        let mut count = 0;
        for &b in leaf.bits() {
            if let Some(r) = &self.nodes[i].rule {
                if r.kind != RuleKind::Closure && r.principal == *f {
                    count += 1;
                }
            }
            i = self.nodes[i].children[b as usize];
        }
        count
    }
}

/// The closure rule on the positive literal `pos` and the negated literal
/// `neg`, if they share predicate and arity.
pub fn closure_rule(pos: &Formula, neg: &Formula) -> Option<RuleInstance> {
    let Formula::Atom(p, xs) = pos else { return None };
    let Formula::Not(inner) = neg else { return None };
    let Formula::Atom(q, ys) = &**inner else { return None };
    (p == q && xs.len() == ys.len()).then(|| RuleInstance {
        kind: RuleKind::Closure,
        principal: pos.clone(),
        introduced: Vec::new(),
        skolem: None,
        meta: None,
        closure_pair: Some((pos.clone(), neg.clone())),
    })
}

fn expected_introduced(
    principal: &Formula,
    kind: RuleKind,
    meta: Option<Meta>,
    skolem: Option<&Term>,
) -> Option<Vec<Vec<Formula>>> {
    let comps = principal.decompose().ok()?;
    Some(match (kind, comps) {
        (RuleKind::Alpha, Components::Alpha(v)) => alloc::vec![v],
        (RuleKind::Beta, Components::Beta(a, b)) => alloc::vec![alloc::vec![a], alloc::vec![b]],
        (RuleKind::Gamma, Components::Gamma(q)) => alloc::vec![alloc::vec![q.instance(&Term::Meta(meta?))]],
        (RuleKind::Delta, Components::Delta(q)) => alloc::vec![alloc::vec![q.instance(skolem?)]],
        _ => return None,
    })
}

pub(crate) fn collect_names(f: &Formula, out: &mut BTreeSet<String>) {
    for s in f.function_symbols() {
        out.insert(s.as_str().into());
    }
    collect_binders(f, out);
}

fn collect_binders(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(..) => {}
        Formula::Not(a) => collect_binders(a, out),
        Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
            collect_binders(a, out);
            collect_binders(b, out);
        }
        Formula::Forall(x, body) | Formula::Exists(x, body) => {
            out.insert(x.as_str().into());
            collect_binders(body, out);
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AuditError {
    OpenLeaf(Path),
    Unsatisfiable,
    NotGround,
    /// The unifier leaves a meta of the tree unbound.
    Uncovered(Meta),
    /// A closure pair does not become identical under the unifier.
    ClosureMismatch(Path),
    /// A child's multiset is not its parent's plus the introduced formulas.
    Destructive(Path),
    /// A Skolem symbol occurs outside the subtree below its δ node.
    SkolemEscapes(Path),
    Rule(TableauError),
}

impl fmt::Display for AuditError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuditError::OpenLeaf(p) => write!(f, "leaf {p} is open"),
            AuditError::Unsatisfiable => f.write_str("constraint store is unsatisfiable"),
            AuditError::NotGround => f.write_str("unifier is not ground"),
            AuditError::Uncovered(m) => write!(f, "unifier does not bind {m}"),
            AuditError::ClosureMismatch(p) => write!(f, "closure pair at {p} differs under the unifier"),
            AuditError::Destructive(p) => write!(f, "node {p} lost or gained formulas"),
            AuditError::SkolemEscapes(p) => write!(f, "Skolem symbol of the δ rule at {p} is not fresh"),
            AuditError::Rule(e) => write!(f, "{e}"),
        }
    }
}

/// A tableau whose leaves are all closed, with a ground unifier of its
/// store.
#[derive(Clone, Debug)]
pub struct ClosedTableau {
    tableau: Tableau,
    unifier: Substitution,
}

impl ClosedTableau {
    /// Solves the store and groundifies the solution.
    pub fn new(tableau: Tableau) -> Result<ClosedTableau, AuditError> {
        if let Some(p) = tableau.first_open_leaf() {
            return Err(AuditError::OpenLeaf(p));
        }
        let sigma = unify::solve(&tableau.store).map_err(|_| AuditError::Unsatisfiable)?;
        let unifier = unify::groundify(&sigma, &tableau.metas(), &tableau.used_names());
        let closed = ClosedTableau { tableau, unifier };
        closed.audit()?;
        Ok(closed)
    }

    /// Pairs a tableau with an externally supplied unifier, e.g. one read
    /// from a proof file, after auditing both.
    pub fn with_unifier(tableau: Tableau, unifier: Substitution) -> Result<ClosedTableau, AuditError> {
        let closed = ClosedTableau { tableau, unifier };
        closed.audit()?;
        Ok(closed)
    }

    pub fn tableau(&self) -> &Tableau {
        &self.tableau
    }

    pub fn store(&self) -> &ConstraintStore {
        &self.tableau.store
    }

    pub fn unifier(&self) -> &Substitution {
        &self.unifier
    }

    pub fn rule_count(&self) -> usize {
        self.tableau.rule_count()
    }

    /// Re-checks every structural invariant: all leaves closed, the
    /// unifier ground and covering every meta and solving every closure,
    /// non-destructivity, rule correctness and Skolem freshness.
    pub fn audit(&self) -> Result<(), AuditError> {
        let t = &self.tableau;
        if let Some(p) = t.first_open_leaf() {
            return Err(AuditError::OpenLeaf(p));
        }
        if !self.unifier.is_ground() || self.unifier.bindings().any(|(_, v)| !v.is_ground()) {
            return Err(AuditError::NotGround);
        }
        for m in t.metas() {
            if self.unifier.get(m).is_none() {
                return Err(AuditError::Uncovered(m));
            }
        }
        for c in t.store.iter() {
            if !self.unifier.satisfies(c) {
                return Err(AuditError::Unsatisfiable);
            }
        }
        // replay every rule on a fresh tree and compare node by node
        let mut replay = Tableau::new(t.root().formulas.clone());
        for (path, rule) in t.rules() {
            replay.apply(path, rule.clone()).map_err(AuditError::Rule)?;
        }
        for n in t.preorder() {
            let r = replay.node(&n.path).ok_or(AuditError::Destructive(n.path.clone()))?;
            if !multiset::equal(&r.formulas, &n.formulas) || r.children.len() != n.children.len() {
                return Err(AuditError::Destructive(n.path.clone()));
            }
            if let Some(rule) = &n.rule {
                if rule.kind == RuleKind::Closure {
                    let (pos, neg) = rule.closure_pair.as_ref().expect("closure pair");
                    let Formula::Not(inner) = neg else {
                        return Err(AuditError::ClosureMismatch(n.path.clone()));
                    };
                    if self.unifier.apply(pos) != self.unifier.apply(inner) {
                        return Err(AuditError::ClosureMismatch(n.path.clone()));
                    }
                }
                if let Some(Term::App(sym, _)) = &rule.skolem {
                    for other in t.preorder() {
                        let below = n.path.child(0).is_prefix_of(&other.path);
                        if !below && other.formulas.iter().any(|f| f.mentions_symbol(sym)) {
                            return Err(AuditError::SkolemEscapes(n.path.clone()));
                        }
                    }
                }
            }
        }
        Ok(())
    }
}
