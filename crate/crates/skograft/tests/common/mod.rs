//! Corpus loading and formula generation shared by the integration tests.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use skograft::parse_problem;
use skograft_core::formula::{Formula, Symbol, Term};

pub fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

/// The hand-written problems, by file stem, in name order.
pub fn corpus() -> Vec<(String, Formula)> {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus");
    let mut files: Vec<PathBuf> = fs::read_dir(dir).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .filter(|p| p.extension().is_some_and(|e| e == "p"))
        .map(|p| {
            let f = parse_problem(&fs::read_to_string(&p).unwrap()).unwrap();
            (p.file_stem().unwrap().to_string_lossy().into_owned(), f)
        })
        .collect()
}

/// Problems where regrowing from the root meets a Skolem term inside the
/// side formula, so a nested graft is needed.
pub const NESTED: [&str; 5] = ["drinker2", "guarded_witness", "inconsistent_premise", "skolem_chain", "vacuous_inner"];

/// `∃x1…xk (D(x1,…,xk) ⇒ ∀y1…yk D(y1,…,yk))`.
pub fn nested_drinker(k: usize) -> Formula {
    let var = |p: &str, i: usize| Term::Var(Symbol::new(&format!("{p}{i}")));
    let xs: Vec<Term> = (1..=k).map(|i| var("x", i)).collect();
    let ys: Vec<Term> = (1..=k).map(|i| var("y", i)).collect();
    let mut all = Formula::atom("D", ys);
    for i in (1..=k).rev() {
        all = Formula::forall(&format!("y{i}"), all);
    }
    let mut f = Formula::implies(Formula::atom("D", xs), all);
    for i in (1..=k).rev() {
        f = Formula::exists(&format!("x{i}"), f);
    }
    f
}

/// Random closed formulas over three unary predicates and one constant.
pub struct Generator {
    rng: ChaCha8Rng,
    fresh: usize,
}

impl Generator {
    pub fn new(seed: u64) -> Generator {
        Generator { rng: ChaCha8Rng::seed_from_u64(seed), fresh: 0 }
    }

    pub fn formula(&mut self, depth: u32) -> Formula {
        self.fresh = 0;
        self.go(depth, &mut Vec::new())
    }

    fn go(&mut self, depth: u32, scope: &mut Vec<String>) -> Formula {
        if depth == 0 || self.rng.gen_ratio(1, 4) {
            let p = ["P", "Q", "R"][self.rng.gen_range(0..3)];
            let arg = if scope.is_empty() || self.rng.gen_ratio(1, 4) {
                Term::constant("a")
            } else {
                Term::Var(Symbol::new(&scope[self.rng.gen_range(0..scope.len())]))
            };
            let atom = Formula::atom(p, vec![arg]);
            return if self.rng.gen() { atom } else { Formula::not(atom) };
        }
        match self.rng.gen_range(0..6) {
            0 => Formula::and(self.go(depth - 1, scope), self.go(depth - 1, scope)),
            1 => Formula::or(self.go(depth - 1, scope), self.go(depth - 1, scope)),
            2 => Formula::implies(self.go(depth - 1, scope), self.go(depth - 1, scope)),
            3 => Formula::not(self.go(depth - 1, scope)),
            k => {
                self.fresh += 1;
                let v = format!("v{}", self.fresh);
                scope.push(v.clone());
                let body = self.go(depth - 1, scope);
                scope.pop();
                if k == 4 {
                    Formula::forall(&v, body)
                } else {
                    Formula::exists(&v, body)
                }
            }
        }
    }
}
