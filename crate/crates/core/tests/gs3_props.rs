mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use skograft_core::formula::{Components, Formula, Term};
use skograft_core::gs3::{check, GsProof, GsRule, Inference, NodeId, Reason};

fn anchor() -> Formula {
    Formula::atom("Z", vec![])
}

/// Applies randomly chosen legal inferences through `build_step` and closes
/// every leaf on the anchor pair `Z, ~Z`.
fn random_proof(start: Vec<Formula>, choices: &[(usize, usize, usize)]) -> GsProof {
    let mut seq = start;
    seq.push(anchor());
    seq.push(Formula::not(anchor()));
    let mut proof = GsProof::new(seq);
    let mut fresh = 0;
    for &(leaf_pick, formula_pick, term_pick) in choices {
        let leaves = proof.open_leaves();
        let leaf = leaves[leaf_pick % leaves.len()];
        let sequent = proof.sequent(leaf).to_vec();
        let f = sequent[formula_pick % sequent.len()].clone();
        if f == anchor() || f == Formula::not(anchor()) {
            continue;
        }
        if f.is_literal() {
            proof.build_step(leaf, GsRule::Weaken { dropped: vec![f] }, None).expect("weakening");
            continue;
        }
        let witness = match f.decompose().expect("not a literal") {
            Components::Delta(_) => {
                fresh += 1;
                Some(Term::constant(&format!("e{fresh}")))
            }
            Components::Gamma(_) => {
                let pool = [Term::constant("a"), Term::app("f", vec![Term::constant("b")]), Term::constant("c")];
                Some(pool[term_pick % pool.len()].clone())
            }
            _ => None,
        };
        let rule = GsRule::for_principal(&f, witness).expect("rule");
        proof.build_step(leaf, rule, Some(f)).expect("legal step");
    }
    for leaf in proof.open_leaves() {
        proof.build_step(leaf, GsRule::Axiom, Some(anchor())).expect("anchor pair present");
    }
    proof
}

#[derive(Clone, Copy, Debug)]
enum Corruption {
    ExtraFormula,
    WrongAxiom,
}

/// Copies `proof`, corrupting the node at pre-order position `target`.
fn corrupt(proof: &GsProof, target: usize) -> (GsProof, Corruption) {
    let order = proof.preorder();
    let victim = order[target % order.len()];
    let mut out = GsProof::new(proof.sequent(proof.root()).to_vec());
    let mut map: HashMap<NodeId, NodeId> = HashMap::new();
    map.insert(proof.root(), out.root());
    let mut kind = Corruption::ExtraFormula;
    for id in order {
        let node = proof.node(id);
        let Some(inf) = node.inference() else { continue };
        let mut inf: Inference = inf.clone();
        let mut premises: Vec<Vec<Formula>> = node.children().iter().map(|&c| proof.sequent(c).to_vec()).collect();
        if id == victim {
            if premises.is_empty() {
                kind = Corruption::WrongAxiom;
                inf.principal = Some(Formula::atom("Nowhere", vec![]));
            } else {
                premises[0].push(Formula::atom("Extra", vec![]));
            }
        }
        let kids = out.extend_unchecked(map[&id], inf, premises);
        for (&old, new) in node.children().iter().zip(kids) {
            map.insert(old, new);
        }
    }
    (out, kind)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn built_proofs_check(
        start in prop::collection::vec(common::closed_formula(3), 1..4),
        choices in prop::collection::vec((0usize..64, 0usize..64, 0usize..8), 0..12),
    ) {
        let proof = random_proof(start, &choices);
        prop_assert_eq!(check(&proof), Ok(()));
    }

    #[test]
    fn any_single_corruption_is_caught_where_it_happens(
        start in prop::collection::vec(common::closed_formula(3), 1..4),
        choices in prop::collection::vec((0usize..64, 0usize..64, 0usize..8), 0..12),
        target in 0usize..1000,
    ) {
        let proof = random_proof(start, &choices);
        let order = proof.preorder();
        let victim = order[target % order.len()];
        let (bad, kind) = corrupt(&proof, target);
        let err = check(&bad).unwrap_err();
        prop_assert_eq!(&err.path, proof.node(victim).path());
        let expected = match kind {
            Corruption::ExtraFormula => Reason::SchemaMismatch,
            Corruption::WrongAxiom => Reason::BadAxiom,
        };
        prop_assert_eq!(err.reason, expected);
    }
}

#[test]
fn weakening_drops_exactly_one_occurrence() {
    let p = Formula::atom("P", vec![]);
    let mut proof = GsProof::new(vec![p.clone(), p.clone(), anchor(), Formula::not(anchor())]);
    let kids = proof.build_step(proof.root(), GsRule::Weaken { dropped: vec![p.clone()] }, None).unwrap();
    let rest = proof.sequent(kids[0]);
    assert_eq!(rest.iter().filter(|f| **f == p).count(), 1);
    assert_eq!(rest.len(), 3);
}

#[test]
fn beta_rule_premises() {
    let a = Formula::atom("A", vec![]);
    let b = Formula::atom("B", vec![]);
    let imp = Formula::implies(a.clone(), b.clone());
    let mut proof = GsProof::new(vec![imp.clone()]);
    let kids = proof.build_step(proof.root(), GsRule::Implies, Some(imp.clone())).unwrap();
    assert_eq!(proof.sequent(kids[0]), &[imp.clone(), Formula::not(a)]);
    assert_eq!(proof.sequent(kids[1]), &[imp, b]);
}
