mod common;

use proptest::prelude::*;
use skograft_core::formula::{parse, Formula};
use skograft_core::gs3::check;
use skograft_core::tableau::{prove, ClosedTableau, ProverConfig, RuleKind};
use skograft_core::translate::{translate, translate_audited, InitialPart, Translator};

fn closed(sources: &[&str]) -> ClosedTableau {
    let gamma: Vec<Formula> = sources.iter().map(|s| parse(s).unwrap()).collect();
    prove(&gamma, &ProverConfig::default()).unwrap()
}

fn small_budget() -> ProverConfig {
    ProverConfig { step_budget: 3_000, ..ProverConfig::default() }
}

#[test]
fn delta_on_an_untouched_root_needs_no_weakening() {
    let t = closed(&["~(forall y. P(y))", "forall z. P(z)"]);
    let (proof, stats) = translate_audited(&t).unwrap();
    assert_eq!(proof.spine(), vec!["~forall", "forall", "ax"]);
    assert_eq!(stats.grafts, 1);
    assert_eq!(check(&proof), Ok(()));
}

#[test]
fn beta_on_a_doubled_branch_gives_four_leaves() {
    let t = closed(&["(~(forall y. P(y))) | ((~Q & ~S) & (Q | S))", "forall z. P(z)"]);
    let rules: Vec<_> = t.tableau().rules().into_iter().map(|(p, r)| (p.clone(), r.kind)).collect();
    let mut tr = Translator::new(&t).unwrap().audit_all(true).regrow_from_root(true);
    let mut seen_four = false;
    for (path, kind) in rules {
        let before = tr.link().values().filter(|b| **b == path).count();
        tr.step().unwrap();
        if kind == RuleKind::Beta && before == 2 {
            let after = tr.link().values().filter(|b| path.is_prefix_of(b) && **b != path).count();
            assert_eq!(after, 4);
            seen_four = true;
        }
    }
    assert!(seen_four);
    let (proof, _) = tr.finish().unwrap();
    assert_eq!(check(&proof), Ok(()));
}

#[test]
fn two_level_dependency_recurses_once() {
    let t = closed(&["~(exists x. (D(x) => forall y. exists z. (E(y, z) => forall w. E(z, w))))"]);
    let (proof, stats) = Translator::new(&t).unwrap().audit_all(true).regrow_from_root(true).finish().unwrap();
    assert_eq!(stats.nested_grafts, 1);
    assert!(stats.measures.iter().all(|(outer, inner)| inner.0 < outer.0));
    assert_eq!(check(&proof), Ok(()));
    let small = translate(&t).unwrap();
    assert_eq!(check(&small), Ok(()));
    assert!(small.inference_count() < proof.inference_count());
}

#[test]
fn full_part_is_complete() {
    let t = closed(&["~(exists x. (D(x) => forall y. D(y)))"]);
    let mut part = InitialPart::new();
    while let Some(p) = part.open_leaves(t.tableau()).first().cloned() {
        part = part.extend(t.tableau(), &p).unwrap();
    }
    assert!(part.is_complete(t.tableau()));
    assert_eq!(part.len(), t.rule_count());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    /// prove, translate with every link re-audited, check.
    #[test]
    fn proved_formulas_translate_to_accepted_proofs(f in common::closed_formula(4)) {
        let Ok(t) = prove(&[Formula::not(f)], &small_budget()) else { return Ok(()) };
        prop_assert_eq!(t.audit(), Ok(()));
        let (proof, stats) = translate_audited(&t).unwrap();
        prop_assert_eq!(check(&proof), Ok(()));
        prop_assert!(proof.inference_count() >= t.rule_count());
        prop_assert!(stats.measures.iter().all(|(outer, inner)| inner < outer));
    }

    /// Extending an initial part at any open leaf keeps it prefix-closed.
    #[test]
    fn extensions_stay_initial_parts(f in common::closed_formula(4), picks in prop::collection::vec(0usize..16, 64)) {
        let Ok(t) = prove(&[Formula::not(f)], &small_budget()) else { return Ok(()) };
        let tab = t.tableau();
        let mut part = InitialPart::new();
        let mut picks = picks.into_iter().cycle();
        loop {
            let open: Vec<_> =
                part.open_leaves(tab).into_iter().filter(|p| tab.node(p).is_some_and(|n| n.rule().is_some())).collect();
            if open.is_empty() {
                break;
            }
            let leaf = &open[picks.next().unwrap() % open.len()];
            part = part.extend(tab, leaf).unwrap();
            prop_assert!(part.is_initial_part_of(tab));
        }
        prop_assert!(part.is_complete(tab));
    }
}
