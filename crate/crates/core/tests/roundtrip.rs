mod common;

use proptest::prelude::*;
use skograft_core::formula::{parse, parse_with, Formula, ParseErrorKind, ParseMode, Term};

fn atom(p: &str) -> Formula {
    Formula::atom(p, vec![])
}

#[test]
fn grammar_examples() {
    let d = |t: Term| Formula::atom("D", vec![t]);
    let x = || Term::Var("x".into());
    let y = || Term::Var("y".into());
    assert_eq!(
        parse("~(exists x. (D(x) => forall y. D(y)))").unwrap(),
        Formula::not(Formula::exists("x", Formula::implies(d(x()), Formula::forall("y", d(y())))))
    );
    assert_eq!(parse("P").unwrap(), atom("P"));
    assert_eq!(parse("~~P & Q").unwrap(), Formula::and(Formula::not(Formula::not(atom("P"))), atom("Q")));
    assert_eq!(parse("P => Q => R").unwrap(), Formula::implies(atom("P"), Formula::implies(atom("Q"), atom("R"))));
    assert_eq!(
        parse("P | Q & R => S").unwrap(),
        Formula::implies(Formula::or(atom("P"), Formula::and(atom("Q"), atom("R"))), atom("S"))
    );
}

#[test]
fn canonical_print() {
    assert_eq!(Formula::atom("D", vec![Term::constant("c")]).print(), "D(c)");
    let f = Formula::not(Formula::forall("y", Formula::atom("D", vec![Term::Var("y".into())])));
    assert_eq!(f.print(), "(~(forall y. D(y)))");
}

#[test]
fn reserved_names_rejected_in_user_input() {
    for text in ["P(sko1)", "P(X3)", "forall sko2. P(sko2)"] {
        let err = parse(text).unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Reserved(_)), "{text}: {err:?}");
    }
    assert!(parse_with("P(sko1, X3)", ParseMode::Proof).is_ok());
}

#[test]
fn errors_carry_positions() {
    let err = parse("P &\n  & Q").unwrap_err();
    assert_eq!((err.line, err.column), (2, 3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn parse_inverts_print(f in common::closed_formula(5)) {
        let text = f.print();
        let back = parse(&text).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.print(), text);
    }
}
