use proptest::prelude::*;
use uf1eq::corpus::{self, vocab, FormulaParams};
use uf1eq::syntax::{parse_formula, parse_formula_infer, validate_fragment, ParseError};

fn params(max_nodes: usize) -> FormulaParams {
    FormulaParams::new(vocab(&[("P", 1), ("Q", 1), ("R", 2), ("T", 3)]), max_nodes)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn print_parse_round_trip(seed in any::<u64>(), free in any::<bool>(), nodes in 3usize..40) {
        let mut r = corpus::rng(seed);
        let phi = corpus::random_formula(&mut r, &params(nodes), free);
        let text = phi.to_string();
        let (back, _) = parse_formula_infer(&text).unwrap();
        prop_assert_eq!(&back, &phi, "{}", text);
    }

    #[test]
    fn generated_sentences_are_members(seed in any::<u64>()) {
        let mut r = corpus::rng(seed);
        let phi = corpus::random_sentence(&mut r, &params(30));
        prop_assert!(phi.free_vars().is_empty());
        let rep = validate_fragment(&phi, false);
        prop_assert!(rep.member, "{} {:?}", phi, rep.violations);
    }

    #[test]
    fn nnf_stays_in_fragment(seed in any::<u64>()) {
        let mut r = corpus::rng(seed);
        let phi = corpus::random_sentence(&mut r, &params(25));
        prop_assert!(validate_fragment(&phi.nnf(), false).member);
    }
}

#[test]
fn arity_clash_is_reported() {
    let v = vocab(&[("R", 2)]);
    assert!(matches!(
        parse_formula("R(x,y,z)", &v),
        Err(ParseError::Vocabulary { .. })
    ));
    assert!(matches!(
        parse_formula_infer("R(x) & R(x,y)"),
        Err(ParseError::Vocabulary { .. })
    ));
}

#[test]
fn syntax_errors_carry_positions() {
    match parse_formula_infer("A x. (P(x) &") {
        Err(ParseError::Syntax { line, column, .. }) => {
            assert_eq!(line, 1);
            assert!(column >= 12);
        }
        other => panic!("{other:?}"),
    }
}
