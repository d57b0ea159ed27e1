//! Property suites: Gröbner bases of the corpus ideals, elimination against a
//! resultant oracle, factorisation round trips, seed independence and parser
//! robustness.

mod common;

use common::*;
use geodeduce::dsl::parse_script;
use proptest::prelude::*;

#[test]
fn corpus_ideals_satisfy_buchberger_criterion() {
    assert_eq!(corpus_ideals(), Ok(7));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(RESULTANT_CASES))]
    #[test]
    fn elimination_agrees_with_resultant(f in monic_in_y(), g in monic_in_y()) {
        elimination_matches_resultant((f, g))?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(FACTOR_CASES))]
    #[test]
    fn factorisation_round_trip(input in factor_product()) {
        factor_round_trip(input)?;
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(PARSER_CASES))]
    #[test]
    fn parser_never_panics(src in script_like()) {
        parser_case(src)?;
    }
}

#[test]
fn relation_answers_do_not_depend_on_the_seed() {
    seed_independence().unwrap();
}

#[test]
fn resultant_of_known_pair() {
    // Res_y(y - x, y^2 - 2) = x^2 - 2.
    let f = [ux(&[0, -1]), ux(&[1])];
    let g = [ux(&[-2]), ux(&[0]), ux(&[1])];
    assert_eq!(sylvester_resultant(&f, &g), ux(&[-2, 0, 1]));
}

#[test]
fn valid_prefix_then_garbage_reports_the_garbage_line() {
    let e = parse_script("A = FreePoint()\nB = FreePoint()\n)(\n").unwrap_err();
    assert_eq!(e.line, 3);
}
