//! Replays the checked-in fuzz seed corpora through the same checks as the
//! fuzz targets, so stable builds exercise them too.

use std::fs;
use std::path::PathBuf;

use geodeduce::dsl::corpus::{Corpus, BUNDLED_SCRIPTS};
use geodeduce::dsl::{parse_number, parse_script, unparse};
use geodeduce::exactmath::text::parse_poly;
use geodeduce::exactmath::{AlgebraicNumber, MonomialOrder, SurdRecord};
use num_bigint::BigInt;
use proptest::prelude::*;

fn seeds(target: &str) -> Vec<(String, Vec<u8>)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let p = e.unwrap().path();
            (p.display().to_string(), fs::read(&p).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

fn text(data: &[u8]) -> Option<&str> {
    std::str::from_utf8(data).ok()
}

#[test]
fn parse_script_seeds() {
    let mut accepted = 0;
    for (name, data) in seeds("parse_script") {
        let Some(src) = text(&data) else { continue };
        if let Ok(s) = parse_script(src) {
            let again = parse_script(&unparse(&s)).unwrap();
            assert_eq!(again.program, s.program, "{name}");
            assert_eq!(again.queries, s.queries, "{name}");
            accepted += 1;
        }
    }
    assert!(accepted >= 6);
}

#[test]
fn parse_poly_seeds() {
    let names = ["x", "y"];
    for (name, data) in seeds("parse_poly") {
        let Some(src) = text(&data) else { continue };
        if let Ok(p) = parse_poly(src, &names) {
            let printed = p.to_text(&["x".into(), "y".into()], &MonomialOrder::grevlex(2));
            assert_eq!(parse_poly(&printed, &names).unwrap(), p, "{name}");
        }
    }
}

#[test]
fn parse_number_seeds() {
    for (name, data) in seeds("parse_number") {
        let Some(src) = text(&data) else { continue };
        if let Ok(a) = parse_number(src) {
            assert_eq!(parse_number(&a.to_string()).unwrap(), a, "{name}");
        }
    }
}

#[test]
fn surd_record_seeds() {
    for (name, data) in seeds("surd_record") {
        let Ok(rec) = serde_json::from_slice::<SurdRecord>(&data) else {
            continue;
        };
        if let Ok(a) = AlgebraicNumber::from_record(&rec) {
            assert_eq!(AlgebraicNumber::from_record(&a.record()).unwrap(), a, "{name}");
        }
    }
}

#[test]
fn expected_json_seeds() {
    let mut loaded = 0;
    for (_, data) in seeds("expected_json") {
        let Some(src) = text(&data) else { continue };
        if Corpus::from_sources(src, &BUNDLED_SCRIPTS).is_ok() {
            loaded += 1;
        }
    }
    assert_eq!(loaded, 2);
}

proptest! {
    #[test]
    fn printed_numbers_reparse(p in -50i64..50, q in -50i64..50, r in 1i64..50, d in 0i64..60) {
        let a = AlgebraicNumber::surd(BigInt::from(p), BigInt::from(q), BigInt::from(r), BigInt::from(d)).unwrap();
        prop_assert_eq!(parse_number(&a.to_string()).unwrap(), a);
    }
}
