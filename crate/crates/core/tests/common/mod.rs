//! Checks shared by the property tests and the acceptance report.

#![allow(dead_code)]

use geodeduce::dsl::corpus::{same_up_to_scalar, Corpus};
use geodeduce::dsl::{parse_script, run, unparse, Query, QueryReport, RunOptions};
use geodeduce::exactmath::univariate::exact_quotient;
use geodeduce::exactmath::{
    eliminate, factor_univariate, fold_linear, groebner_basis, is_groebner_basis, normal_form,
    squarefree_part, MonomialOrder, MultiPoly,
};
use geodeduce::locus::locus_system;
use geodeduce::prover::relation_system;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};

pub const RESULTANT_CASES: u32 = 100;
pub const FACTOR_CASES: u32 = 1_000;
pub const PARSER_CASES: u32 = 10_000;
pub const SEEDS: u64 = 5;

/// Runs `check` on `cases` generated values; the error names the shrunk input.
pub fn run_cases<S: Strategy>(
    cases: u32,
    strategy: S,
    check: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, check).map_err(|e| e.to_string())
}

fn check_basis(system: &[MultiPoly], keep: &[usize]) -> Result<(), String> {
    let n = system[0].nvars();
    let elim: Vec<usize> = (0..n).filter(|v| !keep.contains(v)).collect();
    let ord = MonomialOrder::elimination(n, &elim).map_err(|e| e.to_string())?;
    let basis = groebner_basis(system, &ord).map_err(|e| e.to_string())?;
    if !is_groebner_basis(&basis, &ord).map_err(|e| e.to_string())? {
        return Err("an S-polynomial does not reduce to zero".into());
    }
    for p in system {
        if !normal_form(p, &basis, &ord).map_err(|e| e.to_string())?.is_zero() {
            return Err(format!("input {p} is not in the ideal of the basis"));
        }
    }
    Ok(())
}

/// Buchberger's criterion on the elimination basis of every corpus query;
/// returns the number of ideals checked.
pub fn corpus_ideals() -> Result<usize, String> {
    let corpus = Corpus::bundled().map_err(|e| e.to_string())?;
    let mut checked = 0;
    for problem in &corpus.problems {
        let s = &problem.script;
        for q in &s.queries {
            let r = match q {
                Query::Relation(rq) => {
                    let (sys, m) = relation_system(&s.program, rq, true).map_err(|e| e.to_string())?;
                    check_basis(&fold_linear(&sys, &[m]).system(), &[m])
                }
                Query::Locus(lq) => {
                    let (sys, (x, y), _) = locus_system(&s.program, &lq.condition, &lq.traced, true)
                        .map_err(|e| e.to_string())?;
                    check_basis(&fold_linear(&sys, &[x, y]).system(), &[x, y])
                }
            };
            r.map_err(|e| format!("problem {} {q}: {e}", problem.expected.id))?;
            checked += 1;
        }
    }
    Ok(checked)
}

/// Polynomial in x (one variable) from ascending integer coefficients.
pub fn ux(c: &[i64]) -> MultiPoly {
    MultiPoly::from_univariate_ints(c)
}

/// Determinant by cofactor expansion; the matrices here are at most 4×4.
fn det(m: &[Vec<MultiPoly>]) -> MultiPoly {
    let n = m.len();
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = MultiPoly::zero(1);
    for col in 0..n {
        if m[0][col].is_zero() {
            continue;
        }
        let minor: Vec<Vec<MultiPoly>> = m[1..]
            .iter()
            .map(|row| {
                row.iter()
                    .enumerate()
                    .filter(|(j, _)| *j != col)
                    .map(|(_, e)| e.clone())
                    .collect()
            })
            .collect();
        let term = &m[0][col] * &det(&minor);
        acc = if col % 2 == 0 { &acc + &term } else { &acc - &term };
    }
    acc
}

/// Res_y(f, g) where f and g are given by their y-coefficients (ascending),
/// each coefficient a polynomial in x.
pub fn sylvester_resultant(f: &[MultiPoly], g: &[MultiPoly]) -> MultiPoly {
    let (df, dg) = (f.len() - 1, g.len() - 1);
    let n = df + dg;
    let mut m = vec![vec![MultiPoly::zero(1); n]; n];
    for r in 0..dg {
        for (k, c) in f.iter().rev().enumerate() {
            m[r][r + k] = c.clone();
        }
    }
    for r in 0..df {
        for (k, c) in g.iter().rev().enumerate() {
            m[dg + r][r + k] = c.clone();
        }
    }
    det(&m)
}

/// Embeds y-coefficients (polynomials in x) into Q[x, y] with x = v0, y = v1.
fn bivariate(coeffs: &[MultiPoly]) -> MultiPoly {
    let mut terms = Vec::new();
    for (j, c) in coeffs.iter().enumerate() {
        for (e, a) in c.terms() {
            terms.push((vec![e[0], j as u32], a.clone()));
        }
    }
    MultiPoly::from_terms(2, terms).expect("two exponents per term")
}

/// A polynomial monic in y of degree 1 or 2 with low-degree x coefficients.
pub fn monic_in_y() -> impl Strategy<Value = Vec<MultiPoly>> {
    (
        1usize..=2,
        prop::collection::vec(prop::collection::vec(-3i64..=3, 1..=3), 2),
    )
        .prop_map(|(d, lower)| {
            let mut c: Vec<MultiPoly> = lower[..d].iter().map(|v| ux(v)).collect();
            c.push(ux(&[1]));
            c
        })
}

/// `<f, g> ∩ Q[x]` against the Sylvester resultant in y.
pub fn elimination_matches_resultant((f, g): (Vec<MultiPoly>, Vec<MultiPoly>)) -> Result<(), TestCaseError> {
    let res = sylvester_resultant(&f, &g);
    let gens = eliminate(&[bivariate(&f), bivariate(&g)], &[0]).unwrap();
    let nonzero: Vec<_> = gens.iter().filter(|p| !p.is_zero()).collect();
    if res.is_zero() {
        // A common factor monic in y projects onto the whole x-line.
        prop_assert!(nonzero.is_empty(), "{:?}", nonzero);
        return Ok(());
    }
    prop_assert_eq!(nonzero.len(), 1);
    let h = nonzero[0].to_univariate(0).unwrap();
    if res.is_constant() {
        prop_assert!(h.is_constant());
        return Ok(());
    }
    prop_assert!(
        exact_quotient(&res, &h).unwrap().is_some(),
        "h = {h} does not divide {res}"
    );
    // Both inputs are monic in y, so the projection is closed.
    let (a, b) = (squarefree_part(&h).unwrap(), squarefree_part(&res).unwrap());
    prop_assert!(same_up_to_scalar(&a, &b), "{a} vs {b}");
    Ok(())
}

#[derive(Debug, Clone)]
pub enum Factor {
    Linear(i64, i64),
    Quadratic(i64, i64, i64),
}

pub fn factor_product() -> impl Strategy<Value = (Vec<Factor>, i64)> {
    let factor = prop_oneof![
        (prop_oneof![-5i64..=-1, 1i64..=5], -6i64..=6).prop_map(|(a, b)| Factor::Linear(a, b)),
        (1i64..=4, -6i64..=6, -6i64..=6).prop_map(|(a, b, c)| Factor::Quadratic(a, b, c)),
    ];
    (
        prop::collection::vec(factor, 1..=4),
        prop_oneof![-7i64..=-1, 1i64..=7],
    )
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a.max(1)
}

/// `a*x + b` as a primitive polynomial with positive leading coefficient.
fn normalise_linear(a: i64, b: i64) -> MultiPoly {
    let g = gcd(a.abs(), b.abs());
    let s = a.signum();
    ux(&[s * b / g, s * a / g])
}

pub fn factor_round_trip((factors, scale): (Vec<Factor>, i64)) -> Result<(), TestCaseError> {
    let mut product = ux(&[scale]);
    for f in &factors {
        let p = match f {
            Factor::Linear(a, b) => ux(&[*b, *a]),
            Factor::Quadratic(a, b, c) => ux(&[*c, *b, *a]),
        };
        product = &product * &p;
    }
    let fact = factor_univariate(&product).unwrap();
    prop_assert_eq!(fact.expand(), product.clone());
    for (p, _) in &fact.factors {
        prop_assert!(!p.is_constant());
    }
    // Each linear input appears with at least its input multiplicity.
    for f in &factors {
        if let Factor::Linear(a, b) = f {
            let want = normalise_linear(*a, *b);
            let count = factors
                .iter()
                .filter(|g| matches!(g, Factor::Linear(c, d) if normalise_linear(*c, *d) == want))
                .count() as u32;
            let got = fact.factors.iter().find(|(p, _)| *p == want).map(|(_, m)| *m);
            prop_assert!(
                got.is_some_and(|m| m >= count),
                "{want} missing from {:?}",
                fact.factors
            );
        }
    }
    Ok(())
}

/// Ratio and minimal polynomial of the four relation problems agree across
/// `SEEDS` witness seeds.
pub fn seed_independence() -> Result<(), String> {
    let corpus = Corpus::bundled().map_err(|e| e.to_string())?;
    for id in ["06", "15", "23", "47"] {
        let script = &corpus.get(id).ok_or(format!("problem {id} missing"))?.script;
        let mut answers = Vec::new();
        for seed in 0..SEEDS {
            let opts = RunOptions {
                seed: seed * 7919 + 1,
                ..RunOptions::default()
            };
            let r = run(script, &opts).map_err(|e| format!("{id} seed {}: {e}", opts.seed))?;
            match &r.results[0] {
                QueryReport::Relation(rel) => {
                    answers.push((rel.ratio_text.clone(), rel.minimal_polynomial.clone()))
                }
                QueryReport::Locus(_) => return Err(format!("{id}: not a relation problem")),
            }
        }
        if !answers.windows(2).all(|w| w[0] == w[1]) {
            return Err(format!("{id}: {answers:?}"));
        }
    }
    Ok(())
}

const FRAGMENTS: &[&str] = &[
    "A",
    "B",
    "C",
    "P'",
    "g",
    "c",
    "s",
    " = ",
    "=",
    ",",
    " ",
    "(",
    ")",
    "@",
    "near",
    "?",
    "#",
    "#!",
    "\n",
    "FreePoint()",
    "Midpoint",
    "Square",
    "Segment",
    "Circle",
    "Line",
    "Intersect",
    "Mirror",
    "Dilate",
    "Equilateral",
    "PerpendicularLine",
    "PerpendicularBisector",
    "PointOn",
    "Relation",
    "Locus",
    "AreCollinear",
    "RatioEq",
    "LengthEq",
    "sqrt",
    "*",
    "/",
    "+",
    "-",
    "0",
    "1",
    "2.5",
    "1e400",
    ".",
    "é",
    "\t",
    "\u{0}",
    "99999999999999999999",
];

/// Token soup, lossy bytes and arbitrary strings.
pub fn script_like() -> impl Strategy<Value = String> {
    prop_oneof![
        prop::collection::vec(prop::sample::select(FRAGMENTS), 0..40).prop_map(|v| v.concat()),
        prop::collection::vec(any::<u8>(), 0..80).prop_map(|b| String::from_utf8_lossy(&b).into_owned()),
        any::<String>(),
    ]
}

/// Accepted scripts round-trip; rejected ones carry an in-range position.
pub fn parser_case(src: String) -> Result<(), TestCaseError> {
    match parse_script(&src) {
        Ok(s) => {
            let again = parse_script(&unparse(&s)).unwrap();
            prop_assert_eq!(again.program, s.program);
            prop_assert_eq!(again.queries, s.queries);
        }
        Err(e) => {
            prop_assert!(e.line >= 1 && e.column >= 1);
            prop_assert!(e.line <= src.split('\n').count().max(1));
        }
    }
    Ok(())
}
