//! Relation queries: the exact constant `c` with `right = c · left`.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::construction::{
    compile, numeric_witness_with, ConstructionError, ConstructionProgram, LinearExpr, Pinning, VarRole,
    Witness, WitnessOptions, DEFAULT_WITNESS_TOL,
};
use crate::exactmath::{
    eliminate_with, factor_univariate, fold_linear, roots_of_factor, squarefree_part, AlgebraicNumber,
    ExactError, GroebnerConfig, GroebnerStats, MultiPoly, Rational, RootValue,
};

pub const DEFAULT_MATCH_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct RelationQuery {
    pub left: LinearExpr,
    pub right: LinearExpr,
}

impl RelationQuery {
    pub fn new(left: LinearExpr, right: LinearExpr) -> Self {
        Self { left, right }
    }

    pub fn labels(left: &str, right: &str) -> Self {
        Self::new(LinearExpr::label(left), LinearExpr::label(right))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Unique,
    AmbiguousMultipleRoots,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Selection {
    /// right/left evaluated at the primary witness.
    pub witness_ratio: f64,
    /// Distance between the selected root and `witness_ratio`.
    pub distance: f64,
    /// right/left at the cross-check witness.
    pub second_witness_ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelationResult {
    pub query: RelationQuery,
    pub ratio: AlgebraicNumber,
    /// Irreducible factor of the eliminated polynomial vanishing at `ratio`.
    pub minimal_polynomial: MultiPoly,
    /// Square-free part of the generator of the elimination ideal.
    pub eliminated: MultiPoly,
    /// Positive real roots of `eliminated`, ascending.
    pub candidates: Vec<RootValue>,
    pub selected_by: Selection,
    pub verdict: Verdict,
    pub witness: Witness,
    pub stats: GroebnerStats,
}

impl RelationResult {
    /// `right = (ratio) * left` with the ratio in its canonical text form.
    pub fn render(&self) -> String {
        format!(
            "{} = ({}) * {}",
            render_expr(&self.query.right),
            self.ratio,
            render_expr(&self.query.left)
        )
    }
}

impl fmt::Display for RelationResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// Text form of a length expression, e.g. `4*t` or `s + 1/2*t`.
pub fn render_expr(e: &LinearExpr) -> String {
    use num_traits::{One, Signed, Zero};
    let mut s = String::new();
    for (c, l) in &e.terms {
        let neg = c.is_negative();
        if s.is_empty() {
            if neg {
                s.push('-');
            }
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let a = c.abs();
        if a.is_one() {
            s.push_str(l);
        } else {
            s.push_str(&format!("{a}*{l}"));
        }
    }
    if !e.constant.is_zero() || s.is_empty() {
        let neg = e.constant.is_negative();
        if s.is_empty() {
            s.push_str(&e.constant.to_string());
        } else {
            s.push_str(if neg { " - " } else { " + " });
            s.push_str(&e.constant.abs().to_string());
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ProverError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("not a constant relation: elimination leaves no polynomial in the ratio")]
    NotConstant,
    #[error("inconsistent construction: the constraint ideal is the whole ring")]
    Inconsistent,
    #[error("query is not homogeneous in lengths: {0}")]
    NotHomogeneous(String),
    #[error("left expression vanishes at the witness")]
    ZeroLeft,
    #[error("internal inconsistency: no positive root matches the witness ratio {witness_ratio} (candidates {candidates:?})")]
    NoMatchingRoot {
        witness_ratio: f64,
        candidates: Vec<f64>,
    },
    #[error("selected root {approx} is not a rational or quadratic surd")]
    NotSurd { approx: f64 },
    #[error("ratio {0} does not square to a rational")]
    NotRationalSquare(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProverOptions {
    pub seed: u64,
    pub pin_second: bool,
    pub match_tol: f64,
    pub witness_tol: f64,
    pub groebner: GroebnerConfig,
}

impl Default for ProverOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            pin_second: true,
            match_tol: DEFAULT_MATCH_TOL,
            witness_tol: DEFAULT_WITNESS_TOL,
            groebner: GroebnerConfig::default(),
        }
    }
}

pub fn discover_ratio(
    program: &ConstructionProgram,
    query: &RelationQuery,
    seed: u64,
) -> Result<RelationResult, ProverError> {
    discover_ratio_with(
        program,
        query,
        &ProverOptions {
            seed,
            ..ProverOptions::default()
        },
    )
}

/// The polynomial system `constraints ∪ {m·left − right}` and the index of `m`.
pub fn relation_system(
    program: &ConstructionProgram,
    query: &RelationQuery,
    pin_second: bool,
) -> Result<(Vec<MultiPoly>, usize), ProverError> {
    for e in [&query.left, &query.right] {
        if !e.is_homogeneous() {
            return Err(ProverError::NotHomogeneous(render_expr(e)));
        }
    }
    let model = compile(program, pin_second)?;
    let (model, m) = model.with_extra_var("ratio", VarRole::Query { name: "ratio".into() });
    let left = model.length_poly(&query.left)?;
    let right = model.length_poly(&query.right)?;
    let mvar = MultiPoly::var(model.nvars(), m);
    let mut system = model.constraint_polys();
    system.push(&(&mvar * &left) - &right);
    Ok((system, m))
}

fn witness_ratio(w: &Witness, q: &RelationQuery) -> Result<f64, ProverError> {
    let l = w.eval_expr(&q.left).expect("labels validated");
    let r = w.eval_expr(&q.right).expect("labels validated");
    if l.abs() < 1e-12 {
        return Err(ProverError::ZeroLeft);
    }
    Ok(r / l)
}

pub fn discover_ratio_with(
    program: &ConstructionProgram,
    query: &RelationQuery,
    opts: &ProverOptions,
) -> Result<RelationResult, ProverError> {
    let (system, m) = relation_system(program, query, opts.pin_second)?;
    let folded = fold_linear(&system, &[m]);
    let (gens, stats) = eliminate_with(&folded.system(), &[m], &opts.groebner)?;
    let gen = match gens.iter().find(|g| g.uses_var(m)) {
        Some(g) => g,
        None if gens.iter().any(|g| g.is_constant() && !g.is_zero()) => {
            return Err(ProverError::Inconsistent)
        }
        None => return Err(ProverError::NotConstant),
    };
    let uni = gen.to_univariate(m).expect("elimination ideal in the ratio only");
    let eliminated = squarefree_part(&uni)?;
    let fac = factor_univariate(&eliminated)?;
    let mut candidates: Vec<(RootValue, usize)> = Vec::new();
    for (i, (q, _)) in fac.factors.iter().enumerate() {
        for r in roots_of_factor(q)? {
            if r.approx() > 0.0 {
                candidates.push((r, i));
            }
        }
    }
    candidates.sort_by(|a, b| a.0.approx().total_cmp(&b.0.approx()));

    let w1 = numeric_witness_with(
        program,
        &WitnessOptions {
            seed: opts.seed,
            tol: opts.witness_tol,
            pinning: Pinning::None,
            overrides: Vec::new(),
        },
    )?;
    let w2 = numeric_witness_with(
        program,
        &WitnessOptions {
            seed: opts.seed.wrapping_add(1),
            tol: opts.witness_tol,
            pinning: if opts.pin_second {
                Pinning::FirstTwo
            } else {
                Pinning::First
            },
            overrides: Vec::new(),
        },
    )?;
    let r1 = witness_ratio(&w1, query)?;
    let r2 = witness_ratio(&w2, query)?;
    let matching = |target: f64| -> Vec<usize> {
        candidates
            .iter()
            .enumerate()
            .filter(|(_, (c, _))| (c.approx() - target).abs() < opts.match_tol * target.abs().max(1.0))
            .map(|(i, _)| i)
            .collect()
    };
    let nearest = |target: f64| -> Option<usize> {
        matching(target).into_iter().min_by(|&a, &b| {
            (candidates[a].0.approx() - target)
                .abs()
                .total_cmp(&(candidates[b].0.approx() - target).abs())
        })
    };
    let Some(sel) = nearest(r1) else {
        return Err(ProverError::NoMatchingRoot {
            witness_ratio: r1,
            candidates: candidates.iter().map(|c| c.0.approx()).collect(),
        });
    };
    let verdict = if matching(r1).len() > 1 || nearest(r2) != Some(sel) {
        Verdict::AmbiguousMultipleRoots
    } else {
        Verdict::Unique
    };
    let (root, factor_idx) = &candidates[sel];
    let ratio = match root {
        RootValue::Exact(a) => a.clone(),
        RootValue::NonSurd { approx, .. } => return Err(ProverError::NotSurd { approx: *approx }),
    };
    Ok(RelationResult {
        query: query.clone(),
        minimal_polynomial: fac.factors[*factor_idx].0.clone(),
        eliminated,
        candidates: candidates.iter().map(|c| c.0.clone()).collect(),
        selected_by: Selection {
            witness_ratio: r1,
            distance: (root.approx() - r1).abs(),
            second_witness_ratio: r2,
        },
        ratio,
        verdict,
        witness: w1,
        stats,
    })
}

/// The square of the ratio when it is rational.
pub fn square_ratio(result: &RelationResult) -> Result<Rational, ProverError> {
    result
        .ratio
        .square_if_rational()
        .ok_or_else(|| ProverError::NotRationalSquare(result.ratio.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construction::{Step, StepEntry};
    use num_bigint::BigInt;

    fn free(l: &str, h: (f64, f64)) -> StepEntry {
        StepEntry::new(l, Step::FreePoint { hint: Some(h) })
    }

    fn seg(l: &str, a: &str, b: &str) -> StepEntry {
        StepEntry::new(
            l,
            Step::SegmentLength {
                a: a.into(),
                b: b.into(),
            },
        )
    }

    #[test]
    fn diagonal_of_square() {
        let prog = ConstructionProgram::new(vec![
            free("A", (0.0, 0.0)),
            free("B", (1.0, 0.0)),
            StepEntry {
                outputs: vec!["C".into(), "D".into()],
                step: Step::Square {
                    a: "A".into(),
                    b: "B".into(),
                },
            },
            seg("f", "A", "B"),
            seg("d", "A", "C"),
        ])
        .unwrap();
        let res = discover_ratio(&prog, &RelationQuery::labels("f", "d"), 0).unwrap();
        let sqrt2 = AlgebraicNumber::surd(0.into(), 1.into(), 1.into(), 2.into()).unwrap();
        assert_eq!(res.ratio, sqrt2);
        assert_eq!(res.minimal_polynomial.canonical_text(), "v0^2 - 2");
        assert_eq!(res.verdict, Verdict::Unique);
        assert_eq!(res.render(), "d = (sqrt(2)) * f");
        assert_eq!(
            square_ratio(&res).unwrap(),
            Rational::from_integer(BigInt::from(2))
        );
    }

    #[test]
    fn non_constant_relation() {
        let prog = ConstructionProgram::new(vec![
            free("A", (0.0, 0.0)),
            free("B", (1.0, 0.0)),
            free("C", (0.3, 0.7)),
            seg("f", "A", "B"),
            seg("g", "A", "C"),
        ])
        .unwrap();
        let err = discover_ratio(&prog, &RelationQuery::labels("f", "g"), 0).unwrap_err();
        assert_eq!(err, ProverError::NotConstant);
    }

    #[test]
    fn inhomogeneous_query_rejected() {
        let prog = ConstructionProgram::new(vec![
            free("A", (0.0, 0.0)),
            free("B", (1.0, 0.0)),
            seg("f", "A", "B"),
        ])
        .unwrap();
        let mut right = LinearExpr::label("f");
        right.constant = Rational::from_integer(1.into());
        let q = RelationQuery::new(LinearExpr::label("f"), right);
        assert!(matches!(
            discover_ratio(&prog, &q, 0),
            Err(ProverError::NotHomogeneous(_))
        ));
    }

    #[test]
    fn render_expressions() {
        let e = LinearExpr {
            terms: vec![
                (Rational::from_integer(4.into()), "t".into()),
                (Rational::new((-1).into(), 2.into()), "s".into()),
            ],
            constant: Rational::from_integer(0.into()),
        };
        assert_eq!(render_expr(&e), "4*t - 1/2*s");
    }
}
