//! Query execution and the JSON run report.

use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use crate::construction::Witness;
use crate::exactmath::{
    ExactError, Factorization, GroebnerConfig, GroebnerStats, MonomialOrder, MultiPoly, RootValue, SurdRecord,
};
use crate::locus::{locus_equation_with, DimensionHint, LocusError, LocusOptions, LocusResult};
use crate::prover::{
    discover_ratio_with, ProverError, ProverOptions, RelationResult, Selection, Verdict, DEFAULT_MATCH_TOL,
};

use super::{Query, Script};

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub seed: u64,
    pub pin_second: bool,
    pub match_tol: f64,
    pub groebner: GroebnerConfig,
    /// Sampling window for curve loci.
    pub region: Option<(f64, f64, f64, f64)>,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            seed: 0,
            pin_second: true,
            match_tol: DEFAULT_MATCH_TOL,
            groebner: GroebnerConfig::default(),
            region: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RunError {
    #[error("query {index} ({query}): {source}")]
    Relation {
        index: usize,
        query: String,
        source: ProverError,
    },
    #[error("query {index} ({query}): {source}")]
    Locus {
        index: usize,
        query: String,
        source: LocusError,
    },
}

impl RunError {
    /// True when the engine gave up because of its S-pair budget.
    pub fn is_resource(&self) -> bool {
        matches!(
            self,
            RunError::Relation {
                source: ProverError::Exact(ExactError::Resource { .. }),
                ..
            } | RunError::Locus {
                source: LocusError::Exact(ExactError::Resource { .. }),
                ..
            }
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Candidate {
    pub value: f64,
    /// Closed form when the root comes from a linear or quadratic factor.
    pub exact: Option<SurdRecord>,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RelationReport {
    pub query: String,
    pub text: String,
    pub minimal_polynomial: String,
    pub eliminated_polynomial: String,
    pub ratio: SurdRecord,
    pub ratio_text: String,
    pub ratio_value: f64,
    pub candidates: Vec<Candidate>,
    pub verdict: Verdict,
    pub selected_by: Selection,
    pub witness: Witness,
    pub stats: GroebnerStats,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorRecord {
    pub polynomial: String,
    pub multiplicity: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FactorList {
    pub content: String,
    pub factors: Vec<FactorRecord>,
    pub fully_factored: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocusReport {
    pub query: String,
    pub traced: String,
    pub generators: Vec<String>,
    pub x_polynomial: Option<String>,
    pub y_polynomial: Option<String>,
    pub x_factors: Option<FactorList>,
    pub y_factors: Option<FactorList>,
    pub dimension: DimensionHint,
    pub samples: Vec<[f64; 2]>,
    pub rejected_samples: usize,
    pub stats: GroebnerStats,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum QueryReport {
    Relation(RelationReport),
    Locus(LocusReport),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunReport {
    pub problem: Option<String>,
    pub seed: u64,
    pub pin_second: bool,
    pub results: Vec<QueryReport>,
    pub elapsed_ms: f64,
    #[serde(skip)]
    pub relations: Vec<RelationResult>,
    #[serde(skip)]
    pub loci: Vec<LocusResult>,
}

impl RunReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    /// One line per query: the relation or the locus generators.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for r in &self.results {
            match r {
                QueryReport::Relation(r) => {
                    out.push_str(&r.text);
                    out.push('\n');
                    if r.verdict == Verdict::AmbiguousMultipleRoots {
                        out.push_str("  (ambiguous: several candidate roots)\n");
                    }
                }
                QueryReport::Locus(l) => {
                    out.push_str(&format!("{}: {}\n", l.query, l.generators.join(", ")));
                    if let Some(x) = &l.x_polynomial {
                        out.push_str(&format!("  x: {x}\n"));
                    }
                    if let Some(y) = &l.y_polynomial {
                        out.push_str(&format!("  y: {y}\n"));
                    }
                }
            }
        }
        out
    }
}

pub fn poly_text(p: &MultiPoly, var: &str) -> String {
    p.to_text(&[var.to_string()], &MonomialOrder::lex(1))
}

fn factor_list(f: &Factorization, var: &str) -> FactorList {
    FactorList {
        content: f.content.to_string(),
        factors: f
            .factors
            .iter()
            .map(|(q, m)| FactorRecord {
                polynomial: poly_text(q, var),
                multiplicity: *m,
            })
            .collect(),
        fully_factored: f.fully_factored,
    }
}

fn candidate(r: &RootValue) -> Candidate {
    match r {
        RootValue::Exact(a) => Candidate {
            value: a.to_f64(),
            exact: Some(a.record()),
            text: a.to_string(),
        },
        RootValue::NonSurd { approx, .. } => Candidate {
            value: *approx,
            exact: None,
            text: format!("{approx}"),
        },
    }
}

pub fn relation_report(query: &Query, r: &RelationResult, elapsed_ms: f64) -> RelationReport {
    RelationReport {
        query: query.to_string(),
        text: r.render(),
        minimal_polynomial: poly_text(&r.minimal_polynomial, "m"),
        eliminated_polynomial: poly_text(&r.eliminated, "m"),
        ratio: r.ratio.record(),
        ratio_text: r.ratio.to_string(),
        ratio_value: r.ratio.to_f64(),
        candidates: r.candidates.iter().map(candidate).collect(),
        verdict: r.verdict,
        selected_by: r.selected_by.clone(),
        witness: r.witness.clone(),
        stats: r.stats.clone(),
        elapsed_ms,
    }
}

pub fn locus_report(query: &Query, l: &LocusResult, elapsed_ms: f64) -> LocusReport {
    LocusReport {
        query: query.to_string(),
        traced: l.traced.clone(),
        generators: l.generator_texts(),
        x_polynomial: l.x_polynomial.as_ref().map(|p| poly_text(p, "x")),
        y_polynomial: l.y_polynomial.as_ref().map(|p| poly_text(p, "y")),
        x_factors: l.x_factors.as_ref().map(|f| factor_list(f, "x")),
        y_factors: l.y_factors.as_ref().map(|f| factor_list(f, "y")),
        dimension: l.dimension,
        samples: l.samples.iter().map(|p| [p.0, p.1]).collect(),
        rejected_samples: l.rejected_samples,
        stats: l.stats.clone(),
        elapsed_ms,
    }
}

pub fn run(script: &Script, opts: &RunOptions) -> Result<RunReport, RunError> {
    let start = Instant::now();
    let mut report = RunReport {
        problem: script.metadata.problem.clone(),
        seed: opts.seed,
        pin_second: opts.pin_second,
        results: Vec::new(),
        elapsed_ms: 0.0,
        relations: Vec::new(),
        loci: Vec::new(),
    };
    for (index, q) in script.queries.iter().enumerate() {
        let t = Instant::now();
        match q {
            Query::Relation(rq) => {
                let popts = ProverOptions {
                    seed: opts.seed,
                    pin_second: opts.pin_second,
                    match_tol: opts.match_tol,
                    groebner: opts.groebner.clone(),
                    ..ProverOptions::default()
                };
                let r = discover_ratio_with(&script.program, rq, &popts).map_err(|source| {
                    RunError::Relation {
                        index,
                        query: q.to_string(),
                        source,
                    }
                })?;
                let ms = t.elapsed().as_secs_f64() * 1e3;
                report
                    .results
                    .push(QueryReport::Relation(relation_report(q, &r, ms)));
                report.relations.push(r);
            }
            Query::Locus(lq) => {
                let mut lopts = LocusOptions {
                    pin_second: opts.pin_second,
                    groebner: opts.groebner.clone(),
                    ..LocusOptions::default()
                };
                if let Some(region) = opts.region {
                    lopts.region = region;
                }
                let l = locus_equation_with(&script.program, &lq.condition, &lq.traced, &lopts).map_err(
                    |source| RunError::Locus {
                        index,
                        query: q.to_string(),
                        source,
                    },
                )?;
                let ms = t.elapsed().as_secs_f64() * 1e3;
                report.results.push(QueryReport::Locus(locus_report(q, &l, ms)));
                report.loci.push(l);
            }
        }
    }
    report.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(report)
}

/// CSV `query,x,y` with coordinates to 12 significant digits; `query` is
/// the 0-based index of the locus query among the script's queries.
pub fn points_csv(points: &[(usize, f64, f64)]) -> String {
    let mut out = String::from("query,x,y\n");
    for (q, x, y) in points {
        out.push_str(&format!("{q},{},{}\n", sig12(*x), sig12(*y)));
    }
    out
}

/// Formats with 12 significant digits, trimming trailing zeros.
pub fn sig12(v: f64) -> String {
    if v == 0.0 || !v.is_finite() {
        return if v.is_finite() { "0".into() } else { v.to_string() };
    }
    let s = format!("{:.11e}", v);
    let (mant, exp) = s.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        let f = format!("{:.*}", decimals, v);
        if f.contains('.') {
            f.trim_end_matches('0').trim_end_matches('.').to_string()
        } else {
            f
        }
    } else {
        let mant = if mant.contains('.') {
            mant.trim_end_matches('0').trim_end_matches('.')
        } else {
            mant
        };
        format!("{mant}e{exp}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twelve_significant_digits() {
        assert_eq!(sig12(0.474_393_483_331_288), "0.474393483331");
        assert_eq!(sig12(1.0), "1");
        assert_eq!(sig12(-0.0954915028125263), "-0.0954915028125");
        assert_eq!(sig12(123456.789012345), "123456.789012");
        assert_eq!(sig12(1.5e-9), "1.5e-9");
        assert_eq!(sig12(0.0), "0");
    }

    #[test]
    fn csv_header_and_rows() {
        assert_eq!(points_csv(&[(1, 0.25, 0.0)]), "query,x,y\n1,0.25,0\n");
    }
}
