//! The bundled problem corpus and its self-test.
//!
//! Expected answers are exact: minimal polynomials as text plus surd records.
//! The only floating-point expectation is the measured length at a
//! user-chosen point of a locus workflow, which is a measurement by nature.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Deserialize;
use thiserror::Error;

use crate::exactmath::text::parse_poly;
use crate::exactmath::{AlgebraicNumber, MonomialOrder, MultiPoly, SurdRecord};
use crate::locus::evaluate_conjecture_length;
use crate::prover::square_ratio;

use super::report::{run, RunOptions, RunReport};
use super::{parse_script, ParseError, Query, Script};

pub const EXPECTED_FILE: &str = "expected.json";

/// Script file names and contents, compiled into the library.
pub const BUNDLED_SCRIPTS: [(&str, &str); 6] = [
    ("problem06.gcs", include_str!("../../corpus/problem06.gcs")),
    ("problem15.gcs", include_str!("../../corpus/problem15.gcs")),
    ("problem23.gcs", include_str!("../../corpus/problem23.gcs")),
    ("problem25.gcs", include_str!("../../corpus/problem25.gcs")),
    ("problem47.gcs", include_str!("../../corpus/problem47.gcs")),
    ("problem58.gcs", include_str!("../../corpus/problem58.gcs")),
];

pub const BUNDLED_EXPECTED: &str = include_str!("../../corpus/expected.json");

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("configuration error: missing corpus file {0}")]
    Missing(PathBuf),
    #[error("configuration error: corrupt {file}: {message}")]
    Corrupt { file: String, message: String },
    #[error("{file}:{error}")]
    Parse { file: String, error: ParseError },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ConjectureCheck {
    pub point: (f64, f64),
    pub length: String,
    pub value: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExpectedAnswer {
    Relation {
        /// In the variable `m`.
        minimal_polynomial: String,
        ratio: SurdRecord,
        #[serde(default)]
        square_ratio: Option<String>,
    },
    Locus {
        /// One principal generator per locus query, in `x` and `y`.
        #[serde(default)]
        generators: Vec<String>,
        #[serde(default)]
        x_polynomial: Option<String>,
        #[serde(default)]
        x_factors: Option<Vec<String>>,
        #[serde(default)]
        conjecture: Option<ConjectureCheck>,
    },
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExpectedEntry {
    pub id: String,
    pub script: String,
    pub answer: ExpectedAnswer,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
struct ExpectedFile {
    problems: Vec<ExpectedEntry>,
}

#[derive(Debug, Clone)]
pub struct CorpusProblem {
    pub expected: ExpectedEntry,
    pub script: Script,
}

#[derive(Debug, Clone)]
pub struct Corpus {
    pub problems: Vec<CorpusProblem>,
}

impl Corpus {
    pub fn bundled() -> Result<Self, CorpusError> {
        Self::from_sources(BUNDLED_EXPECTED, &BUNDLED_SCRIPTS)
    }

    /// Builds a corpus from `expected.json` text and `(file name, script)` pairs.
    pub fn from_sources(expected: &str, scripts: &[(&str, &str)]) -> Result<Self, CorpusError> {
        Self::assemble(expected, EXPECTED_FILE, |name| {
            scripts
                .iter()
                .find(|(n, _)| *n == name)
                .map(|(_, s)| s.to_string())
                .ok_or_else(|| CorpusError::Missing(PathBuf::from(name)))
        })
    }

    /// Reads `expected.json` and the scripts it names from `dir`.
    pub fn load_dir(dir: &Path) -> Result<Self, CorpusError> {
        let exp_path = dir.join(EXPECTED_FILE);
        let text = fs::read_to_string(&exp_path).map_err(|_| CorpusError::Missing(exp_path.clone()))?;
        Self::assemble(&text, &exp_path.display().to_string(), |name| {
            let p = dir.join(name);
            fs::read_to_string(&p).map_err(|_| CorpusError::Missing(p))
        })
    }

    fn assemble(
        expected: &str,
        expected_name: &str,
        mut read: impl FnMut(&str) -> Result<String, CorpusError>,
    ) -> Result<Self, CorpusError> {
        let file: ExpectedFile = serde_json::from_str(expected).map_err(|e| CorpusError::Corrupt {
            file: expected_name.to_string(),
            message: e.to_string(),
        })?;
        let mut problems = Vec::new();
        for entry in file.problems {
            let src = read(&entry.script)?;
            let script = parse_script(&src).map_err(|error| CorpusError::Parse {
                file: entry.script.clone(),
                error,
            })?;
            validate_entry(&entry).map_err(|message| CorpusError::Corrupt {
                file: expected_name.to_string(),
                message: format!("problem {}: {message}", entry.id),
            })?;
            problems.push(CorpusProblem {
                expected: entry,
                script,
            });
        }
        problems.sort_by(|a, b| a.expected.id.cmp(&b.expected.id));
        Ok(Self { problems })
    }

    pub fn get(&self, id: &str) -> Option<&CorpusProblem> {
        self.problems.iter().find(|p| p.expected.id == id)
    }
}

/// Checks that every exact field of an entry decodes.
fn validate_entry(e: &ExpectedEntry) -> Result<(), String> {
    match &e.answer {
        ExpectedAnswer::Relation {
            minimal_polynomial,
            ratio,
            square_ratio,
        } => {
            parse_poly(minimal_polynomial, &["m"]).map_err(|e| e.to_string())?;
            AlgebraicNumber::from_record(ratio).map_err(|e| e.to_string())?;
            if let Some(s) = square_ratio {
                parse_poly(s, &[]).map_err(|e| e.to_string())?;
            }
        }
        ExpectedAnswer::Locus {
            generators,
            x_polynomial,
            x_factors,
            ..
        } => {
            for g in generators {
                parse_poly(g, &["x", "y"]).map_err(|e| e.to_string())?;
            }
            for t in x_polynomial.iter().chain(x_factors.iter().flatten()) {
                parse_poly(t, &["x"]).map_err(|e| e.to_string())?;
            }
        }
    }
    Ok(())
}

/// Equality up to a nonzero rational factor.
pub fn same_up_to_scalar(a: &MultiPoly, b: &MultiPoly) -> bool {
    let ord = MonomialOrder::grevlex(a.nvars());
    a.nvars() == b.nvars() && a.primitive(&ord) == b.primitive(&ord)
}

fn parse_in(text: &str, names: &[&str]) -> MultiPoly {
    parse_poly(text, names).expect("validated when the corpus was loaded")
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestRow {
    pub id: String,
    pub expected: String,
    pub got: String,
    pub ok: bool,
    pub millis: f64,
}

/// Compares one run against its expectation; `Err` describes the mismatch.
pub fn check(problem: &CorpusProblem, report: &RunReport) -> Result<String, String> {
    match &problem.expected.answer {
        ExpectedAnswer::Relation {
            minimal_polynomial,
            ratio,
            square_ratio: sq,
        } => {
            let r = report.relations.first().ok_or("no relation result")?;
            let want = AlgebraicNumber::from_record(ratio).expect("validated");
            let got = format!("{} [{}]", r.ratio, report_poly(&r.minimal_polynomial));
            if r.ratio != want {
                return Err(got);
            }
            if !same_up_to_scalar(&r.minimal_polynomial, &parse_in(minimal_polynomial, &["m"])) {
                return Err(got);
            }
            if let Some(sq) = sq {
                let want_sq = parse_in(sq, &[]).constant_term();
                if square_ratio(r).ok() != Some(want_sq) {
                    return Err(format!("{got}, square ratio mismatch"));
                }
            }
            Ok(got)
        }
        ExpectedAnswer::Locus {
            generators,
            x_polynomial,
            x_factors,
            conjecture,
        } => {
            let mut got = Vec::new();
            let mut ok = true;
            for (i, want) in generators.iter().enumerate() {
                let Some(g) = report.loci.get(i).and_then(|l| l.principal_generator()) else {
                    return Err(format!("locus {i} missing"));
                };
                ok &= same_up_to_scalar(g, &parse_in(want, &["x", "y"]));
                got.push(format!("deg {}", g.total_degree()));
            }
            let first = report.loci.first().ok_or("no locus result")?;
            if let Some(want) = x_polynomial {
                match &first.x_polynomial {
                    Some(p) => {
                        ok &= same_up_to_scalar(p, &parse_in(want, &["x"]));
                        got.push(super::report::poly_text(&p.normalized(), "x"));
                    }
                    None => {
                        ok = false;
                        got.push("no x polynomial".into());
                    }
                }
            }
            if let Some(want) = x_factors {
                let mut have: Vec<MultiPoly> = first
                    .x_factors
                    .iter()
                    .flat_map(|f| f.factors.iter().map(|(q, _)| q.normalized()))
                    .collect();
                let mut want: Vec<MultiPoly> =
                    want.iter().map(|t| parse_in(t, &["x"]).normalized()).collect();
                have.sort_by_key(|p| p.canonical_text());
                want.sort_by_key(|p| p.canonical_text());
                ok &= have == want;
                got.push(format!("{} factors", have.len()));
            }
            if let Some(c) = conjecture {
                let traced = match problem.script.queries.first() {
                    Some(Query::Locus(q)) => q.traced.clone(),
                    _ => return Err("conjecture needs a locus query".into()),
                };
                let v = evaluate_conjecture_length(&problem.script.program, &traced, c.point, &c.length)
                    .map_err(|e| e.to_string())?;
                ok &= (v - c.value).abs() <= c.tol;
                got.push(format!("{} = {v:.9}", c.length));
            }
            let got = got.join("; ");
            if ok {
                Ok(got)
            } else {
                Err(got)
            }
        }
    }
}

fn report_poly(p: &MultiPoly) -> String {
    super::report::poly_text(&p.normalized(), "m")
}

fn describe(e: &ExpectedAnswer) -> String {
    match e {
        ExpectedAnswer::Relation { ratio, .. } => match AlgebraicNumber::from_record(ratio) {
            Ok(a) => a.to_string(),
            Err(_) => "?".into(),
        },
        ExpectedAnswer::Locus {
            generators,
            x_polynomial,
            ..
        } => match x_polynomial {
            Some(x) => x.clone(),
            None => format!("{} locus generators", generators.len()),
        },
    }
}

/// Runs every problem, one thread each; rows are sorted by problem id.
pub fn selftest(corpus: &Corpus, opts: &RunOptions) -> Vec<SelftestRow> {
    let mut rows: Vec<SelftestRow> = std::thread::scope(|s| {
        let handles: Vec<_> = corpus
            .problems
            .iter()
            .map(|p| {
                s.spawn(move || {
                    let t = Instant::now();
                    let outcome = run(&p.script, opts)
                        .map_err(|e| e.to_string())
                        .and_then(|r| check(p, &r));
                    let (ok, got) = match outcome {
                        Ok(g) => (true, g),
                        Err(g) => (false, g),
                    };
                    SelftestRow {
                        id: p.expected.id.clone(),
                        expected: describe(&p.expected.answer),
                        got,
                        ok,
                        millis: t.elapsed().as_secs_f64() * 1e3,
                    }
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("selftest worker panicked"))
            .collect()
    });
    rows.sort_by(|a, b| a.id.cmp(&b.id));
    rows
}

pub fn render_table(rows: &[SelftestRow]) -> String {
    let mut out = format!(
        "{:<8} {:<6} {:>10}  {:<40} {}\n",
        "problem", "status", "time_ms", "expected", "got"
    );
    for r in rows {
        out.push_str(&format!(
            "{:<8} {:<6} {:>10.1}  {:<40} {}\n",
            r.id,
            if r.ok { "ok" } else { "FAIL" },
            r.millis,
            r.expected,
            r.got
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_corpus_loads() {
        let c = Corpus::bundled().unwrap();
        let ids: Vec<_> = c.problems.iter().map(|p| p.expected.id.as_str()).collect();
        assert_eq!(ids, ["06", "15", "23", "25", "47", "58"]);
    }

    #[test]
    fn corrupt_expected_file_is_named() {
        let err = Corpus::assemble("{\"problems\": [", "bad.json", |_| Ok(String::new())).unwrap_err();
        assert!(err.to_string().contains("bad.json"), "{err}");
    }

    #[test]
    fn missing_directory_is_a_configuration_error() {
        let err = Corpus::load_dir(Path::new("/nonexistent/corpus")).unwrap_err();
        assert!(matches!(err, CorpusError::Missing(_)));
    }
}
