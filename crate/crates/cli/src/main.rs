//! `geodeduce` command line: solve scripts, sample loci, run the corpus.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use geodeduce::dsl::corpus::{render_table, selftest, Corpus, CorpusError};
use geodeduce::dsl::report::points_csv;
use geodeduce::dsl::{parse_number, parse_script, run, QueryReport, RunError, RunOptions, RunReport, Script};
use geodeduce::exactmath::GroebnerConfig;
use geodeduce::locus::intersect_loci_numeric;
use geodeduce::prover::DEFAULT_MATCH_TOL;

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_RESOURCE: u8 = 3;

type Region = (f64, f64, f64, f64);

#[derive(Parser)]
#[command(
    name = "geodeduce",
    version,
    about = "Exact ratios and locus equations from construction scripts"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct EngineArgs {
    /// Construct the second free point at (1, 0) as well as the first at (0, 0).
    #[arg(long)]
    no_pin_second: bool,
    /// Maximum number of S-pair reductions before giving up.
    #[arg(long)]
    budget: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Answer every query of a script.
    Solve {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Print the JSON run report instead of text.
        #[arg(long)]
        json: bool,
        /// Relative tolerance when matching the witness ratio to a root.
        #[arg(long, default_value_t = DEFAULT_MATCH_TOL)]
        tol: f64,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Compute locus equations and write sample points as CSV.
    Locus {
        file: PathBuf,
        #[arg(long, value_name = "OUT.csv")]
        emit_points: PathBuf,
        /// Sampling window x0,y0,x1,y1.
        #[arg(long, value_parser = parse_region, allow_hyphen_values = true)]
        region: Option<Region>,
        #[command(flatten)]
        engine: EngineArgs,
    },
    /// Run the bundled corpus (or the one in DIR) against its expected answers.
    Selftest {
        #[arg(long, value_name = "DIR")]
        corpus: Option<PathBuf>,
    },
}

fn parse_region(s: &str) -> Result<Region, String> {
    let v: Vec<f64> = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<_, _>>()?;
    match v[..] {
        [x0, y0, x1, y1] if x0 < x1 && y0 < y1 && v.iter().all(|c| c.is_finite()) => Ok((x0, y0, x1, y1)),
        [_, _, _, _] => Err("region needs x0 < x1 and y0 < y1".into()),
        _ => Err("region is x0,y0,x1,y1".into()),
    }
}

fn load(path: &Path) -> Result<Script, ExitCode> {
    let text = fs::read_to_string(path).map_err(|e| {
        eprintln!("error: cannot read {}: {e}", path.display());
        ExitCode::from(EXIT_INPUT)
    })?;
    parse_script(&text).map_err(|e| {
        eprintln!("{}:{e}", path.display());
        if !e.expected.is_empty() {
            eprintln!("  expected one of: {}", e.expected.join(", "));
        }
        ExitCode::from(EXIT_INPUT)
    })
}

fn options(engine: &EngineArgs) -> RunOptions {
    let mut o = RunOptions {
        pin_second: !engine.no_pin_second,
        ..RunOptions::default()
    };
    if let Some(b) = engine.budget {
        o.groebner = GroebnerConfig { pair_budget: b };
    }
    o
}

fn execute(script: &Script, opts: &RunOptions) -> Result<RunReport, ExitCode> {
    run(script, opts).map_err(|e: RunError| {
        eprintln!("error: {e}");
        ExitCode::from(if e.is_resource() {
            EXIT_RESOURCE
        } else {
            EXIT_MISMATCH
        })
    })
}

/// `#! expect <number>` compares the first relation's ratio.
fn check_expectation(script: &Script, report: &RunReport) -> Result<(), ExitCode> {
    let Some((_, text)) = script.metadata.pragmas.iter().find(|(k, _)| k == "expect") else {
        return Ok(());
    };
    let want = parse_number(text).map_err(|e| {
        eprintln!("error: bad expect pragma: {e}");
        ExitCode::from(EXIT_INPUT)
    })?;
    match report.relations.first() {
        Some(r) if r.ratio == want => Ok(()),
        Some(r) => {
            eprintln!("mismatch: expected {want}, got {}", r.ratio);
            Err(ExitCode::from(EXIT_MISMATCH))
        }
        None => {
            eprintln!("mismatch: expected {want}, but the script has no relation query");
            Err(ExitCode::from(EXIT_MISMATCH))
        }
    }
}

fn solve(file: &Path, seed: u64, json: bool, tol: f64, engine: &EngineArgs) -> Result<(), ExitCode> {
    let script = load(file)?;
    let opts = RunOptions {
        seed,
        match_tol: tol,
        ..options(engine)
    };
    let report = execute(&script, &opts)?;
    if json {
        println!("{}", report.to_json());
    } else {
        print!("{}", report.to_text());
    }
    check_expectation(&script, &report)
}

fn inside(r: &Region, x: f64, y: f64) -> bool {
    x >= r.0 && x <= r.2 && y >= r.1 && y <= r.3
}

fn locus(file: &Path, out: &Path, region: Option<Region>, engine: &EngineArgs) -> Result<(), ExitCode> {
    let script = load(file)?;
    let opts = RunOptions {
        region,
        ..options(engine)
    };
    let report = execute(&script, &opts)?;
    let mut rows = Vec::new();
    for (i, r) in report.results.iter().enumerate() {
        if let QueryReport::Locus(l) = r {
            for [x, y] in &l.samples {
                if region.is_none_or(|g| inside(&g, *x, *y)) {
                    rows.push((i, *x, *y));
                }
            }
        }
    }
    if let Err(e) = fs::write(out, points_csv(&rows)) {
        eprintln!("error: cannot write {}: {e}", out.display());
        return Err(ExitCode::from(EXIT_INPUT));
    }
    print!("{}", report.to_text());
    println!("{} sample points written to {}", rows.len(), out.display());
    if let [a, b, ..] = &report.loci[..] {
        let window = region.unwrap_or(geodeduce::locus::LocusOptions::default().region);
        match intersect_loci_numeric(a, b, window, 1e-9) {
            Ok(points) => {
                for (x, y) in points {
                    println!("intersection of the first two loci: ({x:.12}, {y:.12})");
                }
            }
            Err(e) => println!("intersection of the first two loci: {e}"),
        }
    }
    Ok(())
}

fn run_selftest(dir: Option<&Path>) -> Result<(), ExitCode> {
    let corpus = match dir {
        Some(d) => Corpus::load_dir(d),
        None => Corpus::bundled(),
    }
    .map_err(|e: CorpusError| {
        eprintln!("{e}");
        ExitCode::from(EXIT_INPUT)
    })?;
    let rows = selftest(&corpus, &RunOptions::default());
    print!("{}", render_table(&rows));
    let failed = rows.iter().filter(|r| !r.ok).count();
    if failed > 0 {
        eprintln!("{failed} of {} problems failed", rows.len());
        return Err(ExitCode::from(EXIT_MISMATCH));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Solve {
            file,
            seed,
            json,
            tol,
            engine,
        } => solve(file, *seed, *json, *tol, engine),
        Command::Locus {
            file,
            emit_points,
            region,
            engine,
        } => locus(file, emit_points, *region, engine),
        Command::Selftest { corpus } => run_selftest(corpus.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
