//! Implicit locus equations of a traced point.

use serde::Serialize;
use thiserror::Error;

use crate::construction::{
    compile_with, numeric_witness_with, AlgebraicModel, CompileOptions, ConstructionError,
    ConstructionProgram, Label, LinearExpr, Pinning, Witness, WitnessOptions, DEFAULT_WITNESS_TOL,
};
use crate::exactmath::rational::{from_f64_bounded, to_f64};
use crate::exactmath::{
    eliminate_with, factor_univariate, fold_linear, real_roots_numeric, squarefree_part, AlgebraicNumber,
    ExactError, Factorization, GroebnerConfig, GroebnerStats, MonomialOrder, MultiPoly, Rational,
};

pub const DEFAULT_SAMPLE_TOL: f64 = 1e-6;
pub const GRID_SEEDS: usize = 64;
pub const NEWTON_MAX_ITER: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub enum LocusCondition {
    Collinear(Label, Label, Label),
    /// `a / b = target`; `target` must square to a rational.
    RatioEq {
        a: Label,
        b: Label,
        target: AlgebraicNumber,
    },
    LengthEq(Label, Label),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DimensionHint {
    Curve,
    IsolatedPoints,
    Empty,
    FullPlane,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocusResult {
    pub traced: Label,
    pub condition: LocusCondition,
    /// Generators of the elimination ideal in `(x, y)`, two-variable ring.
    pub generators: Vec<MultiPoly>,
    /// Square-free generator of the ideal restricted to `x` (one variable).
    pub x_polynomial: Option<MultiPoly>,
    pub y_polynomial: Option<MultiPoly>,
    pub x_factors: Option<Factorization>,
    pub y_factors: Option<Factorization>,
    pub dimension: DimensionHint,
    pub samples: Vec<(f64, f64)>,
    /// Samples discarded because the unsquared condition fails there.
    pub rejected_samples: usize,
    pub stats: GroebnerStats,
}

impl LocusResult {
    pub fn generator_texts(&self) -> Vec<String> {
        let names = ["x".to_string(), "y".to_string()];
        self.generators
            .iter()
            .map(|g| g.to_text(&names, &MonomialOrder::grevlex(2)))
            .collect()
    }

    /// The generator used for curve intersection: the lowest-degree
    /// generator involving both coordinates, else the first one.
    pub fn principal_generator(&self) -> Option<&MultiPoly> {
        self.generators
            .iter()
            .filter(|g| g.uses_var(0) && g.uses_var(1))
            .min_by_key(|g| g.total_degree())
            .or_else(|| self.generators.first())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LocusError {
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error(transparent)]
    Exact(#[from] ExactError),
    #[error("{0} is not a free point or a point on a line")]
    NotTraceable(Label),
    #[error("ratio target {0} does not square to a rational")]
    IrrationalSquare(String),
    #[error("no isolated intersection found")]
    NoIsolatedIntersection,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocusOptions {
    pub pin_second: bool,
    pub groebner: GroebnerConfig,
    /// Sampling window for curves: (x0, y0, x1, y1).
    pub region: (f64, f64, f64, f64),
    /// Number of x abscissae sampled across a curve.
    pub curve_columns: usize,
    pub tol: f64,
}

impl Default for LocusOptions {
    fn default() -> Self {
        Self {
            pin_second: true,
            groebner: GroebnerConfig::default(),
            region: (-2.0, -2.0, 3.0, 3.0),
            curve_columns: 101,
            tol: DEFAULT_SAMPLE_TOL,
        }
    }
}

/// Condition as a single polynomial over Q; surd ratios are squared.
pub fn condition_polynomial(model: &AlgebraicModel, cond: &LocusCondition) -> Result<MultiPoly, LocusError> {
    match cond {
        LocusCondition::Collinear(a, b, c) => model.collinear(a, b, c).ok_or_else(|| {
            LocusError::Construction(ConstructionError::UndefinedLabel {
                step: "locus condition".into(),
                label: format!("{a}, {b} or {c}"),
            })
        }),
        LocusCondition::RatioEq { a, b, target } => {
            let t2 = target
                .square_if_rational()
                .ok_or_else(|| LocusError::IrrationalSquare(target.to_string()))?;
            let num = Rational::from_integer(t2.numer().clone());
            let den = Rational::from_integer(t2.denom().clone());
            let sa = model.length_square(&LinearExpr::label(a.clone()))?;
            let sb = model.length_square(&LinearExpr::label(b.clone()))?;
            Ok(&sa.scale(&den) - &sb.scale(&num))
        }
        LocusCondition::LengthEq(a, b) => {
            let sa = model.length_square(&LinearExpr::label(a.clone()))?;
            let sb = model.length_square(&LinearExpr::label(b.clone()))?;
            Ok(&sa - &sb)
        }
    }
}

/// Unsquared condition at a witness; `None` when it cannot be evaluated.
fn condition_holds(cond: &LocusCondition, w: &Witness, tol: f64) -> Option<bool> {
    match cond {
        LocusCondition::Collinear(a, b, c) => {
            let (pa, pb, pc) = (w.point(a)?, w.point(b)?, w.point(c)?);
            let u = (pb.0 - pa.0, pb.1 - pa.1);
            let v = (pc.0 - pa.0, pc.1 - pa.1);
            let scale = (u.0.hypot(u.1) * v.0.hypot(v.1)).max(1.0);
            Some((u.0 * v.1 - u.1 * v.0).abs() <= tol * scale)
        }
        LocusCondition::RatioEq { a, b, target } => {
            let (la, lb) = (w.length(a)?, w.length(b)?);
            let t = target.to_f64();
            Some((la - t * lb).abs() <= tol * la.abs().max(lb.abs()).max(1.0))
        }
        LocusCondition::LengthEq(a, b) => {
            let (la, lb) = (w.length(a)?, w.length(b)?);
            Some((la - lb).abs() <= tol * la.abs().max(1.0))
        }
    }
}

/// Drops length constraints whose symbol occurs nowhere else.
fn prune_lengths(model: &AlgebraicModel, system: Vec<MultiPoly>) -> Vec<MultiPoly> {
    let mut system = system;
    for l in model.var_roles().iter().filter_map(|r| match r {
        crate::construction::VarRole::Length { label } => Some(label),
        _ => None,
    }) {
        let v = model.length_var(l).expect("length variable");
        let users: Vec<usize> = (0..system.len()).filter(|&i| system[i].uses_var(v)).collect();
        if users.len() == 1 {
            system.remove(users[0]);
        }
    }
    system
}

fn normalized_abs(g: &MultiPoly, p: &[f64]) -> f64 {
    let scale = to_f64(&g.max_abs_coefficient());
    if scale == 0.0 {
        return 0.0;
    }
    (g.eval_f64(p) / scale).abs()
}

/// System, traced point's `(x, y)` variables, ring size.
pub type LocusSystem = (Vec<MultiPoly>, (usize, usize), usize);

/// Constraints plus the condition polynomial, with unused length symbols
/// dropped; also returns the traced point's variables and the ring size.
pub fn locus_system(
    program: &ConstructionProgram,
    condition: &LocusCondition,
    traced: &str,
    pin_second: bool,
) -> Result<LocusSystem, LocusError> {
    if !program.is_traceable(traced) {
        return Err(LocusError::NotTraceable(traced.to_string()));
    }
    let unpinned = vec![traced.to_string()];
    let model = compile_with(
        program,
        &CompileOptions {
            pin_second,
            unpinned: &unpinned,
        },
    )?;
    let vars = model
        .coordinate_vars(traced)
        .ok_or_else(|| LocusError::NotTraceable(traced.to_string()))?;
    let mut system = model.constraint_polys();
    system.push(condition_polynomial(&model, condition)?);
    let system = prune_lengths(&model, system)
        .into_iter()
        .filter(|p| !p.is_zero())
        .collect();
    Ok((system, vars, model.nvars()))
}

pub fn locus_equation(
    program: &ConstructionProgram,
    condition: &LocusCondition,
    traced: &str,
) -> Result<LocusResult, LocusError> {
    locus_equation_with(program, condition, traced, &LocusOptions::default())
}

pub fn locus_equation_with(
    program: &ConstructionProgram,
    condition: &LocusCondition,
    traced: &str,
    opts: &LocusOptions,
) -> Result<LocusResult, LocusError> {
    let (system, (xv, yv), nvars) = locus_system(program, condition, traced, opts.pin_second)?;
    let keep = [xv, yv];
    let folded = fold_linear(&system, &keep);
    let (gens, stats) = if folded.system().is_empty() {
        (Vec::new(), GroebnerStats::default())
    } else {
        eliminate_with(&folded.system(), &keep, &opts.groebner)?
    };
    let mut mapping = vec![None; nvars];
    mapping[xv] = Some(0);
    mapping[yv] = Some(1);
    let generators: Vec<MultiPoly> = gens
        .iter()
        .map(|g| g.remap(2, &mapping))
        .collect::<Result<_, _>>()?;

    let mut result = LocusResult {
        traced: traced.to_string(),
        condition: condition.clone(),
        generators: generators.clone(),
        x_polynomial: None,
        y_polynomial: None,
        x_factors: None,
        y_factors: None,
        dimension: DimensionHint::FullPlane,
        samples: Vec::new(),
        rejected_samples: 0,
        stats,
    };
    if generators.is_empty() {
        return Ok(result);
    }
    if generators.iter().any(|g| g.is_constant()) {
        result.dimension = DimensionHint::Empty;
        return Ok(result);
    }
    for (axis, keep_var) in [(0usize, 0usize), (1, 1)] {
        let (uni, _) = eliminate_with(&generators, &[keep_var], &opts.groebner)?;
        if let Some(u) = uni.iter().find(|g| g.uses_var(keep_var)) {
            let poly = squarefree_part(&u.to_univariate(keep_var).expect("one coordinate"))?;
            let fac = factor_univariate(&poly)?;
            if axis == 0 {
                result.x_polynomial = Some(poly);
                result.x_factors = Some(fac);
            } else {
                result.y_polynomial = Some(poly);
                result.y_factors = Some(fac);
            }
        }
    }
    result.dimension = if result.x_polynomial.is_some() && result.y_polynomial.is_some() {
        DimensionHint::IsolatedPoints
    } else {
        DimensionHint::Curve
    };

    let raw = match result.dimension {
        DimensionHint::IsolatedPoints => isolated_samples(&result, opts.tol)?,
        _ => curve_samples(&result, opts)?,
    };
    let tol = opts.tol;
    for p in raw {
        let keep = match conjecture_witness(program, traced, p, opts.pin_second) {
            Ok(w) => condition_holds(condition, &w, tol.sqrt()).unwrap_or(true),
            Err(_) => true,
        };
        if keep {
            result.samples.push(p);
        } else {
            result.rejected_samples += 1;
        }
    }
    Ok(result)
}

fn on_all(generators: &[MultiPoly], p: (f64, f64), tol: f64) -> bool {
    generators.iter().all(|g| normalized_abs(g, &[p.0, p.1]) <= tol)
}

fn isolated_samples(r: &LocusResult, tol: f64) -> Result<Vec<(f64, f64)>, LocusError> {
    let xs = real_roots_numeric(r.x_polynomial.as_ref().unwrap(), 1e-15)?;
    let ys = real_roots_numeric(r.y_polynomial.as_ref().unwrap(), 1e-15)?;
    let mut out = Vec::new();
    for &x in &xs {
        for &y in &ys {
            if on_all(&r.generators, (x, y), tol) {
                out.push((x, y));
            }
        }
    }
    Ok(out)
}

/// Samples along vertical lines (solving for y) and horizontal lines
/// (solving for x) across the region.
fn curve_samples(r: &LocusResult, opts: &LocusOptions) -> Result<Vec<(f64, f64)>, LocusError> {
    let Some(g) = r.principal_generator() else {
        return Ok(Vec::new());
    };
    let (x0, y0, x1, y1) = opts.region;
    let lines = opts.curve_columns.max(2);
    let mut out: Vec<(f64, f64)> = Vec::new();
    for axis in [0usize, 1] {
        let other = 1 - axis;
        if !g.uses_var(other) {
            continue;
        }
        let (lo, hi) = if axis == 0 { (x0, x1) } else { (y0, y1) };
        let (olo, ohi) = if axis == 0 { (y0, y1) } else { (x0, x1) };
        for i in 0..lines {
            let t = from_f64_bounded(lo + (hi - lo) * i as f64 / (lines - 1) as f64, 1_000_000);
            let tf = to_f64(&t);
            let slice = g.substitute(axis, &MultiPoly::constant(2, t));
            let Some(uni) = slice.to_univariate(other) else {
                continue;
            };
            if uni.is_zero() || uni.is_constant() {
                continue;
            }
            for u in real_roots_numeric(&squarefree_part(&uni)?, 1e-12)? {
                let p = if axis == 0 { (tf, u) } else { (u, tf) };
                if u >= olo
                    && u <= ohi
                    && on_all(&r.generators, p, opts.tol)
                    && !out.iter().any(|q| (q.0 - p.0).hypot(q.1 - p.1) < 1e-9)
                {
                    out.push(p);
                }
            }
        }
    }
    Ok(out)
}

/// Forward evaluation with the traced point fixed at `point`, in the pinned
/// frame used by [`locus_equation`].
pub fn conjecture_witness(
    program: &ConstructionProgram,
    traced: &str,
    point: (f64, f64),
    pin_second: bool,
) -> Result<Witness, ConstructionError> {
    numeric_witness_with(
        program,
        &WitnessOptions {
            seed: 0,
            tol: DEFAULT_WITNESS_TOL,
            pinning: if pin_second {
                Pinning::FirstTwo
            } else {
                Pinning::First
            },
            overrides: vec![(traced.to_string(), point)],
        },
    )
}

/// A length of the construction with the traced point at `point`.
pub fn evaluate_conjecture_length(
    program: &ConstructionProgram,
    traced: &str,
    point: (f64, f64),
    length: &str,
) -> Result<f64, LocusError> {
    let w = conjecture_witness(program, traced, point, true)?;
    w.length(length).ok_or_else(|| {
        LocusError::Construction(ConstructionError::UndefinedLabel {
            step: "conjecture".into(),
            label: length.to_string(),
        })
    })
}

/// Common zeros of the principal generators of two loci inside `region`
/// (x0, y0, x1, y1), by grid-seeded Newton iteration.
pub fn intersect_loci_numeric(
    a: &LocusResult,
    b: &LocusResult,
    region: (f64, f64, f64, f64),
    tol: f64,
) -> Result<Vec<(f64, f64)>, LocusError> {
    let (Some(f), Some(g)) = (a.principal_generator(), b.principal_generator()) else {
        return Err(LocusError::NoIsolatedIntersection);
    };
    intersect_curves(f, g, region, tol)
}

/// Newton intersection of two plane curves given by two-variable polynomials.
pub fn intersect_curves(
    f: &MultiPoly,
    g: &MultiPoly,
    region: (f64, f64, f64, f64),
    tol: f64,
) -> Result<Vec<(f64, f64)>, LocusError> {
    let (fx, fy, gx, gy) = (f.derivative(0), f.derivative(1), g.derivative(0), g.derivative(1));
    let (x0, y0, x1, y1) = region;
    let slack_x = (x1 - x0) * 1e-9;
    let slack_y = (y1 - y0) * 1e-9;
    let mut found: Vec<(f64, f64)> = Vec::new();
    let mut any_regular = false;
    for i in 0..GRID_SEEDS {
        for j in 0..GRID_SEEDS {
            let mut p = [
                x0 + (x1 - x0) * (i as f64 + 0.5) / GRID_SEEDS as f64,
                y0 + (y1 - y0) * (j as f64 + 0.5) / GRID_SEEDS as f64,
            ];
            let mut converged = false;
            for _ in 0..NEWTON_MAX_ITER {
                let (a, b, c, d) = (fx.eval_f64(&p), fy.eval_f64(&p), gx.eval_f64(&p), gy.eval_f64(&p));
                let det = a * d - b * c;
                if !det.is_finite() || det.abs() < 1e-300 {
                    break;
                }
                any_regular = true;
                let (u, v) = (f.eval_f64(&p), g.eval_f64(&p));
                let dx = (d * u - b * v) / det;
                let dy = (a * v - c * u) / det;
                p[0] -= dx;
                p[1] -= dy;
                if !(p[0].is_finite() && p[1].is_finite()) {
                    break;
                }
                if dx.hypot(dy) < tol * 1e-3 {
                    converged = true;
                    break;
                }
            }
            let inside =
                p[0] >= x0 - slack_x && p[0] <= x1 + slack_x && p[1] >= y0 - slack_y && p[1] <= y1 + slack_y;
            if converged
                && inside
                && normalized_abs(f, &p) <= tol
                && normalized_abs(g, &p) <= tol
                && !found.iter().any(|q| (q.0 - p[0]).hypot(q.1 - p[1]) <= 10.0 * tol)
            {
                found.push((p[0], p[1]));
            }
        }
    }
    if !any_regular {
        return Err(LocusError::NoIsolatedIntersection);
    }
    found.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    Ok(found)
}
