//! Forward floating-point evaluation of a construction.
//!
//! Branch hints are given in the frame of the free points' hints. When free
//! points are placed elsewhere (pinning, random samples, overrides) every
//! hint is carried along by the similarity mapping the first two free points
//! of the hint frame onto their actual positions.

use std::collections::{BTreeMap, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exactmath::rational::to_f64;

use super::compile::{AlgebraicModel, VarRole};
use super::program::{ConstructionProgram, Label, LinearExpr, Step};
use super::ConstructionError;

pub const DEFAULT_WITNESS_TOL: f64 = 1e-9;
const MAX_ATTEMPTS: u64 = 10;
const EPS: f64 = 1e-12;

type Pt = (f64, f64);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Pinning {
    /// Free points keep their hints (or random positions).
    #[default]
    None,
    /// First free point at (0, 0).
    First,
    /// First free point at (0, 0), second at (1, 0).
    FirstTwo,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WitnessOptions {
    pub seed: u64,
    pub tol: f64,
    pub pinning: Pinning,
    /// Fixed positions for free points or points on lines; such points are
    /// skipped by pinning, as in `CompileOptions::unpinned`.
    pub overrides: Vec<(Label, Pt)>,
}

impl WitnessOptions {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            tol: DEFAULT_WITNESS_TOL,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BranchChoice {
    pub step: Label,
    /// The hint after mapping into the actual frame.
    pub hint: Pt,
    pub chosen: Pt,
    pub rejected: Option<Pt>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Witness {
    pub seed: u64,
    pub attempts: u64,
    pub points: BTreeMap<Label, Pt>,
    pub lengths: BTreeMap<Label, f64>,
    pub numbers: BTreeMap<Label, f64>,
    pub branches: Vec<BranchChoice>,
}

impl Witness {
    pub fn point(&self, l: &str) -> Option<Pt> {
        self.points.get(l).copied()
    }

    pub fn length(&self, l: &str) -> Option<f64> {
        self.lengths.get(l).or_else(|| self.numbers.get(l)).copied()
    }

    pub fn eval_expr(&self, e: &LinearExpr) -> Option<f64> {
        let mut acc = to_f64(&e.constant);
        for (c, l) in &e.terms {
            acc += to_f64(c) * self.length(l)?;
        }
        Some(acc)
    }

    /// Values of the model's variables; query variables are NaN.
    pub fn assignment(&self, model: &AlgebraicModel) -> Vec<f64> {
        model
            .var_roles()
            .iter()
            .map(|r| match r {
                VarRole::Base { point, axis } | VarRole::Implicit { point, axis } => self
                    .point(point)
                    .map(|p| match axis {
                        super::Axis::X => p.0,
                        super::Axis::Y => p.1,
                    })
                    .unwrap_or(f64::NAN),
                VarRole::Length { label } => self.length(label).unwrap_or(f64::NAN),
                VarRole::Query { .. } => f64::NAN,
            })
            .collect()
    }
}

/// Largest absolute constraint value of `model` at the witness.
pub fn max_residual(model: &AlgebraicModel, w: &Witness) -> f64 {
    let a = w.assignment(model);
    model
        .constraints()
        .iter()
        .map(|c| c.poly.eval_f64(&a).abs())
        .fold(0.0, f64::max)
}

/// Witness without pinning: free points at their hints or at seeded random
/// positions.
pub fn numeric_witness(
    program: &ConstructionProgram,
    seed: u64,
    tol: f64,
) -> Result<Witness, ConstructionError> {
    numeric_witness_with(
        program,
        &WitnessOptions {
            seed,
            tol,
            ..WitnessOptions::default()
        },
    )
}

pub fn numeric_witness_with(
    program: &ConstructionProgram,
    opts: &WitnessOptions,
) -> Result<Witness, ConstructionError> {
    let mut last = None;
    for attempt in 0..MAX_ATTEMPTS {
        let seed = opts.seed.wrapping_add(attempt.wrapping_mul(0x9E37_79B9));
        match evaluate(program, opts, seed) {
            Ok(mut w) => {
                w.seed = opts.seed;
                w.attempts = attempt + 1;
                return Ok(w);
            }
            Err(e) => last = Some(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

fn random_coord(rng: &mut ChaCha8Rng) -> f64 {
    let den: i64 = rng.gen_range(1..=100);
    let num: i64 = rng.gen_range(-10 * den..=10 * den);
    num as f64 / den as f64
}

/// Orientation-preserving similarity z ↦ a·(z − h0) + p0 in complex form.
#[derive(Debug, Clone, Copy)]
struct Similarity {
    h0: Pt,
    p0: Pt,
    a: Pt,
}

impl Similarity {
    fn identity() -> Self {
        Self {
            h0: (0.0, 0.0),
            p0: (0.0, 0.0),
            a: (1.0, 0.0),
        }
    }

    fn from_pairs(h: &[Pt], p: &[Pt]) -> Self {
        match (h, p) {
            ([h0, h1, ..], [p0, p1, ..]) => {
                let dh = (h1.0 - h0.0, h1.1 - h0.1);
                let dp = (p1.0 - p0.0, p1.1 - p0.1);
                let n = dh.0 * dh.0 + dh.1 * dh.1;
                if n < EPS {
                    return Self {
                        h0: *h0,
                        p0: *p0,
                        a: (1.0, 0.0),
                    };
                }
                // dp / dh
                let a = ((dp.0 * dh.0 + dp.1 * dh.1) / n, (dp.1 * dh.0 - dp.0 * dh.1) / n);
                Self { h0: *h0, p0: *p0, a }
            }
            ([h0], [p0]) => Self {
                h0: *h0,
                p0: *p0,
                a: (1.0, 0.0),
            },
            _ => Self::identity(),
        }
    }

    fn apply(&self, z: Pt) -> Pt {
        let d = (z.0 - self.h0.0, z.1 - self.h0.1);
        (
            self.a.0 * d.0 - self.a.1 * d.1 + self.p0.0,
            self.a.0 * d.1 + self.a.1 * d.0 + self.p0.1,
        )
    }
}

#[derive(Clone, Copy)]
struct Line {
    p: Pt,
    d: Pt,
}

#[derive(Clone, Copy)]
struct Circle {
    c: Pt,
    r2: f64,
}

fn sub(a: Pt, b: Pt) -> Pt {
    (a.0 - b.0, a.1 - b.1)
}

fn add(a: Pt, b: Pt) -> Pt {
    (a.0 + b.0, a.1 + b.1)
}

fn mul(a: Pt, k: f64) -> Pt {
    (a.0 * k, a.1 * k)
}

fn dot(a: Pt, b: Pt) -> f64 {
    a.0 * b.0 + a.1 * b.1
}

fn cross(a: Pt, b: Pt) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

fn perp(a: Pt) -> Pt {
    (-a.1, a.0)
}

fn dist2(a: Pt, b: Pt) -> f64 {
    let d = sub(a, b);
    dot(d, d)
}

fn project(l: &Line, x: Pt) -> Pt {
    let t = dot(sub(x, l.p), l.d) / dot(l.d, l.d);
    add(l.p, mul(l.d, t))
}

fn reflect(l: &Line, x: Pt) -> Pt {
    let f = project(l, x);
    sub(mul(f, 2.0), x)
}

struct State<'p> {
    step: &'p Label,
    points: HashMap<Label, Pt>,
    lines: HashMap<Label, Line>,
    circles: HashMap<Label, Circle>,
}

impl State<'_> {
    fn degenerate(&self, reason: &str) -> ConstructionError {
        ConstructionError::Degenerate {
            step: self.step.clone(),
            reason: reason.into(),
        }
    }

    fn line(&self, l: &Label) -> Result<Line, ConstructionError> {
        let line = self.lines[l];
        if dot(line.d, line.d) < EPS {
            return Err(self.degenerate(&format!("line {l} is undefined (coincident points)")));
        }
        Ok(line)
    }
}

fn pick(cands: [Pt; 2], hint: Pt) -> (Pt, Pt) {
    if dist2(cands[0], hint) <= dist2(cands[1], hint) {
        (cands[0], cands[1])
    } else {
        (cands[1], cands[0])
    }
}

fn evaluate(
    program: &ConstructionProgram,
    opts: &WitnessOptions,
    seed: u64,
) -> Result<Witness, ConstructionError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let overrides: HashMap<&str, Pt> = opts.overrides.iter().map(|(l, p)| (l.as_str(), *p)).collect();

    // Free point placement in the hint frame and the actual frame.
    let mut hint_frame = Vec::new();
    let mut actual = Vec::new();
    let mut pinned_seen = 0;
    let pin_limit = match opts.pinning {
        Pinning::None => 0,
        Pinning::First => 1,
        Pinning::FirstTwo => 2,
    };
    for (idx, label) in program.free_points().enumerate() {
        let hint = match program.defining_step(label).map(|s| &s.step) {
            Some(Step::FreePoint { hint }) => *hint,
            _ => None,
        };
        let random = (random_coord(&mut rng), random_coord(&mut rng));
        let canonical = match idx {
            0 => Some((0.0, 0.0)),
            1 => Some((1.0, 0.0)),
            _ => None,
        };
        let h = hint.or(canonical).unwrap_or(random);
        let p = if let Some(o) = overrides.get(label.as_str()) {
            *o
        } else if pinned_seen < pin_limit {
            pinned_seen += 1;
            if pinned_seen == 1 {
                (0.0, 0.0)
            } else {
                (1.0, 0.0)
            }
        } else {
            hint.unwrap_or(random)
        };
        hint_frame.push(h);
        actual.push(p);
    }
    let sim = Similarity::from_pairs(&hint_frame, &actual);
    let mut free_iter = actual.into_iter();

    let start = Label::new();
    let mut st = State {
        step: &start,
        points: HashMap::new(),
        lines: HashMap::new(),
        circles: HashMap::new(),
    };
    let mut w = Witness {
        seed,
        attempts: 1,
        points: BTreeMap::new(),
        lengths: BTreeMap::new(),
        numbers: BTreeMap::new(),
        branches: Vec::new(),
    };
    for entry in program.steps() {
        let l = entry.label();
        st.step = l;
        let hint = entry.step.hint().map(|h| sim.apply(h));
        let branch = |w: &mut Witness, chosen: Pt, rejected: Option<Pt>| {
            w.branches.push(BranchChoice {
                step: l.clone(),
                hint: hint.expect("branching steps carry hints"),
                chosen,
                rejected,
            });
        };
        let pt = |st: &State, r: &Label| st.points[r];
        let value: Option<Pt> = match &entry.step {
            Step::FreePoint { .. } => Some(free_iter.next().expect("free point placed")),
            Step::PointOnLine { line, .. } => {
                let ln = st.line(line)?;
                let target = match overrides.get(l.as_str()) {
                    Some(o) => *o,
                    None => match hint {
                        Some(h) => h,
                        None => {
                            let t = random_coord(&mut rng);
                            add(ln.p, mul(ln.d, t))
                        }
                    },
                };
                Some(project(&ln, target))
            }
            Step::Midpoint { a, b } => Some(mul(add(pt(&st, a), pt(&st, b)), 0.5)),
            Step::ReflectPoint { point, center } => Some(sub(mul(pt(&st, center), 2.0), pt(&st, point))),
            Step::ReflectAboutLine { point, line } => {
                let ln = st.line(line)?;
                Some(reflect(&ln, pt(&st, point)))
            }
            Step::Dilate {
                point,
                factor,
                center,
            } => {
                let c = pt(&st, center);
                Some(add(c, mul(sub(pt(&st, point), c), to_f64(factor))))
            }
            Step::Square { a, b } => {
                let (pa, pb) = (pt(&st, a), pt(&st, b));
                let u = perp(sub(pb, pa));
                let c = add(pb, u);
                let d = add(pa, u);
                for (o, v) in entry.outputs.iter().zip([c, d]) {
                    st.points.insert(o.clone(), v);
                    w.points.insert(o.clone(), v);
                }
                None
            }
            Step::LineTwoPoints { a, b } | Step::SegmentLength { a, b } => {
                let (pa, pb) = (pt(&st, a), pt(&st, b));
                st.lines.insert(
                    l.clone(),
                    Line {
                        p: pa,
                        d: sub(pb, pa),
                    },
                );
                if matches!(entry.step, Step::SegmentLength { .. }) {
                    w.lengths.insert(l.clone(), dist2(pa, pb).sqrt());
                }
                None
            }
            Step::PerpendicularBisector { a, b } => {
                let (pa, pb) = (pt(&st, a), pt(&st, b));
                st.lines.insert(
                    l.clone(),
                    Line {
                        p: mul(add(pa, pb), 0.5),
                        d: perp(sub(pb, pa)),
                    },
                );
                None
            }
            Step::PerpendicularThrough { point, line } => {
                let ln = st.lines[line];
                st.lines.insert(
                    l.clone(),
                    Line {
                        p: pt(&st, point),
                        d: perp(ln.d),
                    },
                );
                None
            }
            Step::CircleCenterThrough { center, through } => {
                let c = pt(&st, center);
                st.circles.insert(
                    l.clone(),
                    Circle {
                        c,
                        r2: dist2(pt(&st, through), c),
                    },
                );
                None
            }
            Step::IntersectLineLine { a, b, .. } => {
                let (la, lb) = (st.line(a)?, st.line(b)?);
                let den = cross(la.d, lb.d);
                let scale = dot(la.d, la.d).sqrt() * dot(lb.d, lb.d).sqrt();
                if den.abs() < EPS * scale.max(1.0) {
                    return Err(st.degenerate("parallel lines"));
                }
                let t = cross(sub(lb.p, la.p), lb.d) / den;
                Some(add(la.p, mul(la.d, t)))
            }
            Step::IntersectLineCircle { line, circle, .. } => {
                let (ln, c) = (st.line(line)?, st.circles[circle]);
                let f = project(&ln, c.c);
                let h2 = c.r2 - dist2(f, c.c);
                if h2 < -opts.tol * c.r2.max(1.0) {
                    return Err(st.degenerate("line misses circle"));
                }
                if let Some(k) = program.chord_anchor(line, circle) {
                    // Mirror the known end of the chord through the foot.
                    let k = pt(&st, k);
                    Some(sub(mul(f, 2.0), k))
                } else {
                    let off = mul(ln.d, (h2.max(0.0) / dot(ln.d, ln.d)).sqrt());
                    let (x, y) = pick([add(f, off), sub(f, off)], hint.unwrap());
                    branch(&mut w, x, Some(y));
                    Some(x)
                }
            }
            Step::IntersectCircleCircle { a, b, .. } => {
                let (ca, cb) = (st.circles[a], st.circles[b]);
                let d = sub(cb.c, ca.c);
                let dd = dot(d, d);
                if dd < EPS {
                    return Err(st.degenerate("concentric circles"));
                }
                let t = (dd + ca.r2 - cb.r2) / (2.0 * dd);
                let f = add(ca.c, mul(d, t));
                let h2 = ca.r2 - t * t * dd;
                if h2 < -opts.tol * ca.r2.max(1.0) {
                    return Err(st.degenerate("circles do not meet"));
                }
                let off = mul(perp(d), (h2.max(0.0) / dd).sqrt());
                let (x, y) = pick([add(f, off), sub(f, off)], hint.unwrap());
                branch(&mut w, x, Some(y));
                Some(x)
            }
            Step::EquilateralVertex { a, b, .. } => {
                let (pa, pb) = (pt(&st, a), pt(&st, b));
                if dist2(pa, pb) < EPS {
                    return Err(st.degenerate("coincident base points"));
                }
                let m = mul(add(pa, pb), 0.5);
                let off = mul(perp(sub(pb, pa)), 3f64.sqrt() / 2.0);
                let (x, y) = pick([add(m, off), sub(m, off)], hint.unwrap());
                branch(&mut w, x, Some(y));
                Some(x)
            }
            Step::NumExpr(e) => {
                let v = w.eval_expr(e).expect("validated labels");
                w.numbers.insert(l.clone(), v);
                None
            }
        };
        if let Some(v) = value {
            if !(v.0.is_finite() && v.1.is_finite()) {
                return Err(st.degenerate("non-finite coordinates"));
            }
            st.points.insert(l.clone(), v);
            w.points.insert(l.clone(), v);
        }
    }
    Ok(w)
}
