//! Compilation of a construction program into a polynomial system.

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::exactmath::{MultiPoly, Rational};

use super::program::{ConstructionProgram, Label, LinearExpr, Step};
use super::ConstructionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum VarRole {
    /// Coordinate of a free (or semi-free) point.
    Base { point: Label, axis: Axis },
    /// Coordinate of a point determined only implicitly by constraints.
    Implicit { point: Label, axis: Axis },
    /// Non-negative length symbol of a segment.
    Length { label: Label },
    /// Extra symbol adjoined by a query (e.g. the unknown ratio).
    Query { name: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub poly: MultiPoly,
    /// Label of the step that produced the constraint.
    pub step: Label,
    pub meaning: &'static str,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PinnedPoint {
    pub label: Label,
    pub x: Rational,
    pub y: Rational,
}

pub type Coords = (MultiPoly, MultiPoly);

#[derive(Debug, Clone, PartialEq)]
struct LinePolys {
    through: Coords,
    direction: Coords,
}

#[derive(Debug, Clone, PartialEq)]
struct CirclePolys {
    center: Coords,
    radius_sq: MultiPoly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CompileOptions<'a> {
    /// Pin the second free point to (1, 0) in addition to the first at (0, 0).
    pub pin_second: bool,
    /// Free points that must keep symbolic coordinates (e.g. a traced point).
    pub unpinned: &'a [Label],
}

impl Default for CompileOptions<'_> {
    fn default() -> Self {
        Self {
            pin_second: true,
            unpinned: &[],
        }
    }
}

/// The compiled polynomial system of a construction.
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraicModel {
    names: Vec<String>,
    roles: Vec<VarRole>,
    point_order: Vec<Label>,
    points: HashMap<Label, Coords>,
    explicit: Vec<Label>,
    lines: HashMap<Label, LinePolys>,
    circles: HashMap<Label, CirclePolys>,
    lengths: HashMap<Label, usize>,
    segments: HashMap<Label, (Label, Label)>,
    numbers: HashMap<Label, LinearExpr>,
    constraints: Vec<Constraint>,
    pinned: Vec<PinnedPoint>,
}

impl AlgebraicModel {
    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn var_names(&self) -> &[String] {
        &self.names
    }

    pub fn var_roles(&self) -> &[VarRole] {
        &self.roles
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn constraint_polys(&self) -> Vec<MultiPoly> {
        self.constraints.iter().map(|c| c.poly.clone()).collect()
    }

    pub fn pinned(&self) -> &[PinnedPoint] {
        &self.pinned
    }

    pub fn point(&self, label: &str) -> Option<&Coords> {
        self.points.get(label)
    }

    /// Points in construction order.
    pub fn point_labels(&self) -> &[Label] {
        &self.point_order
    }

    /// Points given by explicit (affine) coordinate expressions.
    pub fn explicit_points(&self) -> &[Label] {
        &self.explicit
    }

    pub fn length_var(&self, label: &str) -> Option<usize> {
        self.lengths.get(label).copied()
    }

    /// Variable indices holding the coordinates of `label`, when they are
    /// plain variables.
    pub fn coordinate_vars(&self, label: &str) -> Option<(usize, usize)> {
        let (x, y) = self.points.get(label)?;
        Some((single_var(x)?, single_var(y)?))
    }

    pub fn implicit_vars(&self) -> Vec<usize> {
        self.roles
            .iter()
            .enumerate()
            .filter(|(_, r)| matches!(r, VarRole::Implicit { .. }))
            .map(|(i, _)| i)
            .collect()
    }

    /// Squared distance between two points as a polynomial.
    pub fn squared_distance(&self, a: &str, b: &str) -> Option<MultiPoly> {
        let pa = self.points.get(a)?;
        let pb = self.points.get(b)?;
        Some(sq_dist(pa, pb))
    }

    /// A length expression as a polynomial in the length symbols.
    pub fn length_poly(&self, e: &LinearExpr) -> Result<MultiPoly, ConstructionError> {
        let n = self.nvars();
        let mut acc = MultiPoly::constant(n, e.constant.clone());
        for (c, l) in &e.terms {
            let p = self.length_label_poly(l)?;
            acc = &acc + &p.scale(c);
        }
        Ok(acc)
    }

    fn length_label_poly(&self, l: &str) -> Result<MultiPoly, ConstructionError> {
        if let Some(&v) = self.lengths.get(l) {
            return Ok(MultiPoly::var(self.nvars(), v));
        }
        if let Some(e) = self.numbers.get(l) {
            return self.length_poly(e);
        }
        Err(ConstructionError::UndefinedLabel {
            step: "length expression".into(),
            label: l.to_string(),
        })
    }

    /// The square of a length expression. A single scaled segment is
    /// expressed directly through coordinates; anything else goes through
    /// the length symbols.
    pub fn length_square(&self, e: &LinearExpr) -> Result<MultiPoly, ConstructionError> {
        let flat = self.flatten(e)?;
        if flat.constant.is_zero() && flat.terms.len() == 1 {
            let (c, l) = &flat.terms[0];
            if let Some((a, b)) = self.segments.get(l) {
                let d = self.squared_distance(a, b).expect("segment ends are points");
                return Ok(d.scale(&(c * c)));
            }
        }
        let p = self.length_poly(e)?;
        Ok(&p * &p)
    }

    /// Expands number labels so only segment labels remain.
    pub fn flatten(&self, e: &LinearExpr) -> Result<LinearExpr, ConstructionError> {
        let mut out: Vec<(Rational, Label)> = Vec::new();
        let mut constant = e.constant.clone();
        for (c, l) in &e.terms {
            if self.segments.contains_key(l) {
                match out.iter_mut().find(|(_, m)| m == l) {
                    Some(t) => t.0 += c,
                    None => out.push((c.clone(), l.clone())),
                }
            } else if let Some(inner) = self.numbers.get(l) {
                let f = self.flatten(inner)?;
                constant += c * &f.constant;
                for (ci, li) in f.terms {
                    match out.iter_mut().find(|(_, m)| *m == li) {
                        Some(t) => t.0 += c * ci,
                        None => out.push((c * ci, li)),
                    }
                }
            } else {
                return Err(ConstructionError::UndefinedLabel {
                    step: "length expression".into(),
                    label: l.clone(),
                });
            }
        }
        out.retain(|(c, _)| !c.is_zero());
        Ok(LinearExpr { terms: out, constant })
    }

    pub fn segment_ends(&self, label: &str) -> Option<&(Label, Label)> {
        self.segments.get(label)
    }

    /// Polynomial stating that three points are collinear.
    pub fn collinear(&self, a: &str, b: &str, c: &str) -> Option<MultiPoly> {
        let pa = self.points.get(a)?;
        let pb = self.points.get(b)?;
        let pc = self.points.get(c)?;
        Some(cross(&sub(pb, pa), &sub(pc, pa)))
    }

    /// Adjoins a fresh variable; returns the extended model and its index.
    pub fn with_extra_var(&self, name: &str, role: VarRole) -> (AlgebraicModel, usize) {
        let n = self.nvars();
        let mapping: Vec<Option<usize>> = (0..n).map(Some).collect();
        let up = |p: &MultiPoly| p.remap(n + 1, &mapping).expect("identity remap");
        let upc = |c: &Coords| (up(&c.0), up(&c.1));
        let mut m = AlgebraicModel {
            names: self.names.clone(),
            roles: self.roles.clone(),
            point_order: self.point_order.clone(),
            points: self.points.iter().map(|(k, v)| (k.clone(), upc(v))).collect(),
            explicit: self.explicit.clone(),
            lines: self
                .lines
                .iter()
                .map(|(k, v)| {
                    (
                        k.clone(),
                        LinePolys {
                            through: upc(&v.through),
                            direction: upc(&v.direction),
                        },
                    )
                })
                .collect(),
            circles: self
                .circles
                .iter()
                .map(|(k, v)| {
                    (
                        k.clone(),
                        CirclePolys {
                            center: upc(&v.center),
                            radius_sq: up(&v.radius_sq),
                        },
                    )
                })
                .collect(),
            lengths: self.lengths.clone(),
            segments: self.segments.clone(),
            numbers: self.numbers.clone(),
            constraints: self
                .constraints
                .iter()
                .map(|c| Constraint {
                    poly: up(&c.poly),
                    step: c.step.clone(),
                    meaning: c.meaning,
                })
                .collect(),
            pinned: self.pinned.clone(),
        };
        m.names.push(name.to_string());
        m.roles.push(role);
        (m, n)
    }
}

fn single_var(p: &MultiPoly) -> Option<usize> {
    if p.len() != 1 {
        return None;
    }
    let (e, c) = p.terms().next()?;
    if !c.is_one() || e.iter().sum::<u32>() != 1 {
        return None;
    }
    e.iter().position(|&k| k == 1)
}

fn sub(a: &Coords, b: &Coords) -> Coords {
    (&a.0 - &b.0, &a.1 - &b.1)
}

fn add(a: &Coords, b: &Coords) -> Coords {
    (&a.0 + &b.0, &a.1 + &b.1)
}

fn scale(a: &Coords, c: &Rational) -> Coords {
    (a.0.scale(c), a.1.scale(c))
}

fn perp(a: &Coords) -> Coords {
    (-&a.1, a.0.clone())
}

fn cross(a: &Coords, b: &Coords) -> MultiPoly {
    &(&a.0 * &b.1) - &(&a.1 * &b.0)
}

fn dot(a: &Coords, b: &Coords) -> MultiPoly {
    &(&a.0 * &b.0) + &(&a.1 * &b.1)
}

fn sq_dist(a: &Coords, b: &Coords) -> MultiPoly {
    let d = sub(a, b);
    dot(&d, &d)
}

fn half() -> Rational {
    Rational::new(1.into(), 2.into())
}

/// Compiles with the default options: first free point at (0, 0) and, when
/// `pin_two_points`, the second at (1, 0).
pub fn compile(
    program: &ConstructionProgram,
    pin_two_points: bool,
) -> Result<AlgebraicModel, ConstructionError> {
    compile_with(
        program,
        &CompileOptions {
            pin_second: pin_two_points,
            unpinned: &[],
        },
    )
}

pub fn compile_with(
    program: &ConstructionProgram,
    opts: &CompileOptions<'_>,
) -> Result<AlgebraicModel, ConstructionError> {
    // Pass 1: allocate variables in step order.
    let mut names = Vec::new();
    let mut roles = Vec::new();
    let mut pins: HashMap<Label, (Rational, Rational)> = HashMap::new();
    let mut pinned = Vec::new();
    let mut free_seen = 0usize;
    let push_point = |names: &mut Vec<String>, roles: &mut Vec<VarRole>, l: &Label, implicit: bool| {
        for (axis, tag) in [(Axis::X, "x"), (Axis::Y, "y")] {
            names.push(format!("{tag}_{l}"));
            roles.push(if implicit {
                VarRole::Implicit {
                    point: l.clone(),
                    axis,
                }
            } else {
                VarRole::Base {
                    point: l.clone(),
                    axis,
                }
            });
        }
    };
    for entry in program.steps() {
        let l = entry.label();
        match &entry.step {
            Step::FreePoint { .. } => {
                let pinnable = !opts.unpinned.contains(l);
                let limit = if opts.pin_second { 2 } else { 1 };
                if pinnable && free_seen < limit {
                    let val = if free_seen == 0 {
                        (Rational::zero(), Rational::zero())
                    } else {
                        (Rational::one(), Rational::zero())
                    };
                    pinned.push(PinnedPoint {
                        label: l.clone(),
                        x: val.0.clone(),
                        y: val.1.clone(),
                    });
                    pins.insert(l.clone(), val);
                    free_seen += 1;
                } else {
                    if pinnable {
                        free_seen += 1;
                    }
                    push_point(&mut names, &mut roles, l, false);
                }
            }
            Step::PointOnLine { .. } => push_point(&mut names, &mut roles, l, false),
            Step::IntersectLineLine { .. }
            | Step::IntersectLineCircle { .. }
            | Step::IntersectCircleCircle { .. }
            | Step::ReflectAboutLine { .. }
            | Step::EquilateralVertex { .. } => push_point(&mut names, &mut roles, l, true),
            Step::SegmentLength { .. } => {
                names.push(format!("len_{l}"));
                roles.push(VarRole::Length { label: l.clone() });
            }
            _ => {}
        }
    }
    let n = names.len();
    let var_of = |name: String| names.iter().position(|m| *m == name).expect("allocated");
    let coords_of_vars = |l: &Label| -> Coords {
        (
            MultiPoly::var(n, var_of(format!("x_{l}"))),
            MultiPoly::var(n, var_of(format!("y_{l}"))),
        )
    };

    let mut m = AlgebraicModel {
        names: names.clone(),
        roles: roles.clone(),
        point_order: Vec::new(),
        points: HashMap::new(),
        explicit: Vec::new(),
        lines: HashMap::new(),
        circles: HashMap::new(),
        lengths: HashMap::new(),
        segments: HashMap::new(),
        numbers: HashMap::new(),
        constraints: Vec::new(),
        pinned,
    };

    // Pass 2: build coordinate expressions and constraints.
    for entry in program.steps() {
        let l = entry.label().clone();
        let pt = |m: &AlgebraicModel, r: &Label| -> Coords { m.points[r].clone() };
        let constrain = |m: &mut AlgebraicModel, poly: MultiPoly, meaning: &'static str| {
            if !poly.is_zero() {
                m.constraints.push(Constraint {
                    poly,
                    step: l.clone(),
                    meaning,
                });
            }
        };
        match &entry.step {
            Step::FreePoint { .. } => {
                let c = match pins.get(&l) {
                    Some((x, y)) => (
                        MultiPoly::constant(n, x.clone()),
                        MultiPoly::constant(n, y.clone()),
                    ),
                    None => coords_of_vars(&l),
                };
                m.add_point(&l, c, false);
            }
            Step::PointOnLine { line, .. } => {
                let c = coords_of_vars(&l);
                let lp = m.line(line);
                constrain(&mut m, on_line(&lp, &c), "point on line");
                m.add_point(&l, c, false);
            }
            Step::Midpoint { a, b } => {
                let c = scale(&add(&pt(&m, a), &pt(&m, b)), &half());
                m.add_point(&l, c, true);
            }
            Step::ReflectPoint { point, center } => {
                let c = sub(
                    &scale(&pt(&m, center), &Rational::from_integer(2.into())),
                    &pt(&m, point),
                );
                m.add_point(&l, c, true);
            }
            Step::Dilate {
                point,
                factor,
                center,
            } => {
                let ctr = pt(&m, center);
                let c = add(&ctr, &scale(&sub(&pt(&m, point), &ctr), factor));
                m.add_point(&l, c, true);
            }
            Step::Square { a, b } => {
                let (pa, pb) = (pt(&m, a), pt(&m, b));
                let u = perp(&sub(&pb, &pa));
                let c = add(&pb, &u);
                let d = add(&pa, &u);
                m.add_point(&entry.outputs[0], c, true);
                m.add_point(&entry.outputs[1], d, true);
            }
            Step::LineTwoPoints { a, b } => {
                let (pa, pb) = (pt(&m, a), pt(&m, b));
                m.lines.insert(
                    l.clone(),
                    LinePolys {
                        direction: sub(&pb, &pa),
                        through: pa,
                    },
                );
            }
            Step::PerpendicularBisector { a, b } => {
                let (pa, pb) = (pt(&m, a), pt(&m, b));
                m.lines.insert(
                    l.clone(),
                    LinePolys {
                        through: scale(&add(&pa, &pb), &half()),
                        direction: perp(&sub(&pb, &pa)),
                    },
                );
            }
            Step::PerpendicularThrough { point, line } => {
                let lp = m.line(line);
                m.lines.insert(
                    l.clone(),
                    LinePolys {
                        through: pt(&m, point),
                        direction: perp(&lp.direction),
                    },
                );
            }
            Step::CircleCenterThrough { center, through } => {
                let (c, t) = (pt(&m, center), pt(&m, through));
                m.circles.insert(
                    l.clone(),
                    CirclePolys {
                        radius_sq: sq_dist(&t, &c),
                        center: c,
                    },
                );
            }
            Step::IntersectLineLine { a, b, .. } => {
                let c = coords_of_vars(&l);
                let (la, lb) = (m.line(a), m.line(b));
                constrain(&mut m, on_line(&la, &c), "on first line");
                constrain(&mut m, on_line(&lb, &c), "on second line");
                m.add_point(&l, c, false);
            }
            Step::IntersectLineCircle { line, circle, .. } => {
                let c = coords_of_vars(&l);
                let (lp, cp) = (m.line(line), m.circles[circle].clone());
                constrain(&mut m, on_line(&lp, &c), "on line");
                match program.chord_anchor(line, circle) {
                    // The chord's midpoint is the foot of the center; linear in c.
                    Some(k) => {
                        let twice_center = scale(&cp.center, &Rational::from_integer(2.into()));
                        let mid2 = sub(&add(&c, &pt(&m, k)), &twice_center);
                        constrain(&mut m, dot(&mid2, &lp.direction), "other end of chord");
                    }
                    None => constrain(&mut m, on_circle(&cp, &c), "on circle"),
                }
                m.add_point(&l, c, false);
            }
            Step::IntersectCircleCircle { a, b, .. } => {
                let c = coords_of_vars(&l);
                let (ca, cb) = (m.circles[a].clone(), m.circles[b].clone());
                constrain(&mut m, on_circle(&ca, &c), "on first circle");
                constrain(&mut m, on_circle(&cb, &c), "on second circle");
                m.add_point(&l, c, false);
            }
            Step::ReflectAboutLine { point, line } => {
                let c = coords_of_vars(&l);
                let lp = m.line(line);
                let p = pt(&m, point);
                // (p + c)/2 on the line, scaled by 2.
                let mid2 = sub(
                    &add(&p, &c),
                    &scale(&lp.through, &Rational::from_integer(2.into())),
                );
                constrain(&mut m, cross(&mid2, &lp.direction), "mirror midpoint on line");
                constrain(&mut m, dot(&sub(&c, &p), &lp.direction), "mirror perpendicular");
                m.add_point(&l, c, false);
            }
            Step::EquilateralVertex { a, b, .. } => {
                let c = coords_of_vars(&l);
                let (pa, pb) = (pt(&m, a), pt(&m, b));
                let side = sq_dist(&pa, &pb);
                constrain(&mut m, &sq_dist(&c, &pa) - &side, "equal side to first vertex");
                constrain(&mut m, &sq_dist(&c, &pb) - &side, "equal side to second vertex");
                m.add_point(&l, c, false);
            }
            Step::SegmentLength { a, b } => {
                let v = var_of(format!("len_{l}"));
                let sym = MultiPoly::var(n, v);
                let d = sq_dist(&pt(&m, a), &pt(&m, b));
                constrain(&mut m, &(&sym * &sym) - &d, "length squared");
                m.lengths.insert(l.clone(), v);
                m.segments.insert(l.clone(), (a.clone(), b.clone()));
                let (pa, pb) = (pt(&m, a), pt(&m, b));
                m.lines.insert(
                    l.clone(),
                    LinePolys {
                        direction: sub(&pb, &pa),
                        through: pa,
                    },
                );
            }
            Step::NumExpr(e) => {
                m.numbers.insert(l.clone(), e.clone());
            }
        }
    }
    Ok(m)
}

impl AlgebraicModel {
    fn add_point(&mut self, l: &Label, c: Coords, explicit: bool) {
        self.point_order.push(l.clone());
        if explicit {
            self.explicit.push(l.clone());
        }
        self.points.insert(l.clone(), c);
    }

    fn line(&self, l: &Label) -> LinePolys {
        self.lines[l].clone()
    }
}

fn on_line(l: &LinePolys, p: &Coords) -> MultiPoly {
    cross(&sub(p, &l.through), &l.direction)
}

fn on_circle(c: &CirclePolys, p: &Coords) -> MultiPoly {
    &sq_dist(p, &c.center) - &c.radius_sq
}
