use std::collections::HashMap;
use std::fmt;

use crate::exactmath::Rational;

use super::ConstructionError;

pub type Label = String;
pub type Hint = (f64, f64);

/// What kind of object a label denotes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ObjectKind {
    Point,
    Line,
    Circle,
    /// A segment: usable both as a length and as the line through its ends.
    Segment,
    Number,
}

impl ObjectKind {
    pub fn is_line_like(self) -> bool {
        matches!(self, ObjectKind::Line | ObjectKind::Segment)
    }

    pub fn is_length_like(self) -> bool {
        matches!(self, ObjectKind::Segment | ObjectKind::Number)
    }
}

impl fmt::Display for ObjectKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObjectKind::Point => "point",
            ObjectKind::Line => "line",
            ObjectKind::Circle => "circle",
            ObjectKind::Segment => "segment",
            ObjectKind::Number => "number",
        })
    }
}

/// `Σ cᵢ·labelᵢ + constant` over length labels.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LinearExpr {
    pub terms: Vec<(Rational, Label)>,
    pub constant: Rational,
}

impl LinearExpr {
    pub fn label(l: impl Into<Label>) -> Self {
        Self {
            terms: vec![(Rational::from_integer(1.into()), l.into())],
            constant: Rational::from_integer(0.into()),
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        use num_traits::Zero;
        self.constant.is_zero() && !self.terms.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &Label> {
        self.terms.iter().map(|(_, l)| l)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Step {
    FreePoint {
        hint: Option<Hint>,
    },
    /// A point with one degree of freedom along a line.
    PointOnLine {
        line: Label,
        hint: Option<Hint>,
    },
    Midpoint {
        a: Label,
        b: Label,
    },
    /// `point` mirrored at `center`.
    ReflectPoint {
        point: Label,
        center: Label,
    },
    ReflectAboutLine {
        point: Label,
        line: Label,
    },
    /// `point` dilated by `factor` from `center`.
    Dilate {
        point: Label,
        factor: Rational,
        center: Label,
    },
    LineTwoPoints {
        a: Label,
        b: Label,
    },
    PerpendicularBisector {
        a: Label,
        b: Label,
    },
    /// Line through `point` perpendicular to `line`.
    PerpendicularThrough {
        point: Label,
        line: Label,
    },
    CircleCenterThrough {
        center: Label,
        through: Label,
    },
    IntersectLineLine {
        a: Label,
        b: Label,
        hint: Option<Hint>,
    },
    IntersectLineCircle {
        line: Label,
        circle: Label,
        hint: Option<Hint>,
    },
    IntersectCircleCircle {
        a: Label,
        b: Label,
        hint: Option<Hint>,
    },
    /// Counterclockwise square on `a`, `b`; outputs the two new vertices
    /// `c = b + perp(b - a)` and `d = a + perp(b - a)`.
    Square {
        a: Label,
        b: Label,
    },
    EquilateralVertex {
        a: Label,
        b: Label,
        hint: Option<Hint>,
    },
    SegmentLength {
        a: Label,
        b: Label,
    },
    NumExpr(LinearExpr),
}

impl Step {
    pub fn name(&self) -> &'static str {
        match self {
            Step::FreePoint { .. } => "FreePoint",
            Step::PointOnLine { .. } => "PointOn",
            Step::Midpoint { .. } => "Midpoint",
            Step::ReflectPoint { .. } | Step::ReflectAboutLine { .. } => "Mirror",
            Step::Dilate { .. } => "Dilate",
            Step::LineTwoPoints { .. } => "Line",
            Step::PerpendicularBisector { .. } => "PerpendicularBisector",
            Step::PerpendicularThrough { .. } => "PerpendicularLine",
            Step::CircleCenterThrough { .. } => "Circle",
            Step::IntersectLineLine { .. }
            | Step::IntersectLineCircle { .. }
            | Step::IntersectCircleCircle { .. } => "Intersect",
            Step::Square { .. } => "Square",
            Step::EquilateralVertex { .. } => "Equilateral",
            Step::SegmentLength { .. } => "Segment",
            Step::NumExpr(_) => "Number",
        }
    }

    pub fn output_kind(&self) -> ObjectKind {
        match self {
            Step::LineTwoPoints { .. }
            | Step::PerpendicularBisector { .. }
            | Step::PerpendicularThrough { .. } => ObjectKind::Line,
            Step::CircleCenterThrough { .. } => ObjectKind::Circle,
            Step::SegmentLength { .. } => ObjectKind::Segment,
            Step::NumExpr(_) => ObjectKind::Number,
            _ => ObjectKind::Point,
        }
    }

    pub fn output_count(&self) -> usize {
        match self {
            Step::Square { .. } => 2,
            _ => 1,
        }
    }

    /// Whether this step picks one of two algebraic solutions.
    pub fn is_branching(&self) -> bool {
        matches!(
            self,
            Step::IntersectLineCircle { .. }
                | Step::IntersectCircleCircle { .. }
                | Step::EquilateralVertex { .. }
        )
    }

    pub fn hint(&self) -> Option<Hint> {
        match self {
            Step::FreePoint { hint }
            | Step::PointOnLine { hint, .. }
            | Step::IntersectLineLine { hint, .. }
            | Step::IntersectLineCircle { hint, .. }
            | Step::IntersectCircleCircle { hint, .. }
            | Step::EquilateralVertex { hint, .. } => *hint,
            _ => None,
        }
    }

    /// Referenced labels with the kind each must have.
    pub fn references(&self) -> Vec<(&Label, RefKind)> {
        use RefKind::*;
        match self {
            Step::FreePoint { .. } => vec![],
            Step::PointOnLine { line, .. } => vec![(line, Line)],
            Step::Midpoint { a, b }
            | Step::LineTwoPoints { a, b }
            | Step::PerpendicularBisector { a, b }
            | Step::Square { a, b }
            | Step::EquilateralVertex { a, b, .. }
            | Step::SegmentLength { a, b } => vec![(a, Point), (b, Point)],
            Step::ReflectPoint { point, center } => vec![(point, Point), (center, Point)],
            Step::ReflectAboutLine { point, line } => vec![(point, Point), (line, Line)],
            Step::Dilate { point, center, .. } => vec![(point, Point), (center, Point)],
            Step::PerpendicularThrough { point, line } => vec![(point, Point), (line, Line)],
            Step::CircleCenterThrough { center, through } => {
                vec![(center, Point), (through, Point)]
            }
            Step::IntersectLineLine { a, b, .. } => vec![(a, Line), (b, Line)],
            Step::IntersectLineCircle { line, circle, .. } => vec![(line, Line), (circle, Circle)],
            Step::IntersectCircleCircle { a, b, .. } => vec![(a, Circle), (b, Circle)],
            Step::NumExpr(e) => e.labels().map(|l| (l, Length)).collect(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RefKind {
    Point,
    Line,
    Circle,
    Length,
}

impl RefKind {
    pub fn accepts(self, k: ObjectKind) -> bool {
        match self {
            RefKind::Point => k == ObjectKind::Point,
            RefKind::Line => k.is_line_like(),
            RefKind::Circle => k == ObjectKind::Circle,
            RefKind::Length => k.is_length_like(),
        }
    }
}

impl fmt::Display for RefKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RefKind::Point => "point",
            RefKind::Line => "line",
            RefKind::Circle => "circle",
            RefKind::Length => "length",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StepEntry {
    pub outputs: Vec<Label>,
    pub step: Step,
}

impl StepEntry {
    pub fn new(output: impl Into<Label>, step: Step) -> Self {
        Self {
            outputs: vec![output.into()],
            step,
        }
    }

    pub fn label(&self) -> &Label {
        &self.outputs[0]
    }
}

/// An ordered, validated list of construction steps. Every step only refers
/// to labels defined by earlier steps.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ConstructionProgram {
    steps: Vec<StepEntry>,
    kinds: HashMap<Label, ObjectKind>,
}

impl ConstructionProgram {
    pub fn new(steps: Vec<StepEntry>) -> Result<Self, ConstructionError> {
        let mut prog = Self::default();
        for s in steps {
            prog.push(s)?;
        }
        Ok(prog)
    }

    /// Appends one step after validating it against the steps so far.
    pub fn push(&mut self, entry: StepEntry) -> Result<(), ConstructionError> {
        let step_name = entry.outputs.join(",");
        if entry.outputs.len() != entry.step.output_count() {
            return Err(ConstructionError::Arity {
                step: step_name,
                expected: entry.step.output_count(),
                found: entry.outputs.len(),
            });
        }
        if self.steps.is_empty() && !matches!(entry.step, Step::FreePoint { .. }) {
            return Err(ConstructionError::NoFreePoint { step: step_name });
        }
        for (r, want) in entry.step.references() {
            match self.kinds.get(r) {
                None => {
                    return Err(ConstructionError::UndefinedLabel {
                        step: step_name,
                        label: r.clone(),
                    })
                }
                Some(k) if !want.accepts(*k) => {
                    return Err(ConstructionError::WrongKind {
                        step: step_name,
                        label: r.clone(),
                        expected: want,
                        found: *k,
                    })
                }
                _ => {}
            }
        }
        let anchored = match &entry.step {
            Step::IntersectLineCircle { line, circle, .. } => self.chord_anchor(line, circle).is_some(),
            _ => false,
        };
        if entry.step.is_branching() && !anchored && entry.step.hint().is_none() {
            return Err(ConstructionError::MissingHint { step: step_name });
        }
        if let Step::NumExpr(e) = &entry.step {
            if e.terms.is_empty() {
                return Err(ConstructionError::Invalid {
                    step: step_name,
                    reason: "numeric expression must mention at least one length".into(),
                });
            }
        }
        for (i, o) in entry.outputs.iter().enumerate() {
            if self.kinds.contains_key(o) || entry.outputs[..i].contains(o) {
                return Err(ConstructionError::DuplicateLabel { label: o.clone() });
            }
        }
        let kind = entry.step.output_kind();
        for o in &entry.outputs {
            self.kinds.insert(o.clone(), kind);
        }
        self.steps.push(entry);
        Ok(())
    }

    pub fn steps(&self) -> &[StepEntry] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn kind_of(&self, label: &str) -> Option<ObjectKind> {
        self.kinds.get(label).copied()
    }

    /// A point through which `line` was drawn and which is already known to
    /// lie on `circle`. Intersecting the two then has a single new solution,
    /// the other end of the chord, so no branch hint is needed.
    pub fn chord_anchor(&self, line: &str, circle: &str) -> Option<&Label> {
        let defining = match &self.defining_step(line)?.step {
            Step::LineTwoPoints { a, b } | Step::SegmentLength { a, b } => vec![a, b],
            Step::PerpendicularThrough { point, .. } => vec![point],
            _ => return None,
        };
        let mut on_circle: Vec<&Label> = Vec::new();
        for s in &self.steps {
            match &s.step {
                Step::CircleCenterThrough { through, .. } if s.label() == circle => on_circle.push(through),
                Step::IntersectLineCircle { circle: c, .. } if c == circle => on_circle.push(s.label()),
                Step::IntersectCircleCircle { a, b, .. } if a == circle || b == circle => {
                    on_circle.push(s.label())
                }
                _ => {}
            }
        }
        defining.into_iter().find(|p| on_circle.contains(p))
    }

    /// The step that defines `label`.
    pub fn defining_step(&self, label: &str) -> Option<&StepEntry> {
        self.steps.iter().find(|s| s.outputs.iter().any(|o| o == label))
    }

    pub fn free_points(&self) -> impl Iterator<Item = &Label> {
        self.steps
            .iter()
            .filter(|s| matches!(s.step, Step::FreePoint { .. }))
            .map(|s| s.label())
    }

    /// Free points and points on lines: the points a locus may trace.
    pub fn is_traceable(&self, label: &str) -> bool {
        self.defining_step(label)
            .is_some_and(|s| matches!(s.step, Step::FreePoint { .. } | Step::PointOnLine { .. }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(l: &str) -> StepEntry {
        StepEntry::new(l, Step::FreePoint { hint: None })
    }

    #[test]
    fn rejects_undefined_and_duplicates() {
        let err = ConstructionProgram::new(vec![
            free("A"),
            StepEntry::new(
                "M",
                Step::Midpoint {
                    a: "A".into(),
                    b: "B".into(),
                },
            ),
        ])
        .unwrap_err();
        assert!(matches!(err, ConstructionError::UndefinedLabel { ref label, .. } if label == "B"));

        let err = ConstructionProgram::new(vec![free("A"), free("A")]).unwrap_err();
        assert!(matches!(err, ConstructionError::DuplicateLabel { .. }));
    }

    #[test]
    fn needs_free_point_first() {
        let err = ConstructionProgram::new(vec![StepEntry::new("n", Step::NumExpr(LinearExpr::label("x")))])
            .unwrap_err();
        assert!(matches!(err, ConstructionError::NoFreePoint { .. }));
        assert!(ConstructionProgram::new(vec![]).unwrap().is_empty());
    }

    #[test]
    fn kinds_are_checked() {
        let err = ConstructionProgram::new(vec![
            free("A"),
            free("B"),
            StepEntry::new(
                "c",
                Step::CircleCenterThrough {
                    center: "A".into(),
                    through: "B".into(),
                },
            ),
            StepEntry::new(
                "M",
                Step::Midpoint {
                    a: "A".into(),
                    b: "c".into(),
                },
            ),
        ])
        .unwrap_err();
        assert!(matches!(err, ConstructionError::WrongKind { .. }));
    }

    #[test]
    fn branch_steps_need_hints() {
        let err = ConstructionProgram::new(vec![
            free("A"),
            free("B"),
            StepEntry::new(
                "C",
                Step::EquilateralVertex {
                    a: "A".into(),
                    b: "B".into(),
                    hint: None,
                },
            ),
        ])
        .unwrap_err();
        assert!(matches!(err, ConstructionError::MissingHint { .. }));
    }

    #[test]
    fn segment_is_line_like() {
        let p = ConstructionProgram::new(vec![
            free("A"),
            free("B"),
            free("P"),
            StepEntry::new(
                "s",
                Step::SegmentLength {
                    a: "A".into(),
                    b: "B".into(),
                },
            ),
            StepEntry::new(
                "l",
                Step::PerpendicularThrough {
                    point: "P".into(),
                    line: "s".into(),
                },
            ),
        ])
        .unwrap();
        assert_eq!(p.kind_of("l"), Some(ObjectKind::Line));
        assert_eq!(p.free_points().count(), 3);
    }
}
