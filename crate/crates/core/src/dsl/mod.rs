//! The `.gcs` script language: parsing, unparsing, running queries, and the
//! bundled corpus.
//!
//! One statement per line; `#` starts a comment and `#! key value` sets
//! metadata.
//!
//! ```text
//! #! problem 06
//! A = FreePoint() @ (0, 0)
//! B = FreePoint() @ (1, 0)
//! C, D = Square(A, B)
//! s = Segment(A, C)
//! O = Intersect(g, c) near (0.84, -2.63)
//! P = 4*t
//! ? Relation(s, P)
//! ? Locus(AreCollinear(E, P2, B), P)
//! ```

pub mod corpus;
mod parse;
pub mod report;

use std::fmt;

use crate::construction::{ConstructionProgram, Hint, Label, Step};
use crate::locus::LocusCondition;
use crate::prover::{render_expr, RelationQuery};

pub use parse::{parse_number, parse_script};
pub use report::{run, QueryReport, RunError, RunOptions, RunReport};

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metadata {
    pub problem: Option<String>,
    /// Other `#! key value` lines, in order.
    pub pragmas: Vec<(String, String)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocusQuery {
    pub condition: LocusCondition,
    pub traced: Label,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Query {
    Relation(RelationQuery),
    Locus(LocusQuery),
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Query::Relation(q) => {
                write!(f, "Relation({}, {})", render_expr(&q.left), render_expr(&q.right))
            }
            Query::Locus(q) => {
                let c = match &q.condition {
                    LocusCondition::Collinear(a, b, c) => format!("AreCollinear({a}, {b}, {c})"),
                    LocusCondition::RatioEq { a, b, target } => {
                        format!("RatioEq({a}, {b}, {target})")
                    }
                    LocusCondition::LengthEq(a, b) => format!("LengthEq({a}, {b})"),
                };
                write!(f, "Locus({c}, {})", q.traced)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Script {
    pub source: String,
    pub program: ConstructionProgram,
    pub queries: Vec<Query>,
    pub metadata: Metadata,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax,
    UnknownCommand,
    Arity,
    UndefinedLabel,
    DuplicateLabel,
    WrongKind,
    Invalid,
}

/// Diagnostic with 1-based line and column (in characters).
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub kind: ParseErrorKind,
    pub message: String,
    /// Tokens or names that would have been accepted, when known.
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(line: usize, column: usize, kind: ParseErrorKind, message: impl Into<String>) -> Self {
        Self {
            line,
            column,
            kind,
            message: message.into(),
            expected: Vec::new(),
        }
    }

    fn with_expected(mut self, names: &[&str]) -> Self {
        self.expected = names.iter().map(|s| s.to_string()).collect();
        self
    }
}

fn hint_text(h: &Option<Hint>, kw: &str) -> String {
    match h {
        Some((x, y)) => format!(" {kw} ({x}, {y})"),
        None => String::new(),
    }
}

/// Canonical script text; parsing it yields an equal program and queries.
pub fn unparse(script: &Script) -> String {
    let mut out = String::new();
    if let Some(p) = &script.metadata.problem {
        out.push_str(&format!("#! problem {p}\n"));
    }
    for (k, v) in &script.metadata.pragmas {
        out.push_str(&format!("#! {k} {v}\n"));
    }
    for entry in script.program.steps() {
        let lhs = entry.outputs.join(", ");
        let rhs = match &entry.step {
            Step::FreePoint { hint } => format!("FreePoint(){}", hint_text(hint, "@")),
            Step::PointOnLine { line, hint } => format!("PointOn({line}){}", hint_text(hint, "@")),
            Step::Midpoint { a, b } => format!("Midpoint({a}, {b})"),
            Step::ReflectPoint { point, center } => format!("Mirror({point}, {center})"),
            Step::ReflectAboutLine { point, line } => format!("Mirror({point}, {line})"),
            Step::Dilate {
                point,
                factor,
                center,
            } => format!("Dilate({point}, {factor}, {center})"),
            Step::LineTwoPoints { a, b } => format!("Line({a}, {b})"),
            Step::PerpendicularBisector { a, b } => format!("PerpendicularBisector({a}, {b})"),
            Step::PerpendicularThrough { point, line } => {
                format!("PerpendicularLine({point}, {line})")
            }
            Step::CircleCenterThrough { center, through } => format!("Circle({center}, {through})"),
            Step::IntersectLineLine { a, b, hint } => {
                format!("Intersect({a}, {b}){}", hint_text(hint, "near"))
            }
            Step::IntersectLineCircle { line, circle, hint } => {
                format!("Intersect({line}, {circle}){}", hint_text(hint, "near"))
            }
            Step::IntersectCircleCircle { a, b, hint } => {
                format!("Intersect({a}, {b}){}", hint_text(hint, "near"))
            }
            Step::Square { a, b } => format!("Square({a}, {b})"),
            Step::EquilateralVertex { a, b, hint } => {
                format!("Equilateral({a}, {b}){}", hint_text(hint, "near"))
            }
            Step::SegmentLength { a, b } => format!("Segment({a}, {b})"),
            Step::NumExpr(e) => render_expr(e),
        };
        out.push_str(&format!("{lhs} = {rhs}\n"));
    }
    for q in &script.queries {
        out.push_str(&format!("? {q}\n"));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = "\
#! problem demo
A = FreePoint() @ (0, 0)   # origin
B = FreePoint() @ (1, 0)
C, D = Square(A, B)
s = Segment(A, C)
f = Segment(A, B)
P = 4*s - 1/2*f
? Relation(f, P)
";

    #[test]
    fn parses_definitions_and_queries() {
        let s = parse_script(SQUARE).unwrap();
        assert_eq!(s.program.len(), 6);
        assert_eq!(s.queries.len(), 1);
        assert_eq!(s.metadata.problem.as_deref(), Some("demo"));
    }

    #[test]
    fn round_trip() {
        let s = parse_script(SQUARE).unwrap();
        let text = unparse(&s);
        let again = parse_script(&text).unwrap();
        assert_eq!(again.program, s.program);
        assert_eq!(again.queries, s.queries);
        assert_eq!(unparse(&again), text);
    }

    #[test]
    fn arity_error_is_positioned() {
        let e = parse_script("A = FreePoint()\nX = Midpoint(A)\n").unwrap_err();
        assert_eq!((e.line, e.column, e.kind), (2, 5, ParseErrorKind::Arity));
    }

    #[test]
    fn undefined_and_duplicate_labels() {
        let e = parse_script("A = FreePoint()\nM = Midpoint(A, Z)\n").unwrap_err();
        assert_eq!(
            (e.line, e.column, e.kind),
            (2, 17, ParseErrorKind::UndefinedLabel)
        );
        let e = parse_script("A = FreePoint()\nA = FreePoint()\n").unwrap_err();
        assert_eq!((e.line, e.kind), (2, ParseErrorKind::DuplicateLabel));
    }

    #[test]
    fn unknown_command_lists_alternatives() {
        let e = parse_script("A = FreePoint()\nB = Rotate(A)\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::UnknownCommand);
        assert!(e.expected.contains(&"Midpoint".to_string()));
    }

    #[test]
    fn syntax_error_expected_set() {
        let e = parse_script("A = FreePoint() @ (0 0)\n").unwrap_err();
        assert_eq!(e.kind, ParseErrorKind::Syntax);
        assert_eq!(e.expected, vec!["','".to_string()]);
        assert_eq!(e.column, 22);
    }

    #[test]
    fn mirror_dispatches_on_kind() {
        let s = parse_script(
            "A = FreePoint()\nB = FreePoint()\nP = FreePoint()\ng = Line(A, B)\nQ = Mirror(P, g)\nR = Mirror(P, A)\n",
        )
        .unwrap();
        assert!(matches!(s.program.steps()[4].step, Step::ReflectAboutLine { .. }));
        assert!(matches!(s.program.steps()[5].step, Step::ReflectPoint { .. }));
    }

    #[test]
    fn surd_targets() {
        let s = parse_script(
            "A = FreePoint()\nB = FreePoint()\nP = FreePoint()\ni = Segment(P, A)\nj = Segment(P, B)\n? Locus(RatioEq(i, j, sqrt(3)/2), P)\n? Locus(RatioEq(i, j, 5/2), P)\n",
        )
        .unwrap();
        let text = unparse(&s);
        assert!(text.contains("RatioEq(i, j, 1/2*sqrt(3))"), "{text}");
        assert!(text.contains("RatioEq(i, j, 5/2)"));
        assert_eq!(parse_script(&text).unwrap().queries, s.queries);
    }

    #[test]
    fn branching_step_needs_hint() {
        let e = parse_script(
            "A = FreePoint()\nB = FreePoint()\nc = Circle(A, B)\ng = PerpendicularBisector(A, B)\nX = Intersect(g, c)\n",
        )
        .unwrap_err();
        assert_eq!((e.line, e.kind), (5, ParseErrorKind::Invalid));
    }

    #[test]
    fn chord_through_known_point_needs_no_hint() {
        let s = parse_script(
            "A = FreePoint()\nB = FreePoint()\nP = FreePoint()\nc = Circle(A, B)\ng = Line(B, P)\nX = Intersect(g, c)\n",
        )
        .unwrap();
        assert_eq!(s.program.chord_anchor("g", "c").map(String::as_str), Some("B"));
    }

    #[test]
    fn standalone_numbers() {
        assert_eq!(parse_number("8*sqrt(2)").unwrap().to_string(), "8*sqrt(2)");
        assert_eq!(parse_number("253/34").unwrap().to_string(), "253/34");
        assert_eq!(
            parse_number("3/8 - 1/8*sqrt(5)").unwrap().to_string(),
            "3/8 - 1/8*sqrt(5)"
        );
        assert_eq!(parse_number("-sqrt(8) + 1").unwrap().to_string(), "1 - 2*sqrt(2)");
        assert_eq!(
            parse_number("sqrt(2) + sqrt(3)").unwrap_err().kind,
            ParseErrorKind::Invalid
        );
        let e = parse_number("2 3").unwrap_err();
        assert_eq!(
            (e.column, e.expected.clone()),
            (3, vec!["end of input".to_string()])
        );
    }

    #[test]
    fn hostile_inputs_do_not_panic() {
        for src in [
            "",
            "?",
            "= =",
            "A = FreePoint() @ (1e5, 2)",
            "A,=",
            "A = Dilate(A, 1/0, A)",
            "A = FreePoint()\nB = Dilate(A, 1/0, A)",
            "? Relation(",
            "A = 9999999999999999999999999*",
            "A = FreePoint()\n? Locus(RatioEq(A, A, sqrt(0)), A)",
            "é = FreePoint() near (.5, -.5)",
        ] {
            let _ = parse_script(src);
        }
    }
}
