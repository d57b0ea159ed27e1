//! Line-oriented parser for `.gcs` construction scripts.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::construction::{
    ConstructionError, ConstructionProgram, Hint, LinearExpr, ObjectKind, Step, StepEntry,
};
use crate::exactmath::{AlgebraicNumber, Rational};
use crate::locus::LocusCondition;
use crate::prover::RelationQuery;

use super::{LocusQuery, Metadata, ParseError, ParseErrorKind, Query, Script};

const MAX_LITERAL_DIGITS: usize = 4096;
const MAX_LINE_LEN: usize = 1 << 16;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    /// Unsigned decimal literal as written.
    Number(String),
    Sym(char),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    col: usize,
}

fn describe(t: Option<&Token>) -> String {
    match t.map(|t| &t.tok) {
        None => "end of line".into(),
        Some(Tok::Ident(s)) => format!("'{s}'"),
        Some(Tok::Number(s)) => format!("number {s}"),
        Some(Tok::Sym(c)) => format!("'{c}'"),
    }
}

fn is_ident_start(c: char) -> bool {
    c.is_alphabetic() || c == '_'
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(line: &str, line_no: usize) -> Result<Vec<Token>, ParseError> {
    let chars: Vec<char> = line.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c == '#' {
            break;
        }
        if c.is_whitespace() {
            i += 1;
        } else if is_ident_start(c) {
            let start = i;
            while i < chars.len() && is_ident_char(chars[i]) {
                i += 1;
            }
            out.push(Token {
                tok: Tok::Ident(chars[start..i].iter().collect()),
                col,
            });
        } else if c.is_ascii_digit() || (c == '.' && chars.get(i + 1).is_some_and(|d| d.is_ascii_digit())) {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i < chars.len() && chars[i] == '.' {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            if i - start > MAX_LITERAL_DIGITS {
                return Err(ParseError::new(
                    line_no,
                    col,
                    ParseErrorKind::Syntax,
                    "number literal too long",
                ));
            }
            out.push(Token {
                tok: Tok::Number(chars[start..i].iter().collect()),
                col,
            });
        } else if "()=,*/+-@?".contains(c) {
            out.push(Token {
                tok: Tok::Sym(c),
                col,
            });
            i += 1;
        } else {
            return Err(ParseError::new(
                line_no,
                col,
                ParseErrorKind::Syntax,
                format!("unexpected character '{c}'"),
            ));
        }
    }
    Ok(out)
}

/// Exact value of an unsigned decimal literal.
fn decimal_value(s: &str) -> Rational {
    let (int, frac) = s.split_once('.').unwrap_or((s, ""));
    let digits = format!("{int}{frac}");
    let digits = if digits.is_empty() {
        "0".to_string()
    } else {
        digits
    };
    let n: BigInt = digits.parse().unwrap_or_default();
    let d = num_traits::pow(BigInt::from(10), frac.len());
    Rational::new(n, d)
}

struct Cursor<'a> {
    toks: &'a [Token],
    pos: usize,
    line: usize,
    line_len: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn col(&self) -> usize {
        self.peek().map_or(self.line_len + 1, |t| t.col)
    }

    fn err(&self, kind: ParseErrorKind, msg: impl Into<String>) -> ParseError {
        ParseError::new(self.line, self.col(), kind, msg)
    }

    fn expected(&self, what: &[&str]) -> ParseError {
        let mut e = self.err(
            ParseErrorKind::Syntax,
            format!("expected {}, found {}", what.join(" or "), describe(self.peek())),
        );
        e.expected = what.iter().map(|s| s.to_string()).collect();
        e
    }

    fn eat_sym(&mut self, c: char) -> bool {
        if matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn sym(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat_sym(c) {
            Ok(())
        } else {
            Err(self.expected(&[&format!("'{c}'")]))
        }
    }

    fn peek_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c)
    }

    fn ident(&mut self) -> Result<(String, usize), ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s),
                col,
            }) => {
                self.pos += 1;
                Ok((s.clone(), *col))
            }
            _ => Err(self.expected(&["identifier"])),
        }
    }

    fn peek_ident(&self) -> Option<&'a str> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => Some(s.as_str()),
            _ => None,
        }
    }

    fn number(&mut self) -> Result<Rational, ParseError> {
        match self.peek() {
            Some(Token {
                tok: Tok::Number(s), ..
            }) => {
                self.pos += 1;
                Ok(decimal_value(s))
            }
            _ => Err(self.expected(&["number"])),
        }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn end(&self) -> Result<(), ParseError> {
        if self.at_end() {
            Ok(())
        } else {
            Err(self.expected(&["end of line"]))
        }
    }

    /// `[-] number [/ number]`
    fn signed_rational(&mut self) -> Result<Rational, ParseError> {
        let neg = self.eat_sym('-');
        let col = self.col();
        let mut v = self.number()?;
        if self.eat_sym('/') {
            let d = self.number()?;
            if d.is_zero() {
                return Err(ParseError::new(
                    self.line,
                    col,
                    ParseErrorKind::Invalid,
                    "zero denominator",
                ));
            }
            v /= d;
        }
        Ok(if neg { -v } else { v })
    }

    /// `[-] decimal` as a float.
    fn signed_float(&mut self) -> Result<f64, ParseError> {
        let neg = self.eat_sym('-');
        let col = self.col();
        match self.peek() {
            Some(Token {
                tok: Tok::Number(s), ..
            }) => {
                self.pos += 1;
                let v: f64 = s.parse().unwrap_or(f64::INFINITY);
                if !v.is_finite() {
                    return Err(ParseError::new(
                        self.line,
                        col,
                        ParseErrorKind::Invalid,
                        "coordinate out of range",
                    ));
                }
                Ok(if neg { -v } else { v })
            }
            _ => Err(self.expected(&["number"])),
        }
    }

    /// `( x , y )`
    fn pair(&mut self) -> Result<Hint, ParseError> {
        self.sym('(')?;
        let x = self.signed_float()?;
        self.sym(',')?;
        let y = self.signed_float()?;
        self.sym(')')?;
        Ok((x, y))
    }

    /// Optional `@ (x, y)` or `near (x, y)`.
    fn hint(&mut self) -> Result<Option<Hint>, ParseError> {
        if self.eat_sym('@') {
            return self.pair().map(Some);
        }
        if self.peek_ident() == Some("near") {
            self.pos += 1;
            return self.pair().map(Some);
        }
        Ok(None)
    }

    /// Rational-linear combination of labels and constants.
    fn linear_expr(&mut self) -> Result<LinearExpr, ParseError> {
        let mut e = LinearExpr {
            terms: Vec::new(),
            constant: Rational::zero(),
        };
        let mut first = true;
        loop {
            let neg = if self.eat_sym('-') {
                true
            } else if !first && self.eat_sym('+') {
                false
            } else if first {
                self.eat_sym('+');
                false
            } else {
                break;
            };
            first = false;
            let sign = if neg { -Rational::one() } else { Rational::one() };
            let mut coeff = Rational::one();
            let mut have_number = false;
            if matches!(
                self.peek(),
                Some(Token {
                    tok: Tok::Number(_),
                    ..
                })
            ) {
                coeff = self.number()?;
                have_number = true;
                if self.eat_sym('/') {
                    let col = self.col();
                    let d = self.number()?;
                    if d.is_zero() {
                        return Err(ParseError::new(
                            self.line,
                            col,
                            ParseErrorKind::Invalid,
                            "zero denominator",
                        ));
                    }
                    coeff /= d;
                }
                if !self.eat_sym('*') {
                    e.constant += sign * coeff;
                    continue;
                }
            }
            let (label, _) = match self.ident() {
                Ok(x) => x,
                Err(_) if have_number => return Err(self.expected(&["identifier"])),
                Err(_) => return Err(self.expected(&["number", "identifier"])),
            };
            if self.eat_sym('/') {
                let col = self.col();
                let d = self.number()?;
                if d.is_zero() {
                    return Err(ParseError::new(
                        self.line,
                        col,
                        ParseErrorKind::Invalid,
                        "zero denominator",
                    ));
                }
                coeff /= d;
            }
            let c = sign * coeff;
            match e.terms.iter_mut().find(|(_, l)| *l == label) {
                Some(t) => t.0 += c,
                None => e.terms.push((c, label)),
            }
        }
        Ok(e)
    }

    /// Ratio target: a product/quotient of numbers and `sqrt(n)` factors.
    fn target(&mut self) -> Result<AlgebraicNumber, ParseError> {
        let start = self.col();
        let mut coeff = Rational::one();
        let mut radicand = BigInt::one();
        let mut divide = false;
        loop {
            let col = self.col();
            let (c, r) = if self.peek_ident() == Some("sqrt") {
                self.pos += 1;
                self.sym('(')?;
                let n = self.number()?;
                self.sym(')')?;
                if !n.is_integer() || n.is_negative() {
                    return Err(ParseError::new(
                        self.line,
                        col,
                        ParseErrorKind::Invalid,
                        "sqrt needs a non-negative integer",
                    ));
                }
                (Rational::one(), n.to_integer())
            } else {
                (self.number()?, BigInt::one())
            };
            if divide {
                if c.is_zero() || r.is_zero() {
                    return Err(ParseError::new(
                        self.line,
                        col,
                        ParseErrorKind::Invalid,
                        "division by zero",
                    ));
                }
                // 1/sqrt(r) = sqrt(r)/r
                coeff = coeff / c / Rational::from_integer(r.clone());
            } else {
                coeff *= c;
            }
            radicand *= r;
            if self.eat_sym('*') {
                divide = false;
            } else if self.eat_sym('/') {
                divide = true;
            } else {
                break;
            }
        }
        if radicand.is_one() || coeff.is_zero() || radicand.is_zero() {
            let v = if radicand.is_zero() {
                Rational::zero()
            } else {
                coeff
            };
            return Ok(AlgebraicNumber::Rational(v));
        }
        AlgebraicNumber::surd(
            BigInt::zero(),
            coeff.numer().clone(),
            coeff.denom().clone(),
            radicand,
        )
        .map_err(|e| ParseError::new(self.line, start, ParseErrorKind::Invalid, e.to_string()))
    }

    /// `[-] term {(+|-) term}` where every surd term shares one radicand,
    /// i.e. the printed form of an [`AlgebraicNumber`].
    fn signed_number(&mut self) -> Result<AlgebraicNumber, ParseError> {
        let start = self.col();
        let mut rational = Rational::zero();
        let mut surd: Option<(Rational, BigInt)> = None;
        let mut neg = self.eat_sym('-');
        loop {
            let col = self.col();
            let sign = |v: Rational| if neg { -v } else { v };
            match self.target()? {
                AlgebraicNumber::Rational(v) => rational += sign(v),
                AlgebraicNumber::QuadraticSurd { q, r, d, .. } => {
                    let b = sign(Rational::new(q, r));
                    surd = match surd {
                        None => Some((b, d)),
                        Some((acc, d0)) if d0 == d => Some((acc + b, d)),
                        Some(_) => {
                            return Err(ParseError::new(
                                self.line,
                                col,
                                ParseErrorKind::Invalid,
                                "terms with different radicands",
                            ))
                        }
                    };
                }
            }
            if self.eat_sym('+') {
                neg = false;
            } else if self.eat_sym('-') {
                neg = true;
            } else {
                break;
            }
        }
        let Some((b, d)) = surd else {
            return Ok(AlgebraicNumber::Rational(rational));
        };
        // a + b*sqrt(d) = (p + q*sqrt(d)) / r over a common denominator.
        let r = num_integer::Integer::lcm(rational.denom(), b.denom());
        let p = (rational * Rational::from_integer(r.clone())).to_integer();
        let q = (b * Rational::from_integer(r.clone())).to_integer();
        AlgebraicNumber::surd(p, q, r, d)
            .map_err(|e| ParseError::new(self.line, start, ParseErrorKind::Invalid, e.to_string()))
    }
}

struct Parser {
    program: ConstructionProgram,
    queries: Vec<(usize, Query)>,
    metadata: Metadata,
}

fn construction_error(line: usize, col: usize, e: ConstructionError) -> ParseError {
    let kind = match &e {
        ConstructionError::UndefinedLabel { .. } => ParseErrorKind::UndefinedLabel,
        ConstructionError::DuplicateLabel { .. } => ParseErrorKind::DuplicateLabel,
        ConstructionError::WrongKind { .. } => ParseErrorKind::WrongKind,
        ConstructionError::Arity { .. } => ParseErrorKind::Arity,
        _ => ParseErrorKind::Invalid,
    };
    ParseError::new(line, col, kind, e.to_string())
}

impl Parser {
    fn kind_at(&self, cur: &Cursor, label: &str, col: usize) -> Result<ObjectKind, ParseError> {
        self.program.kind_of(label).ok_or_else(|| {
            ParseError::new(
                cur.line,
                col,
                ParseErrorKind::UndefinedLabel,
                format!("undefined label {label}"),
            )
        })
    }

    fn check_label(&self, cur: &Cursor, label: &str, col: usize) -> Result<(), ParseError> {
        self.kind_at(cur, label, col).map(|_| ())
    }

    fn pragma(&mut self, body: &str) {
        let body = body.trim();
        let (key, value) = body.split_once(char::is_whitespace).unwrap_or((body, ""));
        let value = value.trim().to_string();
        if key == "problem" {
            self.metadata.problem = Some(value);
        } else if !key.is_empty() {
            self.metadata.pragmas.push((key.to_string(), value));
        }
    }

    fn line(&mut self, line_no: usize, text: &str) -> Result<(), ParseError> {
        if text.len() > MAX_LINE_LEN {
            return Err(ParseError::new(
                line_no,
                1,
                ParseErrorKind::Syntax,
                "line too long",
            ));
        }
        if let Some(rest) = text.trim_start().strip_prefix("#!") {
            self.pragma(rest);
            return Ok(());
        }
        let toks = lex(text, line_no)?;
        if toks.is_empty() {
            return Ok(());
        }
        let mut cur = Cursor {
            toks: &toks,
            pos: 0,
            line: line_no,
            line_len: text.chars().count(),
        };
        if cur.eat_sym('?') {
            let q = self.query(&mut cur)?;
            cur.end()?;
            self.queries.push((line_no, q));
            return Ok(());
        }
        self.definition(&mut cur)
    }

    fn query(&mut self, cur: &mut Cursor) -> Result<Query, ParseError> {
        let (name, col) = cur.ident().map_err(|_| cur.expected(&["Relation", "Locus"]))?;
        match name.as_str() {
            "Relation" => {
                cur.sym('(')?;
                let left = self.length_expr(cur)?;
                cur.sym(',')?;
                let right = self.length_expr(cur)?;
                cur.sym(')')?;
                Ok(Query::Relation(RelationQuery::new(left, right)))
            }
            "Locus" => {
                cur.sym('(')?;
                let condition = self.condition(cur)?;
                cur.sym(',')?;
                let (traced, tcol) = cur.ident()?;
                match self.program.defining_step(&traced) {
                    None => {
                        return Err(ParseError::new(
                            cur.line,
                            tcol,
                            ParseErrorKind::UndefinedLabel,
                            format!("undefined label {traced}"),
                        ))
                    }
                    Some(_) if !self.program.is_traceable(&traced) => {
                        return Err(ParseError::new(
                            cur.line,
                            tcol,
                            ParseErrorKind::WrongKind,
                            format!("{traced} is not a free point or a point on a line"),
                        ))
                    }
                    _ => {}
                }
                cur.sym(')')?;
                Ok(Query::Locus(LocusQuery { condition, traced }))
            }
            _ => Err(ParseError::new(
                cur.line,
                col,
                ParseErrorKind::UnknownCommand,
                format!("unknown query {name}"),
            )
            .with_expected(&["Relation", "Locus"])),
        }
    }

    fn length_expr(&self, cur: &mut Cursor) -> Result<LinearExpr, ParseError> {
        let start = cur.pos;
        let e = cur.linear_expr()?;
        // Re-walk identifiers for positioned label checks.
        for t in &cur.toks[start..cur.pos] {
            if let Tok::Ident(l) = &t.tok {
                let k = self.kind_at(cur, l, t.col)?;
                if !k.is_length_like() {
                    return Err(ParseError::new(
                        cur.line,
                        t.col,
                        ParseErrorKind::WrongKind,
                        format!("{l} is a {k}, expected a length"),
                    ));
                }
            }
        }
        if e.terms.is_empty() {
            return Err(cur.err(ParseErrorKind::Invalid, "length expression needs a label"));
        }
        Ok(e)
    }

    fn length_label(&self, cur: &mut Cursor) -> Result<String, ParseError> {
        let (l, col) = cur.ident()?;
        let k = self.kind_at(cur, &l, col)?;
        if !k.is_length_like() {
            return Err(ParseError::new(
                cur.line,
                col,
                ParseErrorKind::WrongKind,
                format!("{l} is a {k}, expected a length"),
            ));
        }
        Ok(l)
    }

    fn point_label(&self, cur: &mut Cursor) -> Result<String, ParseError> {
        let (l, col) = cur.ident()?;
        let k = self.kind_at(cur, &l, col)?;
        if k != ObjectKind::Point {
            return Err(ParseError::new(
                cur.line,
                col,
                ParseErrorKind::WrongKind,
                format!("{l} is a {k}, expected a point"),
            ));
        }
        Ok(l)
    }

    fn condition(&self, cur: &mut Cursor) -> Result<LocusCondition, ParseError> {
        let (name, col) = cur.ident()?;
        cur.sym('(')?;
        let c = match name.as_str() {
            "AreCollinear" | "Collinear" => {
                let a = self.point_label(cur)?;
                cur.sym(',')?;
                let b = self.point_label(cur)?;
                cur.sym(',')?;
                let c = self.point_label(cur)?;
                LocusCondition::Collinear(a, b, c)
            }
            "RatioEq" => {
                let a = self.length_label(cur)?;
                cur.sym(',')?;
                let b = self.length_label(cur)?;
                cur.sym(',')?;
                let tcol = cur.col();
                let target = cur.target()?;
                if target.square_if_rational().is_none() {
                    return Err(ParseError::new(
                        cur.line,
                        tcol,
                        ParseErrorKind::Invalid,
                        "ratio target must square to a rational",
                    ));
                }
                LocusCondition::RatioEq { a, b, target }
            }
            "LengthEq" => {
                let a = self.length_label(cur)?;
                cur.sym(',')?;
                let b = self.length_label(cur)?;
                LocusCondition::LengthEq(a, b)
            }
            _ => {
                return Err(ParseError::new(
                    cur.line,
                    col,
                    ParseErrorKind::UnknownCommand,
                    format!("unknown condition {name}"),
                )
                .with_expected(&["AreCollinear", "RatioEq", "LengthEq"]))
            }
        };
        cur.sym(')')?;
        Ok(c)
    }

    fn definition(&mut self, cur: &mut Cursor) -> Result<(), ParseError> {
        let (first, first_col) = cur.ident()?;
        let mut outputs = vec![first];
        while cur.eat_sym(',') {
            outputs.push(cur.ident()?.0);
        }
        cur.sym('=')?;
        let is_command = matches!(
            cur.toks.get(cur.pos + 1),
            Some(Token {
                tok: Tok::Sym('('),
                ..
            })
        ) && cur.peek_ident().is_some();
        let step = if is_command {
            self.command(cur, outputs.len())?
        } else {
            let e = self.length_expr(cur)?;
            cur.end()?;
            Step::NumExpr(e)
        };
        self.program
            .push(StepEntry { outputs, step })
            .map_err(|e| construction_error(cur.line, first_col, e))
    }

    fn args(
        &self,
        cur: &mut Cursor,
        name: &str,
        name_col: usize,
        n: usize,
    ) -> Result<Vec<(String, usize)>, ParseError> {
        cur.sym('(')?;
        let mut out = Vec::new();
        if !cur.peek_sym(')') {
            loop {
                out.push(cur.ident()?);
                if !cur.eat_sym(',') {
                    break;
                }
            }
        }
        cur.sym(')')?;
        if out.len() != n {
            return Err(ParseError::new(
                cur.line,
                name_col,
                ParseErrorKind::Arity,
                format!("{name} takes {n} argument(s), found {}", out.len()),
            ));
        }
        for (l, col) in &out {
            self.check_label(cur, l, *col)?;
        }
        Ok(out)
    }

    fn command(&mut self, cur: &mut Cursor, n_out: usize) -> Result<Step, ParseError> {
        let (name, col) = cur.ident()?;
        let line = cur.line;
        let arity = |expected: usize| -> Result<(), ParseError> {
            if n_out != expected {
                Err(ParseError::new(
                    line,
                    col,
                    ParseErrorKind::Arity,
                    format!("{name} defines {expected} label(s), found {n_out}"),
                ))
            } else {
                Ok(())
            }
        };
        let step = match name.as_str() {
            "FreePoint" => {
                arity(1)?;
                self.args(cur, &name, col, 0)?;
                Step::FreePoint { hint: cur.hint()? }
            }
            "PointOn" => {
                arity(1)?;
                let a = self.args(cur, &name, col, 1)?;
                Step::PointOnLine {
                    line: a[0].0.clone(),
                    hint: cur.hint()?,
                }
            }
            "Midpoint" | "Line" | "PerpendicularBisector" | "Circle" | "Segment" => {
                arity(1)?;
                let a = self.args(cur, &name, col, 2)?;
                let (p, q) = (a[0].0.clone(), a[1].0.clone());
                match name.as_str() {
                    "Midpoint" => Step::Midpoint { a: p, b: q },
                    "Line" => Step::LineTwoPoints { a: p, b: q },
                    "PerpendicularBisector" => Step::PerpendicularBisector { a: p, b: q },
                    "Circle" => Step::CircleCenterThrough {
                        center: p,
                        through: q,
                    },
                    _ => Step::SegmentLength { a: p, b: q },
                }
            }
            "Square" => {
                arity(2)?;
                let a = self.args(cur, &name, col, 2)?;
                Step::Square {
                    a: a[0].0.clone(),
                    b: a[1].0.clone(),
                }
            }
            "Mirror" => {
                arity(1)?;
                let a = self.args(cur, &name, col, 2)?;
                let k = self.kind_at(cur, &a[1].0, a[1].1)?;
                if k.is_line_like() {
                    Step::ReflectAboutLine {
                        point: a[0].0.clone(),
                        line: a[1].0.clone(),
                    }
                } else {
                    Step::ReflectPoint {
                        point: a[0].0.clone(),
                        center: a[1].0.clone(),
                    }
                }
            }
            "PerpendicularLine" => {
                arity(1)?;
                let a = self.args(cur, &name, col, 2)?;
                Step::PerpendicularThrough {
                    point: a[0].0.clone(),
                    line: a[1].0.clone(),
                }
            }
            "Dilate" => {
                arity(1)?;
                cur.sym('(')?;
                let (point, pcol) = cur.ident()?;
                cur.sym(',')?;
                let factor = cur.signed_rational()?;
                cur.sym(',')?;
                let (center, ccol) = cur.ident()?;
                cur.sym(')')?;
                self.check_label(cur, &point, pcol)?;
                self.check_label(cur, &center, ccol)?;
                Step::Dilate {
                    point,
                    factor,
                    center,
                }
            }
            "Intersect" => {
                arity(1)?;
                let a = self.args(cur, &name, col, 2)?;
                let ka = self.kind_at(cur, &a[0].0, a[0].1)?;
                let kb = self.kind_at(cur, &a[1].0, a[1].1)?;
                let hint = cur.hint()?;
                let (x, y) = (a[0].0.clone(), a[1].0.clone());
                match (ka, kb) {
                    (p, q) if p.is_line_like() && q.is_line_like() => {
                        Step::IntersectLineLine { a: x, b: y, hint }
                    }
                    (p, ObjectKind::Circle) if p.is_line_like() => Step::IntersectLineCircle {
                        line: x,
                        circle: y,
                        hint,
                    },
                    (ObjectKind::Circle, q) if q.is_line_like() => Step::IntersectLineCircle {
                        line: y,
                        circle: x,
                        hint,
                    },
                    (ObjectKind::Circle, ObjectKind::Circle) => {
                        Step::IntersectCircleCircle { a: x, b: y, hint }
                    }
                    _ => {
                        return Err(ParseError::new(
                            cur.line,
                            a[0].1,
                            ParseErrorKind::WrongKind,
                            format!("cannot intersect a {ka} with a {kb}"),
                        ))
                    }
                }
            }
            "Equilateral" => {
                arity(1)?;
                let a = self.args(cur, &name, col, 2)?;
                Step::EquilateralVertex {
                    a: a[0].0.clone(),
                    b: a[1].0.clone(),
                    hint: cur.hint()?,
                }
            }
            _ => {
                return Err(ParseError::new(
                    cur.line,
                    col,
                    ParseErrorKind::UnknownCommand,
                    format!("unknown command {name}"),
                )
                .with_expected(COMMANDS))
            }
        };
        cur.end()?;
        Ok(step)
    }
}

pub(super) const COMMANDS: &[&str] = &[
    "FreePoint",
    "PointOn",
    "Midpoint",
    "Mirror",
    "Dilate",
    "Line",
    "PerpendicularBisector",
    "PerpendicularLine",
    "Circle",
    "Intersect",
    "Square",
    "Equilateral",
    "Segment",
];

/// A standalone number such as `4/7*sqrt(21)` or `3/8 - 1/8*sqrt(5)`.
pub fn parse_number(text: &str) -> Result<AlgebraicNumber, ParseError> {
    if text.len() > MAX_LINE_LEN || text.contains('\n') {
        return Err(ParseError::new(
            1,
            1,
            ParseErrorKind::Syntax,
            "expected a single-line number",
        ));
    }
    let toks = lex(text, 1)?;
    let mut cur = Cursor {
        toks: &toks,
        pos: 0,
        line: 1,
        line_len: text.chars().count(),
    };
    let v = cur.signed_number()?;
    if cur.peek().is_some() {
        return Err(cur.expected(&["end of input"]));
    }
    Ok(v)
}

pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut p = Parser {
        program: ConstructionProgram::default(),
        queries: Vec::new(),
        metadata: Metadata::default(),
    };
    for (i, line) in text.lines().enumerate() {
        p.line(i + 1, line)?;
    }
    Ok(Script {
        source: text.to_string(),
        program: p.program,
        queries: p.queries.into_iter().map(|(_, q)| q).collect(),
        metadata: p.metadata,
    })
}
