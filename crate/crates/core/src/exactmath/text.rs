//! Parser for the polynomial text form used in fixtures and expected answers.
//!
//! Accepts sums and products of rational numbers, variable names, powers with
//! small non-negative integer exponents and parenthesised sub-expressions,
//! e.g. `64*x^5 - 128*x^4 + 80*x^3 - 17*x^2 + x` or `(v0 - 1)^2*v1`.

use num_bigint::BigInt;
use num_traits::Zero;

use super::poly::MultiPoly;
use super::rational::Rational;
use super::ExactError;

const MAX_EXPONENT: u32 = 64;
const MAX_DEPTH: usize = 64;
const MAX_TERMS: usize = 20_000;

/// Parses `text` with the given variable names. Unknown identifiers are an
/// error.
pub fn parse_poly(text: &str, names: &[&str]) -> Result<MultiPoly, ExactError> {
    let mut p = Parser {
        src: text.as_bytes(),
        pos: 0,
        names,
        depth: 0,
    };
    let out = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(out)
}

/// Parses a univariate polynomial in a single named variable.
pub fn parse_univariate(text: &str, var: &str) -> Result<MultiPoly, ExactError> {
    parse_poly(text, &[var])
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    names: &'a [&'a str],
    depth: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> ExactError {
        ExactError::Parse {
            offset: self.pos,
            message: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn guard(&self, p: &MultiPoly) -> Result<(), ExactError> {
        if p.len() > MAX_TERMS {
            return Err(self.err("expression expands to too many terms"));
        }
        Ok(())
    }

    fn expr(&mut self) -> Result<MultiPoly, ExactError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(self.err("expression nested too deeply"));
        }
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                -self.term()?
            }
            Some(b'+') => {
                self.pos += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
            self.guard(&acc)?;
        }
        self.depth -= 1;
        Ok(acc)
    }

    /// Keeps every accepted polynomial printable as parseable text.
    fn degree_guard(&self, p: &MultiPoly) -> Result<(), ExactError> {
        if (0..self.names.len()).any(|v| p.degree_in(v) > MAX_EXPONENT) {
            return Err(self.err("degree too large"));
        }
        Ok(())
    }

    fn term(&mut self) -> Result<MultiPoly, ExactError> {
        let mut acc = self.power()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let rhs = self.power()?;
                    if acc.len().saturating_mul(rhs.len()) > MAX_TERMS {
                        return Err(self.err("expression expands to too many terms"));
                    }
                    acc = &acc * &rhs;
                    self.degree_guard(&acc)?;
                }
                Some(b'/') => {
                    self.pos += 1;
                    let d = self.number()?;
                    if d.is_zero() {
                        return Err(self.err("division by zero"));
                    }
                    acc = acc.scale(&d.recip());
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn power(&mut self) -> Result<MultiPoly, ExactError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
            let k: u32 = digits
                .parse()
                .map_err(|_| self.err("expected a non-negative integer exponent"))?;
            if k > MAX_EXPONENT {
                return Err(self.err("exponent too large"));
            }
            let mut acc = MultiPoly::one(self.names.len());
            for _ in 0..k {
                if acc.len().saturating_mul(base.len()) > MAX_TERMS {
                    return Err(self.err("expression expands to too many terms"));
                }
                acc = &acc * &base;
                self.degree_guard(&acc)?;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<MultiPoly, ExactError> {
        let n = self.names.len();
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let v = self.integer()?;
                Ok(MultiPoly::constant(n, v))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let ident = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
                match self.names.iter().position(|&m| m == ident) {
                    Some(i) => Ok(MultiPoly::var(n, i)),
                    None => {
                        self.pos = start;
                        Err(self.err(&format!("unknown variable '{ident}'")))
                    }
                }
            }
            Some(_) => Err(self.err("expected a number, variable or '('")),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn integer(&mut self) -> Result<Rational, ExactError> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected digits"));
        }
        if self.pos - start > 4096 {
            return Err(self.err("number literal too long"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap_or("0");
        let v: BigInt = digits.parse().map_err(|_| self.err("bad integer"))?;
        Ok(Rational::from_integer(v))
    }

    fn number(&mut self) -> Result<Rational, ExactError> {
        self.skip_ws();
        self.integer()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::order::MonomialOrder;

    #[test]
    fn parses_quintic() {
        let p = parse_univariate("64*x^5 - 128*x^4 + 80*x^3 - 17*x^2 + x", "x").unwrap();
        assert_eq!(p, MultiPoly::from_univariate_ints(&[0, 1, -17, 80, -128, 64]));
    }

    #[test]
    fn parses_products_and_fractions() {
        let p = parse_poly("(x - 1)^2*(x + 2)", &["x"]).unwrap();
        assert_eq!(p, MultiPoly::from_univariate_ints(&[2, -3, 0, 1]));
        let q = parse_poly("3/4*a*b - 2", &["a", "b"]).unwrap();
        assert_eq!(q.canonical_text(), "3/4*v0*v1 - 2");
    }

    #[test]
    fn round_trips_display() {
        let names = ["x", "y", "z"];
        let p = parse_poly("-x^2*y + 7/3*z - y^3 + 1", &names).unwrap();
        let names_s: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let txt = p.to_text(&names_s, &MonomialOrder::grevlex(3));
        assert_eq!(parse_poly(&txt, &names).unwrap(), p);
    }

    #[test]
    fn errors_have_offsets() {
        match parse_poly("x + q", &["x"]) {
            Err(ExactError::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("{other:?}"),
        }
        assert!(parse_poly("x^999", &["x"]).is_err());
        assert!(parse_poly("x^6*x^60", &["x"]).is_err());
        assert!(parse_poly("(x^8)^9", &["x"]).is_err());
        assert!(parse_poly("x^64*y^64", &["x", "y"]).is_ok());
        assert!(parse_poly("x/0", &["x"]).is_err());
        assert!(parse_poly("", &["x"]).is_err());
        assert!(parse_poly("((((x", &["x"]).is_err());
    }
}
