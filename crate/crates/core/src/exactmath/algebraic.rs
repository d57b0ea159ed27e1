//! Rational numbers and real quadratic surds `(p + q·√d) / r`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::poly::MultiPoly;
use super::rational::{self, Rational};
use super::ExactError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlgebraicNumber {
    Rational(Rational),
    /// `(p + q·√d) / r` with `r > 0`, `q ≠ 0`, `d > 1` square-free and
    /// `gcd(p, q, r) = 1`.
    QuadraticSurd {
        p: BigInt,
        q: BigInt,
        r: BigInt,
        d: BigInt,
    },
}

/// A positive root reported by root extraction: either a closed form or a
/// numeric enclosure of a root of a factor that was not split further.
#[derive(Debug, Clone, PartialEq)]
pub enum RootValue {
    Exact(AlgebraicNumber),
    NonSurd {
        approx: f64,
        lower: f64,
        upper: f64,
        factor: MultiPoly,
    },
}

impl RootValue {
    pub fn approx(&self) -> f64 {
        match self {
            RootValue::Exact(a) => a.to_f64(),
            RootValue::NonSurd { approx, .. } => *approx,
        }
    }

    pub fn exact(&self) -> Option<&AlgebraicNumber> {
        match self {
            RootValue::Exact(a) => Some(a),
            RootValue::NonSurd { .. } => None,
        }
    }
}

impl AlgebraicNumber {
    pub fn rational(r: Rational) -> Self {
        AlgebraicNumber::Rational(r)
    }

    /// Builds `(p + q·√radicand) / r`, pulling square factors out of the
    /// radicand and collapsing to a rational when nothing irrational is left.
    pub fn surd(p: BigInt, q: BigInt, r: BigInt, radicand: BigInt) -> Result<Self, ExactError> {
        if r.is_zero() {
            return Err(ExactError::Domain("surd with zero denominator".into()));
        }
        if radicand.is_negative() {
            return Err(ExactError::Domain("negative radicand".into()));
        }
        let (outside, d) = split_square(&radicand);
        let q = q * outside;
        if q.is_zero() || d.is_zero() {
            return Ok(AlgebraicNumber::Rational(Rational::new(p, r)));
        }
        if d.is_one() {
            return Ok(AlgebraicNumber::Rational(Rational::new(p + q, r)));
        }
        let (mut p, mut q, mut r) = (p, q, r);
        if r.is_negative() {
            p = -p;
            q = -q;
            r = -r;
        }
        let g = p.gcd(&q).gcd(&r);
        if !g.is_one() {
            p /= &g;
            q /= &g;
            r /= &g;
        }
        Ok(AlgebraicNumber::QuadraticSurd { p, q, r, d })
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            AlgebraicNumber::Rational(v) => rational::to_f64(v),
            AlgebraicNumber::QuadraticSurd { p, q, r, d } => {
                let sd = big_to_f64(d).sqrt();
                (big_to_f64(p) + big_to_f64(q) * sd) / big_to_f64(r)
            }
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, AlgebraicNumber::Rational(_))
    }

    /// Primitive integer polynomial (positive leading coefficient) in one
    /// variable with this number as a root, of least degree.
    pub fn minimal_polynomial(&self) -> MultiPoly {
        match self {
            AlgebraicNumber::Rational(v) => {
                // den*x - num
                MultiPoly::from_univariate(&[
                    -Rational::from_integer(v.numer().clone()),
                    Rational::from_integer(v.denom().clone()),
                ])
            }
            AlgebraicNumber::QuadraticSurd { p, q, r, d } => {
                // (r x - p)^2 = q^2 d
                let a = r * r;
                let b = -(BigInt::from(2) * r * p);
                let c = p * p - q * q * d;
                MultiPoly::from_univariate(&[
                    Rational::from_integer(c),
                    Rational::from_integer(b),
                    Rational::from_integer(a),
                ])
                .normalized()
            }
        }
    }

    /// `self²` when it is rational, i.e. the surd has `p = 0`.
    pub fn square_if_rational(&self) -> Option<Rational> {
        match self {
            AlgebraicNumber::Rational(v) => Some(v * v),
            AlgebraicNumber::QuadraticSurd { p, q, r, d } if p.is_zero() => {
                Some(Rational::new(q * q * d, r * r))
            }
            AlgebraicNumber::QuadraticSurd { .. } => None,
        }
    }

    /// The number as an element `a + b·√d` of `Q(√d)` (with `d = 1` for
    /// rationals).
    pub fn as_field_element(&self) -> QuadElem {
        match self {
            AlgebraicNumber::Rational(v) => QuadElem {
                a: v.clone(),
                b: Rational::zero(),
                d: BigInt::one(),
            },
            AlgebraicNumber::QuadraticSurd { p, q, r, d } => QuadElem {
                a: Rational::new(p.clone(), r.clone()),
                b: Rational::new(q.clone(), r.clone()),
                d: d.clone(),
            },
        }
    }

    /// Evaluates a univariate polynomial at this number exactly in `Q(√d)`.
    pub fn eval_exact(&self, f: &MultiPoly) -> Result<QuadElem, ExactError> {
        let coeffs = f
            .univariate_coeffs(0)
            .ok_or_else(|| ExactError::Structural("expected a univariate polynomial".into()))?;
        let x = self.as_field_element();
        let mut acc = QuadElem::from_rational(Rational::zero(), x.d.clone());
        for c in coeffs.iter().rev() {
            acc = acc.mul(&x).add(&QuadElem::from_rational(c.clone(), x.d.clone()));
        }
        Ok(acc)
    }

    /// Serialisable record `{kind, p, q, r, d}`; rationals use `q = 0, d = 1`.
    pub fn record(&self) -> SurdRecord {
        match self {
            AlgebraicNumber::Rational(v) => SurdRecord {
                kind: "rational".into(),
                p: v.numer().to_string(),
                q: "0".into(),
                r: v.denom().to_string(),
                d: "1".into(),
            },
            AlgebraicNumber::QuadraticSurd { p, q, r, d } => SurdRecord {
                kind: "quadratic_surd".into(),
                p: p.to_string(),
                q: q.to_string(),
                r: r.to_string(),
                d: d.to_string(),
            },
        }
    }

    pub fn from_record(rec: &SurdRecord) -> Result<Self, ExactError> {
        let parse = |s: &str| -> Result<BigInt, ExactError> {
            s.trim()
                .parse()
                .map_err(|_| ExactError::Domain(format!("bad integer '{s}' in surd record")))
        };
        let (p, q, r, d) = (parse(&rec.p)?, parse(&rec.q)?, parse(&rec.r)?, parse(&rec.d)?);
        match rec.kind.as_str() {
            "rational" => {
                if r.is_zero() {
                    return Err(ExactError::Domain("zero denominator".into()));
                }
                Ok(AlgebraicNumber::Rational(Rational::new(p, r)))
            }
            "quadratic_surd" => AlgebraicNumber::surd(p, q, r, d),
            other => Err(ExactError::Domain(format!("unknown number kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct SurdRecord {
    pub kind: String,
    pub p: String,
    pub q: String,
    pub r: String,
    pub d: String,
}

impl fmt::Display for AlgebraicNumber {
    /// Plain-text form such as `253/34`, `8*sqrt(2)`, `4/7*sqrt(21)` or
    /// `3/8 - 1/8*sqrt(5)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraicNumber::Rational(v) => write!(f, "{v}"),
            AlgebraicNumber::QuadraticSurd { p, q, r, d } => {
                let a = Rational::new(p.clone(), r.clone());
                let b = Rational::new(q.clone(), r.clone());
                let mag = b.abs();
                let surd = if mag.is_one() {
                    format!("sqrt({d})")
                } else {
                    format!("{mag}*sqrt({d})")
                };
                if a.is_zero() {
                    if b.is_negative() {
                        write!(f, "-{surd}")
                    } else {
                        write!(f, "{surd}")
                    }
                } else {
                    let sign = if b.is_negative() { '-' } else { '+' };
                    write!(f, "{a} {sign} {surd}")
                }
            }
        }
    }
}

/// Element `a + b·√d` of a real quadratic field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuadElem {
    pub a: Rational,
    pub b: Rational,
    pub d: BigInt,
}

impl QuadElem {
    pub fn from_rational(a: Rational, d: BigInt) -> Self {
        Self {
            a,
            b: Rational::zero(),
            d,
        }
    }

    pub fn add(&self, o: &QuadElem) -> QuadElem {
        QuadElem {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
            d: self.d.clone(),
        }
    }

    pub fn mul(&self, o: &QuadElem) -> QuadElem {
        let d = Rational::from_integer(self.d.clone());
        QuadElem {
            a: &self.a * &o.a + &self.b * &o.b * d,
            b: &self.a * &o.b + &self.b * &o.a,
            d: self.d.clone(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

fn big_to_f64(v: &BigInt) -> f64 {
    v.to_f64().unwrap_or(f64::NAN)
}

const TRIAL_LIMIT: u64 = 100_000;

/// Writes `n = k² · d` with `d` square-free (for `n ≥ 0`). Trial division up
/// to a fixed bound; a cofactor that is a perfect square is also absorbed.
pub fn split_square(n: &BigInt) -> (BigInt, BigInt) {
    if n.is_zero() {
        return (BigInt::zero(), BigInt::zero());
    }
    let mut rest = n.abs();
    let mut outside = BigInt::one();
    let mut inside = BigInt::one();
    let mut p: u64 = 2;
    while p <= TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > rest {
            break;
        }
        let mut count = 0u32;
        while (&rest % &bp).is_zero() {
            rest /= &bp;
            count += 1;
        }
        if count > 0 {
            outside *= bp.pow(count / 2);
            if count % 2 == 1 {
                inside *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > BigInt::one() {
        let s = rest.sqrt();
        if &s * &s == rest {
            outside *= s;
        } else {
            inside *= rest;
        }
    }
    (outside, inside)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    #[test]
    fn surd_normalisation() {
        // sqrt(128) = 8*sqrt(2)
        let s = AlgebraicNumber::surd(b(0), b(1), b(1), b(128)).unwrap();
        assert_eq!(
            s,
            AlgebraicNumber::QuadraticSurd {
                p: b(0),
                q: b(8),
                r: b(1),
                d: b(2)
            }
        );
        assert_eq!(s.to_string(), "8*sqrt(2)");
        // (6 + 2 sqrt 5)/16 = (3 + sqrt 5)/8
        let t = AlgebraicNumber::surd(b(6), b(2), b(16), b(5)).unwrap();
        assert_eq!(t.to_string(), "3/8 + 1/8*sqrt(5)");
        assert_eq!(
            AlgebraicNumber::surd(b(1), b(3), b(2), b(4)).unwrap(),
            AlgebraicNumber::Rational(Rational::new(b(7), b(2)))
        );
    }

    #[test]
    fn display_forms() {
        let s = AlgebraicNumber::surd(b(0), b(4), b(7), b(21)).unwrap();
        assert_eq!(s.to_string(), "4/7*sqrt(21)");
        let s = AlgebraicNumber::surd(b(0), b(1), b(2), b(10)).unwrap();
        assert_eq!(s.to_string(), "1/2*sqrt(10)");
        let s = AlgebraicNumber::surd(b(3), b(-1), b(8), b(5)).unwrap();
        assert_eq!(s.to_string(), "3/8 - 1/8*sqrt(5)");
    }

    #[test]
    fn minimal_polynomials_vanish() {
        for n in [
            AlgebraicNumber::surd(b(0), b(8), b(1), b(2)).unwrap(),
            AlgebraicNumber::surd(b(3), b(1), b(8), b(5)).unwrap(),
            AlgebraicNumber::surd(b(0), b(4), b(7), b(21)).unwrap(),
            AlgebraicNumber::Rational(Rational::new(b(253), b(34))),
        ] {
            let m = n.minimal_polynomial();
            assert!(n.eval_exact(&m).unwrap().is_zero(), "{n}");
        }
        let m = AlgebraicNumber::surd(b(0), b(8), b(1), b(2))
            .unwrap()
            .minimal_polynomial();
        assert_eq!(m, MultiPoly::from_univariate_ints(&[-128, 0, 1]));
    }

    #[test]
    fn squares() {
        let s = AlgebraicNumber::surd(b(0), b(1), b(2), b(10)).unwrap();
        assert_eq!(s.square_if_rational(), Some(Rational::new(b(5), b(2))));
        let t = AlgebraicNumber::surd(b(3), b(1), b(8), b(5)).unwrap();
        assert_eq!(t.square_if_rational(), None);
    }

    #[test]
    fn split_square_cases() {
        assert_eq!(split_square(&b(128)), (b(8), b(2)));
        assert_eq!(split_square(&b(84)), (b(2), b(21)));
        assert_eq!(split_square(&b(1)), (b(1), b(1)));
        let big = BigInt::from(1_000_003u64) * BigInt::from(1_000_003u64) * b(3);
        assert_eq!(split_square(&big), (BigInt::from(1_000_003u64), b(3)));
    }

    #[test]
    fn record_round_trip() {
        let s = AlgebraicNumber::surd(b(0), b(4), b(7), b(21)).unwrap();
        assert_eq!(AlgebraicNumber::from_record(&s.record()).unwrap(), s);
        let r = AlgebraicNumber::Rational(Rational::new(b(253), b(34)));
        assert_eq!(AlgebraicNumber::from_record(&r.record()).unwrap(), r);
    }
}
