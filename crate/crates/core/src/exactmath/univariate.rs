//! Univariate post-processing of eliminated polynomials: square-free parts,
//! partial factorisation over Q, exact real-root isolation with Sturm
//! sequences, and extraction of rational and quadratic-surd roots.

use num_bigint::BigInt;

use num_traits::{One, Signed, Zero};

use super::algebraic::{AlgebraicNumber, RootValue};
use super::poly::MultiPoly;
use super::rational::{self, Rational};
use super::ExactError;

pub const DEFAULT_ROOT_TOL: f64 = 1e-9;

/// Dense coefficients, lowest degree first, no trailing zeros.
type Dense = Vec<Rational>;

fn trim(mut p: Dense) -> Dense {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn degree(p: &Dense) -> usize {
    p.len().saturating_sub(1)
}

fn dense_of(f: &MultiPoly) -> Result<Dense, ExactError> {
    if f.nvars() != 1 {
        return Err(ExactError::Structural(format!(
            "expected a univariate polynomial, got {} variables",
            f.nvars()
        )));
    }
    Ok(trim(f.univariate_coeffs(0).expect("one variable")))
}

fn multi_of(p: &Dense) -> MultiPoly {
    MultiPoly::from_univariate(p)
}

fn sub(a: &Dense, b: &Dense) -> Dense {
    let n = a.len().max(b.len());
    let mut out = vec![Rational::zero(); n];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    trim(out)
}

fn mul(a: &Dense, b: &Dense) -> Dense {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

fn divrem(a: &Dense, b: &Dense) -> (Dense, Dense) {
    assert!(!b.is_empty(), "division by zero polynomial");
    let mut r = a.clone();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let lb = b.last().unwrap().clone();
    let mut q = vec![Rational::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() / &lb;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] -= &c * bc;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

fn derivative(p: &Dense) -> Dense {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
            .collect(),
    )
}

fn monic(p: &Dense) -> Dense {
    match p.last() {
        Some(l) => {
            let inv = l.recip();
            p.iter().map(|c| c * &inv).collect()
        }
        None => Vec::new(),
    }
}

/// Primitive integer form with positive leading coefficient.
fn primitive(p: &Dense) -> Dense {
    if p.is_empty() {
        return Vec::new();
    }
    let den = rational::denominator_lcm(p.iter());
    let scaled: Vec<Rational> = p
        .iter()
        .map(|c| c * Rational::from_integer(den.clone()))
        .collect();
    let mut g = rational::numerator_gcd(scaled.iter());
    if scaled.last().unwrap().is_negative() {
        g = -g;
    }
    let gr = Rational::from_integer(g);
    scaled.iter().map(|c| c / &gr).collect()
}

fn gcd(a: &Dense, b: &Dense) -> Dense {
    let (mut x, mut y) = (a.clone(), b.clone());
    while !y.is_empty() {
        let (_, r) = divrem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    monic(&x)
}

fn eval(p: &Dense, x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

fn eval_f64(p: &Dense, x: f64) -> f64 {
    p.iter().rev().fold(0.0, |acc, c| acc * x + rational::to_f64(c))
}

/// Product of the distinct irreducible factors of `f`, primitive with a
/// positive leading coefficient.
pub fn squarefree_part(f: &MultiPoly) -> Result<MultiPoly, ExactError> {
    let p = dense_of(f)?;
    if p.is_empty() {
        return Err(ExactError::Domain(
            "square-free part of the zero polynomial".into(),
        ));
    }
    Ok(multi_of(&primitive(&squarefree_dense(&p))))
}

fn squarefree_dense(p: &Dense) -> Dense {
    if degree(p) == 0 {
        return vec![Rational::one()];
    }
    let g = gcd(p, &derivative(p));
    divrem(p, &g).0
}

/// Yun's square-free decomposition: `(factor, multiplicity)` pairs of monic
/// square-free, pairwise coprime polynomials.
fn yun(p: &Dense) -> Vec<(Dense, u32)> {
    let mut out = Vec::new();
    if degree(p) == 0 {
        return out;
    }
    let dp = derivative(p);
    let b = gcd(p, &dp);
    let mut c = divrem(p, &b).0;
    let mut d = sub(&divrem(&dp, &b).0, &derivative(&c));
    let mut i = 1;
    while degree(&c) > 0 {
        let a = gcd(&c, &d);
        c = divrem(&c, &a).0;
        d = sub(&divrem(&d, &a).0, &derivative(&c));
        if degree(&a) > 0 {
            out.push((monic(&a), i));
        }
        i += 1;
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    /// Rational scalar with `content * Π factorᵐ = f`.
    pub content: Rational,
    /// Primitive integer factors with positive leading coefficient.
    pub factors: Vec<(MultiPoly, u32)>,
    /// False when some factor of degree ≥ 3 could not be split.
    pub fully_factored: bool,
}

impl Factorization {
    pub fn expand(&self) -> MultiPoly {
        let mut acc = MultiPoly::constant(1, self.content.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m);
        }
        acc
    }
}

/// Partial factorisation over Q: rational roots become linear factors,
/// quadratic factors are split off where the real roots allow it, and any
/// remaining factor of degree ≥ 3 is returned whole with
/// `fully_factored = false`.
pub fn factor_univariate(f: &MultiPoly) -> Result<Factorization, ExactError> {
    let p = dense_of(f)?;
    if p.is_empty() {
        return Err(ExactError::Domain("factorisation of the zero polynomial".into()));
    }
    let mut factors: Vec<(Dense, u32)> = Vec::new();
    let mut fully = true;
    for (piece, mult) in yun(&p) {
        let (parts, complete) = split_squarefree(&piece);
        fully &= complete;
        factors.extend(parts.into_iter().map(|q| (q, mult)));
    }
    factors.sort_by(|a, b| {
        degree(&a.0)
            .cmp(&degree(&b.0))
            .then_with(|| cmp_coeffs(&a.0, &b.0))
    });
    // content = f / Π factors
    let mut prod: Dense = vec![Rational::one()];
    for (q, m) in &factors {
        for _ in 0..*m {
            prod = mul(&prod, q);
        }
    }
    let content = p.last().unwrap() / prod.last().unwrap();
    Ok(Factorization {
        content,
        factors: factors.iter().map(|(q, m)| (multi_of(q), *m)).collect(),
        fully_factored: fully,
    })
}

/// Orders equal-degree factors by coefficient magnitude from the constant
/// term upwards, positive before negative.
fn cmp_coeffs(a: &Dense, b: &Dense) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        let key = |r: &Rational| (r.abs(), r.is_negative());
        match key(x).cmp(&key(y)) {
            std::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Splits a square-free polynomial into primitive integer factors.
fn split_squarefree(p: &Dense) -> (Vec<Dense>, bool) {
    let mut rest = primitive(p);
    let mut out = Vec::new();
    if degree(&rest) == 0 {
        return (out, true);
    }
    // Rational roots.
    for root in rational_roots(&rest) {
        let lin = primitive(&vec![-root.clone(), Rational::one()]);
        let (q, r) = divrem(&rest, &lin);
        debug_assert!(r.is_empty());
        rest = primitive(&q);
        out.push(lin);
    }
    // Quadratic factors from pairs of real roots.
    while degree(&rest) > 2 {
        match real_quadratic_factor(&rest) {
            Some(q) => {
                let (quot, r) = divrem(&rest, &q);
                debug_assert!(r.is_empty());
                rest = primitive(&quot);
                out.push(q);
            }
            None => break,
        }
    }
    let complete = degree(&rest) <= 2;
    if degree(&rest) > 0 {
        out.push(rest);
    }
    (out, complete)
}

fn leading_integer(p: &Dense) -> BigInt {
    primitive(p).last().unwrap().numer().abs()
}

/// All rational roots of a square-free polynomial, ascending.
fn rational_roots(p: &Dense) -> Vec<Rational> {
    let prim = primitive(p);
    let lead = leading_integer(&prim);
    let mut out = Vec::new();
    if prim[0].is_zero() {
        out.push(Rational::zero());
    }
    let sturm = SturmChain::new(&prim);
    // Denominators of rational roots divide the leading coefficient, so two
    // candidates differ by at least 1/lead²; refining an isolating interval
    // below half that leaves at most one candidate, the simplest fraction.
    let width = Rational::new(BigInt::one(), BigInt::from(2) * &lead * &lead);
    for iv in sturm.isolate() {
        if iv.hi.is_zero() && prim[0].is_zero() {
            continue;
        }
        let iv = sturm.refine(iv, &width);
        if let Some(c) = simplest_in(&iv.lo, &iv.hi) {
            if eval(&prim, &c).is_zero() && !out.contains(&c) {
                out.push(c);
            }
        }
    }
    out.sort();
    out
}

/// Tries to find a rational quadratic factor whose roots are two real roots
/// of `p` (square-free, no rational roots).
fn real_quadratic_factor(p: &Dense) -> Option<Dense> {
    let lead = leading_integer(p);
    let sturm = SturmChain::new(p);
    let roots = sturm.isolate();
    if roots.len() < 2 {
        return None;
    }
    // A primitive factor a x² + b x + c has a | lead, so the monic
    // coefficients have denominators dividing lead.
    let bound = {
        let mut m = Rational::one();
        for c in p.iter() {
            m = m.max(c.abs());
        }
        m / Rational::from_integer(lead.clone()) + Rational::one()
    };
    let gap = Rational::new(BigInt::one(), BigInt::from(4) * &lead * &lead);
    let width = (&gap / (Rational::from_integer(BigInt::from(8)) * &bound)).min(gap.clone());
    let refined: Vec<Interval> = roots.into_iter().map(|iv| sturm.refine(iv, &width)).collect();
    for i in 0..refined.len() {
        for j in (i + 1)..refined.len() {
            let (a, b) = (&refined[i], &refined[j]);
            let s_lo = &a.lo + &b.lo;
            let s_hi = &a.hi + &b.hi;
            let prods = [&a.lo * &b.lo, &a.lo * &b.hi, &a.hi * &b.lo, &a.hi * &b.hi];
            let p_lo = prods.iter().min().unwrap().clone();
            let p_hi = prods.iter().max().unwrap().clone();
            let (Some(s), Some(pr)) = (simplest_in(&s_lo, &s_hi), simplest_in(&p_lo, &p_hi)) else {
                continue;
            };
            let q = primitive(&vec![pr, -s, Rational::one()]);
            let (_, r) = divrem(p, &q);
            if r.is_empty() {
                return Some(q);
            }
        }
    }
    None
}

/// The fraction with the smallest denominator in the closed interval.
fn simplest_in(lo: &Rational, hi: &Rational) -> Option<Rational> {
    if lo > hi {
        return None;
    }
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Some(Rational::zero());
    }
    if hi.is_negative() {
        return simplest_in(&-hi, &-lo).map(|r| -r);
    }
    Some(simplest_positive(lo.clone(), hi.clone()))
}

fn simplest_positive(lo: Rational, hi: Rational) -> Rational {
    let fl = lo.floor();
    if fl == lo {
        return lo;
    }
    if fl.clone() + Rational::one() <= hi {
        return fl + Rational::one();
    }
    // Both in (fl, fl+1): recurse on reciprocals of the fractional parts.
    let a = (&hi - &fl).recip();
    let b = (&lo - &fl).recip();
    fl + simplest_positive(a, b).recip()
}

#[derive(Debug, Clone)]
struct Interval {
    /// Open lower end.
    lo: Rational,
    /// Closed upper end.
    hi: Rational,
}

/// Sturm chain of a square-free polynomial; counts distinct real roots in
/// half-open intervals `(lo, hi]`.
struct SturmChain {
    chain: Vec<Dense>,
}

impl SturmChain {
    fn new(p: &Dense) -> Self {
        let p0 = primitive(p);
        let mut chain = vec![p0.clone()];
        let d = primitive(&derivative(&p0));
        if !d.is_empty() {
            chain.push(d);
            loop {
                let n = chain.len();
                let (_, r) = divrem(&chain[n - 2], &chain[n - 1]);
                if r.is_empty() {
                    break;
                }
                // -rem scaled by a positive constant.
                let neg: Dense = r.iter().map(|c| -c).collect();
                chain.push(primitive_keep_sign(&neg));
            }
        }
        Self { chain }
    }

    fn variations_at(&self, x: &Rational) -> usize {
        let signs = self.chain.iter().map(|q| {
            let v = eval(q, x);
            if v.is_zero() {
                0
            } else if v.is_positive() {
                1
            } else {
                -1
            }
        });
        count_variations(signs)
    }

    fn variations_at_infinity(&self, positive: bool) -> usize {
        let signs = self.chain.iter().map(|q| {
            let l = q.last().map(|c| c.is_positive()).unwrap_or(true);
            let odd = degree(q) % 2 == 1;
            if positive || !odd {
                if l {
                    1
                } else {
                    -1
                }
            } else if l {
                -1
            } else {
                1
            }
        });
        count_variations(signs)
    }

    fn count(&self, iv: &Interval) -> usize {
        self.variations_at(&iv.lo)
            .saturating_sub(self.variations_at(&iv.hi))
    }

    fn total(&self) -> usize {
        self.variations_at_infinity(false)
            .saturating_sub(self.variations_at_infinity(true))
    }

    /// Disjoint half-open intervals each containing exactly one real root,
    /// ascending.
    fn isolate(&self) -> Vec<Interval> {
        let p = &self.chain[0];
        if degree(p) == 0 {
            return Vec::new();
        }
        let bound = cauchy_bound(p);
        let mut out = Vec::new();
        let mut stack = vec![Interval {
            lo: -bound.clone(),
            hi: bound,
        }];
        while let Some(iv) = stack.pop() {
            match self.count(&iv) {
                0 => {}
                1 => out.push(iv),
                _ => {
                    let mid = (&iv.lo + &iv.hi) / Rational::from_integer(BigInt::from(2));
                    stack.push(Interval {
                        lo: iv.lo.clone(),
                        hi: mid.clone(),
                    });
                    stack.push(Interval { lo: mid, hi: iv.hi });
                }
            }
        }
        out.sort_by(|a, b| a.lo.cmp(&b.lo));
        out
    }

    /// Bisects an isolating interval until its width is at most `width`.
    fn refine(&self, mut iv: Interval, width: &Rational) -> Interval {
        let p = &self.chain[0];
        let two = Rational::from_integer(BigInt::from(2));
        while &(&iv.hi - &iv.lo) > width {
            if eval(p, &iv.hi).is_zero() {
                // Exact root at the closed end.
                return Interval {
                    lo: &iv.hi - width / &two,
                    hi: iv.hi,
                };
            }
            let mid = (&iv.lo + &iv.hi) / &two;
            let left = Interval {
                lo: iv.lo.clone(),
                hi: mid.clone(),
            };
            // Roots are simple, so a sign change brackets the root unless the
            // open end is itself a (neighbouring) root.
            let s_lo = eval(p, &iv.lo);
            let in_left = if s_lo.is_zero() {
                self.count(&left) == 1
            } else {
                let s_mid = eval(p, &mid);
                s_mid.is_zero() || s_mid.is_negative() != s_lo.is_negative()
            };
            if in_left {
                iv = left;
            } else {
                iv = Interval { lo: mid, hi: iv.hi };
            }
        }
        iv
    }
}

fn primitive_keep_sign(p: &Dense) -> Dense {
    let prim = primitive(p);
    match (p.last(), prim.last()) {
        (Some(a), Some(b)) if a.is_negative() != b.is_negative() => prim.into_iter().map(|c| -c).collect(),
        _ => prim,
    }
}

fn count_variations(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

/// `1 + max |aᵢ / aₙ|`, strictly larger than every root's magnitude.
fn cauchy_bound(p: &Dense) -> Rational {
    let lead = p.last().unwrap().abs();
    let mut m = Rational::zero();
    for c in &p[..p.len() - 1] {
        m = m.max(c.abs() / &lead);
    }
    m + Rational::one()
}

/// Number of distinct real roots of `f` (via a Sturm sequence).
pub fn sturm_root_count(f: &MultiPoly) -> Result<usize, ExactError> {
    let p = dense_of(f)?;
    if p.is_empty() {
        return Err(ExactError::Domain("root count of the zero polynomial".into()));
    }
    let sq = squarefree_dense(&p);
    Ok(SturmChain::new(&sq).total())
}

/// All distinct real roots of `f`, ascending, each within `tol`.
///
/// Roots are bracketed on the Cauchy bound by bisection with exact sign
/// counts, then each bracket is bisected until narrower than `tol`.
pub fn real_roots_numeric(f: &MultiPoly, tol: f64) -> Result<Vec<f64>, ExactError> {
    let p = dense_of(f)?;
    if p.is_empty() {
        return Err(ExactError::Domain("roots of the zero polynomial".into()));
    }
    let sq = squarefree_dense(&p);
    Ok(real_root_intervals(&sq, tol)
        .into_iter()
        .map(|(lo, hi)| 0.5 * (lo + hi))
        .collect())
}

fn real_root_intervals(sq: &Dense, tol: f64) -> Vec<(f64, f64)> {
    let sturm = SturmChain::new(sq);
    let tol = if tol.is_finite() && tol > 0.0 {
        tol
    } else {
        DEFAULT_ROOT_TOL
    };
    let width = rational::from_f64_bounded(tol, i64::MAX / 4)
        .max(Rational::new(BigInt::one(), BigInt::from(2).pow(200)));
    let width = if width.is_positive() {
        width
    } else {
        Rational::new(BigInt::one(), BigInt::from(1u64 << 40))
    };
    // Exact bisection down to a coarse width, then floating-point bisection.
    let coarse = Rational::new(BigInt::one(), BigInt::from(1u64 << 24));
    let exact_width = if width > coarse { width } else { coarse };
    let p = &sturm.chain[0];
    sturm
        .isolate()
        .into_iter()
        .map(|iv| {
            let iv = sturm.refine(iv, &exact_width);
            let (lo, hi) = (rational::to_f64(&iv.lo), rational::to_f64(&iv.hi));
            let at_hi = eval(p, &iv.hi);
            if at_hi.is_zero() {
                return (hi, hi);
            }
            if hi - lo <= tol {
                return (lo, hi);
            }
            polish_f64(p, lo, hi, at_hi.is_positive(), tol)
        })
        .collect()
}

/// Bisection on a bracket whose upper end has sign `hi_positive`; stops at
/// width `tol` or when floating-point evaluation can no longer tell.
fn polish_f64(p: &Dense, mut lo: f64, mut hi: f64, hi_positive: bool, tol: f64) -> (f64, f64) {
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let v = eval_f64(p, mid);
        if v == 0.0 || !v.is_finite() {
            return (mid, mid);
        }
        if (v > 0.0) == hi_positive {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RootSign {
    Positive,
    Any,
}

/// Real roots of `f` with the requested sign: closed forms for roots of
/// linear and quadratic factors, numeric enclosures tagged as non-surd for
/// roots of factors that were not split. Ascending by value.
pub fn extract_algebraic(f: &MultiPoly, sign: RootSign) -> Result<Vec<RootValue>, ExactError> {
    let fac = factor_univariate(f)?;
    let mut out: Vec<RootValue> = Vec::new();
    for (q, _) in &fac.factors {
        for root in roots_of_factor(q)? {
            let keep = match sign {
                RootSign::Positive => root.approx() > 0.0,
                RootSign::Any => true,
            };
            // A rational zero is never positive.
            let keep = keep
                && !(sign == RootSign::Positive
                    && matches!(&root, RootValue::Exact(AlgebraicNumber::Rational(r)) if !r.is_positive()));
            if keep {
                out.push(root);
            }
        }
    }
    out.sort_by(|a, b| a.approx().total_cmp(&b.approx()));
    Ok(out)
}

/// Real roots of a single primitive factor from [`factor_univariate`].
pub fn roots_of_factor(q: &MultiPoly) -> Result<Vec<RootValue>, ExactError> {
    let p = dense_of(q)?;
    let prim = primitive(&p);
    Ok(match degree(&prim) {
        0 => Vec::new(),
        1 => vec![RootValue::Exact(AlgebraicNumber::Rational(-&prim[0] / &prim[1]))],
        2 => {
            let (c, b, a) = (
                prim[0].numer().clone(),
                prim[1].numer().clone(),
                prim[2].numer().clone(),
            );
            let disc = &b * &b - BigInt::from(4) * &a * &c;
            if disc.is_negative() {
                Vec::new()
            } else if disc.is_zero() {
                vec![RootValue::Exact(AlgebraicNumber::Rational(Rational::new(
                    -b,
                    BigInt::from(2) * a,
                )))]
            } else {
                let two_a = BigInt::from(2) * &a;
                let lo = AlgebraicNumber::surd(-b.clone(), -BigInt::one(), two_a.clone(), disc.clone())?;
                let hi = AlgebraicNumber::surd(-b, BigInt::one(), two_a, disc)?;
                let mut v = vec![RootValue::Exact(lo), RootValue::Exact(hi)];
                v.sort_by(|x, y| x.approx().total_cmp(&y.approx()));
                v
            }
        }
        _ => real_root_intervals(&prim, 1e-12)
            .into_iter()
            .map(|(lo, hi)| RootValue::NonSurd {
                approx: 0.5 * (lo + hi),
                lower: lo,
                upper: hi,
                factor: multi_of(&prim),
            })
            .collect(),
    })
}

/// Values of `f` at `x` in floating point (for diagnostics).
pub fn eval_univariate_f64(f: &MultiPoly, x: f64) -> f64 {
    match dense_of(f) {
        Ok(p) => eval_f64(&p, x),
        Err(_) => f64::NAN,
    }
}

/// Gcd of two univariate polynomials, primitive with positive leading
/// coefficient (the constant 1 when coprime).
pub fn gcd_univariate(a: &MultiPoly, b: &MultiPoly) -> Result<MultiPoly, ExactError> {
    let (x, y) = (dense_of(a)?, dense_of(b)?);
    if x.is_empty() && y.is_empty() {
        return Ok(MultiPoly::zero(1));
    }
    let g = if x.is_empty() {
        y
    } else if y.is_empty() {
        x
    } else {
        gcd(&x, &y)
    };
    Ok(multi_of(&primitive(&g)))
}

/// Exact quotient of `a` by `b` when `b` divides `a`.
pub fn exact_quotient(a: &MultiPoly, b: &MultiPoly) -> Result<Option<MultiPoly>, ExactError> {
    let (x, y) = (dense_of(a)?, dense_of(b)?);
    if y.is_empty() {
        return Err(ExactError::Domain("division by the zero polynomial".into()));
    }
    let (q, r) = divrem(&x, &y);
    Ok(r.is_empty().then(|| multi_of(&q)))
}

/// True when `n` has an integer square root.
pub fn is_perfect_square(n: &BigInt) -> bool {
    !n.is_negative() && {
        let s = n.sqrt();
        &s * &s == *n
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::text::parse_univariate;

    fn u(s: &str) -> MultiPoly {
        parse_univariate(s, "x").unwrap()
    }

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(&u("x^2 - 2")).unwrap(), u("x^2 - 2"));
        assert_eq!(
            squarefree_part(&u("(x - 1)^2*(x + 2)")).unwrap(),
            u("x^2 + x - 2")
        );
        let q = u("64*x^5 - 128*x^4 + 80*x^3 - 17*x^2 + x");
        assert_eq!(squarefree_part(&q).unwrap(), q);
        assert!(squarefree_part(&MultiPoly::zero(1)).is_err());
        assert!(squarefree_part(&MultiPoly::var(2, 0)).is_err());
    }

    #[test]
    fn quintic_factorisation() {
        let q = u("64*x^5 - 128*x^4 + 80*x^3 - 17*x^2 + x");
        let f = factor_univariate(&q).unwrap();
        let got: Vec<MultiPoly> = f.factors.iter().map(|(p, _)| p.clone()).collect();
        assert_eq!(
            got,
            vec![u("x"), u("x - 1"), u("4*x - 1"), u("16*x^2 - 12*x + 1")]
        );
        assert!(f.factors.iter().all(|(_, m)| *m == 1));
        assert!(f.fully_factored);
        assert_eq!(f.expand(), q);
    }

    #[test]
    fn irreducible_quadratic_and_units() {
        let f = factor_univariate(&u("x^2 - 128")).unwrap();
        assert_eq!(f.factors, vec![(u("x^2 - 128"), 1)]);
        let c = factor_univariate(&u("5")).unwrap();
        assert!(c.factors.is_empty());
        assert_eq!(c.expand(), u("5"));
    }

    #[test]
    fn multiplicities_and_content() {
        let p = u("-3/2*(x - 1)^3*(2*x + 3)^2*(x^2 + 1)");
        let f = factor_univariate(&p).unwrap();
        assert_eq!(f.expand(), p);
        assert!(f.factors.contains(&(u("x - 1"), 3)));
        assert!(f.factors.contains(&(u("2*x + 3"), 2)));
        assert!(f.factors.contains(&(u("x^2 + 1"), 1)));
    }

    #[test]
    fn quadratic_pairs_are_split() {
        let p = u("(x^2 - 128)*(7*x^2 - 48)*(x^2 + 3)");
        let f = factor_univariate(&p).unwrap();
        assert!(f.fully_factored);
        assert_eq!(f.factors.len(), 3);
        assert_eq!(f.expand(), p);
    }

    #[test]
    fn unsplittable_cubic_is_flagged() {
        let f = factor_univariate(&u("x^3 - 2")).unwrap();
        assert!(!f.fully_factored);
        assert_eq!(f.factors, vec![(u("x^3 - 2"), 1)]);
        let roots = extract_algebraic(&u("x^3 - 2"), RootSign::Positive).unwrap();
        assert_eq!(roots.len(), 1);
        match &roots[0] {
            RootValue::NonSurd { approx, .. } => assert!((approx - 2f64.cbrt()).abs() < 1e-9),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn extract_examples() {
        let r = extract_algebraic(&u("x^2 - 128"), RootSign::Positive).unwrap();
        assert_eq!(r.len(), 1);
        assert_eq!(r[0].exact().unwrap().to_string(), "8*sqrt(2)");

        let r = extract_algebraic(&u("34*x - 253"), RootSign::Positive).unwrap();
        assert_eq!(r[0].exact().unwrap().to_string(), "253/34");

        let r = extract_algebraic(&u("16*x^2 - 12*x + 1"), RootSign::Positive).unwrap();
        let s: Vec<String> = r.iter().map(|v| v.exact().unwrap().to_string()).collect();
        assert_eq!(s, vec!["3/8 - 1/8*sqrt(5)", "3/8 + 1/8*sqrt(5)"]);
        for v in &r {
            let a = v.exact().unwrap();
            assert!(a.eval_exact(&u("16*x^2 - 12*x + 1")).unwrap().is_zero());
        }

        assert!(extract_algebraic(&u("x + 1"), RootSign::Positive)
            .unwrap()
            .is_empty());
        assert!(extract_algebraic(&u("x"), RootSign::Positive).unwrap().is_empty());
    }

    #[test]
    fn numeric_roots() {
        let r = real_roots_numeric(&u("x^2 - 2"), 1e-9).unwrap();
        assert_eq!(r.len(), 2);
        assert!((r[0] + 2f64.sqrt()).abs() < 1e-9);
        assert!((r[1] - 2f64.sqrt()).abs() < 1e-9);

        let r = real_roots_numeric(&u("x^2 - 128"), 1e-9).unwrap();
        assert!((r[1] - 11.3137085).abs() < 1e-7);

        let q = u("64*x^5 - 128*x^4 + 80*x^3 - 17*x^2 + x");
        let r = real_roots_numeric(&q, 1e-9).unwrap();
        let s5 = 5f64.sqrt();
        let expect = [0.0, (3.0 - s5) / 8.0, 0.25, (3.0 + s5) / 8.0, 1.0];
        assert_eq!(r.len(), 5);
        for (a, b) in r.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9, "{a} vs {b}");
        }
        assert_eq!(sturm_root_count(&q).unwrap(), 5);
    }

    #[test]
    fn simplest_fraction() {
        use crate::exactmath::rational::rat;
        assert_eq!(simplest_in(&rat(1, 3), &rat(1, 2)), Some(rat(1, 2)));
        assert_eq!(simplest_in(&rat(31, 100), &rat(32, 100)), Some(rat(5, 16)));
        assert_eq!(simplest_in(&rat(-5, 2), &rat(-9, 4)), Some(rat(-5, 2)));
        assert_eq!(simplest_in(&rat(7, 2), &rat(7, 2)), Some(rat(7, 2)));
    }
}
