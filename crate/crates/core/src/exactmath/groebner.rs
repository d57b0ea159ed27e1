//! Buchberger's algorithm over the rationals.
//!
//! Internally polynomials are kept primitive over the integers and reduced
//! fraction-free. Pairs are pruned with the Gebauer–Möller update (which
//! covers both of Buchberger's criteria) and selected by lowest sugar degree.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::order::MonomialOrder;
use super::poly::MultiPoly;
use super::rational::{self, Rational};
use super::ExactError;

pub const DEFAULT_PAIR_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroebnerConfig {
    /// Maximum number of S-polynomials reduced before giving up.
    pub pair_budget: u64,
}

impl Default for GroebnerConfig {
    fn default() -> Self {
        Self {
            pair_budget: DEFAULT_PAIR_BUDGET,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, serde::Serialize)]
pub struct GroebnerStats {
    pub pairs_created: u64,
    pub pairs_reduced: u64,
    pub zero_reductions: u64,
    pub reduction_steps: u64,
    pub basis_size: usize,
}

impl GroebnerStats {
    pub fn absorb(&mut self, other: &GroebnerStats) {
        self.pairs_created += other.pairs_created;
        self.pairs_reduced += other.pairs_reduced;
        self.zero_reductions += other.zero_reductions;
        self.reduction_steps += other.reduction_steps;
        self.basis_size = other.basis_size;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Mono {
    key: Box<[i64]>,
    exps: Box<[u32]>,
}

impl Mono {
    fn new(ord: &MonomialOrder, exps: &[u32]) -> Self {
        Self {
            key: ord.key(exps).into_boxed_slice(),
            exps: exps.into(),
        }
    }

    fn cmp_key(&self, other: &Self) -> Ordering {
        self.key.cmp(&other.key)
    }

    fn divides(&self, other: &Self) -> bool {
        self.exps.iter().zip(other.exps.iter()).all(|(a, b)| a <= b)
    }

    fn mul(&self, other: &Self) -> Self {
        Self {
            key: self
                .key
                .iter()
                .zip(other.key.iter())
                .map(|(a, b)| a + b)
                .collect(),
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    /// `self / other`, assuming `other` divides `self`.
    fn div(&self, other: &Self) -> Self {
        Self {
            key: self
                .key
                .iter()
                .zip(other.key.iter())
                .map(|(a, b)| a - b)
                .collect(),
            exps: self
                .exps
                .iter()
                .zip(other.exps.iter())
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    fn lcm(&self, other: &Self, ord: &MonomialOrder) -> Self {
        let e: Vec<u32> = self
            .exps
            .iter()
            .zip(other.exps.iter())
            .map(|(a, b)| *a.max(b))
            .collect();
        Mono::new(ord, &e)
    }

    fn coprime(&self, other: &Self) -> bool {
        self.exps
            .iter()
            .zip(other.exps.iter())
            .all(|(a, b)| *a == 0 || *b == 0)
    }

    fn degree(&self) -> u32 {
        self.exps.iter().sum()
    }
}

/// Integer polynomial with terms sorted from largest to smallest.
#[derive(Clone, Debug)]
struct IPoly {
    terms: Vec<(Mono, BigInt)>,
    sugar: u32,
}

impl IPoly {
    fn from_multi(p: &MultiPoly, ord: &MonomialOrder) -> Self {
        let den = rational::denominator_lcm(p.terms().map(|(_, c)| c));
        let mut terms: Vec<(Mono, BigInt)> = p
            .terms()
            .map(|(e, c)| {
                let v = c * Rational::from_integer(den.clone());
                (Mono::new(ord, e), v.to_integer())
            })
            .collect();
        terms.sort_by(|a, b| b.0.cmp_key(&a.0));
        let mut out = Self {
            sugar: p.total_degree(),
            terms,
        };
        out.make_primitive();
        out
    }

    fn to_multi(&self, nvars: usize) -> MultiPoly {
        MultiPoly::from_terms(
            nvars,
            self.terms
                .iter()
                .map(|(m, c)| (m.exps.to_vec(), Rational::from_integer(c.clone()))),
        )
        .expect("consistent variable count")
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn lm(&self) -> &Mono {
        &self.terms[0].0
    }

    fn lc(&self) -> &BigInt {
        &self.terms[0].1
    }

    fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        g
    }

    fn make_primitive(&mut self) {
        if self.terms.is_empty() {
            return;
        }
        let mut g = self.content();
        if self.lc().is_negative() {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in &mut self.terms {
                *c = &*c / &g;
            }
        }
    }
}

/// `a * x - b * u * y` where both inputs are sorted; returns a sorted result.
fn combine(
    x: &[(Mono, BigInt)],
    a: &BigInt,
    y: &[(Mono, BigInt)],
    b: &BigInt,
    u: &Mono,
) -> Vec<(Mono, BigInt)> {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let mut i = 0;
    let mut j = 0;
    let mut shifted: Option<Mono> = y.first().map(|t| t.0.mul(u));
    while i < x.len() || j < y.len() {
        let ord = match (i < x.len(), &shifted) {
            (true, Some(m)) => x[i].0.cmp_key(m),
            (true, None) => Ordering::Greater,
            (false, _) => Ordering::Less,
        };
        match ord {
            Ordering::Greater => {
                out.push((x[i].0.clone(), &x[i].1 * a));
                i += 1;
            }
            Ordering::Less => {
                let m = shifted.take().unwrap();
                out.push((m, -(&y[j].1 * b)));
                j += 1;
                shifted = y.get(j).map(|t| t.0.mul(u));
            }
            Ordering::Equal => {
                let c = &x[i].1 * a - &y[j].1 * b;
                let m = shifted.take().unwrap();
                if !c.is_zero() {
                    out.push((m, c));
                }
                i += 1;
                j += 1;
                shifted = y.get(j).map(|t| t.0.mul(u));
            }
        }
    }
    out
}

struct Reducer<'a> {
    basis: &'a [IPoly],
    active: &'a [usize],
    steps: u64,
}

impl Reducer<'_> {
    fn find(&self, m: &Mono, skip: Option<usize>) -> Option<usize> {
        let mut best: Option<usize> = None;
        for &idx in self.active {
            if Some(idx) == skip {
                continue;
            }
            let g = &self.basis[idx];
            if g.lm().divides(m) {
                match best {
                    Some(b) if self.basis[b].terms.len() <= g.terms.len() => {}
                    _ => best = Some(idx),
                }
            }
        }
        best
    }

    /// Fully reduces `f`; the result is primitive and equal to `c * f` modulo
    /// the ideal for some nonzero integer `c`.
    fn reduce(&mut self, mut f: IPoly, skip: Option<usize>, tail: bool) -> IPoly {
        let mut idx = 0;
        let mut since_content = 0;
        while idx < f.terms.len() {
            let m = &f.terms[idx].0;
            let Some(gi) = self.find(m, skip) else {
                if !tail {
                    break;
                }
                idx += 1;
                continue;
            };
            let g = &self.basis[gi];
            let u = m.div(g.lm());
            let c = &f.terms[idx].1;
            let gcd = c.gcd(g.lc());
            let mut a = g.lc() / &gcd;
            let mut b = c / &gcd;
            if a.is_negative() {
                a = -a;
                b = -b;
            }
            f.sugar = f.sugar.max(g.sugar + u.degree());
            let suffix = combine(&f.terms[idx..], &a, &g.terms, &b, &u);
            f.terms.truncate(idx);
            if !a.is_one() {
                for (_, c) in &mut f.terms {
                    *c *= &a;
                }
            }
            f.terms.extend(suffix);
            self.steps += 1;
            since_content += 1;
            if since_content >= 8 {
                f.make_primitive();
                since_content = 0;
            }
        }
        f.make_primitive();
        f
    }
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mono,
    sugar: u32,
}

fn spoly(f: &IPoly, g: &IPoly, lcm: &Mono) -> IPoly {
    let uf = lcm.div(f.lm());
    let ug = lcm.div(g.lm());
    let gcd = f.lc().gcd(g.lc());
    let a = g.lc() / &gcd;
    let b = f.lc() / &gcd;
    // a * uf * f - b * ug * g; the leading terms cancel.
    let left: Vec<(Mono, BigInt)> = f.terms.iter().map(|(m, c)| (m.mul(&uf), c.clone())).collect();
    let terms = combine(&left[1..], &a, &g.terms[1..], &b, &ug);
    let mut p = IPoly {
        terms,
        sugar: (f.sugar + uf.degree()).max(g.sugar + ug.degree()),
    };
    p.make_primitive();
    p
}

struct Engine<'a> {
    ord: &'a MonomialOrder,
    polys: Vec<IPoly>,
    active: Vec<usize>,
    pairs: Vec<Pair>,
    stats: GroebnerStats,
}

impl Engine<'_> {
    fn update(&mut self, h: usize) {
        let hm = self.polys[h].lm().clone();
        let hsugar = self.polys[h].sugar;
        let mut c: Vec<Pair> = self
            .active
            .iter()
            .map(|&g| {
                let gp = &self.polys[g];
                let lcm = hm.lcm(gp.lm(), self.ord);
                let sugar =
                    (hsugar + lcm.degree() - hm.degree()).max(gp.sugar + lcm.degree() - gp.lm().degree());
                Pair {
                    i: g,
                    j: h,
                    lcm,
                    sugar,
                }
            })
            .collect();
        self.stats.pairs_created += c.len() as u64;

        let mut d: Vec<Pair> = Vec::new();
        while let Some(p) = c.pop() {
            let coprime = self.polys[p.i].lm().coprime(&hm);
            let dominated =
                c.iter().any(|q| q.lcm.divides(&p.lcm)) || d.iter().any(|q| q.lcm.divides(&p.lcm));
            if coprime || !dominated {
                d.push(p);
            }
        }
        let e: Vec<Pair> = d
            .into_iter()
            .filter(|p| !self.polys[p.i].lm().coprime(&hm))
            .collect();

        let polys = &self.polys;
        let ord = self.ord;
        self.pairs.retain(|p| {
            if !hm.divides(&p.lcm) {
                return true;
            }
            let l1 = polys[p.i].lm().lcm(&hm, ord);
            let l2 = polys[p.j].lm().lcm(&hm, ord);
            l1 == p.lcm || l2 == p.lcm
        });
        self.pairs.extend(e);

        self.active.retain(|&g| !hm.divides(polys[g].lm()));
        self.active.push(h);
    }

    fn add(&mut self, p: IPoly) -> usize {
        self.polys.push(p);
        let h = self.polys.len() - 1;
        self.update(h);
        h
    }

    fn next_pair(&mut self) -> Option<Pair> {
        if self.pairs.is_empty() {
            return None;
        }
        let mut best = 0;
        for k in 1..self.pairs.len() {
            let (a, b) = (&self.pairs[k], &self.pairs[best]);
            if a.sugar < b.sugar || (a.sugar == b.sugar && a.lcm.cmp_key(&b.lcm) == Ordering::Less) {
                best = k;
            }
        }
        Some(self.pairs.swap_remove(best))
    }

    fn run(&mut self, budget: u64) -> Result<(), ExactError> {
        while let Some(pair) = self.next_pair() {
            if self.stats.pairs_reduced >= budget {
                return Err(ExactError::Resource {
                    budget,
                    basis_size: self.active.len(),
                    pending_pairs: self.pairs.len() + 1,
                });
            }
            self.stats.pairs_reduced += 1;
            let s = spoly(&self.polys[pair.i], &self.polys[pair.j], &pair.lcm);
            let mut red = Reducer {
                basis: &self.polys,
                active: &self.active,
                steps: 0,
            };
            let r = red.reduce(s, None, true);
            self.stats.reduction_steps += red.steps;
            if r.is_zero() {
                self.stats.zero_reductions += 1;
                continue;
            }
            self.add(r);
        }
        Ok(())
    }

    /// Inter-reduces the active set and returns it sorted by leading monomial.
    fn reduced_basis(&mut self) -> Vec<IPoly> {
        let mut active = self.active.clone();
        active.sort_by(|&a, &b| self.polys[a].lm().cmp_key(self.polys[b].lm()));
        let mut out_idx = Vec::with_capacity(active.len());
        for &g in &active {
            let mut red = Reducer {
                basis: &self.polys,
                active: &active,
                steps: 0,
            };
            let r = red.reduce(self.polys[g].clone(), Some(g), true);
            self.stats.reduction_steps += red.steps;
            out_idx.push(r);
        }
        out_idx.retain(|p| !p.is_zero());
        out_idx
    }
}

fn check_inputs(f: &[MultiPoly], ord: &MonomialOrder) -> Result<usize, ExactError> {
    let n = ord.nvars();
    for p in f {
        if p.nvars() != n {
            return Err(ExactError::Structural(format!(
                "polynomial over {} variables used with an order over {n}",
                p.nvars()
            )));
        }
    }
    Ok(n)
}

/// Reduced Gröbner basis plus engine statistics. Every element is primitive
/// over the integers with a positive leading coefficient; elements are
/// sorted by increasing leading monomial.
pub fn groebner_basis_with(
    f: &[MultiPoly],
    ord: &MonomialOrder,
    config: &GroebnerConfig,
) -> Result<(Vec<MultiPoly>, GroebnerStats), ExactError> {
    let n = check_inputs(f, ord)?;
    let mut engine = Engine {
        ord,
        polys: Vec::new(),
        active: Vec::new(),
        pairs: Vec::new(),
        stats: GroebnerStats::default(),
    };
    let mut inputs: Vec<IPoly> = f
        .iter()
        .filter(|p| !p.is_zero())
        .map(|p| IPoly::from_multi(p, ord))
        .collect();
    inputs.sort_by(|a, b| a.lm().cmp_key(b.lm()));
    for p in inputs {
        let mut red = Reducer {
            basis: &engine.polys,
            active: &engine.active,
            steps: 0,
        };
        let r = red.reduce(p, None, true);
        engine.stats.reduction_steps += red.steps;
        if !r.is_zero() {
            engine.add(r);
        }
    }
    engine.run(config.pair_budget)?;
    let basis = engine.reduced_basis();
    engine.stats.basis_size = basis.len();
    Ok((basis.iter().map(|p| p.to_multi(n)).collect(), engine.stats))
}

pub fn groebner_basis(f: &[MultiPoly], ord: &MonomialOrder) -> Result<Vec<MultiPoly>, ExactError> {
    groebner_basis_with(f, ord, &GroebnerConfig::default()).map(|(b, _)| b)
}

/// Generators of the elimination ideal `<f> ∩ Q[keep]`, still expressed in
/// the full variable set.
pub fn eliminate_with(
    f: &[MultiPoly],
    keep: &[usize],
    config: &GroebnerConfig,
) -> Result<(Vec<MultiPoly>, GroebnerStats), ExactError> {
    let n = f.first().map(|p| p.nvars()).unwrap_or(0);
    if keep.iter().any(|&v| v >= n) {
        return Err(ExactError::Structural(
            "kept variable outside the polynomial ring".into(),
        ));
    }
    let elim: Vec<usize> = (0..n).filter(|v| !keep.contains(v)).collect();
    let ord = MonomialOrder::elimination(n, &elim)?;
    let (basis, stats) = groebner_basis_with(f, &ord, config)?;
    let kept = basis
        .into_iter()
        .filter(|p| elim.iter().all(|&v| !p.uses_var(v)))
        .collect();
    Ok((kept, stats))
}

pub fn eliminate(f: &[MultiPoly], keep: &[usize]) -> Result<Vec<MultiPoly>, ExactError> {
    eliminate_with(f, keep, &GroebnerConfig::default()).map(|(b, _)| b)
}

/// Exact remainder of `f` on division by `g` (full reduction, rational
/// coefficients, no scaling of `f`).
pub fn normal_form(f: &MultiPoly, g: &[MultiPoly], ord: &MonomialOrder) -> Result<MultiPoly, ExactError> {
    let n = f.nvars();
    if g.is_empty() {
        return Err(ExactError::Structural("empty divisor set".into()));
    }
    if ord.nvars() != n || g.iter().any(|p| p.nvars() != n) {
        return Err(ExactError::Structural(
            "mismatched variable counts in normal_form".into(),
        ));
    }
    if g.iter().any(|p| p.is_zero()) {
        return Err(ExactError::Structural("zero divisor polynomial".into()));
    }
    let leads: Vec<(Vec<u32>, Rational)> = g
        .iter()
        .map(|p| {
            let (e, c) = p.leading_term(ord).unwrap();
            (e.clone(), c.clone())
        })
        .collect();
    let mut p = f.clone();
    let mut r = MultiPoly::zero(n);
    while let Some((e, c)) = p.leading_term(ord).map(|(e, c)| (e.clone(), c.clone())) {
        let hit = leads
            .iter()
            .position(|(le, _)| le.iter().zip(&e).all(|(a, b)| a <= b));
        match hit {
            Some(k) => {
                let u: Vec<u32> = e.iter().zip(&leads[k].0).map(|(a, b)| a - b).collect();
                let q = &c / &leads[k].1;
                p = &p - &g[k].mul_monomial(&u, &q);
            }
            None => {
                r.add_term(e.clone(), c.clone());
                p.add_term(e, -c);
            }
        }
    }
    Ok(r)
}

/// The S-polynomial of `f` and `g` under `ord` with rational coefficients.
pub fn s_polynomial(f: &MultiPoly, g: &MultiPoly, ord: &MonomialOrder) -> MultiPoly {
    let (ef, cf) = f.leading_term(ord).expect("nonzero f");
    let (eg, cg) = g.leading_term(ord).expect("nonzero g");
    let l: Vec<u32> = ef.iter().zip(eg).map(|(a, b)| *a.max(b)).collect();
    let uf: Vec<u32> = l.iter().zip(ef).map(|(a, b)| a - b).collect();
    let ug: Vec<u32> = l.iter().zip(eg).map(|(a, b)| a - b).collect();
    &f.mul_monomial(&uf, &cf.recip()) - &g.mul_monomial(&ug, &cg.recip())
}

/// Checks Buchberger's criterion: every S-polynomial reduces to zero.
pub fn is_groebner_basis(g: &[MultiPoly], ord: &MonomialOrder) -> Result<bool, ExactError> {
    for i in 0..g.len() {
        for j in (i + 1)..g.len() {
            let s = s_polynomial(&g[i], &g[j], ord);
            if !normal_form(&s, g, ord)?.is_zero() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
