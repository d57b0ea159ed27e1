//! Substitution of variables that occur linearly with a constant coefficient.
//!
//! Folding preserves the elimination ideal: every folded variable `v` has a
//! relation `v = L` in the ideal. Eliminated variables disappear; a kept
//! variable is folded only when `L` lives in the kept variables, and `v - L`
//! is returned as a kept relation.

use super::{MultiPoly, Rational};

#[derive(Debug, Clone, PartialEq)]
pub struct Folded {
    /// Remaining polynomials, free of every folded variable.
    pub polys: Vec<MultiPoly>,
    /// Relations `v - L` for folded kept variables, in kept variables only.
    pub kept_relations: Vec<MultiPoly>,
    /// Folded variables with the expression substituted for them, in order.
    pub substitutions: Vec<(usize, MultiPoly)>,
}

impl Folded {
    /// Everything needed to generate the elimination ideal.
    pub fn system(&self) -> Vec<MultiPoly> {
        let mut out = self.polys.clone();
        out.extend(self.kept_relations.iter().cloned());
        out
    }
}

/// The constant coefficient of `v` if `p` is `c*v + R` with `R` free of `v`.
fn linear_coefficient(p: &MultiPoly, v: usize) -> Option<Rational> {
    let mut coeff = None;
    for (e, c) in p.terms() {
        if e[v] == 0 {
            continue;
        }
        if e[v] > 1 || e.iter().sum::<u32>() != 1 {
            return None;
        }
        coeff = Some(c.clone());
    }
    coeff
}

pub fn fold_linear(f: &[MultiPoly], keep: &[usize]) -> Folded {
    let mut polys: Vec<MultiPoly> = f.iter().filter(|p| !p.is_zero()).cloned().collect();
    let mut kept_relations: Vec<MultiPoly> = Vec::new();
    let mut substitutions = Vec::new();
    loop {
        // Prefer eliminated variables, then the shortest defining polynomial.
        let mut best: Option<(bool, usize, usize, usize, Rational)> = None;
        for (i, p) in polys.iter().enumerate() {
            for v in p.support() {
                let kept = keep.contains(&v);
                if kept && p.support().iter().any(|w| !keep.contains(w)) {
                    continue;
                }
                let Some(c) = linear_coefficient(p, v) else {
                    continue;
                };
                let cand = (kept, p.len(), i, v, c);
                if best.as_ref().is_none_or(|b| (cand.0, cand.1) < (b.0, b.1)) {
                    best = Some(cand);
                }
            }
        }
        let Some((kept, _, i, v, c)) = best else {
            break;
        };
        let p = polys.swap_remove(i);
        let n = p.nvars();
        let vpoly = MultiPoly::var(n, v);
        // v = -(p - c*v)/c
        let rest = &p - &vpoly.scale(&c);
        let value = rest.scale(&(-Rational::from_integer(1.into()) / &c));
        for q in polys.iter_mut().chain(kept_relations.iter_mut()) {
            if q.uses_var(v) {
                *q = q.substitute(v, &value);
            }
        }
        if kept {
            kept_relations.push((&vpoly - &value).normalized());
        }
        substitutions.push((v, value));
        polys.retain(|q| !q.is_zero());
        kept_relations.retain(|q| !q.is_zero());
        for q in polys.iter_mut() {
            *q = q.normalized();
        }
        polys.sort_by(|a, b| a.terms().cmp(b.terms()));
        polys.dedup();
    }
    Folded {
        polys,
        kept_relations,
        substitutions,
    }
}
