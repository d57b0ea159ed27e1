//! Monomial orders.
//!
//! Every order is realised as an integer sort key that is linear in the
//! exponent vector, so `key(a * b) == key(a) + key(b)` and comparing two
//! monomials is a lexicographic comparison of their keys.

use std::cmp::Ordering;

use super::ExactError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderKind {
    Lex,
    GrevLex,
    /// Variables in `eliminate` are compared first (grevlex inside each block).
    BlockElimination {
        eliminate: Vec<usize>,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    /// Variable indices from most to least significant.
    permutation: Vec<usize>,
}

impl MonomialOrder {
    pub fn lex(nvars: usize) -> Self {
        Self {
            kind: OrderKind::Lex,
            permutation: (0..nvars).collect(),
        }
    }

    pub fn grevlex(nvars: usize) -> Self {
        Self {
            kind: OrderKind::GrevLex,
            permutation: (0..nvars).collect(),
        }
    }

    /// Lex with a custom variable precedence (first entry is the largest).
    pub fn lex_with(permutation: Vec<usize>) -> Result<Self, ExactError> {
        check_permutation(&permutation)?;
        Ok(Self {
            kind: OrderKind::Lex,
            permutation,
        })
    }

    pub fn grevlex_with(permutation: Vec<usize>) -> Result<Self, ExactError> {
        check_permutation(&permutation)?;
        Ok(Self {
            kind: OrderKind::GrevLex,
            permutation,
        })
    }

    /// Block order in which any monomial containing a variable of
    /// `eliminate` exceeds every monomial free of them. Inside the
    /// eliminated block higher indices are more significant: constructions
    /// allocate variables in step order, and ranking later points first
    /// keeps the basis close to triangular.
    pub fn elimination(nvars: usize, eliminate: &[usize]) -> Result<Self, ExactError> {
        let mut elim: Vec<usize> = eliminate.to_vec();
        elim.sort_unstable_by(|a, b| b.cmp(a));
        elim.dedup();
        if elim.iter().any(|&v| v >= nvars) {
            return Err(ExactError::Structural(format!(
                "elimination variable out of range for {nvars} variables"
            )));
        }
        let mut permutation = elim.clone();
        permutation.extend((0..nvars).filter(|v| !elim.contains(v)));
        Ok(Self {
            kind: OrderKind::BlockElimination { eliminate: elim },
            permutation,
        })
    }

    pub fn kind(&self) -> &OrderKind {
        &self.kind
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn nvars(&self) -> usize {
        self.permutation.len()
    }

    /// Length of the sort key produced by [`MonomialOrder::key`].
    pub fn key_len(&self) -> usize {
        let n = self.permutation.len();
        match &self.kind {
            OrderKind::Lex => n,
            OrderKind::GrevLex => n + 1,
            OrderKind::BlockElimination { .. } => n + 2,
        }
    }

    pub fn key(&self, exps: &[u32]) -> Vec<i64> {
        let mut key = Vec::with_capacity(self.key_len());
        match &self.kind {
            OrderKind::Lex => key.extend(self.permutation.iter().map(|&v| exps[v] as i64)),
            OrderKind::GrevLex => grevlex_key(&self.permutation, exps, &mut key),
            OrderKind::BlockElimination { eliminate } => {
                let (first, rest) = self.permutation.split_at(eliminate.len());
                grevlex_key(first, exps, &mut key);
                grevlex_key(rest, exps, &mut key);
            }
        }
        key
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        match &self.kind {
            OrderKind::Lex => {
                for &v in &self.permutation {
                    match a[v].cmp(&b[v]) {
                        Ordering::Equal => continue,
                        o => return o,
                    }
                }
                Ordering::Equal
            }
            _ => self.key(a).cmp(&self.key(b)),
        }
    }
}

fn grevlex_key(vars: &[usize], exps: &[u32], key: &mut Vec<i64>) {
    key.push(vars.iter().map(|&v| exps[v] as i64).sum());
    key.extend(vars.iter().rev().map(|&v| -(exps[v] as i64)));
}

fn check_permutation(perm: &[usize]) -> Result<(), ExactError> {
    let mut seen = vec![false; perm.len()];
    for &v in perm {
        if v >= perm.len() || seen[v] {
            return Err(ExactError::Structural(
                "monomial order permutation is not a permutation".into(),
            ));
        }
        seen[v] = true;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn grevlex_basics() {
        let o = MonomialOrder::grevlex(3);
        // x*z^2 vs y^3 in degree 3: the one with the smaller last exponent wins.
        assert_eq!(o.cmp(&[0, 3, 0], &[1, 0, 2]), Ordering::Greater);
        assert_eq!(o.cmp(&[1, 0, 0], &[0, 1, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 0, 2], &[1, 0, 0]), Ordering::Greater);
    }

    #[test]
    fn lex_basics() {
        let o = MonomialOrder::lex(2);
        assert_eq!(o.cmp(&[1, 0], &[0, 5]), Ordering::Greater);
        let o = MonomialOrder::lex_with(vec![1, 0]).unwrap();
        assert_eq!(o.cmp(&[1, 0], &[0, 5]), Ordering::Less);
    }

    #[test]
    fn elimination_block_dominates() {
        let o = MonomialOrder::elimination(3, &[1]).unwrap();
        assert_eq!(o.cmp(&[0, 1, 0], &[9, 0, 9]), Ordering::Greater);
        assert_eq!(o.cmp(&[2, 0, 0], &[0, 0, 1]), Ordering::Greater);
    }

    #[test]
    fn bad_permutation() {
        assert!(MonomialOrder::lex_with(vec![0, 0]).is_err());
        assert!(MonomialOrder::elimination(2, &[5]).is_err());
    }

    fn any_order() -> impl Strategy<Value = MonomialOrder> {
        prop_oneof![
            Just(MonomialOrder::lex(3)),
            Just(MonomialOrder::grevlex(3)),
            Just(MonomialOrder::elimination(3, &[0]).unwrap()),
            Just(MonomialOrder::elimination(3, &[2, 1]).unwrap()),
            Just(MonomialOrder::lex_with(vec![2, 0, 1]).unwrap()),
        ]
    }

    proptest! {
        #[test]
        fn compatible_with_multiplication(
            ord in any_order(),
            a in proptest::collection::vec(0u32..5, 3),
            b in proptest::collection::vec(0u32..5, 3),
            c in proptest::collection::vec(0u32..5, 3),
        ) {
            let ac: Vec<u32> = a.iter().zip(&c).map(|(x, y)| x + y).collect();
            let bc: Vec<u32> = b.iter().zip(&c).map(|(x, y)| x + y).collect();
            prop_assert_eq!(ord.cmp(&a, &b), ord.cmp(&ac, &bc));
            prop_assert_ne!(ord.cmp(&a, &[0, 0, 0]), Ordering::Less);
            let ka = ord.key(&a);
            let kc = ord.key(&c);
            let sum: Vec<i64> = ka.iter().zip(&kc).map(|(x, y)| x + y).collect();
            prop_assert_eq!(sum, ord.key(&ac));
        }
    }
}
