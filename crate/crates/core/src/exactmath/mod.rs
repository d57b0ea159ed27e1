//! Exact arithmetic: rationals, sparse multivariate polynomials, Gröbner
//! bases with elimination orders, and univariate post-processing.

pub mod algebraic;
pub mod fold;
pub mod groebner;
pub mod order;
pub mod poly;
pub mod rational;
pub mod text;
pub mod univariate;

pub use algebraic::{AlgebraicNumber, QuadElem, RootValue, SurdRecord};
pub use fold::{fold_linear, Folded};
pub use groebner::{
    eliminate, eliminate_with, groebner_basis, groebner_basis_with, is_groebner_basis, normal_form,
    s_polynomial, GroebnerConfig, GroebnerStats, DEFAULT_PAIR_BUDGET,
};
pub use order::{MonomialOrder, OrderKind};
pub use poly::{Exponents, MultiPoly};
pub use rational::Rational;
pub use univariate::{
    eval_univariate_f64, extract_algebraic, factor_univariate, real_roots_numeric, roots_of_factor,
    squarefree_part, sturm_root_count, Factorization, RootSign, DEFAULT_ROOT_TOL,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExactError {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("S-pair budget of {budget} exhausted (basis size {basis_size}, {pending_pairs} pairs pending)")]
    Resource {
        budget: u64,
        basis_size: usize,
        pending_pairs: usize,
    },
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
}
