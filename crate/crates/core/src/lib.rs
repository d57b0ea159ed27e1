//! Exact elimination engine for ruler-and-compass construction scripts.
//!
//! A script is parsed into a [`construction::ConstructionProgram`], compiled
//! into a polynomial system over the rationals, and queried either for the
//! constant ratio of two lengths ([`prover`]) or for the implicit equation
//! of a traced point's locus ([`locus`]).

pub mod construction;
pub mod dsl;
pub mod exactmath;
pub mod locus;
pub mod prover;
