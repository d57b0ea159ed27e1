//! Construction programs, their compilation to polynomial systems, and
//! floating-point witnesses.

pub mod compile;
pub mod program;
pub mod witness;

pub use compile::{
    compile, compile_with, AlgebraicModel, Axis, CompileOptions, Constraint, PinnedPoint, VarRole,
};
pub use program::{ConstructionProgram, Hint, Label, LinearExpr, ObjectKind, RefKind, Step, StepEntry};
pub use witness::{
    max_residual, numeric_witness, numeric_witness_with, BranchChoice, Pinning, Witness, WitnessOptions,
    DEFAULT_WITNESS_TOL,
};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("step {step}: undefined label {label}")]
    UndefinedLabel { step: String, label: String },
    #[error("label {label} defined twice")]
    DuplicateLabel { label: String },
    #[error("step {step}: a free point must come first")]
    NoFreePoint { step: String },
    #[error("step {step}: {label} is a {found}, expected a {expected}")]
    WrongKind {
        step: String,
        label: String,
        expected: RefKind,
        found: ObjectKind,
    },
    #[error("step {step}: branching step needs a hint")]
    MissingHint { step: String },
    #[error("step {step}: expected {expected} output label(s), found {found}")]
    Arity {
        step: String,
        expected: usize,
        found: usize,
    },
    #[error("step {step}: {reason}")]
    Invalid { step: String, reason: String },
    #[error("step {step} is degenerate: {reason}")]
    Degenerate { step: String, reason: String },
}
