//! The error type shared by all modules.

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalcError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("axis index {index} out of range 1..={dim}")]
    AxisOutOfRange { index: usize, dim: usize },

    #[error("grade {grade} out of range for this operation")]
    GradeOutOfRange { grade: usize },

    #[error("grade mismatch: expected {expected}, found {found}")]
    GradeMismatch { expected: usize, found: usize },

    #[error("point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },

    #[error("multi-index must be strictly increasing within 1..=dim")]
    BadMultiIndex,

    #[error("metric is not symmetric")]
    AsymmetricMetric,

    #[error("metric is singular")]
    SingularMetric,

    #[error("operation requires a positive-definite metric")]
    NotRiemannian,

    #[error("sqrt(det g) is irrational; exact volume normalization unsupported for this metric")]
    IrrationalVolume,

    #[error("degenerate form: some nonzero vector field contracts it to zero")]
    DegenerateForm,

    #[error("structure form must have constant coefficients")]
    NonConstantCoefficients,

    #[error("non-generic or orientation-incompatible 3-form")]
    NonGenericThreeForm,

    #[error("pair invariant violated: the contraction of the structure form does not equal d(alpha)")]
    RejectedPair,

    #[error("inner bracket is not Hamiltonian-solvable")]
    InnerBracketUnsolvable,
}
