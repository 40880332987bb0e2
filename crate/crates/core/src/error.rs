use num_bigint::BigInt;
use num_rational::BigRational;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("degenerate lattice (determinant 0)")]
    Degenerate,
    #[error("gram matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },
    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("quadratic form is not positive definite (pivot {pivot} at index {index})")]
    NotPositiveDefinite { index: usize, pivot: BigRational },
    #[error("lattice is indefinite; a definite lattice is required")]
    Indefinite,
    #[error("zero vector is not allowed here")]
    ZeroVector,
    #[error("sublattice is not primitive (saturation index {index})")]
    NotPrimitive { index: BigInt },
    #[error("sublattice basis is linearly dependent")]
    DependentBasis,
    #[error("wrong signature: expected {expected}, got ({positive}, {negative})")]
    WrongSignature {
        expected: String,
        positive: usize,
        negative: usize,
    },
    #[error("no vectors of odd norm {0} exist in an even lattice")]
    OddNorm(i64),
    #[error("norm {0} is outside the admissible range")]
    NormOutOfRange(BigRational),
    #[error("degenerate extension: bordered gram has determinant 0")]
    DegenerateExtension,
    #[error("no standard even unimodular lattice II({0},{1}) is provided")]
    UnknownUnimodular(i64, i64),
    #[error("gram file: {0}")]
    GramFile(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T, E = LatticeError> = std::result::Result<T, E>;
