//! Exact phase-space polynomial algebra and the Moyal star product.

mod multi_index;
mod polynomial;
mod star;

use thiserror::Error;

pub use multi_index::{MultiIndex, Variable};
pub use polynomial::{
    coefficient_from_f64, coefficient_from_int, coefficient_to_complex64, evaluate, format_real,
    imaginary_unit, partial_derivative, poly_add, poly_mul, poly_pow, poly_sub,
    rational_from_f64, Coefficient, PhasePolynomial,
};
pub use star::{
    classical_limit_check, poisson_bracket, star_commutator, star_product,
    star_truncated_first_order, DeformationParameter, HbarTreatment, Noncommutativity,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("variable index {} exceeds dimension {dimension}", .index + 1)]
    IndexOutOfRange { index: usize, dimension: usize },
    #[error("evaluation point has {found} coordinates, expected {expected}")]
    PointLength { expected: usize, found: usize },
    #[error("deformation parameter N must be positive and finite, got {0}")]
    InvalidDeformation(f64),
    #[error("hbar value must be non-negative and finite, got {0}")]
    InvalidHbar(f64),
    #[error("non-finite value {0} cannot be an exact coefficient")]
    NonFinite(f64),
    #[error("operation needs finite N; the free-field limit has no commutator scale")]
    FreeFieldLimit,
}
