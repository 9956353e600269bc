//! Deformation-quantization toolkit: exact Moyal star products on
//! phase-space polynomials, the noncommutative harmonic oscillator, the
//! Planck radiation law with its zero-point term, and cavity mode counting.

pub mod algebra;
pub mod blackbody;
pub mod cavity;
pub mod checks;
pub mod oscillator;
pub mod parser;
pub mod sample;
pub mod units;

pub use algebra::{DeformationParameter, PhasePolynomial, Variable};
pub use units::UnitSystem;
