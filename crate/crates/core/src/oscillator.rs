//! Harmonic oscillator with star-product energy.
//!
//! Mass is absorbed into the coordinates: the classical energy is
//! `(p^2 + omega^2 x^2) / 2`, with `x = Q_1`, `p = P_1` at `d = 1`.

use thiserror::Error;

use crate::algebra::{
    coefficient_from_f64, poly_add, poly_mul, poly_sub, rational_from_f64, star_product,
    AlgebraError, Coefficient, DeformationParameter, Noncommutativity, PhasePolynomial, Variable,
};
use crate::units::UnitSystem;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OscillatorError {
    #[error("angular frequency must be positive and finite, got {0}")]
    InvalidFrequency(f64),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OscillatorSpec {
    omega: f64,
    deformation: Noncommutativity,
    units: UnitSystem,
}

impl OscillatorSpec {
    pub fn new(omega: f64, deformation: Noncommutativity, units: UnitSystem) -> Result<Self, OscillatorError> {
        if !omega.is_finite() || omega <= 0.0 {
            return Err(OscillatorError::InvalidFrequency(omega));
        }
        if let Noncommutativity::Finite(n) = deformation {
            DeformationParameter::new(n)?;
        }
        Ok(OscillatorSpec {
            omega,
            deformation,
            units,
        })
    }

    /// Natural units with `N = 2`.
    pub fn physical(omega: f64) -> Result<Self, OscillatorError> {
        OscillatorSpec::new(omega, Noncommutativity::Finite(2.0), UnitSystem::natural())
    }

    pub fn omega(&self) -> f64 {
        self.omega
    }

    pub fn deformation(&self) -> Noncommutativity {
        self.deformation
    }

    pub fn units(&self) -> UnitSystem {
        self.units
    }

    pub fn parameter(&self) -> DeformationParameter {
        match self.deformation {
            Noncommutativity::Finite(n) => DeformationParameter::new(n).expect("validated in new"),
            Noncommutativity::FreeField => DeformationParameter::free_field(),
        }
    }

    /// `hbar omega / N`; zero in the free-field limit.
    pub fn ground_shift(&self) -> f64 {
        match self.deformation {
            Noncommutativity::Finite(n) => self.units.hbar * self.omega / n,
            Noncommutativity::FreeField => 0.0,
        }
    }
}

fn x() -> PhasePolynomial {
    PhasePolynomial::variable(1, Variable::Q(0)).expect("d = 1")
}

fn p() -> PhasePolynomial {
    PhasePolynomial::variable(1, Variable::P(0)).expect("d = 1")
}

/// `p + sign * i omega x`.
fn ladder_factor(omega: f64, sign: f64) -> Result<PhasePolynomial, AlgebraError> {
    let c = coefficient_from_f64(0.0, sign * omega)?;
    poly_add(&p(), &x().scale(&c))
}

fn half() -> Coefficient {
    coefficient_from_f64(0.5, 0.0).expect("finite")
}

/// Product of the two factored forms, in the given order. The two
/// `1/sqrt(2)` prefactors are pulled out by bilinearity as an exact `1/2`.
fn factored_energy(spec: &OscillatorSpec, first_sign: f64) -> Result<PhasePolynomial, AlgebraError> {
    let a = ladder_factor(spec.omega, first_sign)?;
    let b = ladder_factor(spec.omega, -first_sign)?;
    Ok(star_product(&a, &b, &spec.parameter())?.scale(&half()))
}

/// `(p - i omega x)/sqrt 2 * (p + i omega x)/sqrt 2`, which equals
/// `(p^2 + omega^2 x^2)/2 + hbar omega / N`.
pub fn nc_oscillator_energy(spec: &OscillatorSpec) -> Result<PhasePolynomial, OscillatorError> {
    Ok(factored_energy(spec, -1.0)?)
}

/// The opposite ordering, `(p + i omega x) * (p - i omega x) / 2`, whose
/// `hbar` term has the opposite sign.
pub fn nc_oscillator_energy_reversed(spec: &OscillatorSpec) -> Result<PhasePolynomial, OscillatorError> {
    Ok(factored_energy(spec, 1.0)?)
}

/// `(p * p + omega^2 x * x) / 2`. Both products are ordinary squares, so
/// this ordering carries no `hbar` term.
pub fn nc_oscillator_energy_squares(spec: &OscillatorSpec) -> Result<PhasePolynomial, OscillatorError> {
    let param = spec.parameter();
    let pp = star_product(&p(), &p(), &param)?;
    let xx = star_product(&x(), &x(), &param)?;
    let w2 = coefficient_from_f64(spec.omega * spec.omega, 0.0)?;
    Ok(poly_add(&pp, &xx.scale(&w2))?.scale(&half()))
}

/// `(p^2 + omega^2 x^2)/2`, built directly without any star product.
pub fn classical_energy(omega: f64) -> Result<PhasePolynomial, OscillatorError> {
    let w2 = Coefficient::new(rational_from_f64(omega)? * rational_from_f64(omega)?, Default::default());
    let p2 = poly_mul(&p(), &p())?;
    let x2 = poly_mul(&x(), &x())?.scale(&w2);
    Ok(poly_add(&p2, &x2)?.scale(&half()))
}

/// Difference between the forward and reversed orderings (`2 hbar omega / N`).
pub fn ordering_gap(spec: &OscillatorSpec) -> Result<PhasePolynomial, OscillatorError> {
    Ok(poly_sub(
        &nc_oscillator_energy(spec)?,
        &nc_oscillator_energy_reversed(spec)?,
    )?)
}

/// `n hbar omega + hbar omega / N`; `(n + 1/2) hbar omega` at `N = 2` and
/// `n hbar omega` in the free-field limit.
pub fn energy_level(n: u64, spec: &OscillatorSpec) -> f64 {
    let hw = spec.units.hbar * spec.omega;
    match spec.deformation {
        Noncommutativity::Finite(big_n) => hw * (n as f64 + 1.0 / big_n),
        Noncommutativity::FreeField => hw * n as f64,
    }
}

/// `[energy_level(0), ..., energy_level(n_max)]`.
pub fn ladder(n_max: u64, spec: &OscillatorSpec) -> Vec<f64> {
    (0..=n_max).map(|n| energy_level(n, spec)).collect()
}
