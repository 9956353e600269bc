//! Spectral energy density of thermal radiation with the zero-point term.
//!
//! All densities are per unit volume per unit angular frequency:
//!
//! ```text
//! rho(omega, T) = omega^2 / (pi^2 c^3) . ( hbar omega / (e^x - 1) + hbar omega / 2 ),
//! x = hbar omega / k T
//! ```
//!
//! The thermal and zero-point parts are always reported separately.
//!
//! Underflow policy: for `x > 700` the thermal part is exactly zero, and any
//! thermal energy below `1e-300` is flushed to zero.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Noncommutativity;
use crate::units::UnitSystem;

/// Beyond this reduced frequency the thermal occupation is returned as 0.
pub const THERMAL_CUTOFF_X: f64 = 700.0;
const FLUSH_TO_ZERO: f64 = 1e-300;

/// Relative size of the neglected tail in the Boltzmann-sum oracle.
pub const ORACLE_TAIL_TOLERANCE: f64 = 1e-14;
/// Largest ladder the Boltzmann-sum oracle will sum.
pub const ORACLE_TERM_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlackbodyError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("Boltzmann sum needs {required} terms, above the cap of {cap}")]
    TooManyTerms { required: u64, cap: u64 },
    #[error("Boltzmann weights underflow at x = {0}")]
    WeightUnderflow(f64),
    #[error("quadrature needs at least 64 points, got {0}")]
    TooFewPoints(usize),
    #[error("quadrature did not converge: relative error estimate {estimate:e}")]
    Quadrature { value: f64, estimate: f64 },
    #[error("spectrum sweep needs omega_min < omega_max and at least 2 points")]
    InvalidSweep,
}

fn positive(name: &'static str, value: f64) -> Result<f64, BlackbodyError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(BlackbodyError::NonPositive { name, value })
    }
}

/// One row of a spectrum; serialized keys are the sweep output schema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumPoint {
    pub omega: f64,
    pub temperature: f64,
    pub thermal_density: f64,
    pub zero_point_density: f64,
    pub total_density: f64,
    pub x: f64,
}

impl SpectrumPoint {
    fn new(omega: f64, temperature: f64, x: f64, thermal: f64, zero_point: f64) -> Self {
        SpectrumPoint {
            omega,
            temperature,
            thermal_density: thermal,
            zero_point_density: zero_point,
            total_density: thermal + zero_point,
            x,
        }
    }

    /// Densities per unit ordinary frequency `nu = omega / 2 pi`.
    pub fn per_frequency(&self) -> SpectrumPoint {
        let j = 2.0 * PI;
        SpectrumPoint {
            thermal_density: self.thermal_density * j,
            zero_point_density: self.zero_point_density * j,
            total_density: self.total_density * j,
            ..*self
        }
    }
}

/// Mode density `omega^2 / (pi^2 c^3)`, both polarizations included.
pub fn mode_density(omega: f64, units: &UnitSystem) -> f64 {
    omega * omega / (PI * PI * units.c_light.powi(3))
}

/// `hbar omega / (e^x - 1)` given `hbar omega` and `x`.
fn thermal_energy(quantum: f64, x: f64) -> f64 {
    if x > THERMAL_CUTOFF_X {
        return 0.0;
    }
    let e = quantum / x.exp_m1();
    if e < FLUSH_TO_ZERO {
        0.0
    } else {
        e
    }
}

pub fn mean_oscillator_energy(
    omega: f64,
    temperature: f64,
    units: &UnitSystem,
    include_zero_point: bool,
) -> Result<f64, BlackbodyError> {
    positive("omega", omega)?;
    positive("temperature", temperature)?;
    let quantum = units.hbar * omega;
    let x = units.reduced_frequency(omega, temperature);
    let zp = if include_zero_point { 0.5 * quantum } else { 0.0 };
    Ok(thermal_energy(quantum, x) + zp)
}

pub fn spectral_density_closed(
    omega: f64,
    temperature: f64,
    units: &UnitSystem,
    include_zero_point: bool,
) -> Result<SpectrumPoint, BlackbodyError> {
    positive("omega", omega)?;
    positive("temperature", temperature)?;
    let quantum = units.hbar * omega;
    let x = units.reduced_frequency(omega, temperature);
    let g = mode_density(omega, units);
    let zp = if include_zero_point { g * 0.5 * quantum } else { 0.0 };
    Ok(SpectrumPoint::new(omega, temperature, x, g * thermal_energy(quantum, x), zp))
}

/// Smallest ladder length whose neglected tail is below
/// [`ORACLE_TAIL_TOLERANCE`] relative to the full sum.
///
/// The remainder of `sum n e^{-nx}` beyond `n_max` is bounded by
/// `(n_max + 2) e^{-(n_max+1) x} / (1 - e^{-x})^2`; relative to the full
/// sum `e^{-x} / (1 - e^{-x})^2` that is `(n_max + 2) e^{-n_max x}`.
pub fn oracle_terms(x: f64) -> Result<u64, BlackbodyError> {
    positive("x", x)?;
    let log_tol = ORACLE_TAIL_TOLERANCE.ln();
    let excess = |n: u64| ((n + 2) as f64).ln() - n as f64 * x - log_tol;
    // excess rises up to n ~ 1/x - 2 and falls after; it is positive there
    let mut lo = (1.0 / x).ceil().min(1e18) as u64;
    if excess(lo) < 0.0 {
        // only possible when 1/x is tiny; walk down
        while lo > 0 && excess(lo - 1) < 0.0 {
            lo -= 1;
        }
        return Ok(lo);
    }
    let mut hi = lo.max(1) * 2;
    while excess(hi) >= 0.0 {
        lo = hi;
        hi *= 2;
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if excess(mid) < 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if hi > ORACLE_TERM_CAP {
        return Err(BlackbodyError::TooManyTerms {
            required: hi,
            cap: ORACLE_TERM_CAP,
        });
    }
    Ok(hi)
}

/// Boltzmann average over the ladder `W_n = (n + 1/2) hbar omega`, split
/// into the `n hbar omega` part and the `hbar omega / 2` part.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LadderMean {
    pub thermal: f64,
    pub zero_point: f64,
}

impl LadderMean {
    pub fn total(&self) -> f64 {
        self.thermal + self.zero_point
    }
}

/// Ratio of truncated sums with weights `scale . (1/kT) e^{-W_n / kT}`.
/// The result does not depend on `scale`.
pub fn ladder_mean_energy(
    quantum: f64,
    kt: f64,
    n_max: u64,
    weight_scale: f64,
) -> Result<LadderMean, BlackbodyError> {
    positive("hbar omega", quantum)?;
    positive("kT", kt)?;
    positive("weight scale", weight_scale)?;
    if n_max > ORACLE_TERM_CAP {
        return Err(BlackbodyError::TooManyTerms {
            required: n_max,
            cap: ORACLE_TERM_CAP,
        });
    }
    let x = quantum / kt;
    let mut weights = 0.0;
    let mut level_sum = 0.0;
    // smallest terms first
    for n in (0..=n_max).rev() {
        let w = weight_scale / kt * (-(n as f64 + 0.5) * x).exp();
        weights += w;
        level_sum += n as f64 * quantum * w;
    }
    if weights == 0.0 || !weights.is_finite() {
        return Err(BlackbodyError::WeightUnderflow(x));
    }
    Ok(LadderMean {
        thermal: level_sum / weights,
        zero_point: 0.5 * quantum * weights / weights,
    })
}

/// Brute-force spectral density from the Boltzmann sums over the ladder.
pub fn spectral_density_sum_oracle(
    omega: f64,
    temperature: f64,
    units: &UnitSystem,
    n_max: u64,
    include_zero_point: bool,
) -> Result<SpectrumPoint, BlackbodyError> {
    positive("omega", omega)?;
    positive("temperature", temperature)?;
    let quantum = units.hbar * omega;
    let kt = units.k_boltzmann * temperature;
    let mean = ladder_mean_energy(quantum, kt, n_max, 1.0)?;
    let g = mode_density(omega, units);
    let zp = if include_zero_point { g * mean.zero_point } else { 0.0 };
    Ok(SpectrumPoint::new(omega, temperature, quantum / kt, g * mean.thermal, zp))
}

/// [`spectral_density_sum_oracle`] with the ladder length from the tail bound.
pub fn spectral_density_oracle_auto(
    omega: f64,
    temperature: f64,
    units: &UnitSystem,
    include_zero_point: bool,
) -> Result<SpectrumPoint, BlackbodyError> {
    positive("omega", omega)?;
    positive("temperature", temperature)?;
    let n_max = oracle_terms(units.reduced_frequency(omega, temperature))?;
    spectral_density_sum_oracle(omega, temperature, units, n_max, include_zero_point)
}

/// Classical `omega^2 k T / (pi^2 c^3)`.
pub fn rayleigh_jeans_density(
    omega: f64,
    temperature: f64,
    units: &UnitSystem,
) -> Result<f64, BlackbodyError> {
    positive("omega", omega)?;
    positive("temperature", temperature)?;
    Ok(mode_density(omega, units) * units.k_boltzmann * temperature)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WienPeak {
    /// Root of `3 (1 - e^{-x}) = x`.
    pub x: f64,
    pub omega: f64,
    pub residual: f64,
}

/// `3 (1 - e^{-x}) - x`, proportional to `d/dx [x^3 / (e^x - 1)]`.
pub fn wien_condition(x: f64) -> f64 {
    -3.0 * (-x).exp_m1() - x
}

/// Reduced frequency of the thermal maximum, by Newton steps kept inside
/// a shrinking bracket.
pub fn wien_root() -> f64 {
    let (mut lo, mut hi) = (1.0_f64, 5.0_f64);
    let mut x = 3.0;
    for _ in 0..200 {
        let g = wien_condition(x);
        if g == 0.0 {
            return x;
        }
        if g > 0.0 {
            lo = x;
        } else {
            hi = x;
        }
        let slope = 3.0 * (-x).exp() - 1.0;
        let newton = x - g / slope;
        let next = if newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (next - x).abs() <= 4.0 * f64::EPSILON * x {
            return next;
        }
        x = next;
    }
    x
}

/// Angular frequency maximizing the thermal density. The zero-point part
/// grows as `omega^3` without bound and is not part of the search.
pub fn wien_peak(temperature: f64, units: &UnitSystem) -> Result<WienPeak, BlackbodyError> {
    positive("temperature", temperature)?;
    let x = wien_root();
    Ok(WienPeak {
        x,
        omega: x * units.k_boltzmann * temperature / units.hbar,
        residual: wien_condition(x).abs(),
    })
}

/// Gauss-Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * z * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// `x^3 / (e^x - 1)`, with the removable point at 0 and large-x tail.
pub fn bose_integrand(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x > THERMAL_CUTOFF_X {
        x.powi(3) * (-x).exp()
    } else {
        x.powi(3) / x.exp_m1()
    }
}

const MAP_SCALE: f64 = 4.0;

/// `int_0^inf x^3/(e^x - 1) dx` by Gauss-Legendre after `x = L t / (1 - t)`.
fn mapped_bose_integral(points: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(points);
    nodes
        .iter()
        .zip(&weights)
        .map(|(&z, &w)| {
            let t = 0.5 * (z + 1.0);
            let one_minus = 0.5 * (1.0 - z);
            let x = MAP_SCALE * t / one_minus;
            0.5 * w * bose_integrand(x) * MAP_SCALE / (one_minus * one_minus)
        })
        .sum()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StefanBoltzmann {
    pub integral: f64,
    /// Relative difference between `n` and `2n` point rules.
    pub error_estimate: f64,
    /// `a` in `u = a T^4`: `k^4 / (hbar^3 c^3 pi^2)` times the integral.
    pub energy_density_coefficient: f64,
}

impl StefanBoltzmann {
    pub fn thermal_energy_density(&self, temperature: f64) -> f64 {
        self.energy_density_coefficient * temperature.powi(4)
    }
}

/// Relative error estimate above which the quadrature is reported as failed.
pub const QUADRATURE_TOLERANCE: f64 = 1e-8;

pub fn stefan_boltzmann_check(
    units: &UnitSystem,
    quadrature_points: usize,
) -> Result<StefanBoltzmann, BlackbodyError> {
    if quadrature_points < 64 {
        return Err(BlackbodyError::TooFewPoints(quadrature_points));
    }
    let coarse = mapped_bose_integral(quadrature_points);
    let fine = mapped_bose_integral(2 * quadrature_points);
    let estimate = ((fine - coarse) / fine).abs();
    if estimate > QUADRATURE_TOLERANCE {
        return Err(BlackbodyError::Quadrature { value: fine, estimate });
    }
    let k4 = units.k_boltzmann.powi(4);
    let denom = units.hbar.powi(3) * units.c_light.powi(3) * PI * PI;
    Ok(StefanBoltzmann {
        integral: fine,
        error_estimate: estimate,
        energy_density_coefficient: k4 / denom * fine,
    })
}

/// `int_0^{omega_c} omega^2/(pi^2 c^3) . hbar omega / N d omega
///  = hbar omega_c^4 / (4 N pi^2 c^3)`, which is `hbar omega_c^4 / (8 pi^2 c^3)`
/// at `N = 2` and exactly 0 in the free-field limit.
pub fn zero_point_cutoff_energy(
    omega_cutoff: f64,
    units: &UnitSystem,
    deformation: Noncommutativity,
) -> Result<f64, BlackbodyError> {
    positive("omega cutoff", omega_cutoff)?;
    match deformation {
        Noncommutativity::FreeField => Ok(0.0),
        Noncommutativity::Finite(n) => {
            positive("N", n)?;
            Ok(units.hbar * omega_cutoff.powi(4) / (4.0 * n * PI * PI * units.c_light.powi(3)))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Spacing {
    Linear,
    Log,
}

/// Grid of `points` angular frequencies from `omega_min` to `omega_max`.
pub fn frequency_grid(
    omega_min: f64,
    omega_max: f64,
    points: usize,
    spacing: Spacing,
) -> Result<Vec<f64>, BlackbodyError> {
    positive("omega_min", omega_min)?;
    positive("omega_max", omega_max)?;
    if omega_min >= omega_max || points < 2 {
        return Err(BlackbodyError::InvalidSweep);
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|i| {
            let t = i as f64 / last;
            match (i, spacing) {
                (0, _) => omega_min,
                (i, _) if i == points - 1 => omega_max,
                (_, Spacing::Linear) => omega_min + t * (omega_max - omega_min),
                (_, Spacing::Log) => omega_min * (omega_max / omega_min).powf(t),
            }
        })
        .collect())
}

/// Closed-form spectrum over a frequency grid, evaluated in parallel with
/// results in grid order.
pub fn spectrum_sweep(
    temperature: f64,
    omegas: &[f64],
    units: &UnitSystem,
    include_zero_point: bool,
) -> Result<Vec<SpectrumPoint>, BlackbodyError> {
    omegas
        .par_iter()
        .map(|&w| spectral_density_closed(w, temperature, units, include_zero_point))
        .collect()
}
