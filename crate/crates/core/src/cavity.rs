//! Electromagnetic modes of a cubic cavity of side `L`.
//!
//! Two boundary conventions are supported:
//!
//! * `Standing`: `k = pi n / L` with `n_i >= 0`. Triples with all entries
//!   positive carry two polarizations; triples with exactly one zero entry
//!   carry one (the field component along the zero direction is the only
//!   one that survives the wall conditions); triples with two zeros carry
//!   none.
//! * `Periodic`: `k = 2 pi n / L` over all nonzero integer triples, two
//!   polarizations each.
//!
//! Both give `V omega^3 / (3 pi^2 c^3)` polarized modes below `omega`
//! asymptotically.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::Noncommutativity;
use crate::units::UnitSystem;

/// Largest mode list `enumerate_modes` will materialize.
pub const MODE_CAP: u64 = 100_000_000;

/// Mode counts below this are too small for the asymptotic comparison.
pub const ASYMPTOTIC_MIN_MODES: u64 = 1000;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CavityError {
    #[error("{name} must be positive and finite, got {value}")]
    NonPositive { name: &'static str, value: f64 },
    #[error("{required} lattice modes exceed the cap of {cap}")]
    TooManyModes { required: u64, cap: u64 },
    #[error("expected {expected} amplitudes (one per mode and polarization), got {found}")]
    AmplitudeCount { expected: usize, found: usize },
    #[error("unknown boundary convention '{0}' (expected standing or periodic)")]
    UnknownConvention(String),
}

fn positive(name: &'static str, value: f64) -> Result<f64, CavityError> {
    if value > 0.0 && value.is_finite() {
        Ok(value)
    } else {
        Err(CavityError::NonPositive { name, value })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryConvention {
    #[default]
    Standing,
    Periodic,
}

impl BoundaryConvention {
    fn wavenumber_unit(self, side_length: f64) -> f64 {
        match self {
            BoundaryConvention::Standing => PI / side_length,
            BoundaryConvention::Periodic => 2.0 * PI / side_length,
        }
    }
}

impl fmt::Display for BoundaryConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BoundaryConvention::Standing => "standing",
            BoundaryConvention::Periodic => "periodic",
        })
    }
}

impl FromStr for BoundaryConvention {
    type Err = CavityError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "standing" => Ok(BoundaryConvention::Standing),
            "periodic" => Ok(BoundaryConvention::Periodic),
            other => Err(CavityError::UnknownConvention(other.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CavitySpec {
    side_length: f64,
    convention: BoundaryConvention,
}

impl CavitySpec {
    pub fn new(side_length: f64, convention: BoundaryConvention) -> Result<Self, CavityError> {
        positive("side length", side_length)?;
        Ok(CavitySpec {
            side_length,
            convention,
        })
    }

    pub fn side_length(&self) -> f64 {
        self.side_length
    }

    pub fn convention(&self) -> BoundaryConvention {
        self.convention
    }

    pub fn volume(&self) -> f64 {
        self.side_length.powi(3)
    }

    /// Largest integer `|n|^2` with `omega(n) <= omega_max`.
    fn squared_radius(&self, omega_max: f64, units: &UnitSystem) -> u64 {
        let r = omega_max / (units.c_light * self.convention.wavenumber_unit(self.side_length));
        (r * r).floor() as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mode {
    pub lattice: [i64; 3],
    pub omega: f64,
    pub polarization_count: u8,
}

impl Mode {
    pub fn squared_norm(&self) -> u64 {
        self.lattice.iter().map(|&n| (n * n) as u64).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeSet {
    pub convention: BoundaryConvention,
    pub side_length: f64,
    pub modes: Vec<Mode>,
}

impl ModeSet {
    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    /// Number of (mode, polarization) pairs.
    pub fn polarized_count(&self) -> usize {
        self.modes.iter().map(|m| m.polarization_count as usize).sum()
    }

    pub fn records(&self) -> Vec<ModeRecord> {
        self.modes
            .iter()
            .map(|m| ModeRecord {
                n1: m.lattice[0],
                n2: m.lattice[1],
                n3: m.lattice[2],
                omega: m.omega,
                polarizations: m.polarization_count,
                convention: self.convention,
            })
            .collect()
    }
}

/// Export row of a mode table; the field names are the CSV header / JSON keys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModeRecord {
    pub n1: i64,
    pub n2: i64,
    pub n3: i64,
    pub omega: f64,
    pub polarizations: u8,
    pub convention: BoundaryConvention,
}

fn standing_polarizations(triple: [i64; 3]) -> u8 {
    match triple.iter().filter(|&&n| n == 0).count() {
        0 => 2,
        1 => 1,
        _ => 0,
    }
}

/// `(lattice entries, polarized modes)` with `|n|^2 <= r2`, counted column
/// by column without materializing the modes.
fn count_lattice(convention: BoundaryConvention, r2: u64) -> (u64, u64) {
    let n = r2.isqrt() as i64;
    let mut entries = 0u64;
    let mut polarized = 0u64;
    match convention {
        BoundaryConvention::Standing => {
            for a in 0..=n {
                for b in 0..=n {
                    let used = (a * a + b * b) as u64;
                    if used > r2 {
                        break;
                    }
                    let m = (r2 - used).isqrt();
                    match (a == 0) as u8 + (b == 0) as u8 {
                        // c = 0 has one zero, c >= 1 none
                        0 => {
                            entries += m + 1;
                            polarized += 2 * m + 1;
                        }
                        // c = 0 has two zeros
                        1 => {
                            entries += m;
                            polarized += m;
                        }
                        _ => {}
                    }
                }
            }
        }
        BoundaryConvention::Periodic => {
            for a in -n..=n {
                for b in -n..=n {
                    let used = (a * a + b * b) as u64;
                    if used > r2 {
                        continue;
                    }
                    let m = (r2 - used).isqrt();
                    entries += 2 * m + 1;
                }
            }
            // origin
            entries -= 1;
            polarized = 2 * entries;
        }
    }
    (entries, polarized)
}

/// All modes with `omega <= omega_max`, ordered by frequency and then
/// lexicographically by lattice triple. Degenerate shells are kept as
/// separate entries.
pub fn enumerate_modes(
    spec: &CavitySpec,
    omega_max: f64,
    units: &UnitSystem,
) -> Result<ModeSet, CavityError> {
    positive("omega_max", omega_max)?;
    let r2 = spec.squared_radius(omega_max, units);
    let (entries, _) = count_lattice(spec.convention, r2);
    if entries > MODE_CAP {
        return Err(CavityError::TooManyModes {
            required: entries,
            cap: MODE_CAP,
        });
    }
    let n = r2.isqrt() as i64;
    let lo = match spec.convention {
        BoundaryConvention::Standing => 0,
        BoundaryConvention::Periodic => -n,
    };
    let unit = units.c_light * spec.convention.wavenumber_unit(spec.side_length);
    let mut modes = Vec::with_capacity(entries as usize);
    for a in lo..=n {
        for b in lo..=n {
            for c in lo..=n {
                let triple = [a, b, c];
                let s = (a * a + b * b + c * c) as u64;
                if s == 0 || s > r2 {
                    continue;
                }
                let polarization_count = match spec.convention {
                    BoundaryConvention::Standing => standing_polarizations(triple),
                    BoundaryConvention::Periodic => 2,
                };
                if polarization_count == 0 {
                    continue;
                }
                modes.push(Mode {
                    lattice: triple,
                    omega: unit * (s as f64).sqrt(),
                    polarization_count,
                });
            }
        }
    }
    modes.sort_by(|x, y| {
        x.squared_norm()
            .cmp(&y.squared_norm())
            .then_with(|| x.lattice.cmp(&y.lattice))
    });
    Ok(ModeSet {
        convention: spec.convention,
        side_length: spec.side_length,
        modes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeCount {
    /// Polarized lattice modes with `omega <= omega_max`.
    pub exact: u64,
    /// `V omega_max^3 / (3 pi^2 c^3)`.
    pub asymptotic: f64,
    /// `(exact - asymptotic) / asymptotic`.
    pub relative_error: f64,
    /// Set when fewer than [`ASYMPTOTIC_MIN_MODES`] modes were counted.
    pub too_few_modes: bool,
}

pub fn asymptotic_mode_count(spec: &CavitySpec, omega_max: f64, units: &UnitSystem) -> f64 {
    spec.volume() * omega_max.powi(3) / (3.0 * PI * PI * units.c_light.powi(3))
}

pub fn mode_count_vs_asymptotic(
    spec: &CavitySpec,
    omega_max: f64,
    units: &UnitSystem,
) -> Result<ModeCount, CavityError> {
    positive("omega_max", omega_max)?;
    let (_, exact) = count_lattice(spec.convention, spec.squared_radius(omega_max, units));
    let asymptotic = asymptotic_mode_count(spec, omega_max, units);
    Ok(ModeCount {
        exact,
        asymptotic,
        relative_error: (exact as f64 - asymptotic) / asymptotic,
        too_few_modes: exact < ASYMPTOTIC_MIN_MODES,
    })
}

/// Canonical amplitudes of one (mode, polarization) oscillator.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ModeAmplitude {
    pub q: f64,
    pub p: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FieldEnergy {
    /// `sum (P^2 + omega^2 Q^2) / 2`.
    pub classical: f64,
    /// `sum hbar omega / (2N)`: the displayed mode-sum formula taken
    /// literally, `hbar omega / 4` per term at `N = 2`.
    pub zero_point_literal: f64,
    /// `sum hbar omega / N`: one ground-state shift per oscillator,
    /// `hbar omega / 2` at `N = 2`, consistent with the radiation law.
    pub zero_point_per_oscillator: f64,
}

impl FieldEnergy {
    pub fn total_literal(&self) -> f64 {
        self.classical + self.zero_point_literal
    }

    pub fn total_per_oscillator(&self) -> f64 {
        self.classical + self.zero_point_per_oscillator
    }
}

/// Field energy of the mode set. `amplitudes` lists every polarization of
/// every mode in mode order.
pub fn field_energy(
    modes: &ModeSet,
    amplitudes: &[ModeAmplitude],
    deformation: Noncommutativity,
    units: &UnitSystem,
) -> Result<FieldEnergy, CavityError> {
    let expected = modes.polarized_count();
    if amplitudes.len() != expected {
        return Err(CavityError::AmplitudeCount {
            expected,
            found: amplitudes.len(),
        });
    }
    let inverse_n = match deformation {
        Noncommutativity::Finite(n) => 1.0 / positive("N", n)?,
        Noncommutativity::FreeField => 0.0,
    };
    let mut energy = FieldEnergy {
        classical: 0.0,
        zero_point_literal: 0.0,
        zero_point_per_oscillator: 0.0,
    };
    let mut amps = amplitudes.iter();
    for mode in &modes.modes {
        let w = mode.omega;
        for _ in 0..mode.polarization_count {
            let a = amps.next().expect("length checked");
            energy.classical += 0.5 * (a.p * a.p + w * w * a.q * a.q);
            let shift = units.hbar * w * inverse_n;
            energy.zero_point_literal += 0.5 * shift;
            energy.zero_point_per_oscillator += shift;
        }
    }
    Ok(energy)
}
