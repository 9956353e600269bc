use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UnitMode {
    Si,
    Natural,
}

impl fmt::Display for UnitMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            UnitMode::Si => "si",
            UnitMode::Natural => "natural",
        })
    }
}

impl FromStr for UnitMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "si" => Ok(UnitMode::Si),
            "natural" => Ok(UnitMode::Natural),
            other => Err(format!("unknown unit system '{other}' (expected si or natural)")),
        }
    }
}

/// Values of hbar, k_B and c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitSystem {
    pub hbar: f64,
    pub k_boltzmann: f64,
    pub c_light: f64,
    pub mode: UnitMode,
}

impl UnitSystem {
    /// Exact SI defining constants (CODATA 2018 for hbar).
    pub const fn si() -> Self {
        UnitSystem {
            hbar: 1.054571817e-34,
            k_boltzmann: 1.380649e-23,
            c_light: 2.99792458e8,
            mode: UnitMode::Si,
        }
    }

    /// hbar = k = c = 1.
    pub const fn natural() -> Self {
        UnitSystem {
            hbar: 1.0,
            k_boltzmann: 1.0,
            c_light: 1.0,
            mode: UnitMode::Natural,
        }
    }

    pub const fn from_mode(mode: UnitMode) -> Self {
        match mode {
            UnitMode::Si => UnitSystem::si(),
            UnitMode::Natural => UnitSystem::natural(),
        }
    }

    /// The dimensionless ratio `hbar omega / k T`.
    pub fn reduced_frequency(&self, omega: f64, temperature: f64) -> f64 {
        self.hbar * omega / (self.k_boltzmann * temperature)
    }
}

impl Default for UnitSystem {
    fn default() -> Self {
        UnitSystem::natural()
    }
}
