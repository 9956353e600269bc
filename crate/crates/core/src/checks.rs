//! Self-check suite run by `ncplanck checks`.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use crate::algebra::{
    coefficient_from_f64, poly_add, poly_mul, poisson_bracket, star_commutator, star_product,
    classical_limit_check, DeformationParameter, Noncommutativity, PhasePolynomial, Variable,
};
use crate::blackbody::{
    oracle_terms, rayleigh_jeans_density, spectral_density_closed, spectral_density_sum_oracle,
    stefan_boltzmann_check, wien_condition, wien_peak, zero_point_cutoff_energy,
};
use crate::cavity::{mode_count_vs_asymptotic, BoundaryConvention, CavitySpec};
use crate::oscillator::{classical_energy, energy_level, nc_oscillator_energy, OscillatorSpec};
use crate::sample::PolynomialFamily;
use crate::units::UnitSystem;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CheckConfig {
    pub seed: u64,
    pub associativity_samples: usize,
    /// Deliberately breaks the commutator check, to exercise the failure path.
    pub inject_fault: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            seed: 2024,
            associativity_samples: 200,
            inject_fault: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub elapsed: Duration,
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn var(d: usize, v: Variable) -> PhasePolynomial {
    PhasePolynomial::variable(d, v).expect("index within dimension")
}

fn commutator_canon(cfg: &CheckConfig) -> (bool, String) {
    let n = if cfg.inject_fault { 1.0 } else { 2.0 };
    let param = DeformationParameter::new(n).expect("positive");
    let mut ok = true;
    for d in 1..=3 {
        for i in 0..d {
            for j in 0..d {
                let c = star_commutator(&var(d, Variable::Q(i)), &var(d, Variable::P(j)), &param)
                    .expect("same dimension");
                let expected = if i == j {
                    PhasePolynomial::hbar(d).scale(&coefficient_from_f64(0.0, 1.0).expect("finite"))
                } else {
                    PhasePolynomial::zero(d)
                };
                ok &= c == expected;
            }
        }
    }
    (ok, format!("Q_i*P_j - P_j*Q_i = i hbar delta_ij for d <= 3 at N = {n}"))
}

fn oscillator_identity() -> (bool, String) {
    let mut ok = true;
    for omega in [1.0, 2.0, 7.5] {
        for n in [1.0, 2.0, 10.0] {
            let spec = OscillatorSpec::new(omega, Noncommutativity::Finite(n), UnitSystem::natural())
                .expect("valid spec");
            let shift = PhasePolynomial::hbar(1)
                .scale(&coefficient_from_f64(omega, 0.0).expect("finite"))
                .scale(&coefficient_from_f64(n, 0.0).expect("finite").inv());
            let expected = poly_add(&classical_energy(omega).expect("valid"), &shift).expect("d = 1");
            let got = nc_oscillator_energy(&spec).expect("valid");
            ok &= got == expected && got.to_string() == expected.to_string();
        }
    }
    (ok, "factored energy = classical + hbar omega / N for 9 (omega, N) pairs".into())
}

fn ladder_levels() -> (bool, String) {
    let nat = UnitSystem::natural();
    let physical = OscillatorSpec::new(1.0, Noncommutativity::Finite(2.0), nat).expect("valid");
    let free = OscillatorSpec::new(1.0, Noncommutativity::FreeField, nat).expect("valid");
    let ok = (0..=10_000u64).all(|n| {
        energy_level(n, &physical) == n as f64 + 0.5 && energy_level(n, &free) == n as f64
    });
    (ok, "W_n = (n + 1/2) hbar omega at N = 2 and n hbar omega when free, n <= 10^4".into())
}

fn oracle_equivalence() -> (bool, String) {
    let nat = UnitSystem::natural();
    let mut worst = 0.0f64;
    for x in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
        let n_max = match oracle_terms(x) {
            Ok(n) => n,
            Err(e) => return (false, e.to_string()),
        };
        for zp in [true, false] {
            let closed = spectral_density_closed(x, 1.0, &nat, zp).expect("domain");
            let oracle = spectral_density_sum_oracle(x, 1.0, &nat, n_max, zp).expect("domain");
            worst = worst
                .max(rel(oracle.total_density, closed.total_density))
                .max(rel(oracle.thermal_density, closed.thermal_density));
        }
    }
    (worst < 1e-10, format!("max relative deviation {worst:.3e} (limit 1e-10)"))
}

fn rayleigh_jeans_recovery() -> (bool, String) {
    let nat = UnitSystem::natural();
    let x = 1e-6;
    let thermal = spectral_density_closed(x, 1.0, &nat, false).expect("domain").thermal_density;
    let rj = rayleigh_jeans_density(x, 1.0, &nat).expect("domain");
    let err = rel(thermal, rj);
    (err < 5e-7, format!("relative deviation {err:.6e} at x = 1e-6 (limit 5e-7)"))
}

fn stefan_boltzmann() -> (bool, String) {
    match stefan_boltzmann_check(&UnitSystem::natural(), 64) {
        Ok(sb) => {
            let err = rel(sb.integral, PI.powi(4) / 15.0);
            (err < 1e-8, format!("integral {:.12} relative error {err:.3e}", sb.integral))
        }
        Err(e) => (false, e.to_string()),
    }
}

fn bisect_wien() -> f64 {
    let (mut lo, mut hi) = (1.0f64, 5.0f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if wien_condition(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

fn wien() -> (bool, String) {
    let peak = wien_peak(1.0, &UnitSystem::natural()).expect("domain");
    let oracle = bisect_wien();
    let ok = peak.residual < 1e-12 && (peak.x - oracle).abs() < 1e-12;
    (ok, format!("x* = {:.12}, residual {:.2e}", peak.x, peak.residual))
}

fn mode_counting() -> (bool, String) {
    let nat = UnitSystem::natural();
    let spec = CavitySpec::new(1.0, BoundaryConvention::Standing).expect("positive");
    let errors: Vec<f64> = [200.0, 400.0, 800.0, 1600.0]
        .iter()
        .map(|w| mode_count_vs_asymptotic(&spec, *w, &nat).expect("domain").relative_error.abs())
        .collect();
    let ok = errors[0] < 0.03 && errors.windows(2).all(|w| w[1] < w[0]);
    let listed: Vec<String> = errors.iter().map(|e| format!("{e:.3e}")).collect();
    (ok, format!("relative errors over doubling sweep [{}]", listed.join(", ")))
}

fn associativity(cfg: &CheckConfig) -> (bool, String) {
    let param = DeformationParameter::physical();
    let fam = PolynomialFamily::default();
    let triples = fam.triples(cfg.seed, cfg.associativity_samples);
    let failures = triples
        .iter()
        .filter(|[f, g, h]| {
            let left = star_product(&star_product(f, g, &param).expect("dim"), h, &param).expect("dim");
            let right = star_product(f, &star_product(g, h, &param).expect("dim"), &param).expect("dim");
            left != right
        })
        .count();
    (
        failures == 0,
        format!("{} triples, {failures} failures (seed {})", triples.len(), cfg.seed),
    )
}

fn classical_limit(cfg: &CheckConfig) -> (bool, String) {
    let param = DeformationParameter::physical();
    let fam = PolynomialFamily::default();
    let triples = fam.triples(cfg.seed, cfg.associativity_samples);
    let mut ok = true;
    for [f, g, _] in &triples {
        let lim = classical_limit_check(f, g, &param).expect("finite N");
        ok &= lim.hbar_component(0) == poisson_bracket(f, g).expect("dim");
        ok &= star_product(f, g, &param).expect("dim").hbar_component(0) == poly_mul(f, g).expect("dim");
    }
    (ok, format!("{} pairs: hbar^0 of scaled commutator = Poisson bracket", triples.len()))
}

fn zero_point_divergence() -> (bool, String) {
    let nat = UnitSystem::natural();
    let physical = Noncommutativity::Finite(2.0);
    let a = zero_point_cutoff_energy(3.0, &nat, physical).expect("domain");
    let b = zero_point_cutoff_energy(6.0, &nat, physical).expect("domain");
    let free = zero_point_cutoff_energy(3.0, &nat, Noncommutativity::FreeField).expect("domain");
    let ratio = b / a;
    ((ratio - 16.0).abs() < 1e-12 && free == 0.0, format!("doubling ratio {ratio}, free-field {free}"))
}

/// Runs every check in a fixed order.
pub fn run_checks(cfg: &CheckConfig) -> Vec<CheckOutcome> {
    type Check<'a> = (&'static str, Box<dyn Fn() -> (bool, String) + 'a>);
    let checks: Vec<Check<'_>> = vec![
        ("commutator-canon", Box::new(|| commutator_canon(cfg))),
        ("oscillator-identity", Box::new(oscillator_identity)),
        ("energy-ladder", Box::new(ladder_levels)),
        ("planck-oracle", Box::new(oracle_equivalence)),
        ("rayleigh-jeans", Box::new(rayleigh_jeans_recovery)),
        ("stefan-boltzmann", Box::new(stefan_boltzmann)),
        ("wien-peak", Box::new(wien)),
        ("mode-count", Box::new(mode_counting)),
        ("associativity", Box::new(|| associativity(cfg))),
        ("classical-limit", Box::new(|| classical_limit(cfg))),
        ("zero-point-divergence", Box::new(zero_point_divergence)),
    ];
    checks
        .into_iter()
        .map(|(name, run)| {
            let start = Instant::now();
            let (passed, detail) = run();
            CheckOutcome {
                name,
                passed,
                detail,
                elapsed: start.elapsed(),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn injected_fault_fails_only_the_commutator() {
        let cfg = CheckConfig {
            inject_fault: true,
            associativity_samples: 5,
            ..CheckConfig::default()
        };
        let (ok, _) = commutator_canon(&cfg);
        assert!(!ok);
        assert!(commutator_canon(&CheckConfig::default()).0);
    }

    #[test]
    fn bisection_agrees_with_known_root() {
        assert!((bisect_wien() - 2.821439372122079).abs() < 1e-12);
    }
}
