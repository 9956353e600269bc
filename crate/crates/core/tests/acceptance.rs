//! Acceptance suite. Each test prints one `PASS`/`FAIL` line; run with
//! `cargo test -p ncplanck --test acceptance -- --nocapture` to see them.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use ncplanck::algebra::{
    classical_limit_check, coefficient_from_f64, coefficient_from_int, imaginary_unit,
    partial_derivative, poly_mul, poly_sub, star_commutator, star_product, Coefficient,
    DeformationParameter, MultiIndex, Noncommutativity, PhasePolynomial, Variable,
};
use ncplanck::blackbody::{
    oracle_terms, spectral_density_closed, spectral_density_oracle_auto, stefan_boltzmann_check,
    wien_condition, wien_root, zero_point_cutoff_energy,
};
use ncplanck::cavity::{mode_count_vs_asymptotic, BoundaryConvention, CavitySpec};
use ncplanck::oscillator::{energy_level, nc_oscillator_energy, OscillatorSpec};
use ncplanck::parser::format_canonical;
use ncplanck::sample::PolynomialFamily;
use ncplanck::units::UnitSystem;

fn report(id: u32, name: &str, ok: bool, elapsed: Duration, limit: Duration, detail: &str) {
    let within = elapsed < limit;
    let verdict = if ok && within { "PASS" } else { "FAIL" };
    println!(
        "{verdict} criterion {id:>2} {name}: {detail} [{:.3} s, limit {} s]",
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    assert!(ok, "criterion {id} ({name}) failed: {detail}");
    assert!(within, "criterion {id} ({name}) exceeded {limit:?}: {elapsed:?}");
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn real(v: f64) -> Coefficient {
    coefficient_from_f64(v, 0.0).unwrap()
}

fn monomial(q: &[u32], p: &[u32], hbar: u32, c: Coefficient) -> (MultiIndex, Coefficient) {
    (MultiIndex::new(q.to_vec(), p.to_vec(), hbar), c)
}

#[test]
fn criterion_01_commutator_canon() {
    let start = Instant::now();
    let param = DeformationParameter::physical();
    let mut failures = Vec::new();
    for d in 1..=3 {
        for i in 0..d {
            for j in 0..d {
                let q = PhasePolynomial::variable(d, Variable::Q(i)).unwrap();
                let p = PhasePolynomial::variable(d, Variable::P(j)).unwrap();
                let got = star_commutator(&q, &p, &param).unwrap();
                let expected = if i == j {
                    let zeros = vec![0; d];
                    PhasePolynomial::from_terms(d, [monomial(&zeros, &zeros, 1, imaginary_unit())]).unwrap()
                } else {
                    PhasePolynomial::zero(d)
                };
                if got != expected {
                    failures.push(format!("d={d} [q{},p{}] = {got}", i + 1, j + 1));
                }
            }
        }
    }
    let detail = if failures.is_empty() {
        "[q_i, p_j] = i*hbar*delta_ij for d = 1..3".to_string()
    } else {
        failures.join("; ")
    };
    report(1, "commutator canon", failures.is_empty(), start.elapsed(), Duration::from_secs(1), &detail);
}

#[test]
fn criterion_02_oscillator_identity() {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut checked = 0;
    for omega in [1.0, 2.0, 7.5] {
        for n in [1.0, 2.0, 10.0] {
            let w = real(omega);
            // 1/2 (p^2 + w^2 x^2) + hbar w / N, built term by term
            let expected = PhasePolynomial::from_terms(
                1,
                [
                    monomial(&[0], &[2], 0, real(0.5)),
                    monomial(&[2], &[0], 0, real(0.5) * &w * &w),
                    monomial(&[0], &[0], 1, &w / real(n)),
                ],
            )
            .unwrap();

            let x = PhasePolynomial::variable(1, Variable::Q(0)).unwrap();
            let p = PhasePolynomial::variable(1, Variable::P(0)).unwrap();
            let iwx = x.scale(&(imaginary_unit() * &w));
            let minus = poly_sub(&p, &iwx).unwrap();
            let plus = poly_sub(&p, &iwx.neg()).unwrap();
            let param = DeformationParameter::new(n).unwrap();
            let direct = star_product(&minus, &plus, &param).unwrap().scale(&real(0.5));

            let spec = OscillatorSpec::new(omega, Noncommutativity::Finite(n), UnitSystem::natural()).unwrap();
            let library = nc_oscillator_energy(&spec).unwrap();

            let want = format_canonical(&expected);
            for (label, got) in [("direct", &direct), ("library", &library)] {
                if format_canonical(got) != want || *got != expected {
                    failures.push(format!("omega={omega} N={n} {label}: {got} != {want}"));
                }
            }
            checked += 1;
        }
    }
    let detail = if failures.is_empty() {
        format!("{checked} (omega, N) pairs match 1/2 (p^2 + omega^2 q^2) + hbar omega / N")
    } else {
        failures.join("; ")
    };
    report(2, "oscillator identity", failures.is_empty(), start.elapsed(), Duration::from_secs(1), &detail);
}

#[test]
fn criterion_03_energy_ladder() {
    let start = Instant::now();
    let mut mismatches = 0u64;
    for units in [UnitSystem::natural(), UnitSystem::si()] {
        for omega in [1.0, 2.0, 7.5, 3.7e14] {
            let physical = OscillatorSpec::new(omega, Noncommutativity::Finite(2.0), units).unwrap();
            let free = OscillatorSpec::new(omega, Noncommutativity::FreeField, units).unwrap();
            let hw = units.hbar * omega;
            for n in 0..=10_000u64 {
                if energy_level(n, &physical) != hw * (n as f64 + 0.5) {
                    mismatches += 1;
                }
                if energy_level(n, &free) != hw * n as f64 {
                    mismatches += 1;
                }
            }
        }
    }
    let detail = format!("{mismatches} mismatches over n = 0..=10000, N = 2 and N = infinity");
    report(3, "energy ladder", mismatches == 0, start.elapsed(), Duration::from_secs(1), &detail);
}

/// Boltzmann sums written out independently of the library.
fn boltzmann_mean(x: f64, n_max: u64) -> (f64, f64) {
    let (mut z, mut e) = (0.0, 0.0);
    for n in (0..=n_max).rev() {
        let w = (-(n as f64 + 0.5) * x).exp();
        z += w;
        e += n as f64 * x * w;
    }
    (e / z, e / z + 0.5 * x)
}

#[test]
fn criterion_04_planck_oracle() {
    let start = Instant::now();
    let nat = UnitSystem::natural();
    let mut worst = 0.0f64;
    for x in [0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0] {
        // natural units, T = 1: omega = x
        let closed = spectral_density_closed(x, 1.0, &nat, true).unwrap();
        let oracle = spectral_density_oracle_auto(x, 1.0, &nat, true).unwrap();
        let n_max = oracle_terms(x).unwrap();
        let g = x * x / (PI * PI);
        let (thermal, total) = boltzmann_mean(x, n_max);
        for (a, b) in [
            (closed.thermal_density, oracle.thermal_density),
            (closed.total_density, oracle.total_density),
            (closed.thermal_density, g * thermal),
            (closed.total_density, g * total),
        ] {
            worst = worst.max(rel(a, b));
        }
    }
    let detail = format!("max relative deviation {worst:.3e} (limit 1e-10)");
    report(4, "planck oracle", worst < 1e-10, start.elapsed(), Duration::from_secs(5), &detail);
}

#[test]
fn criterion_05_rayleigh_jeans() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for units in [UnitSystem::natural(), UnitSystem::si()] {
        let temperature = 300.0;
        let kt = units.k_boltzmann * temperature;
        let omega = 1e-6 * kt / units.hbar;
        let pt = spectral_density_closed(omega, temperature, &units, true).unwrap();
        let rj = omega * omega * kt / (PI * PI * units.c_light.powi(3));
        worst = worst.max(rel(pt.thermal_density, rj));
    }
    let detail = format!("relative deviation {worst:.6e} at x = 1e-6 (limit 5e-7)");
    report(5, "rayleigh-jeans limit", worst < 5e-7, start.elapsed(), Duration::from_secs(1), &detail);
}

#[test]
fn criterion_06_stefan_boltzmann() {
    let start = Instant::now();
    let sb = stefan_boltzmann_check(&UnitSystem::natural(), 64).unwrap();
    let err = rel(sb.integral, PI.powi(4) / 15.0);
    let detail = format!("integral {:.15} vs pi^4/15, relative error {err:.3e} (limit 1e-8)", sb.integral);
    report(6, "stefan-boltzmann", err < 1e-8, start.elapsed(), Duration::from_secs(1), &detail);
}

#[test]
fn criterion_07_wien_peak() {
    let start = Instant::now();
    let f = |x: f64| 3.0 * (1.0 - (-x).exp()) - x;
    let (mut lo, mut hi) = (2.0f64, 4.0f64);
    while hi - lo > 1e-15 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let oracle = 0.5 * (lo + hi);
    let x = wien_root();
    let residual = wien_condition(x).abs().max(f(x).abs());
    let ok = residual < 1e-12 && (x - oracle).abs() < 1e-12 && (x - 2.821439).abs() < 5e-7;
    let detail = format!("x* = {x:.15}, bisection {oracle:.15}, residual {residual:.2e}");
    report(7, "wien peak", ok, start.elapsed(), Duration::from_secs(1), &detail);
}

/// Standing-wave modes with `|n|^2 <= r2`, counted by direct scan: two
/// polarizations for interior triples, one when exactly one index is zero.
fn brute_force_standing(r2: u64) -> u64 {
    let r = (r2 as f64).sqrt() as u64 + 1;
    let mut count = 0;
    for a in 0..=r {
        for b in 0..=r {
            if a * a + b * b > r2 {
                break;
            }
            for c in 0..=r {
                if a * a + b * b + c * c > r2 {
                    break;
                }
                let zeros = [a, b, c].iter().filter(|&&v| v == 0).count();
                count += match zeros {
                    0 => 2,
                    1 => 1,
                    _ => 0,
                };
            }
        }
    }
    count
}

#[test]
fn criterion_08_mode_counting() {
    let start = Instant::now();
    let nat = UnitSystem::natural();
    let spec = CavitySpec::new(1.0, BoundaryConvention::Standing).unwrap();
    let mut errors = Vec::new();
    let mut ok = true;
    for omega in [200.0, 400.0, 800.0, 1600.0] {
        let count = mode_count_vs_asymptotic(&spec, omega, &nat).unwrap();
        let r = omega / PI;
        let brute = brute_force_standing((r * r).floor() as u64);
        let asymptotic = omega.powi(3) / (3.0 * PI * PI);
        let err = ((brute as f64 - asymptotic) / asymptotic).abs();
        ok &= count.exact == brute && rel(count.asymptotic, asymptotic) < 1e-14;
        if omega == 200.0 {
            ok &= err < 0.03;
        }
        errors.push(err);
    }
    ok &= errors.windows(2).all(|w| w[1] < w[0]);
    let listed: Vec<String> = errors.iter().map(|e| format!("{e:.3e}")).collect();
    let detail = format!("relative errors at omega L/c = 200, 400, 800, 1600: {}", listed.join(", "));
    report(8, "mode counting", ok, start.elapsed(), Duration::from_secs(30), &detail);
}

#[test]
fn criterion_09_associativity() {
    let start = Instant::now();
    let family = PolynomialFamily::default();
    assert!(family.max_dimension <= 2 && family.max_degree <= 6);
    let triples = family.triples(0x5eed_0009, 200);
    let param = DeformationParameter::physical();
    let mut failures = 0;
    for [f, g, h] in &triples {
        let left = star_product(&star_product(f, g, &param).unwrap(), h, &param).unwrap();
        let right = star_product(f, &star_product(g, h, &param).unwrap(), &param).unwrap();
        if left != right {
            failures += 1;
        }
    }
    let detail = format!("{} triples, {failures} failures", triples.len());
    report(9, "associativity", triples.len() == 200 && failures == 0, start.elapsed(), Duration::from_secs(30), &detail);
}

fn poisson(f: &PhasePolynomial, g: &PhasePolynomial) -> PhasePolynomial {
    let mut out = PhasePolynomial::zero(f.dimension());
    for i in 0..f.dimension() {
        let d = |h: &PhasePolynomial, v| partial_derivative(h, v).unwrap();
        let a = poly_mul(&d(f, Variable::Q(i)), &d(g, Variable::P(i))).unwrap();
        let b = poly_mul(&d(f, Variable::P(i)), &d(g, Variable::Q(i))).unwrap();
        out = poly_sub(&poly_sub(&out, &b).unwrap(), &a.neg()).unwrap();
    }
    out
}

#[test]
fn criterion_10_classical_limit() {
    let start = Instant::now();
    let family = PolynomialFamily::default();
    let triples = family.triples(0x5eed_0010, 200);
    let mut failures = 0;
    let mut checked = 0;
    for n in [1.0, 2.0, 10.0] {
        let param = DeformationParameter::new(n).unwrap();
        // divide by 2 i hbar / N: multiply by N / (2 i) and read off hbar^1
        let factor = real(n) / (coefficient_from_int(0, 2));
        for [f, g, _] in &triples {
            let bracket = poisson(f, g);
            let direct = star_commutator(f, g, &param).unwrap().hbar_component(1).scale(&factor);
            let library = classical_limit_check(f, g, &param).unwrap().hbar_component(0);
            if direct != bracket || library != bracket {
                failures += 1;
            }
            checked += 1;
        }
    }
    let detail = format!("{checked} pairs over N = 1, 2, 10, {failures} failures");
    report(10, "classical-limit bracket", failures == 0, start.elapsed(), Duration::from_secs(10), &detail);
}

#[test]
fn criterion_11_zero_point_divergence() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut free_zero = true;
    for units in [UnitSystem::natural(), UnitSystem::si()] {
        for wc in [1.0, 3.3, 1e3, 2.5e15] {
            for n in [1.0, 2.0, 10.0] {
                let nc = Noncommutativity::Finite(n);
                let a = zero_point_cutoff_energy(wc, &units, nc).unwrap();
                let b = zero_point_cutoff_energy(2.0 * wc, &units, nc).unwrap();
                worst = worst.max((b / a - 16.0).abs() / 16.0);
            }
            free_zero &= zero_point_cutoff_energy(wc, &units, Noncommutativity::FreeField).unwrap() == 0.0;
        }
    }
    let ok = worst < 1e-12 && free_zero;
    let detail = format!("doubling ratio deviation {worst:.2e}, free field exactly 0: {free_zero}");
    report(11, "zero-point divergence", ok, start.elapsed(), Duration::from_secs(1), &detail);
}
