//! `ncplanck` command-line front end.

mod table;

use std::io::{self, Write};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use ncplanck::algebra::{
    format_real, poisson_bracket, star_commutator, star_product, star_truncated_first_order,
    DeformationParameter, Noncommutativity, PhasePolynomial,
};
use ncplanck::blackbody::{
    frequency_grid, oracle_terms, spectral_density_sum_oracle, spectrum_sweep, wien_peak, Spacing,
};
use ncplanck::cavity::{enumerate_modes, mode_count_vs_asymptotic, BoundaryConvention, CavitySpec};
use ncplanck::checks::{run_checks, CheckConfig};
use ncplanck::oscillator::{energy_level, nc_oscillator_energy, OscillatorSpec};
use ncplanck::parser::{format_canonical, parse_expression, ParameterBindings, GRAMMAR};
use ncplanck::units::{UnitMode, UnitSystem};

use table::{Cell, OutputFormat, Table};

const EXIT_DOMAIN: u8 = 1;
const EXIT_CHECK_FAILED: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "ncplanck", version)]
#[command(about = "Moyal star products, the noncommutative oscillator and the Planck law with zero-point term")]
#[command(after_help = GRAMMAR)]
struct Cli {
    #[command(flatten)]
    global: GlobalArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct GlobalArgs {
    /// Unit system: natural (hbar = k = c = 1) or si.
    #[arg(long, global = true, default_value = "natural", value_parser = parse_units)]
    units: UnitMode,

    /// Deformation constant N (positive real) or "infinity" for the free field.
    #[arg(long = "N", global = true, default_value = "2", value_parser = parse_n)]
    n: Noncommutativity,

    /// Phase-space degrees of freedom for expressions.
    #[arg(long, global = true, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..=16))]
    dims: u32,

    /// Numeric binding for an expression identifier, as name=value. Repeatable.
    #[arg(long = "param", global = true, value_name = "NAME=VALUE")]
    params: Vec<String>,

    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,

    /// Significant digits of numeric output.
    #[arg(long, global = true, default_value_t = 12, value_parser = clap::value_parser!(u8).range(3..=17))]
    precision: u8,

    /// Seed for the random polynomial family used by `checks`.
    #[arg(long, global = true, default_value_t = 2024)]
    seed: u64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Star product of two expressions.
    Star {
        expr1: String,
        expr2: String,
        /// Keep only the first-order term of the expansion.
        #[arg(long)]
        first_order: bool,
    },
    /// Star commutator f*g - g*f of two expressions.
    Commutator {
        expr1: String,
        expr2: String,
        /// Print the Poisson bracket instead.
        #[arg(long)]
        poisson: bool,
    },
    /// Noncommutative oscillator energy and its level ladder.
    Oscillator {
        #[arg(long)]
        omega: f64,
        /// Highest level index to list.
        #[arg(long, default_value_t = 3)]
        levels: u64,
    },
    /// Spectral energy density over a frequency grid.
    Spectrum {
        #[arg(long)]
        temperature: f64,
        #[arg(long)]
        omega_min: f64,
        #[arg(long)]
        omega_max: f64,
        #[arg(long, default_value_t = 50)]
        points: usize,
        #[arg(long, value_enum, default_value_t = SpacingArg::Log)]
        spacing: SpacingArg,
        /// Add the Boltzmann-sum oracle column and its deviation.
        #[arg(long)]
        oracle: bool,
        /// Drop the zero-point term (textbook Planck law).
        #[arg(long)]
        no_zero_point: bool,
    },
    /// Cavity mode enumeration and comparison with the continuum count.
    Modes {
        /// Cavity side length.
        #[arg(long)]
        length: f64,
        #[arg(long)]
        omega_max: f64,
        #[arg(long, value_enum, default_value_t = ConventionArg::Standing)]
        convention: ConventionArg,
        /// List individual modes only when there are at most this many.
        #[arg(long, default_value_t = 200)]
        list_limit: usize,
    },
    /// Run the identity and oracle suite; exits 2 on any failure.
    Checks {
        /// Number of random polynomial triples.
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, hide = true)]
        inject_fault: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum SpacingArg {
    Linear,
    Log,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ConventionArg {
    Standing,
    Periodic,
}

fn parse_units(s: &str) -> Result<UnitMode, String> {
    s.parse()
}

fn parse_n(s: &str) -> Result<Noncommutativity, String> {
    match s.to_ascii_lowercase().as_str() {
        "infinity" | "inf" => Ok(Noncommutativity::FreeField),
        other => {
            let n: f64 = other.parse().map_err(|_| format!("invalid N '{s}'"))?;
            if n > 0.0 && n.is_finite() {
                Ok(Noncommutativity::Finite(n))
            } else {
                Err(format!("N must be positive and finite or 'infinity', got {s}"))
            }
        }
    }
}

struct Session {
    units: UnitSystem,
    deformation: Noncommutativity,
    dims: usize,
    bindings: ParameterBindings,
    format: OutputFormat,
    precision: usize,
    seed: u64,
}

impl Session {
    fn from_args(g: &GlobalArgs) -> Result<Self> {
        let mut bindings = ParameterBindings::new();
        for a in &g.params {
            bindings.bind_assignment(a)?;
        }
        Ok(Session {
            units: UnitSystem::from_mode(g.units),
            deformation: g.n,
            dims: g.dims as usize,
            bindings,
            format: g.format,
            precision: g.precision as usize,
            seed: g.seed,
        })
    }

    fn parameter(&self) -> DeformationParameter {
        match self.deformation {
            Noncommutativity::Finite(n) => DeformationParameter::new(n).expect("validated by parser"),
            Noncommutativity::FreeField => DeformationParameter::free_field(),
        }
    }

    fn parse(&self, label: &str, src: &str) -> Result<PhasePolynomial> {
        parse_expression(src, self.dims, &self.bindings)
            .with_context(|| format!("cannot parse {label} {src:?}"))
    }

    fn num(&self, v: f64) -> String {
        format_real(table::round_sig(v, self.precision))
    }

    /// Summary lines go to stdout for text output and stderr otherwise, so
    /// machine-readable stdout stays a single CSV/JSON document.
    fn note(&self, line: &str) {
        if self.format == OutputFormat::Text {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    }
}

fn emit(ctx: &Session, t: &Table) -> Result<()> {
    let stdout = io::stdout();
    let mut lock = stdout.lock();
    t.write(&mut lock, ctx.format, ctx.precision)?;
    lock.flush()?;
    Ok(())
}

fn emit_polynomial(ctx: &Session, operation: &'static str, p: &PhasePolynomial) -> Result<()> {
    if ctx.format == OutputFormat::Text {
        println!("{}", format_canonical(p));
        return Ok(());
    }
    let mut t = Table::new(vec!["operation", "result"]);
    t.push(vec![Cell::Text(operation.into()), Cell::Text(format_canonical(p))]);
    emit(ctx, &t)
}

fn cmd_star(ctx: &Session, e1: &str, e2: &str, first_order: bool) -> Result<()> {
    let f = ctx.parse("expr1", e1)?;
    let g = ctx.parse("expr2", e2)?;
    let param = ctx.parameter();
    let (name, r) = if first_order {
        ("star_first_order", star_truncated_first_order(&f, &g, &param)?)
    } else {
        ("star", star_product(&f, &g, &param)?)
    };
    emit_polynomial(ctx, name, &r)
}

fn cmd_commutator(ctx: &Session, e1: &str, e2: &str, poisson: bool) -> Result<()> {
    let f = ctx.parse("expr1", e1)?;
    let g = ctx.parse("expr2", e2)?;
    if poisson {
        emit_polynomial(ctx, "poisson_bracket", &poisson_bracket(&f, &g)?)
    } else {
        emit_polynomial(ctx, "star_commutator", &star_commutator(&f, &g, &ctx.parameter())?)
    }
}

fn cmd_oscillator(ctx: &Session, omega: f64, levels: u64) -> Result<()> {
    let spec = OscillatorSpec::new(omega, ctx.deformation, ctx.units)?;
    let energy = nc_oscillator_energy(&spec)?;
    let mut t = Table::new(vec!["n", "energy"]);
    for n in 0..=levels {
        t.push(vec![Cell::Int(n as i64), Cell::Num(energy_level(n, &spec))]);
    }
    if ctx.format == OutputFormat::Text {
        println!("symbolic energy: {}", format_canonical(&energy));
        println!("ground state: {}", ctx.num(energy_level(0, &spec)));
        let listed: Vec<String> = (0..=levels).map(|n| ctx.num(energy_level(n, &spec))).collect();
        println!("levels: {}", listed.join(", "));
        Ok(())
    } else {
        eprintln!("symbolic energy: {}", format_canonical(&energy));
        emit(ctx, &t)
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_spectrum(
    ctx: &Session,
    temperature: f64,
    omega_min: f64,
    omega_max: f64,
    points: usize,
    spacing: SpacingArg,
    oracle: bool,
    no_zero_point: bool,
) -> Result<()> {
    let spacing = match spacing {
        SpacingArg::Linear => Spacing::Linear,
        SpacingArg::Log => Spacing::Log,
    };
    let include_zp = !no_zero_point && ctx.deformation != Noncommutativity::FreeField;
    let grid = frequency_grid(omega_min, omega_max, points, spacing)?;
    let rows = spectrum_sweep(temperature, &grid, &ctx.units, include_zp)?;

    let mut columns = vec!["omega", "temperature", "thermal_density", "zero_point_density", "total_density", "x"];
    if oracle {
        columns.extend(["oracle_total_density", "oracle_relative_deviation"]);
    }
    let mut t = Table::new(columns);
    let mut worst = 0.0f64;
    for pt in &rows {
        let mut row = vec![
            Cell::Num(pt.omega),
            Cell::Num(pt.temperature),
            Cell::Num(pt.thermal_density),
            Cell::Num(pt.zero_point_density),
            Cell::Num(pt.total_density),
            Cell::Num(pt.x),
        ];
        if oracle {
            let n_max = oracle_terms(pt.x).with_context(|| format!("oracle at omega = {}", pt.omega))?;
            let o = spectral_density_sum_oracle(pt.omega, temperature, &ctx.units, n_max, include_zp)?;
            let dev = if pt.total_density == 0.0 {
                o.total_density.abs()
            } else {
                ((o.total_density - pt.total_density) / pt.total_density).abs()
            };
            worst = worst.max(dev);
            row.extend([Cell::Num(o.total_density), Cell::Num(dev)]);
        }
        t.push(row);
    }
    emit(ctx, &t)?;

    let peak = wien_peak(temperature, &ctx.units)?;
    let argmax = rows
        .iter()
        .max_by(|a, b| a.thermal_density.total_cmp(&b.thermal_density))
        .expect("at least two points");
    ctx.note(&format!(
        "thermal peak: grid omega {} vs Wien omega {} (x* = {})",
        ctx.num(argmax.omega),
        ctx.num(peak.omega),
        ctx.num(peak.x)
    ));
    if oracle {
        ctx.note(&format!("max relative deviation: {worst:.3e}"));
    }
    Ok(())
}

fn cmd_modes(
    ctx: &Session,
    length: f64,
    omega_max: f64,
    convention: ConventionArg,
    list_limit: usize,
) -> Result<()> {
    let convention = match convention {
        ConventionArg::Standing => BoundaryConvention::Standing,
        ConventionArg::Periodic => BoundaryConvention::Periodic,
    };
    let spec = CavitySpec::new(length, convention)?;
    let count = mode_count_vs_asymptotic(&spec, omega_max, &ctx.units)?;
    let mut t = Table::new(vec!["n1", "n2", "n3", "omega", "polarizations", "convention"]);
    let listed = count.exact as usize <= list_limit;
    if listed {
        let set = enumerate_modes(&spec, omega_max, &ctx.units)?;
        for r in set.records() {
            t.push(vec![
                Cell::Int(r.n1),
                Cell::Int(r.n2),
                Cell::Int(r.n3),
                Cell::Num(r.omega),
                Cell::Int(i64::from(r.polarizations)),
                Cell::Text(r.convention.to_string()),
            ]);
        }
    }
    if listed || ctx.format != OutputFormat::Text {
        emit(ctx, &t)?;
    }
    if !listed {
        ctx.note(&format!(
            "mode list suppressed ({} polarized modes > --list-limit {list_limit})",
            count.exact
        ));
    }
    ctx.note(&format!(
        "exact polarized modes: {}; continuum V w^3/(3 pi^2 c^3): {}; relative error: {:.6e}",
        count.exact,
        ctx.num(count.asymptotic),
        count.relative_error
    ));
    if count.too_few_modes {
        ctx.note("advisory: fewer than 1000 modes, the continuum comparison is not meaningful yet");
    }
    Ok(())
}

fn cmd_checks(ctx: &Session, samples: usize, inject_fault: bool) -> Result<bool> {
    let cfg = CheckConfig {
        seed: ctx.seed,
        associativity_samples: samples,
        inject_fault,
    };
    let outcomes = run_checks(&cfg);
    let all = outcomes.iter().all(|o| o.passed);
    if ctx.format == OutputFormat::Text {
        for o in &outcomes {
            println!(
                "{} {:<22} {} ({:.3} s)",
                if o.passed { "PASS" } else { "FAIL" },
                o.name,
                o.detail,
                o.elapsed.as_secs_f64()
            );
        }
        println!("{}", if all { "all checks passed" } else { "CHECK FAILURES" });
    } else {
        let mut t = Table::new(vec!["check", "passed", "detail"]);
        for o in &outcomes {
            t.push(vec![Cell::Text(o.name.into()), Cell::Bool(o.passed), Cell::Text(o.detail.clone())]);
        }
        emit(ctx, &t)?;
    }
    Ok(all)
}

fn run(cli: Cli) -> Result<bool> {
    let ctx = Session::from_args(&cli.global)?;
    match cli.command {
        Command::Star { expr1, expr2, first_order } => cmd_star(&ctx, &expr1, &expr2, first_order)?,
        Command::Commutator { expr1, expr2, poisson } => cmd_commutator(&ctx, &expr1, &expr2, poisson)?,
        Command::Oscillator { omega, levels } => cmd_oscillator(&ctx, omega, levels)?,
        Command::Spectrum {
            temperature,
            omega_min,
            omega_max,
            points,
            spacing,
            oracle,
            no_zero_point,
        } => cmd_spectrum(&ctx, temperature, omega_min, omega_max, points, spacing, oracle, no_zero_point)?,
        Command::Modes {
            length,
            omega_max,
            convention,
            list_limit,
        } => cmd_modes(&ctx, length, omega_max, convention, list_limit)?,
        Command::Checks { samples, inject_fault } => {
            if samples == 0 {
                bail!("--samples must be at least 1");
            }
            return cmd_checks(&ctx, samples, inject_fault);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_DOMAIN } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_CHECK_FAILED),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_DOMAIN)
        }
    }
}
