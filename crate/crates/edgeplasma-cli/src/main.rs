//! `edgeplasma` — command-line interface to the spectral channel-drift
//! toolkit: eigenvalue tables, instability intervals and their
//! classification, normal-form constants at the thresholds, initial-value
//! simulation, quasi-static parameter sweeps, and energy diagnostics.
//!
//! Exit codes: `0` success, `1` computation/runtime failure, `2` bad
//! arguments or configuration.

mod config;

use clap::{Args, Parser, Subcommand, ValueEnum};
use config::{parse_range, resolve_domain, FileConfig};
use edgeplasma::continuation::{lab_period, sweep, SweepProtocol};
use edgeplasma::hopf::{
    bifurcation_point, coeff_a, coeff_a_direct, coeff_b, coeff_b_numeric, degenerate_coeffs,
    eigenvectors, predicted_cycle, Threshold,
};
use edgeplasma::integrate::{simulate, IcSpec, IntegratorConfig, Scheme};
use edgeplasma::io::{
    read_state_json, write_bifurcation_csv, write_grid_csv, write_spectrum_csv, write_state_json,
    write_traces_csv, RunManifest,
};
use edgeplasma::spectral::synthesize;
use edgeplasma::stability::{
    classify_primary_report, instability_interval, spectrum_sweep, strip_dispersion,
    Classification, RegionStatus,
};
use edgeplasma::{energy, Domain, Error};
use num_complex::Complex64;
use serde_json::{json, Value};
use std::fmt;
use std::fs;
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};

#[derive(Debug)]
pub enum AppError {
    /// Bad arguments or configuration (exit 2).
    Usage(String),
    /// The computation itself failed (exit 1).
    Run(String),
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Usage(m) | AppError::Run(m) => write!(f, "{m}"),
        }
    }
}

impl From<Error> for AppError {
    fn from(e: Error) -> Self {
        AppError::Run(e.to_string())
    }
}

#[derive(Parser)]
#[command(
    name = "edgeplasma",
    version,
    about = "Spectral simulator and stability toolkit for a two-field channel drift model"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate per-mode eigenvalues over a dT range
    Spectrum(SpectrumArgs),
    /// Instability intervals per wavenumber and primality classification
    Stability(StabilityArgs),
    /// Normal-form constants at the instability thresholds
    Hopf(HopfArgs),
    /// Integrate the initial-value problem
    Simulate(SimulateArgs),
    /// Quasi-static dT sweep producing a bifurcation diagram
    #[command(name = "continue")]
    Continue(ContinueArgs),
    /// Energy and inequality diagnostics of a stored spectral state
    Energy(EnergyArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Wall-to-wall channel width
    #[arg(long = "L1", value_name = "LEN")]
    l1: Option<f64>,
    /// Periodic channel circumference
    #[arg(long = "L2", value_name = "LEN")]
    l2: Option<f64>,
    /// Viscosity / diffusivity
    #[arg(long, value_name = "NU")]
    nu: Option<f64>,
    /// Upper boundary drift speed
    #[arg(long = "Tplus", value_name = "SPEED")]
    t_plus: Option<f64>,
    /// Lower boundary drift speed (frame of reference)
    #[arg(long = "Tminus", value_name = "SPEED")]
    t_minus: Option<f64>,
    /// TOML configuration file; flags override its values
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Output directory (created if missing)
    #[arg(long, short = 'o', value_name = "DIR")]
    out: Option<PathBuf>,
    /// Worker threads (reserved; accepted and recorded, execution is serial)
    #[arg(long, value_name = "N")]
    threads: Option<usize>,
}

#[derive(Args)]
struct SpectrumArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// dT samples as start:end:count (default: the configured dT only)
    #[arg(long = "dT-range", value_name = "A:B:N")]
    d_t_range: Option<String>,
    /// Largest wall-normal index tabulated
    #[arg(long = "k1-max", default_value_t = 10)]
    k1_max: u32,
    /// Largest along-channel wavenumber tabulated (k2 in -k2-max..=k2-max)
    #[arg(long = "k2-max", default_value_t = 10)]
    k2_max: u32,
    /// Also evaluate the continuous-wavenumber dispersion over w in A:B:N
    #[arg(long = "continuous-k2", value_name = "A:B:N")]
    continuous_k2: Option<String>,
}

#[derive(Args)]
struct StabilityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Largest wavenumber whose interval is tabulated
    #[arg(long = "k2-max", default_value_t = 10)]
    k2_max: u32,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum ThresholdArg {
    Left,
    Right,
    Both,
}

#[derive(Args)]
struct HopfArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Wavenumber of the critical mode
    #[arg(long, default_value_t = 1)]
    k2: u32,
    /// Which threshold(s) to expand around
    #[arg(long, value_enum, default_value_t = ThresholdArg::Both)]
    threshold: ThresholdArg,
    /// Parameter offset for the predicted cycle (default: 1% of the
    /// interval width, directed into the interval)
    #[arg(long)]
    mu1: Option<f64>,
    /// Spectral truncation of the direct Galerkin assembly of the cubic
    /// coefficient
    #[arg(long = "assembly-n", default_value_t = 6)]
    assembly_n: usize,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum SchemeArg {
    /// Crank-Nicolson with Adams-Bashforth 2 (second order)
    CnAb2,
    /// Crank-Nicolson with explicit Euler (first order)
    CnEuler,
}

#[derive(Args)]
struct SimulateArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Step size (default: 1e-3 L2 / max(|T+|, |T-|, 1))
    #[arg(long)]
    dt: Option<f64>,
    /// Final time
    #[arg(long = "t-end")]
    t_end: Option<f64>,
    /// Initial condition: zero, eigenmode, or random
    #[arg(long)]
    ic: Option<String>,
    /// Initial state file (overrides --ic)
    #[arg(long = "ic-state", value_name = "FILE")]
    ic_state: Option<PathBuf>,
    /// Initial amplitude (largest coefficient modulus)
    #[arg(long)]
    amplitude: Option<f64>,
    /// RNG seed for the random initial condition
    #[arg(long)]
    seed: Option<u64>,
    /// Wavenumber seeded by the eigenmode initial condition
    #[arg(long = "ic-k2")]
    ic_k2: Option<u32>,
    /// Steps between trace records
    #[arg(long = "record-every", default_value_t = 10)]
    record_every: usize,
    /// Wall-normal spectral truncation
    #[arg(long = "k1-max", default_value_t = 16)]
    k1_max: usize,
    /// Along-channel spectral truncation
    #[arg(long = "k2-max", default_value_t = 16)]
    k2_max: usize,
    #[arg(long, value_enum, default_value_t = SchemeArg::CnAb2)]
    scheme: SchemeArg,
}

#[derive(Args)]
struct ContinueArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// dT samples as start:end:count
    #[arg(long = "dT-range", value_name = "A:B:N", required = true)]
    d_t_range: String,
    /// Settling time discarded at each point
    #[arg(long, default_value_t = 400.0)]
    transient: f64,
    /// Measurement window at each point
    #[arg(long, default_value_t = 200.0)]
    window: f64,
    /// Step size (default: integrator default)
    #[arg(long)]
    dt: Option<f64>,
    /// Steps between records in the measurement window
    #[arg(long = "record-every", default_value_t = 25)]
    record_every: usize,
    #[arg(long = "k1-max", default_value_t = 16)]
    k1_max: usize,
    #[arg(long = "k2-max", default_value_t = 16)]
    k2_max: usize,
    /// Eigenmode amplitude used to (re-)seed decayed states
    #[arg(long = "seed-amplitude", default_value_t = 1e-3)]
    seed_amplitude: f64,
}

#[derive(Args)]
struct EnergyArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Spectral state file to diagnose
    #[arg(long, value_name = "FILE", required = true)]
    state: PathBuf,
}

fn main() {
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(()) => 0,
        Err(e @ AppError::Usage(_)) => {
            eprintln!("error: {e}");
            2
        }
        Err(e @ AppError::Run(_)) => {
            eprintln!("error: {e}");
            1
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<(), AppError> {
    match cli.command {
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Stability(a) => cmd_stability(a),
        Command::Hopf(a) => cmd_hopf(a),
        Command::Simulate(a) => cmd_simulate(a),
        Command::Continue(a) => cmd_continue(a),
        Command::Energy(a) => cmd_energy(a),
    }
}

/// Resolve the pieces every command needs: config file, domain, output
/// directory (created), and a manifest seeded with the command line.
fn setup(common: &CommonArgs, extra_config: Value) -> Result<(Domain, PathBuf, RunManifest), AppError> {
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(AppError::Usage("--threads must be at least 1".into()));
        }
    }
    let file = FileConfig::load(common.config.as_deref())?;
    let domain = resolve_domain(
        common.l1,
        common.l2,
        common.nu,
        common.t_plus,
        common.t_minus,
        &file,
    )?;
    let out_dir = common
        .out
        .clone()
        .or_else(|| file.out_dir())
        .unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out_dir)
        .map_err(|e| AppError::Run(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut cfg_json = json!({
        "domain": domain_json(&domain),
        "threads": common.threads.unwrap_or(1),
        "execution": "serial",
    });
    if let Value::Object(extra) = extra_config {
        if let Value::Object(map) = &mut cfg_json {
            map.extend(extra);
        }
    }
    let command = std::env::args().collect::<Vec<_>>().join(" ");
    let manifest = RunManifest::new(command, cfg_json, Vec::new());
    Ok((domain, out_dir, manifest))
}

fn domain_json(d: &Domain) -> Value {
    json!({
        "L1": d.l1, "L2": d.l2, "nu": d.nu,
        "Tplus": d.t_plus, "Tminus": d.t_minus,
        "dT": d.delta_t(), "ell": d.ell(),
    })
}

fn cx(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn write_json(path: &Path, value: &Value) -> Result<(), AppError> {
    let file = fs::File::create(path).map_err(|e| AppError::Run(e.to_string()))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value).map_err(|e| AppError::Run(e.to_string()))?;
    w.write_all(b"\n").map_err(|e| AppError::Run(e.to_string()))?;
    w.flush().map_err(|e| AppError::Run(e.to_string()))?;
    Ok(())
}

fn finish(
    mut manifest: RunManifest,
    out_dir: &Path,
    files: &[PathBuf],
    seeds: Vec<u64>,
) -> Result<(), AppError> {
    manifest.seeds = seeds;
    for f in files {
        manifest.add_output(out_dir, f)?;
    }
    manifest.write(&out_dir.join("manifest.json"))?;
    Ok(())
}

fn cmd_spectrum(a: SpectrumArgs) -> Result<(), AppError> {
    let (domain, out_dir, manifest) = setup(
        &a.common,
        json!({
            "dT_range": a.d_t_range,
            "k1_max": a.k1_max,
            "k2_max": a.k2_max,
            "continuous_k2": a.continuous_k2,
        }),
    )?;
    let d_ts = match &a.d_t_range {
        Some(spec) => parse_range(spec, "--dT-range")?,
        None => vec![domain.delta_t()],
    };
    let rows = spectrum_sweep(&domain, &d_ts, a.k1_max, a.k2_max)?;
    let spectrum_path = out_dir.join("spectrum.csv");
    write_spectrum_csv(&spectrum_path, &rows)?;
    let mut files = vec![spectrum_path];

    if let Some(spec) = &a.continuous_k2 {
        let ws = parse_range(spec, "--continuous-k2")?;
        let rows = strip_dispersion(&domain, domain.delta_t(), &ws);
        let path = out_dir.join("strip.csv");
        let file = fs::File::create(&path).map_err(|e| AppError::Run(e.to_string()))?;
        let mut w = BufWriter::new(file);
        (|| -> std::io::Result<()> {
            writeln!(w, "# format: 1")?;
            writeln!(w, "w,re_lambda_plus,im_lambda_plus")?;
            for r in &rows {
                writeln!(w, "{},{},{}", r.w, r.lambda_plus.re, r.lambda_plus.im)?;
            }
            w.flush()
        })()
        .map_err(|e| AppError::Run(e.to_string()))?;
        files.push(path);
    }
    finish(manifest, &out_dir, &files, Vec::new())
}

fn region_json(r: &edgeplasma::Region) -> Value {
    json!({
        "k2": r.k2,
        "status": match r.status {
            RegionStatus::Absent => "absent",
            RegionStatus::Point => "point",
            RegionStatus::Interval => "interval",
        },
        "d_t_lower": r.d_t_lower,
        "d_t_upper": r.d_t_upper,
        "nu_crit": r.nu_crit,
        "d_t_peak": r.d_t_peak,
    })
}

fn cmd_stability(a: StabilityArgs) -> Result<(), AppError> {
    let (domain, out_dir, manifest) = setup(&a.common, json!({ "k2_max": a.k2_max }))?;
    if a.k2_max == 0 {
        return Err(AppError::Usage("--k2-max must be at least 1".into()));
    }
    let regions: Vec<Value> = (1..=a.k2_max)
        .map(|k2| instability_interval(&domain, k2).map(|r| region_json(&r)))
        .collect::<Result<_, _>>()?;

    let classification = match classify_primary_report(&domain) {
        Ok(report) => {
            let margins: Vec<Value> = report
                .margins
                .iter()
                .map(|m| {
                    json!({
                        "k2": m.k2,
                        "d_at_lower": m.d_at_lower,
                        "d_at_upper": m.d_at_upper,
                        "probe_below": m.probe_below,
                        "probe_above": m.probe_above,
                        "region": m.region.map(|(a, b)| json!([a, b])),
                        "contained": m.contained,
                    })
                })
                .collect();
            json!({
                "class": match report.region.classification {
                    Some(Classification::Primary) => "primary",
                    Some(Classification::LocallyPrimary) => "locally-primary",
                    Some(Classification::NotPrimary) => "not-primary",
                    Some(Classification::Unknown) | None => "unknown",
                },
                "fast_path_aspect": report.fast_path_aspect,
                "k2_cutoff": report.k2_cutoff,
                "worst_margin": { "k2": report.worst_margin.0, "value": report.worst_margin.1 },
                "margins": margins,
            })
        }
        // No reference interval: report the absence rather than failing.
        Err(Error::Precondition(msg)) => json!({ "class": null, "reason": msg }),
        Err(e) => return Err(e.into()),
    };

    let report = json!({
        "format": 1,
        "config": domain_json(&domain),
        "regions": regions,
        "classification": classification,
    });
    let path = out_dir.join("stability.json");
    write_json(&path, &report)?;
    finish(manifest, &out_dir, &[path], Vec::new())
}

fn threshold_json(
    domain: &Domain,
    which: Threshold,
    k2: u32,
    mu1_flag: Option<f64>,
    assembly_n: usize,
) -> Result<Value, AppError> {
    let bp = bifurcation_point(domain, which, k2)?;
    let (xi, eta, delta) = eigenvectors(&bp);
    let a = coeff_a(&bp);
    let a_direct = coeff_a_direct(&bp);
    let a_dual_residual = (a - a_direct).norm() / a.norm().max(f64::MIN_POSITIVE);

    let (b_val, b_assembled, b_residual, b_error) = match coeff_b(&bp) {
        Ok(b) => match coeff_b_numeric(&bp, assembly_n) {
            Ok(bn) => {
                let res = (bn - b).norm() / b.norm().max(f64::MIN_POSITIVE);
                (Some(b), Some(bn), Some(res), None)
            }
            Err(e) => (Some(b), None, None, Some(e.to_string())),
        },
        Err(e) => (None, None, None, Some(e.to_string())),
    };

    let region = instability_interval(domain, k2)?;
    let (lo, hi) = region.endpoints().expect("threshold exists");
    let span = hi - lo;
    let mu1 = mu1_flag.unwrap_or(match which {
        Threshold::Left => 0.01 * span,
        Threshold::Right => -0.01 * span,
    });
    let cycle = match predicted_cycle(&bp, mu1) {
        Ok(c) => json!({
            "mu1": mu1,
            "radius": c.radius,
            "amplitude_sup_u1": c.amplitude_sup_u1,
            "frequency_comoving": c.frequency_comoving,
            "frequency_lab": c.frequency_lab,
            "period_comoving": c.period_comoving,
            "period_lab": c.period_lab,
            "speed": c.speed,
        }),
        Err(e) => json!({ "mu1": mu1, "error": e.to_string() }),
    };

    Ok(json!({
        "which": match which { Threshold::Left => "left", Threshold::Right => "right" },
        "k2": k2,
        "d_t_c": bp.d_t_c,
        "omega": bp.omega,
        "c1": bp.c1, "c2": bp.c2, "c3": bp.c3, "c4": bp.c4,
        "relation_residual": bp.relation_residual(),
        "xi": [cx(xi[0]), cx(xi[1])],
        "eta": [cx(eta[0]), cx(eta[1])],
        "delta": cx(delta),
        "a": cx(a),
        "a_direct": cx(a_direct),
        "a_dual_residual": a_dual_residual,
        "b": b_val.map(cx),
        "b_assembled": b_assembled.map(cx),
        "b_residual": b_residual,
        "b_error": b_error,
        "cycle": cycle,
    }))
}

fn cmd_hopf(a: HopfArgs) -> Result<(), AppError> {
    let (domain, out_dir, manifest) = setup(
        &a.common,
        json!({
            "k2": a.k2,
            "threshold": format!("{:?}", a.threshold).to_lowercase(),
            "mu1": a.mu1,
            "assembly_n": a.assembly_n,
        }),
    )?;
    if a.k2 == 0 {
        return Err(AppError::Usage("--k2 must be at least 1".into()));
    }
    let which: &[Threshold] = match a.threshold {
        ThresholdArg::Left => &[Threshold::Left],
        ThresholdArg::Right => &[Threshold::Right],
        ThresholdArg::Both => &[Threshold::Left, Threshold::Right],
    };
    let thresholds: Vec<Value> = which
        .iter()
        .map(|&w| threshold_json(&domain, w, a.k2, a.mu1, a.assembly_n))
        .collect::<Result<_, _>>()?;

    let degenerate = match degenerate_coeffs(&domain) {
        Ok(d) => json!({
            "a0": d.a0, "a1": d.a1, "a2": d.a2, "a3": d.a3,
            "d_t_c": d.d_t_c, "c3": d.c3,
        }),
        Err(_) => Value::Null,
    };

    let report = json!({
        "format": 1,
        "config": domain_json(&domain),
        "thresholds": thresholds,
        "degenerate": degenerate,
    });
    let path = out_dir.join("hopf.json");
    write_json(&path, &report)?;
    finish(manifest, &out_dir, &[path], Vec::new())
}

fn cmd_simulate(a: SimulateArgs) -> Result<(), AppError> {
    let file = FileConfig::load(a.common.config.as_deref())?;
    let t_end = a.t_end.or(file.t_end()).unwrap_or(config::DEFAULT_T_END);
    let dt = a.dt.or(file.dt());
    let ic_kind = a
        .ic
        .clone()
        .or(file.ic_kind())
        .unwrap_or_else(|| config::DEFAULT_IC_KIND.to_string());
    let amplitude = a
        .amplitude
        .or(file.ic_amplitude())
        .unwrap_or(config::DEFAULT_IC_AMPLITUDE);
    let seed = a.seed.or(file.ic_seed()).unwrap_or(config::DEFAULT_IC_SEED);
    let ic_k2 = a.ic_k2.or(file.ic_k2()).unwrap_or(config::DEFAULT_IC_K2);

    let (domain, out_dir, manifest) = setup(
        &a.common,
        json!({
            "integrator": {
                "dt": dt, "t_end": t_end,
                "scheme": format!("{:?}", a.scheme).to_lowercase(),
                "record_every": a.record_every,
                "k1_max": a.k1_max, "k2_max": a.k2_max,
            },
            "ic": {
                "kind": if a.ic_state.is_some() { "state".to_string() } else { ic_kind.clone() },
                "state_file": a.ic_state.as_ref().map(|p| p.display().to_string()),
                "amplitude": amplitude, "seed": seed, "k2": ic_k2,
            },
        }),
    )?;

    let mut seeds = Vec::new();
    let ic = if let Some(path) = &a.ic_state {
        IcSpec::State(read_state_json(path)?)
    } else {
        match ic_kind.as_str() {
            "zero" => IcSpec::Zero,
            "eigenmode" => IcSpec::Eigenmode {
                k2: ic_k2,
                amplitude,
            },
            "random" => {
                seeds.push(seed);
                IcSpec::Random { amplitude, seed }
            }
            other => {
                return Err(AppError::Usage(format!(
                    "unknown initial condition '{other}' (expected zero, eigenmode, or random)"
                )))
            }
        }
    };
    let icfg = IntegratorConfig {
        dt,
        t_end,
        scheme: match a.scheme {
            SchemeArg::CnAb2 => Scheme::CnAb2,
            SchemeArg::CnEuler => Scheme::CnEuler,
        },
        ic,
        record_every: a.record_every,
        k1_max: a.k1_max,
        k2_max: a.k2_max,
        snapshot_times: Vec::new(),
    };
    let traj = simulate(&domain, &icfg)?;

    let traces = out_dir.join("traces.csv");
    write_traces_csv(&traces, &traj.records)?;
    let state_path = out_dir.join("state.json");
    write_state_json(&state_path, &traj.final_state)?;
    let n1 = 2 * traj.final_state.k1_max();
    let n2 = 2 * traj.final_state.k2_max() + 2;
    let field = synthesize(&domain, &traj.final_state, n1, n2)?;
    let grid_path = out_dir.join("grid.csv");
    write_grid_csv(&grid_path, &field)?;

    finish(manifest, &out_dir, &[traces, state_path, grid_path], seeds)
}

fn cmd_continue(a: ContinueArgs) -> Result<(), AppError> {
    let file = FileConfig::load(a.common.config.as_deref())?;
    let dt = a.dt.or(file.dt());
    let (domain, out_dir, manifest) = setup(
        &a.common,
        json!({
            "dT_range": a.d_t_range,
            "protocol": {
                "transient": a.transient, "window": a.window, "dt": dt,
                "record_every": a.record_every,
                "k1_max": a.k1_max, "k2_max": a.k2_max,
                "seed_amplitude": a.seed_amplitude,
            },
        }),
    )?;
    let d_ts = parse_range(&a.d_t_range, "--dT-range")?;
    let protocol = SweepProtocol {
        transient: a.transient,
        window: a.window,
        dt,
        record_every: a.record_every,
        k1_max: a.k1_max,
        k2_max: a.k2_max,
        seed_amplitude: a.seed_amplitude,
        amp_floor: edgeplasma::tolerances::AMP_FLOOR,
    };
    let (start, end) = (d_ts[0], *d_ts.last().unwrap());
    let step = if d_ts.len() > 1 {
        d_ts[1] - d_ts[0]
    } else {
        1.0
    };
    let points = sweep(&domain, start, end, step, &protocol)?;
    let path = out_dir.join("bifurcation.csv");
    write_bifurcation_csv(&path, &points)?;

    // Companion summary with lab-frame periods for the periodic points.
    let rows: Vec<Value> = points
        .iter()
        .map(|p| {
            json!({
                "dT": p.d_t,
                "amplitude": p.amplitude,
                "period_comoving": p.period,
                "period_lab": p.period.map(|per| lab_period(&domain, per, 1)),
                "classification": p.classification.label(),
            })
        })
        .collect();
    let summary = json!({ "format": 1, "config": domain_json(&domain), "points": rows });
    let sum_path = out_dir.join("bifurcation.json");
    write_json(&sum_path, &summary)?;

    finish(manifest, &out_dir, &[path, sum_path], Vec::new())
}

fn cmd_energy(a: EnergyArgs) -> Result<(), AppError> {
    let (domain, out_dir, manifest) = setup(
        &a.common,
        json!({ "state_file": a.state.display().to_string() }),
    )?;
    let state = read_state_json(&a.state)?;
    let pi = std::f64::consts::PI;

    let energy_value = match energy::energy(&domain, &state, 0.0, 0.0) {
        Ok(rec) => json!({
            "l2_sq": rec.l2_sq,
            "grad_v_sq": rec.grad_v_sq,
            "energy": rec.energy,
        }),
        Err(e) => json!({ "error": e.to_string() }),
    };
    let poincare = match energy::poincare_ratios(&domain, &state) {
        Ok((p1, p2)) => {
            let cap1 = 2.0 * domain.l1 * domain.l1 / (pi * pi);
            let cap2 = domain.l1 * domain.l1 / (pi * pi);
            json!({
                "grad_v_over_l2": p1, "bound1": cap1,
                "l2_over_grad": p2, "bound2": cap2,
                "satisfied": p1 <= cap1 * (1.0 + 1e-12) && p2 <= cap2 * (1.0 + 1e-12),
            })
        }
        Err(e) => json!({ "error": e.to_string() }),
    };
    let report = json!({
        "format": 1,
        "config": domain_json(&domain),
        "state_file": a.state.display().to_string(),
        "l2_sq": energy::l2_norm_sq(&domain, &state),
        "grad_norm_sq": energy::grad_norm_sq(&domain, &state),
        "sum_norm_sq": energy::sum_norm_sq(&domain, &state),
        "energy": energy_value,
        "poincare": poincare,
        "cross_identity_residual": energy::cross_identity_residual(&domain, &state),
    });
    let path = out_dir.join("energy.json");
    write_json(&path, &report)?;
    finish(manifest, &out_dir, &[path], Vec::new())
}
