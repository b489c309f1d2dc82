//! `qillum`: quantum-illumination exponents, sweeps, theorem checks and Fock
//! oracle cross-checks.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error, 3 the Fock
//! oracle cannot run at the requested parameters.

use std::io::{self, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qillum::fock::{gaussian_crosscheck, verify_lemma1, verify_theorem1_fock, Lemma1Config, NonGaussianConfig, Quantity};
use qillum::optimality::{verify_theorem3, DEFAULT_MODE_MARGIN, DEFAULT_SLACK};
use qillum::{
    advantage_db, coherent_exponent, exponent_no_memory, modes_required, tmsv_exponent, verify_theorem1,
    verify_theorem2, Error, GaussianState, IlluminationParams, OracleConfig, Scale, SweepAxis, SweepRow, SweepSpec,
    SweepValues, VerificationReport,
};

const SLACK_ENV: &str = "QI_DEFAULT_SLACK";
const CSV_SCHEMA: &str = "# schema=1";
const CSV_HEADER: &str = "eta,E,N_B,exponent_coherent,exponent_tmsv,advantage_db,modes_required";

#[derive(Parser)]
#[command(name = "qillum", version, about = "Stein exponents of quantum illumination with Gaussian probes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Exponent of a single probe.
    Exponent(ExponentArgs),
    /// Closed-form exponents along one parameter axis, as CSV.
    Sweep(SweepArgs),
    /// Randomized optimality checks; prints a JSON array of reports.
    Verify(VerifyArgs),
    /// Compare a Gaussian-formula value with the truncated Fock-space oracle.
    OracleCheck(OracleArgs),
}

#[derive(Args, Clone, Copy)]
struct ChannelArgs {
    /// Target reflectivity η.
    #[arg(long, default_value_t = 0.1)]
    eta: f64,
    /// Mean signal photons per mode E.
    #[arg(long, default_value_t = 0.3)]
    energy: f64,
    /// Thermal background photons per mode N_B.
    #[arg(long, default_value_t = 1.0)]
    noise: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Probe {
    Coherent,
    Tmsv,
    Vacuum,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct ExponentArgs {
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, value_enum, default_value_t = Probe::Tmsv)]
    probe: Probe,
    /// Number of signal modes n.
    #[arg(long, default_value_t = 1)]
    modes: usize,
    /// Report the exponent per signal mode (default).
    #[arg(long, conflicts_with = "total")]
    per_mode: bool,
    /// Report the total exponent over all n modes.
    #[arg(long)]
    total: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Safety factor in the modes-required estimate margin·N_B/(ηE).
    #[arg(long, default_value_t = DEFAULT_MODE_MARGIN)]
    margin: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    #[value(name = "eta")]
    Eta,
    #[value(name = "E", alias = "energy")]
    Energy,
    #[value(name = "N_B", alias = "noise")]
    Noise,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Explicit comma-separated axis values.
    #[arg(long, value_delimiter = ',', num_args = 1.., conflicts_with_all = ["start", "stop", "count"])]
    values: Option<Vec<f64>>,
    #[arg(long, requires_all = ["stop", "count"])]
    start: Option<f64>,
    #[arg(long)]
    stop: Option<f64>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
    scale: ScaleArg,
    /// Fixed values of the other two parameters.
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = DEFAULT_MODE_MARGIN)]
    margin: f64,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum TheoremArg {
    #[value(name = "1")]
    One,
    #[value(name = "2")]
    Two,
    #[value(name = "3")]
    Three,
    #[value(name = "lemma1")]
    Lemma1,
    /// Non-Gaussian spot check of theorem 1 on the Fock oracle.
    #[value(name = "fock1")]
    Fock1,
    #[value(name = "all")]
    All,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = TheoremArg::All)]
    theorem: TheoremArg,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[command(flatten)]
    channel: ChannelArgs,
    #[arg(long, default_value_t = 1)]
    modes: usize,
    /// Allowed violation for theorems 1-3 [default: $QI_DEFAULT_SLACK or 1e-9].
    #[arg(long)]
    slack: Option<f64>,
    #[arg(long, default_value_t = Lemma1Config::default().eta)]
    lemma_eta: f64,
    #[arg(long, default_value_t = Lemma1Config::default().n_b)]
    lemma_noise: f64,
    #[arg(long, default_value_t = Lemma1Config::default().cutoff)]
    lemma_cutoff: usize,
    #[arg(long, default_value_t = Lemma1Config::default().samples)]
    lemma_samples: usize,
    #[arg(long, default_value_t = Lemma1Config::default().tolerance)]
    lemma_tolerance: f64,
    #[arg(long, default_value_t = NonGaussianConfig::default().samples)]
    fock_samples: usize,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuantityArg {
    Entropy,
    ConditionalEntropy,
    ExponentWithMemory,
    ExponentNoMemory,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long, value_enum)]
    quantity: QuantityArg,
    #[arg(long, default_value_t = 0.3)]
    eta: f64,
    /// Signal photons E (for `entropy`, the thermal photon number).
    #[arg(long, default_value_t = 0.2)]
    energy: f64,
    #[arg(long, default_value_t = 0.5)]
    noise: f64,
    #[arg(long, default_value_t = 1e-4)]
    tolerance: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

/// Failure of a command, mapped to an exit code.
enum Failure {
    Usage(String),
    Verification,
    Infeasible(String),
    Io(io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_cutoff_infeasible() {
            Failure::Infeasible(e.to_string())
        } else {
            Failure::Usage(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

type CmdResult = Result<(), Failure>;

fn fmt_num(v: f64) -> String {
    if v.is_nan() {
        "nan".into()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{v:.11e}")
    }
}

fn csv_row(r: &SweepRow) -> String {
    let modes = r.modes_required.map_or_else(|| "inf".to_string(), |m| m.to_string());
    format!(
        "{},{},{},{},{},{},{}",
        fmt_num(r.eta),
        fmt_num(r.energy),
        fmt_num(r.n_b),
        fmt_num(r.exponent_coherent),
        fmt_num(r.exponent_tmsv),
        fmt_num(r.advantage_db.unwrap_or(f64::NAN)),
        modes
    )
}

#[derive(Serialize)]
struct ExponentRecord {
    probe: Probe,
    eta: f64,
    #[serde(rename = "E")]
    energy: f64,
    #[serde(rename = "N_B")]
    n_b: f64,
    modes: usize,
    exponent: f64,
    unit: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    advantage_db: Option<Option<f64>>,
    modes_required: Option<u64>,
}

fn cmd_exponent(args: &ExponentArgs, out: &mut impl Write) -> CmdResult {
    let c = args.channel;
    let p = IlluminationParams::new(c.eta, c.energy, c.noise, args.modes)?;
    let exponent = match args.probe {
        Probe::Coherent => coherent_exponent(&p)?,
        Probe::Tmsv => tmsv_exponent(&p)?,
        Probe::Vacuum => exponent_no_memory(&GaussianState::vacuum(args.modes), p.eta, p.n_b)?,
    };
    let (value, unit) = if args.total {
        (exponent.total, "nats")
    } else {
        (exponent.per_mode, "nats/mode")
    };
    let record = ExponentRecord {
        probe: args.probe,
        eta: p.eta,
        energy: p.energy,
        n_b: p.n_b,
        modes: p.n_signal,
        exponent: value,
        unit,
        advantage_db: (args.probe == Probe::Tmsv).then(|| advantage_db(&p)).transpose()?,
        modes_required: match args.probe {
            Probe::Vacuum => None,
            _ => modes_required(&p, args.margin)?,
        },
    };
    match args.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&record).expect("record serializes"))?,
        Format::Csv => {
            writeln!(out, "probe,eta,E,N_B,modes,exponent,unit,advantage_db,modes_required")?;
            let db = record.advantage_db.flatten().map_or_else(|| "nan".to_string(), fmt_num);
            let modes = record.modes_required.map_or_else(|| "inf".to_string(), |m| m.to_string());
            let probe = serde_json::to_value(record.probe).expect("probe serializes");
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{}",
                probe.as_str().unwrap_or_default(),
                fmt_num(p.eta),
                fmt_num(p.energy),
                fmt_num(p.n_b),
                p.n_signal,
                fmt_num(value),
                unit,
                db,
                modes
            )?;
        }
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs, out: &mut impl Write) -> CmdResult {
    let values = match (&args.values, args.start, args.stop, args.count) {
        (Some(v), ..) => SweepValues::List(v.clone()),
        (None, Some(start), Some(stop), Some(count)) => SweepValues::Range {
            start,
            stop,
            count,
            scale: match args.scale {
                ScaleArg::Linear => Scale::Linear,
                ScaleArg::Log => Scale::Log,
            },
        },
        _ => return Err(Failure::Usage("give --values or --start/--stop/--count".into())),
    };
    let axis = match args.axis {
        AxisArg::Eta => SweepAxis::Eta,
        AxisArg::Energy => SweepAxis::Energy,
        AxisArg::Noise => SweepAxis::Noise,
    };
    let c = args.channel;
    let spec = SweepSpec {
        axis,
        values,
        fixed: IlluminationParams {
            eta: c.eta,
            energy: c.energy,
            n_b: c.noise,
            n_signal: 1,
        },
    };
    let rows = spec.run(args.margin)?;
    writeln!(out, "{CSV_SCHEMA}")?;
    writeln!(out, "{CSV_HEADER}")?;
    for r in &rows {
        writeln!(out, "{}", csv_row(r))?;
    }
    Ok(())
}

fn default_slack() -> Result<f64, Failure> {
    match std::env::var(SLACK_ENV) {
        Ok(v) => v
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|s| *s >= 0.0)
            .ok_or_else(|| Failure::Usage(format!("{SLACK_ENV}={v:?} is not a non-negative number"))),
        Err(_) => Ok(DEFAULT_SLACK),
    }
}

fn cmd_verify(args: &VerifyArgs, out: &mut impl Write) -> CmdResult {
    let slack = match args.slack {
        Some(s) if s >= 0.0 && s.is_finite() => s,
        Some(s) => return Err(Failure::Usage(format!("--slack must be >= 0, got {s}"))),
        None => default_slack()?,
    };
    if args.samples == 0 {
        return Err(Failure::Usage("--samples must be positive".into()));
    }
    let c = args.channel;
    let p = IlluminationParams::new(c.eta, c.energy, c.noise, args.modes)?;
    let oracle = OracleConfig::default();
    let lemma = Lemma1Config {
        eta: args.lemma_eta,
        n_b: args.lemma_noise,
        cutoff: args.lemma_cutoff,
        samples: args.lemma_samples,
        tolerance: args.lemma_tolerance,
        ..Default::default()
    };
    let fock = NonGaussianConfig {
        samples: args.fock_samples,
        ..Default::default()
    };
    let run = |t: TheoremArg| -> Result<VerificationReport, Failure> {
        Ok(match t {
            TheoremArg::One => verify_theorem1(&p, args.samples, args.seed)?.with_slack(slack),
            TheoremArg::Two => verify_theorem2(&p, args.samples, args.seed)?.with_slack(slack),
            TheoremArg::Three => verify_theorem3(&p, args.samples, args.seed)?.with_slack(slack),
            TheoremArg::Lemma1 => verify_lemma1(&lemma, args.seed, &oracle)?,
            TheoremArg::Fock1 => verify_theorem1_fock(&fock, args.seed, &oracle)?,
            TheoremArg::All => unreachable!("expanded below"),
        })
    };
    let selected = match args.theorem {
        TheoremArg::All => vec![
            TheoremArg::One,
            TheoremArg::Two,
            TheoremArg::Three,
            TheoremArg::Lemma1,
            TheoremArg::Fock1,
        ],
        t => vec![t],
    };
    let reports = selected.into_iter().map(run).collect::<Result<Vec<_>, _>>()?;
    writeln!(out, "{}", serde_json::to_string_pretty(&reports).expect("reports serialize"))?;
    if reports.iter().all(|r| r.passed) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn cmd_oracle_check(args: &OracleArgs, out: &mut impl Write) -> CmdResult {
    if !(args.tolerance >= 0.0) {
        return Err(Failure::Usage(format!("--tolerance must be >= 0, got {}", args.tolerance)));
    }
    let quantity = match args.quantity {
        QuantityArg::Entropy => Quantity::Entropy,
        QuantityArg::ConditionalEntropy => Quantity::ConditionalEntropy,
        QuantityArg::ExponentWithMemory => Quantity::ExponentWithMemory,
        QuantityArg::ExponentNoMemory => Quantity::ExponentNoMemory,
    };
    let p = IlluminationParams::new(args.eta, args.energy, args.noise, 1)?;
    let check = gaussian_crosscheck(quantity, &p, &OracleConfig::default()).map_err(|e| match e {
        e if e.is_cutoff_infeasible() => Failure::Infeasible(format!(
            "{e}; the oracle is meant for desk-scale parameters (E <= 0.5, N_B <= 2): try smaller --noise or --energy"
        )),
        e => e.into(),
    })?;
    match args.format {
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&check).expect("check serializes"))?,
        Format::Csv => {
            writeln!(out, "quantity,gaussian,oracle,gap,tolerance,cutoffs,trace_deficit")?;
            let cutoffs: Vec<String> = check.cutoffs.iter().map(|d| d.to_string()).collect();
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                check.quantity,
                fmt_num(check.gaussian),
                fmt_num(check.oracle),
                fmt_num(check.gap),
                fmt_num(args.tolerance),
                cutoffs.join("x"),
                fmt_num(check.trace_deficit)
            )?;
        }
    }
    if check.gap <= args.tolerance {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = stdout.lock();
    let result = match &cli.command {
        Command::Exponent(a) => cmd_exponent(a, &mut out),
        Command::Sweep(a) => cmd_sweep(a, &mut out),
        Command::Verify(a) => cmd_verify(a, &mut out),
        Command::OracleCheck(a) => cmd_oracle_check(a, &mut out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Infeasible(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
