use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use lrs_secrecy::montecarlo::{simulate_batch, write_samples, SampleFormat};
use lrs_secrecy::sweep::{parse_bits, run_sweep, SweepSpec};
use lrs_secrecy::validate::{validate, Gate, ValidateOptions};
use lrs_secrecy::{db_to_linear, PhaseErrorModel, SystemConfig};

/// Secrecy metrics of reflecting-surface-aided links with phase errors.
#[derive(Parser, Debug)]
#[command(name = "lrs-secrecy", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate SOP or ASC curves over a grid and write CSV.
    Sweep(SweepArgs),
    /// Run the self-check gates; exits 1 if any gate fails.
    Validate(ValidateArgs),
    /// Simulate one configuration and write the raw (gamma_b, gamma_e) pairs.
    Dump(DumpArgs),
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// key = value file; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Base settings: fig1 (ASC) or fig2 (SOP).
    #[arg(long)]
    preset: Option<String>,
    /// sop or asc.
    #[arg(long)]
    metric: Option<String>,
    /// Comma list from FR, BR, NR, MC, asymptotic-FR, asymptotic-BR, asymptotic-NR.
    #[arg(long)]
    variants: Option<String>,
    /// Comma list of element counts.
    #[arg(long)]
    n: Option<String>,
    /// Comma list of quantizer bits; "inf" means no phase error.
    #[arg(long)]
    bits: Option<String>,
    /// Legitimate reference SNR grid start:stop:step in dB.
    #[arg(long = "g0b-dB", allow_hyphen_values = true)]
    g0b_db: Option<String>,
    /// Eavesdropper reference SNR in dB.
    #[arg(long = "g0e-dB", allow_hyphen_values = true)]
    g0e_db: Option<String>,
    /// Target secrecy rate in bit/s/Hz.
    #[arg(long)]
    rs: Option<String>,
    /// Monte Carlo trials per (n, bits).
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Output CSV path; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Trials per simulated configuration.
    #[arg(long, default_value_t = 1_000_000)]
    trials: usize,
    /// Comma list of gates to run (default: all).
    #[arg(long, value_delimiter = ',')]
    gates: Vec<String>,
    /// Offset added to phi2 in the analytic moments, to exercise the moment gate.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    phi2_fault: f64,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum DumpFormat {
    Csv,
    Binary,
}

#[derive(Args, Debug)]
struct DumpArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value = "2")]
    bits: String,
    #[arg(long = "g0b-dB", default_value_t = 0.0, allow_hyphen_values = true)]
    g0b_db: f64,
    #[arg(long = "g0e-dB", default_value_t = 10.0, allow_hyphen_values = true)]
    g0e_db: f64,
    #[arg(long, default_value_t = 100_000)]
    trials: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = DumpFormat::Csv)]
    format: DumpFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Failure classes mapped to exit codes.
enum Failure {
    BadArguments(anyhow::Error),
    Runtime(anyhow::Error),
}

impl From<lrs_secrecy::Error> for Failure {
    fn from(e: lrs_secrecy::Error) -> Self {
        match e {
            lrs_secrecy::Error::Config(_) | lrs_secrecy::Error::Domain { .. } => {
                Failure::BadArguments(e.into())
            }
            lrs_secrecy::Error::Numerical { .. } => Failure::Runtime(e.into()),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Runtime(e)
    }
}

fn output(path: Option<&PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn build_spec(args: &SweepArgs) -> Result<SweepSpec, Failure> {
    let mut text = String::new();
    if let Some(p) = &args.preset {
        // listed first so it is the base the config file refines
        text.push_str(&format!("preset = {p}\n"));
    }
    if let Some(path) = &args.config {
        let body = std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(Failure::BadArguments)?;
        text.push_str(&body);
    }
    let mut spec = SweepSpec::from_config_text(&text)?;
    let overrides = [
        ("metric", &args.metric),
        ("variants", &args.variants),
        ("n", &args.n),
        ("bits", &args.bits),
        ("g0b-dB", &args.g0b_db),
        ("g0e-dB", &args.g0e_db),
        ("rs", &args.rs),
        ("trials", &args.trials),
        ("seed", &args.seed),
    ];
    for (key, value) in overrides {
        if let Some(v) = value {
            spec.set(key, v)?;
        }
    }
    if let Some(out) = &args.out {
        spec.out = Some(out.clone());
    }
    spec.validate()?;
    Ok(spec)
}

fn sweep(args: SweepArgs) -> Result<ExitCode, Failure> {
    let spec = build_spec(&args)?;
    log::info!("sweep: {spec:?}");
    let result = run_sweep(&spec)?;
    let mut out = output(spec.out.as_ref())?;
    result.write_csv(&mut out).context("writing CSV")?;
    Ok(ExitCode::SUCCESS)
}

fn run_validate(args: ValidateArgs) -> Result<ExitCode, Failure> {
    let gates = if args.gates.is_empty() {
        Gate::ALL.to_vec()
    } else {
        args.gates.iter().map(|g| g.parse()).collect::<Result<_, _>>()?
    };
    let opts = ValidateOptions {
        seed: args.seed,
        trials: args.trials,
        gates,
        phi2_fault: args.phi2_fault,
    };
    let report = validate(&opts)?;
    println!("{report}");
    Ok(if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn dump(args: DumpArgs) -> Result<ExitCode, Failure> {
    let model = match parse_bits(&args.bits)? {
        Some(b) => PhaseErrorModel::quantized(b)?,
        None => PhaseErrorModel::None,
    };
    let cfg = SystemConfig::reference(
        args.n,
        model,
        db_to_linear(args.g0b_db),
        db_to_linear(args.g0e_db),
    );
    if args.trials == 0 {
        return Err(Failure::BadArguments(anyhow::anyhow!("trials must be >= 1")));
    }
    let batch = simulate_batch(&cfg, args.seed, args.trials)?;
    let format = match args.format {
        DumpFormat::Csv => SampleFormat::Csv,
        DumpFormat::Binary => SampleFormat::Binary,
    };
    let mut out = output(args.out.as_ref())?;
    write_samples(&batch, format, &mut out).context("writing samples")?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Sweep(a) => sweep(a),
        Command::Validate(a) => run_validate(a),
        Command::Dump(a) => dump(a),
    };
    match result {
        Ok(code) => code,
        Err(Failure::BadArguments(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
