use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use dicke_cli::config::{AnglePair, Measure, OutputFormat, SweepConfig};
use dicke_cli::sweep::{run_sweep, write_records};
use dicke_cli::verify::{run_verify, VerifyLevel};
use dicke_cli::{statefile, CliError};

/// Steady states and correlation measures of the driven-dissipative
/// collective spin model.
#[derive(Parser)]
#[command(name = "dicke", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sweep measures over an (N, Ω) grid and write CSV or JSON-lines.
    Sweep(Box<SweepArgs>),
    /// Compute one steady state and write it as structured text.
    State(StateArgs),
    /// Run the invariant verification suite.
    Verify(VerifyArgs),
}

#[derive(Args)]
struct SweepArgs {
    /// JSON config file; flags below override its fields.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Particle numbers, comma separated.
    #[arg(long, value_delimiter = ',')]
    n: Vec<usize>,
    #[arg(long)]
    omega_min: Option<f64>,
    #[arg(long)]
    omega_max: Option<f64>,
    #[arg(long)]
    steps: Option<usize>,
    /// Logarithmic Ω spacing (the default).
    #[arg(long, conflicts_with = "linear")]
    log: bool,
    /// Linear Ω spacing.
    #[arg(long)]
    linear: bool,
    /// Measures, comma separated: observables, purity, concurrence,
    /// negativity, gmn, discord2, discord_bip, gqd, mid, jmulti, hankel.
    #[arg(long, value_delimiter = ',')]
    measures: Vec<String>,
    /// Bipartition size for negativity / discord_bip.
    #[arg(long)]
    na: Option<usize>,
    /// Reduction target for gmn / gqd / mid.
    #[arg(long)]
    nr: Option<usize>,
    /// Fixed polar measurement angle (mid / jmulti).
    #[arg(long)]
    theta: Option<f64>,
    /// Fixed azimuthal measurement angle (mid / jmulti).
    #[arg(long)]
    phi: Option<f64>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format: csv or jsonl.
    #[arg(long)]
    format: Option<String>,
    /// On-disk steady-state cache directory.
    #[arg(long)]
    cache: Option<PathBuf>,
}

#[derive(Args)]
struct StateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    omega: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct VerifyArgs {
    /// quick or full.
    #[arg(long, default_value = "quick")]
    level: String,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap's help/version output is not an error
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    match cli.command {
        Command::Sweep(args) => match build_config(*args).and_then(run_and_write) {
            Ok(path) => {
                println!("wrote {path}");
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::State(args) => match statefile::dump_state(args.n, args.omega, &args.out) {
            Ok(()) => {
                println!("wrote {}", args.out.display());
                ExitCode::SUCCESS
            }
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Command::Verify(args) => {
            let level = match args.level.as_str() {
                "quick" => VerifyLevel::Quick,
                "full" => VerifyLevel::Full,
                other => {
                    eprintln!("error: unknown verify level '{other}' (quick|full)");
                    return ExitCode::from(1);
                }
            };
            let results = run_verify(level);
            let mut all_passed = true;
            for r in &results {
                let status = if r.passed { "PASS" } else { "FAIL" };
                all_passed &= r.passed;
                println!(
                    "[{status}] {:<42} residual {:.3e} (gate {:.1e}) {}",
                    r.name, r.residual, r.threshold, r.detail
                );
            }
            if all_passed {
                println!("verify: all {} checks passed", results.len());
                ExitCode::SUCCESS
            } else {
                println!("verify: FAILURES present");
                ExitCode::from(2)
            }
        }
    }
}

fn run_and_write(config: SweepConfig) -> Result<String, CliError> {
    let records = run_sweep(&config)?;
    write_records(&records, config.format, &config.out)?;
    Ok(config.out.display().to_string())
}

fn build_config(args: SweepArgs) -> Result<SweepConfig, CliError> {
    let mut config = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::io(path.display().to_string(), e))?;
            SweepConfig::from_json(&text)?
        }
        None => SweepConfig {
            n: Vec::new(),
            omega: Default::default(),
            measures: Vec::new(),
            na: None,
            nr: None,
            angles: None,
            hankel_tol: None,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            out: PathBuf::from("sweep.csv"),
            format: OutputFormat::Csv,
            cache: None,
        },
    };
    if !args.n.is_empty() {
        config.n = args.n;
    }
    if let Some(v) = args.omega_min {
        config.omega.min = v;
    }
    if let Some(v) = args.omega_max {
        config.omega.max = v;
    }
    if let Some(v) = args.steps {
        config.omega.steps = v;
    }
    if args.log {
        config.omega.scale = dicke_cli::config::GridScale::Log;
    }
    if args.linear {
        config.omega.scale = dicke_cli::config::GridScale::Linear;
    }
    if !args.measures.is_empty() {
        config.measures = args
            .measures
            .iter()
            .map(|s| Measure::parse(s))
            .collect::<Result<_, _>>()?;
    }
    if args.na.is_some() {
        config.na = args.na;
    }
    if args.nr.is_some() {
        config.nr = args.nr;
    }
    if let (Some(theta), Some(phi)) = (args.theta, args.phi) {
        config.angles = Some(AnglePair { theta, phi });
    }
    if let Some(w) = args.workers {
        config.workers = w;
    }
    if let Some(out) = args.out {
        config.out = out;
    }
    if let Some(f) = args.format {
        config.format = match f.as_str() {
            "csv" => OutputFormat::Csv,
            "jsonl" => OutputFormat::Jsonl,
            other => {
                return Err(CliError::Validation(format!(
                    "unknown format '{other}' (csv|jsonl)"
                )))
            }
        };
    }
    if args.cache.is_some() {
        config.cache = args.cache;
    }
    Ok(config)
}
