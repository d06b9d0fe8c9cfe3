use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use occert_cli::{exit, run_certify, run_spectrum, Check, CliError, RunConfig, RunInputs};

#[derive(Parser)]
#[command(name = "occert", version, about = "Certify curvature hypotheses for metrics on S^6")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pinching and curvature-class certification at sampled points.
    Certify(RunArgs),
    /// Curvature-operator spectra and the pinching test only.
    Spectrum(RunArgs),
    /// Built-in consistency checks.
    Selftest,
}

#[derive(Args)]
struct RunArgs {
    /// Built-in metric (`round`, `flat`) or an inline JSON spec.
    #[arg(long, conflicts_with = "spec")]
    metric: Option<String>,
    /// JSON metric spec file.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 20)]
    points: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long = "fd-step", default_value_t = 1e-3)]
    fd_step: f64,
    /// Fourth-order Richardson differences.
    #[arg(long)]
    richardson: bool,
    #[arg(long, default_value_t = 64)]
    multistarts: usize,
    /// Refutation threshold: a witness needs Ric*(X, X) < -tol.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = occert_cli::DEFAULT_CHECKS)]
    checks: Vec<Check>,
    /// JSON report path.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl From<RunArgs> for RunInputs {
    fn from(a: RunArgs) -> Self {
        RunInputs {
            metric: a.metric,
            spec: a.spec,
            points: a.points,
            seed: a.seed,
            fd_step: a.fd_step,
            richardson: a.richardson,
            multistarts: a.multistarts,
            tol: a.tol,
            checks: a.checks,
            out: a.out,
        }
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("OCCERT_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("OCCERT_THREADS: expected a positive integer, got `{v}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(format!("OCCERT_THREADS: {e}")))
}

fn batch(args: RunArgs, spectrum_only: bool) -> Result<i32, CliError> {
    let cfg = RunConfig::from_inputs(args.into())?;
    let report = if spectrum_only {
        run_spectrum(&cfg)?
    } else {
        run_certify(&cfg)?
    };
    print!("{}", report.summary_table());
    occert_cli::emit_report(&report, cfg.out.as_deref())?;
    Ok(report.aggregate.exit_code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Certify(a) => batch(a, false),
        Command::Spectrum(a) => batch(a, true),
        Command::Selftest => Ok(if occert_cli::selftest::run_selftest(&mut std::io::stdout()) {
            exit::CERTIFIED
        } else {
            exit::SELFTEST_FAILED
        }),
    });
    let code = result.unwrap_or_else(|e| {
        eprintln!("occert: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}
