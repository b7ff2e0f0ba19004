//! `padic`: verification suites, Green-function tables and classification of
//! point-interaction configurations.

mod commands;
mod gen;
mod output;
mod report;
mod suites;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use padic_vladimirov::{InteractionConfig, PadicRational, Prime};

use crate::output::{emit, json, read, CliError, CliResult};
use crate::report::RunReport;

#[derive(Parser)]
#[command(
    name = "padic",
    version,
    about = "Vladimirov operator, Green functions and point interactions on Q_p"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Suite {
    Core,
    Schwartz,
    Wavelets,
    Vladimirov,
    Green,
    Realization,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Core => "core",
            Suite::Schwartz => "schwartz",
            Suite::Wavelets => "wavelets",
            Suite::Vladimirov => "vladimirov",
            Suite::Green => "green",
            Suite::Realization => "realization",
            Suite::All => "all",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a seeded invariant suite; the JSON report goes to --out.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Defaults to 2, or to the prime of --config.
        #[arg(long)]
        p: Option<u64>,
        /// Defaults to 1.5, or to the alpha of --config.
        #[arg(long, allow_negative_numbers = true)]
        alpha: Option<f64>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Interaction configuration used by the realization suite.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Green function of D^alpha + I at `point` as CSV, one row per gamma0.
    GreenTable {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, allow_negative_numbers = true)]
        alpha: f64,
        /// The interaction point x_k, as "num/den".
        #[arg(long, default_value = "0")]
        point: String,
        #[arg(long, default_value_t = -5, allow_negative_numbers = true)]
        gamma_lo: i64,
        #[arg(long, default_value_t = 5, allow_negative_numbers = true)]
        gamma_hi: i64,
        /// Extra evaluation points; `x = point` asks for the diagonal value.
        #[arg(long = "x", allow_negative_numbers = true)]
        x: Vec<String>,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Self-adjointness and eta-self-adjointness of a configuration, as JSON.
    Classify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Direct series and closed formula of the counterexample at p^n, as CSV.
    Counterexample {
        #[arg(long, default_value_t = 2)]
        p: u64,
        #[arg(long, default_value_t = 30)]
        n_max: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Friedrichs-domain predicate for one element, or a seeded sample.
    FriedrichsCheck {
        #[arg(long)]
        config: PathBuf,
        /// Element file `{"u": {"p": 2, "coeffs": [{"N", "j", "eps", "re", "im"}, ...]}, "c": [[re, im], ...]}`.
        #[arg(long)]
        element: Option<PathBuf>,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn prime(p: u64) -> CliResult<Prime> {
    Ok(Prime::new(p)?)
}

fn tolerance(tol: f64) -> CliResult<f64> {
    if tol.is_finite() && tol > 0.0 {
        Ok(tol)
    } else {
        Err(CliError::Config(format!(
            "tolerance must be positive (got {tol})"
        )))
    }
}

fn load_config(path: &Path) -> CliResult<InteractionConfig> {
    Ok(InteractionConfig::from_json(&read(path)?)?)
}

/// Flags fall back to the configuration's values and must agree with them.
fn verify_params(
    p: Option<u64>,
    alpha: Option<f64>,
    config: Option<&InteractionConfig>,
) -> CliResult<(Prime, f64)> {
    let (p, alpha) = match config {
        Some(cfg) => {
            if p.is_some_and(|p| p != cfg.p.get()) {
                return Err(CliError::Config(format!(
                    "--p disagrees with the configuration prime {}",
                    cfg.p.get()
                )));
            }
            if alpha.is_some_and(|a| a != cfg.alpha) {
                return Err(CliError::Config(format!(
                    "--alpha disagrees with the configuration alpha {}",
                    cfg.alpha
                )));
            }
            (cfg.p.get(), cfg.alpha)
        }
        None => (p.unwrap_or(2), alpha.unwrap_or(1.5)),
    };
    if !(alpha.is_finite() && alpha > 0.0) {
        return Err(CliError::Config(format!(
            "alpha must be positive (got {alpha})"
        )));
    }
    Ok((prime(p)?, alpha))
}

fn finish_report(report: &RunReport, out: Option<&Path>) -> CliResult<()> {
    print!("{}", report.table());
    if let Some(path) = out {
        emit(Some(path), &json(report))?;
    }
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failure(format!(
            "{} check(s) failed",
            report.checks.iter().filter(|c| !c.passed).count()
        )))
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Verify {
            suite,
            p,
            alpha,
            tol,
            seed,
            config,
            out,
        } => {
            let tol = tolerance(tol)?;
            let config = config.as_deref().map(load_config).transpose()?;
            let (p, alpha) = verify_params(p, alpha, config.as_ref())?;
            let params = suites::Params {
                p,
                alpha,
                tol,
                seed,
                config,
            };
            let mut report = RunReport::new(suite.name(), p.get(), alpha, tol, seed);
            suites::run(suite.name(), &params, &mut report);
            finish_report(&report, out.as_deref())
        }
        Command::GreenTable {
            p,
            alpha,
            point,
            gamma_lo,
            gamma_hi,
            x,
            tol,
            out,
        } => {
            let p = prime(p)?;
            let tol = tolerance(tol)?;
            let point = PadicRational::parse(p, &point)?;
            let extra = x
                .iter()
                .map(|s| PadicRational::parse(p, s))
                .collect::<Result<Vec<_>, _>>()?;
            let table = commands::green_table(p, alpha, &point, (gamma_lo, gamma_hi), &extra, tol)?;
            emit(out.as_deref(), &table)
        }
        Command::Classify { config, tol, out } => {
            let cfg = load_config(&config)?;
            let report = commands::classify(&cfg, tolerance(tol)?)?;
            emit(out.as_deref(), &json(&report))
        }
        Command::Counterexample { p, n_max, out } => {
            let table = commands::counterexample_table(prime(p)?, n_max)?;
            emit(out.as_deref(), &table)
        }
        Command::FriedrichsCheck {
            config,
            element,
            tol,
            seed,
            out,
        } => {
            let cfg = load_config(&config)?;
            let tol = tolerance(tol)?;
            match element {
                Some(path) => {
                    let f = commands::parse_element(&read(&path)?, &cfg)?;
                    emit(
                        out.as_deref(),
                        &json(&commands::friedrichs_single(&cfg, &f, tol)?),
                    )
                }
                None => {
                    let mut report =
                        RunReport::new("friedrichs-check", cfg.p.get(), cfg.alpha, tol, seed);
                    commands::friedrichs_sample(&cfg, tol, seed, &mut report);
                    finish_report(&report, out.as_deref())
                }
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
