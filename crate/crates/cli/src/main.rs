use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use spikedtrio::eigensolver::LinearSolver;

mod commands;
mod config;
mod error;

use commands::{Format, RadialModel, RadialParams, SpectrumSource, ValidateOptions};
use config::{parse_pair, parse_range, ModelArgs, RunConfig};
use error::{CliError, CliResult};

/// Three-body spiked anharmonic oscillators: closed forms, landscapes and
/// spectra.
#[derive(Debug, Parser)]
#[command(name = "spikedtrio", version)]
struct Cli {
    /// TOML file with [model] and/or [potential] tables; flags override it.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format (each subcommand has its own default).
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed trigonometric forms of the pair-force sums.
    Identities {
        /// Inclusive exponent range `lo:hi` (0 is skipped).
        #[arg(long, default_value = "-6:13", allow_hyphen_values = true)]
        m_range: String,
    },
    /// Absolute minimum, critical radius and angular minima.
    Landscape {
        #[command(flatten)]
        model: ModelArgs,
        /// Radii at which to list angular minima (comma separated).
        #[arg(long, value_delimiter = ',')]
        rho: Vec<f64>,
    },
    /// Table of low-lying levels.
    Spectrum {
        #[command(flatten)]
        model: ModelArgs,
        /// `MxN`: radial × angular excitation counts.
        #[arg(long, default_value = "3x3")]
        levels: String,
        #[arg(long, value_enum, default_value = "harmonic")]
        method: SpectrumSource,
    },
    /// Harmonic approximation against the 2D finite-difference solver.
    Validate {
        #[command(flatten)]
        model: ModelArgs,
        /// Number of lowest levels to compare (at most 8).
        #[arg(long, default_value_t = 2)]
        levels: usize,
        /// Coarse window grid `N_rhoxN_phi`; the fine grid has 2N+1 nodes.
        #[arg(long, default_value = "100x100")]
        grid: String,
        /// Fail when coarse and fine grids disagree by more than 10× this.
        #[arg(long)]
        tolerance: Option<f64>,
        /// Use the factorization-free conjugate-gradient inner solver.
        #[arg(long)]
        cg: bool,
    },
    /// One-dimensional osculation of a radial well.
    Osculate1d {
        #[arg(long, value_enum, default_value = "ue")]
        model: RadialModel,
        #[arg(long = "F")]
        f: Option<f64>,
        #[arg(long = "G")]
        g: Option<f64>,
        #[arg(long)]
        omega: Option<f64>,
        #[arg(long)]
        nu: Option<f64>,
        #[arg(long, default_value_t = 3)]
        levels: usize,
    },
}

fn configure_threads() -> CliResult<()> {
    let Ok(raw) = std::env::var("SPIKEDTRIO_THREADS") else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Config(format!("SPIKEDTRIO_THREADS='{raw}' is not a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> CliResult<()> {
    configure_threads()?;
    let config = cli.config.as_deref();
    let text = match cli.command {
        Command::Identities { m_range } => {
            let (lo, hi) = parse_range(&m_range)?;
            commands::identities(lo, hi, cli.format.unwrap_or(Format::Text))?
        }
        Command::Landscape { model, rho } => {
            let cfg = RunConfig::resolve(&model, config)?;
            commands::landscape(&cfg, &rho, cli.format.unwrap_or(Format::Json))?
        }
        Command::Spectrum {
            model,
            levels,
            method,
        } => {
            let cfg = RunConfig::resolve(&model, config)?;
            let (m, n) = parse_pair(&levels, "levels")?;
            commands::spectrum(&cfg, m, n, method, cli.format.unwrap_or(Format::Csv))?
        }
        Command::Validate {
            model,
            levels,
            grid,
            tolerance,
            cg,
        } => {
            let cfg = RunConfig::resolve(&model, config)?;
            let (n_rho, n_phi) = parse_pair(&grid, "grid")?;
            let opts = ValidateOptions {
                levels,
                n_rho,
                n_phi,
                tolerance,
                solver: if cg {
                    LinearSolver::ConjugateGradient
                } else {
                    LinearSolver::BandedCholesky
                },
            };
            commands::validate(&cfg, &opts, cli.format.unwrap_or(Format::Json))?
        }
        Command::Osculate1d {
            model,
            f,
            g,
            omega,
            nu,
            levels,
        } => commands::osculate1d(
            &RadialParams {
                model,
                f,
                g,
                omega,
                nu,
                levels,
            },
            cli.format.unwrap_or(Format::Json),
        )?,
    };
    emit(&text, cli.out.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("spikedtrio: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
