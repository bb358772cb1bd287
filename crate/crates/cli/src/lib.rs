//! Command-line frontend: `roots`, `sweep`, `phase-diagram`, `turning-point`,
//! `sp-closure` and `rabi-compare`.
//!
//! Exit codes: 0 on success, 2 for invalid input, 3 for solver failures,
//! 1 for I/O errors. Diagnostics go to stderr; data goes to the `--output`
//! file, or to stdout when no file is given.

pub mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use optodicke::diagram::GridAxis;
use thiserror::Error;

use crate::config::{load_config, ModelSection, Overrides, RunConfig, SolverSection};
use crate::table::Format;

/// Environment variable that fixes the number of worker threads.
pub const THREADS_ENV: &str = "OPTODICKE_THREADS";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Usage(String),
    #[error("invalid config {0}")]
    Config(String),
    #[error("solver error: {0}")]
    Solver(#[from] optodicke::Error),
    #[error("i/o error: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            CliError::Solver(e) if matches!(e.root_cause(), optodicke::Error::InvalidParameter { .. }) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 1,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "optodicke", version, about = "Variational ground states of the optomechanical Dicke model")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Default)]
pub struct CommonArgs {
    /// JSON config file; flags take precedence over its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum, global = true)]
    pub format: Option<Format>,
    /// Cavity frequency.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega: Option<f64>,
    /// Atomic transition frequency.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega_a: Option<f64>,
    /// Mechanical oscillator frequency.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub omega_b: Option<f64>,
    #[arg(long, global = true)]
    pub n_atoms: Option<u32>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol_root: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol_curv: Option<f64>,
    #[arg(long, global = true)]
    pub scan_points: Option<usize>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub tol_gt: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Detuning {
    /// omega = 0.8 omega_a
    Red,
    /// omega = omega_a
    Resonant,
    /// omega = 1.2 omega_a
    Blue,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Stationary points of both pseudospin branches at one (g, zeta).
    Roots {
        #[arg(long, allow_negative_numbers = true)]
        g: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        zeta: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Ground state and all branches along a g sweep at fixed zeta.
    Sweep {
        /// Coupling grid `min:max:count`.
        #[arg(long, allow_hyphen_values = true)]
        g: Option<GridAxis>,
        #[arg(long, allow_negative_numbers = true)]
        zeta: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Ground-state labels on a (g, zeta) grid.
    PhaseDiagram {
        #[arg(long, allow_hyphen_values = true)]
        g: Option<GridAxis>,
        #[arg(long, allow_hyphen_values = true)]
        zeta: Option<GridAxis>,
        /// Also write refined label boundaries here.
        #[arg(long)]
        boundaries: Option<PathBuf>,
        /// Also write the (zeta, g_c, g_t) trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Coupling g_t at which the superradiant phase collapses.
    TurningPoint {
        #[arg(long, allow_negative_numbers = true)]
        zeta: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Photon-phonon coupling at which the superradiant window closes.
    SpClosure {
        #[arg(long, allow_negative_numbers = true)]
        width_tol: Option<f64>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Variational versus exact ground energy of the single-atom limit.
    RabiCompare {
        #[arg(long, allow_hyphen_values = true)]
        g: Option<GridAxis>,
        #[arg(long)]
        n_max: Option<usize>,
        /// Sets omega unless --omega is given.
        #[arg(long, value_enum)]
        detuning: Option<Detuning>,
        #[command(flatten)]
        common: CommonArgs,
    },
}

impl Command {
    fn common(&self) -> &CommonArgs {
        match self {
            Command::Roots { common, .. }
            | Command::Sweep { common, .. }
            | Command::PhaseDiagram { common, .. }
            | Command::TurningPoint { common, .. }
            | Command::SpClosure { common, .. }
            | Command::RabiCompare { common, .. } => common,
        }
    }

    fn overrides(&self) -> Overrides {
        let c = self.common();
        let mut o = Overrides {
            model: ModelSection {
                omega: c.omega,
                omega_a: c.omega_a,
                omega_b: c.omega_b,
                n_atoms: c.n_atoms,
                ..Default::default()
            },
            solver: SolverSection {
                tol_root: c.tol_root,
                tol_curv: c.tol_curv,
                scan_points: c.scan_points,
                tol_gt: c.tol_gt,
                width_tol: None,
            },
            output: c.output.clone(),
            format: c.format,
            ..Default::default()
        };
        match self {
            Command::Roots { g, zeta, .. } => {
                o.model.g = *g;
                o.model.zeta = *zeta;
            }
            Command::Sweep { g, zeta, .. } => {
                o.g_range = *g;
                o.model.zeta = *zeta;
            }
            Command::PhaseDiagram { g, zeta, .. } => {
                o.g_range = *g;
                o.zeta_range = *zeta;
            }
            Command::TurningPoint { zeta, .. } => o.model.zeta = *zeta,
            Command::SpClosure { width_tol, .. } => o.solver.width_tol = *width_tol,
            Command::RabiCompare { g, n_max, detuning, .. } => {
                o.g_range = *g;
                o.n_max = *n_max;
                if o.model.omega.is_none() {
                    o.model.omega = detuning.map(|d| match d {
                        Detuning::Red => 0.8,
                        Detuning::Resonant => 1.0,
                        Detuning::Blue => 1.2,
                    });
                }
            }
        }
        o
    }
}

fn worker_pool() -> Result<rayon::ThreadPool, CliError> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`")))?;
        builder = builder.num_threads(n);
    }
    builder.build().map_err(|e| CliError::Usage(format!("cannot start worker pool: {e}")))
}

fn write_output(path: Option<&PathBuf>, data: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, data).map_err(|e| CliError::Io(format!("{}: {e}", p.display()))),
        None => {
            use std::io::Write;
            std::io::stdout()
                .write_all(data.as_bytes())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

/// Parses and executes one command.
pub fn execute(cli: &Cli) -> Result<(), CliError> {
    let file = cli.command.common().config.as_deref().map(load_config).transpose()?;
    let cfg = RunConfig::resolve(file.as_ref(), &cli.command.overrides())?;
    let pool = worker_pool()?;
    let outputs = pool.install(|| commands::run_command(&cli.command, &cfg))?;
    for (path, table) in outputs {
        let text = table.render(cfg.format).map_err(|e| CliError::Io(e.to_string()))?;
        write_output(path.as_ref(), &text)?;
    }
    Ok(())
}

/// Runs the CLI on `argv` (including the program name) and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("optodicke: {e}");
            e.exit_code()
        }
    }
}
