//! `wishprod`: command-line harness over `wishprod-core`.
//!
//! Every experiment reads a [`RunConfig`] (TOML file, then flags on top),
//! evaluates on a grid or by sampling, and writes a [`Table`].

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use config::{Experiment, Format, GridSection, RunConfig};
pub use error::{CliError, CliResult};
pub use output::Table;

#[derive(Debug, Parser)]
#[command(name = "wishprod", version, about = "Spectral statistics of products of complex Wishart matrices")]
pub struct Cli {
    /// TOML run configuration; flags override its values.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Draw product spectra: one row per eigenvalue.
    Sample {
        #[command(flatten)]
        common: Overrides,
        #[arg(long, value_enum, default_value = "global")]
        scaling: ScalingArg,
    },
    /// Global density from the Stieltjes equation, with the closed form when r = s.
    Density(Overrides),
    /// Monte Carlo moments of the globally scaled spectrum.
    Moments(Overrides),
    /// Averaged characteristic polynomial: exact and Monte Carlo.
    Charpoly(Overrides),
    /// Finite-N kernel from the biorthogonal sum and the double contour.
    Kernel {
        #[command(flatten)]
        common: Overrides,
        /// Second argument; the diagonal when absent.
        #[arg(long)]
        y: Option<f64>,
    },
    /// Hard-edge kernel on a grid (ν from the ensemble, s and μ ignored).
    Hardedge {
        #[command(flatten)]
        common: Overrides,
        /// Diagonal grid `min:max:count` (same as --grid).
        #[arg(long, value_parser = GridSection::parse)]
        diag: Option<GridSection>,
        /// Second argument; the diagonal when absent.
        #[arg(long)]
        y: Option<f64>,
    },
    /// Cauchy two-matrix hard edge: N²-scaled eigenvalues against the r = 2 kernel.
    Cauchy(Overrides),
    /// Bulk-scaled kernel product against the sine kernel.
    Bulk {
        #[command(flatten)]
        common: Overrides,
        /// Centre of the bulk window.
        #[arg(long, default_value_t = 95.0)]
        c: f64,
    },
    /// Run the acceptance suite.
    Acceptance(AcceptanceArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum ScalingArg {
    Raw,
    Global,
    HardEdge,
}

/// Flags shared by the experiment subcommands.
#[derive(Debug, Clone, Default, Args)]
pub struct Overrides {
    /// Number of Wishart factors; sets ν = 0 when --nu is absent.
    #[arg(long)]
    pub r: Option<usize>,
    /// Number of inverse factors; sets μ = 0 when --mu is absent.
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long = "N")]
    pub n: Option<usize>,
    /// Comma-separated ν_1..ν_r.
    #[arg(long, value_delimiter = ',')]
    pub nu: Option<Vec<u32>>,
    /// Comma-separated μ_1..μ_s; pass an empty string for s = 0.
    #[arg(long, value_delimiter = ',', num_args = 0..)]
    pub mu: Option<Vec<String>>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub tol: Option<f64>,
    /// `min:max:count`.
    #[arg(long, value_parser = GridSection::parse)]
    pub grid: Option<GridSection>,
    /// Log-spaced grid.
    #[arg(long)]
    pub log: bool,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<String>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone, Args)]
pub struct AcceptanceArgs {
    /// Print the check names and budgets without running them.
    #[arg(long)]
    pub list: bool,
    /// Run only these checks (name or number); repeatable.
    #[arg(long)]
    pub only: Vec<String>,
    /// Multiplier on the tolerance of Monte Carlo checks.
    #[arg(long, default_value_t = 1.0)]
    pub tol_scale: f64,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write the JSON report here.
    #[arg(long)]
    pub json: Option<String>,
}

impl Overrides {
    /// Applies the flags on top of `cfg`.
    pub fn apply(&self, cfg: &mut RunConfig) -> CliResult<()> {
        if let Some(n) = self.n {
            cfg.ensemble.n = n;
        }
        match (&self.nu, self.r) {
            (Some(nu), Some(r)) if nu.len() != r => {
                return Err(CliError::Config(format!("--r {r} disagrees with --nu of length {}", nu.len())))
            }
            (Some(nu), _) => cfg.ensemble.nu = nu.clone(),
            (None, Some(r)) => cfg.ensemble.nu = vec![0; r],
            (None, None) => {}
        }
        let mu = match &self.mu {
            Some(raw) => Some(
                raw.iter()
                    .filter(|t| !t.trim().is_empty())
                    .map(|t| t.trim().parse::<u32>().map_err(|e| CliError::Config(format!("bad --mu entry '{t}': {e}"))))
                    .collect::<CliResult<Vec<u32>>>()?,
            ),
            None => None,
        };
        match (mu, self.s) {
            (Some(mu), Some(s)) if mu.len() != s => {
                return Err(CliError::Config(format!("--s {s} disagrees with --mu of length {}", mu.len())))
            }
            (Some(mu), _) => cfg.ensemble.mu = mu,
            (None, Some(s)) => cfg.ensemble.mu = vec![0; s],
            (None, None) => {}
        }
        if let Some(v) = self.samples {
            cfg.mc.samples = v;
        }
        if let Some(v) = self.seed {
            cfg.mc.seed = v;
        }
        if let Some(v) = self.workers {
            cfg.mc.workers = v;
        }
        if let Some(v) = self.tol {
            cfg.quad.tol = v;
        }
        if let Some(g) = &self.grid {
            cfg.grid = g.clone();
        }
        if self.log {
            cfg.grid.log_spacing = true;
        }
        if let Some(p) = &self.out {
            cfg.output.path = Some(p.clone());
        }
        if let Some(f) = self.format {
            cfg.output.format = f;
        }
        Ok(())
    }
}

/// Worker count: the configured value, capped by `WPL_THREADS`.
pub fn worker_count(configured: usize) -> CliResult<usize> {
    match std::env::var("WPL_THREADS") {
        Ok(v) => {
            let cap: usize = v
                .trim()
                .parse()
                .map_err(|_| CliError::Config(format!("WPL_THREADS must be a positive integer, got '{v}'")))?;
            if cap == 0 {
                return Err(CliError::Config("WPL_THREADS must be positive".into()));
            }
            Ok(configured.min(cap))
        }
        Err(_) => Ok(configured),
    }
}

fn base_config(cli: &Cli) -> CliResult<RunConfig> {
    match &cli.config {
        Some(p) => RunConfig::load(p),
        None => Ok(RunConfig::default()),
    }
}

fn in_pool<T: Send>(workers: usize, f: impl FnOnce() -> T + Send) -> CliResult<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count(workers)?)
        .build()
        .map_err(|e| CliError::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(f))
}

/// Parses nothing; runs an already parsed command line.
pub fn run(cli: Cli) -> CliResult<()> {
    let mut cfg = base_config(&cli)?;
    if let Some(Command::Acceptance(args)) = &cli.command {
        return commands::acceptance(args, cfg.mc.workers);
    }
    let (experiment, extra) = match &cli.command {
        Some(cmd) => {
            let (exp, common, extra) = split(cmd);
            common.apply(&mut cfg)?;
            (exp, extra)
        }
        None => match cfg.experiment {
            Some(e) => (e, Extra::default()),
            None => return Err(CliError::Config("no subcommand given and the config names no experiment".into())),
        },
    };
    if let Some(g) = extra.diag.clone() {
        cfg.grid = GridSection { log_spacing: cfg.grid.log_spacing, ..g };
    }
    cfg.experiment = Some(experiment);
    cfg.validate()?;
    let table = in_pool(cfg.mc.workers, || commands::run_experiment(&cfg, &extra))??;
    output::emit(&table.render(cfg.output.format), cfg.output.path.as_deref())
}

/// Subcommand-specific values.
#[derive(Debug, Clone, Default)]
pub struct Extra {
    pub scaling: Option<ScalingArg>,
    pub y: Option<f64>,
    pub diag: Option<GridSection>,
    pub c: Option<f64>,
}

fn split(cmd: &Command) -> (Experiment, Overrides, Extra) {
    let none = Extra::default();
    match cmd {
        Command::Sample { common, scaling } => {
            (Experiment::Sample, common.clone(), Extra { scaling: Some(*scaling), ..none })
        }
        Command::Density(o) => (Experiment::Density, o.clone(), none),
        Command::Moments(o) => (Experiment::Moments, o.clone(), none),
        Command::Charpoly(o) => (Experiment::Charpoly, o.clone(), none),
        Command::Kernel { common, y } => (Experiment::Kernel, common.clone(), Extra { y: *y, ..none }),
        Command::Hardedge { common, diag, y } => {
            (Experiment::Hardedge, common.clone(), Extra { y: *y, diag: diag.clone(), ..none })
        }
        Command::Cauchy(o) => (Experiment::Cauchy, o.clone(), none),
        Command::Bulk { common, c } => (Experiment::Bulk, common.clone(), Extra { c: Some(*c), ..none }),
        Command::Acceptance(_) => unreachable!("handled before dispatch"),
    }
}
