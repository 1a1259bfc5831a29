use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Debug, Parser)]
#[command(name = "weldlab", version, about = "Conformal welding, Grunsky operators and genus-zero sewing")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct Common {
    /// Truncation order N.
    #[arg(long, global = true, default_value_t = 16)]
    pub order: usize,
    /// Solver / rank tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    pub tol: f64,
    /// Sampling grid for circle homeomorphisms.
    #[arg(long, global = true, default_value_t = 512)]
    pub grid: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output JSON path; matrices also go to the same path with `.csv`.
    /// Without it the JSON report goes to stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Route::Coeff)]
    pub route: Route,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Coeff,
    Proj,
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "snake_case", tag = "name")]
pub enum Command {
    /// Solve the welding problem for a circle homeomorphism.
    Weld {
        #[arg(long)]
        homeo: PathBuf,
    },
    /// Truncated Grunsky matrix of an interior map.
    Grunsky {
        #[arg(long)]
        map: PathBuf,
    },
    /// Split boundary data on the image of a map into its two Cauchy parts.
    Jump {
        #[arg(long)]
        map: PathBuf,
        /// Boundary data as a Fourier series in the circle parameter.
        #[arg(long)]
        boundary: PathBuf,
    },
    /// Sew puncture `i` of one rigged sphere to puncture `j` of another.
    Sew {
        #[arg(long)]
        left: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        right: PathBuf,
        #[arg(long)]
        j: usize,
    },
    /// Multi-rigging Grunsky matrix of a rigged sphere.
    Periods {
        #[arg(long)]
        sphere: PathBuf,
    },
    /// Grunsky norms, index of π, Kähler potential and pre-Schwarzian norms of a map.
    Diag {
        #[arg(long)]
        map: PathBuf,
    },
    /// Run the acceptance suite.
    Suite,
}

/// Everything that determines a run; embedded in every output.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: Command,
    #[serde(flatten)]
    pub common: Common,
}

impl RunConfig {
    pub fn from_cli(cli: Cli) -> Result<Self> {
        let cfg = Self { command: cli.command, common: cli.common };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn inputs(&self) -> Vec<&Path> {
        match &self.command {
            Command::Weld { homeo } => vec![homeo],
            Command::Grunsky { map } | Command::Diag { map } => vec![map],
            Command::Jump { map, boundary } => vec![map, boundary],
            Command::Sew { left, right, .. } => vec![left, right],
            Command::Periods { sphere } => vec![sphere],
            Command::Suite => vec![],
        }
    }

    fn validate(&self) -> Result<()> {
        let c = &self.common;
        if c.order < 1 {
            bail!("--order must be at least 1");
        }
        if !(c.tol > 0.0 && c.tol.is_finite()) {
            bail!("--tol must be positive");
        }
        if c.grid < 16 {
            bail!("--grid must be at least 16");
        }
        for p in self.inputs() {
            if !p.is_file() {
                bail!("input file {} does not exist", p.display());
            }
        }
        if let Some(out) = &c.out {
            let dir = out.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            if !dir.is_dir() {
                bail!("output directory {} does not exist", dir.display());
            }
        }
        Ok(())
    }
}

pub fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Thread cap from `WELDLAB_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>> {
    match std::env::var("WELDLAB_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n >= 1 => Ok(Some(n)),
            _ => bail!("WELDLAB_THREADS must be a positive integer, got {v:?}"),
        },
        Err(_) => Ok(None),
    }
}
