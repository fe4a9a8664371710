//! `bellscope` command line. Every subcommand prints one table (CSV by
//! default, JSON with `--format json`) and a record of its resolved
//! configuration. With `--out FILE` the table goes to `FILE` and the
//! configuration to `FILE.config.json`; otherwise the table goes to stdout
//! and the configuration, as one JSON line, to stderr.
//!
//! Exit codes: 0 success, 2 invalid arguments or inputs, 1 internal failure.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

mod commands;
pub mod output;

use output::{write_atomic, Table};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bellscope::Error),
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use bellscope::Error as E;
        match self {
            CliError::Usage(_) => 2,
            CliError::Core(E::NotConverged { .. } | E::NaN { .. }) => 1,
            CliError::Core(_) => 2,
            CliError::Io(..) | CliError::Internal(_) => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(
    name = "bellscope",
    version,
    about = "Bell inequality and entanglement experiments"
)]
pub struct Cli {
    /// Seed for every random draw.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output file; written atomically, with a `.config.json` sidecar.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

/// Strictly parsed finite float.
pub(crate) fn finite(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("not a number: {s:?}"))?;
    if s.trim() != s || !v.is_finite() {
        return Err(format!("expected a finite number, got {s:?}"));
    }
    Ok(v)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    /// General probability-table functional.
    Generic,
    /// Translation-invariant two-body expression.
    Ti,
    /// Permutationally invariant two-body expression.
    Pi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Murcia,
    Dicke,
    Rioja,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Open,
    Periodic,
}

impl From<BoundaryArg> for bellscope::chains::Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Open => Self::Open,
            BoundaryArg::Periodic => Self::Periodic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ChainModel {
    /// Random Hermitian bond terms of unit norm.
    Random,
    /// `−J σzσz − h σx`.
    Tfim,
    /// `J S·S`.
    Heisenberg,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassicalModel {
    /// Gaussian couplings and fields.
    Random,
    /// Ferromagnetic Ising with coupling `J`.
    Ising,
}

/// Rioja family parameters.
#[derive(Debug, Clone, Args, Serialize)]
pub struct RiojaArgs {
    #[arg(long)]
    pub x: Option<i64>,
    #[arg(long)]
    pub y: Option<i64>,
    /// `+1` or `−1`.
    #[arg(long)]
    pub sigma: Option<i64>,
    #[arg(long)]
    pub mu: Option<i64>,
    /// `+` or `-`.
    #[arg(long, default_value = "+")]
    pub branch: String,
    /// Accept parameters that fail the parity rule.
    #[arg(long)]
    pub no_parity_check: bool,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// CHSH classical bounds and the quantum value on |ψ⁺⟩.
    Chsh {
        /// Angle grid per setting before refinement.
        #[arg(long, default_value_t = 16)]
        grid: usize,
    },
    /// Classical bound of a JSON-described expression.
    Bound {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        kind: BoundKind,
    },
    /// Rioja closed-form bound, optionally checked by enumeration; `--table`
    /// runs the full default grid.
    #[command(allow_negative_numbers = true)]
    Rioja {
        #[arg(long)]
        n: Option<usize>,
        #[command(flatten)]
        params: RiojaArgs,
        #[arg(long)]
        verify: bool,
        #[arg(long, conflicts_with_all = ["n", "verify"])]
        table: bool,
    },
    /// Murcia bound and its best symmetric violation.
    Murcia {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        verify: bool,
    },
    /// Dicke expression on |D_n^k⟩, minimized over θ.
    Dicke {
        #[arg(long)]
        n: usize,
        /// Down spins; defaults to ⌊n/2⌋.
        #[arg(long)]
        k: Option<usize>,
    },
    /// Violation over a range of n.
    #[command(allow_negative_numbers = true)]
    Scan {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        #[arg(long)]
        n_max: usize,
        #[arg(long, default_value_t = 1)]
        n_step: usize,
        /// Worker threads; rows are sorted by n regardless.
        #[arg(long)]
        jobs: Option<usize>,
        #[command(flatten)]
        params: RiojaArgs,
    },
    /// λ_min of the Bell operator on a θ grid.
    #[command(allow_negative_numbers = true)]
    ThetaSweep {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 64)]
        points: usize,
        #[arg(long, value_parser = finite, default_value_t = 0.0)]
        theta_min: f64,
        #[arg(long, value_parser = finite, default_value_t = std::f64::consts::PI)]
        theta_max: f64,
        #[command(flatten)]
        params: RiojaArgs,
    },
    /// LMG energies in the symmetric sector.
    #[command(allow_negative_numbers = true)]
    Lmg {
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = finite, default_value_t = 1.0)]
        lambda: f64,
        #[arg(long, value_parser = finite, default_value_t = 0.0)]
        h: f64,
    },
    /// Average subsystem entropy of random pure states on C^m ⊗ C^n.
    Page {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
    },
    /// PPT test, negativity and (for pure states) Schmidt data of a fixture.
    Ppt {
        #[arg(long)]
        input: PathBuf,
        /// Number of leading tensor factors on the left of the cut.
        #[arg(long, default_value_t = 1)]
        cut: usize,
    },
    /// MPS truncation errors against their bounds.
    Mps {
        /// Pure-state fixture; a random state is drawn when absent.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 8)]
        sites: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
        bond_dims: Vec<usize>,
        /// Rényi order for the tail bound at the middle cut.
        #[arg(long, value_parser = finite, default_value_t = 0.5)]
        alpha: f64,
    },
    /// Block entropy of a chain ground state.
    #[command(allow_negative_numbers = true)]
    AreaLaw {
        #[arg(long, value_enum, default_value_t = ChainModel::Tfim)]
        model: ChainModel,
        #[arg(long, default_value_t = 12)]
        sites: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_parser = finite, default_value_t = 1.0)]
        j: f64,
        #[arg(long, value_parser = finite, default_value_t = 3.0)]
        h: f64,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
        boundary: BoundaryArg,
        /// Largest block; defaults to sites − 1.
        #[arg(long)]
        max_block: Option<usize>,
    },
    /// Thermal mutual information against 2β‖h‖|∂A|.
    #[command(allow_negative_numbers = true)]
    ThermalMi {
        #[arg(long, value_enum, default_value_t = ChainModel::Random)]
        model: ChainModel,
        #[arg(long, default_value_t = 6)]
        sites: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_parser = finite, default_value_t = 1.0)]
        j: f64,
        #[arg(long, value_parser = finite, default_value_t = 1.0)]
        h: f64,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
        boundary: BoundaryArg,
        #[arg(long, value_delimiter = ',', value_parser = finite, default_value = "0.1,1,5")]
        betas: Vec<f64>,
        /// Sites in block A; defaults to sites / 2.
        #[arg(long)]
        cut: Option<usize>,
    },
    /// Classical Gibbs mutual information against |∂A| log₂ d.
    #[command(allow_negative_numbers = true)]
    GibbsMi {
        /// JSON chain description; overrides the model flags.
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = ClassicalModel::Random)]
        model: ClassicalModel,
        #[arg(long, default_value_t = 8)]
        sites: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, value_parser = finite, default_value_t = 1.0)]
        j: f64,
        #[arg(long, value_enum, default_value_t = BoundaryArg::Open)]
        boundary: BoundaryArg,
        #[arg(long, value_delimiter = ',', value_parser = finite, default_value = "0.1,1,5")]
        betas: Vec<f64>,
        #[arg(long)]
        cut: Option<usize>,
    },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Chsh { .. } => "chsh",
            Command::Bound { .. } => "bound",
            Command::Rioja { .. } => "rioja",
            Command::Murcia { .. } => "murcia",
            Command::Dicke { .. } => "dicke",
            Command::Scan { .. } => "scan",
            Command::ThetaSweep { .. } => "theta-sweep",
            Command::Lmg { .. } => "lmg",
            Command::Page { .. } => "page",
            Command::Ppt { .. } => "ppt",
            Command::Mps { .. } => "mps",
            Command::AreaLaw { .. } => "area-law",
            Command::ThermalMi { .. } => "thermal-mi",
            Command::GibbsMi { .. } => "gibbs-mi",
        }
    }
}

/// Resolved configuration echoed next to every output.
#[derive(Debug, Serialize)]
pub struct RunConfig<'a> {
    pub command: &'static str,
    pub params: serde_json::Value,
    pub seed: u64,
    pub out: Option<&'a Path>,
    pub format: Format,
    pub version: &'static str,
    pub rng: &'static str,
}

fn config_json(cli: &Cli) -> Result<serde_json::Value, CliError> {
    let params =
        match serde_json::to_value(&cli.command).map_err(|e| CliError::Internal(e.to_string()))? {
            // Externally tagged: {"name": {...}}.
            serde_json::Value::Object(mut m) => m
                .remove(cli.command.name())
                .unwrap_or(serde_json::Value::Null),
            other => other,
        };
    let cfg = RunConfig {
        command: cli.command.name(),
        params,
        seed: cli.seed,
        out: cli.out.as_deref(),
        format: cli.format,
        version: env!("CARGO_PKG_VERSION"),
        rng: bellscope::numerics::RandomSource::ALGORITHM,
    };
    serde_json::to_value(&cfg).map_err(|e| CliError::Internal(e.to_string()))
}

fn render(table: &Table, format: Format) -> String {
    match format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    }
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".config.json");
    PathBuf::from(s)
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let table = commands::dispatch(cli)?;
    let body = render(&table, cli.format);
    let config = config_json(cli)?;
    match &cli.out {
        Some(path) => {
            let mut cfg = serde_json::to_string_pretty(&config)
                .map_err(|e| CliError::Internal(e.to_string()))?;
            cfg.push('\n');
            write_atomic(path, body.as_bytes())?;
            write_atomic(&sidecar_path(path), cfg.as_bytes())?;
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Io("stdout".into(), e))?;
            let line =
                serde_json::to_string(&config).map_err(|e| CliError::Internal(e.to_string()))?;
            let _ = writeln!(std::io::stderr(), "{line}");
        }
    }
    Ok(())
}

/// Parses `argv` (program name first) and runs the command; returns the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&cli) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(std::io::stderr(), "error: {e}");
            e.exit_code()
        }
    }
}
