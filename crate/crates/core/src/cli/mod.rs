//! Command-line front end: parameter parsing, sweeps and table output.
//!
//! Every flag of a command is also a key of the flat config file given by
//! `--config`; flags override file values. Exit codes: 0 success, 1 config
//! error, 2 numerical or verification failure, 3 IO error.

pub mod commands;
pub mod config;
pub mod table;
pub mod verify;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::collections::BTreeMap;
use std::ffi::OsString;
use std::path::PathBuf;

use crate::error::Error;
use config::Params;
use table::{Format, Table};

/// Environment variable overriding the worker pool size.
pub const THREADS_ENV: &str = "ABDIRAC_THREADS";

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Config(String),
    Numerical(String),
    Verification(String),
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) | CliError::Verification(_) => 2,
            CliError::Io(_) => 3,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. }
            | Error::OrderOutOfRange(_)
            | Error::SingularArgument(_)
            | Error::WrongRegion { .. }
            | Error::NonEvanescentBarrier { .. }
            | Error::DivergentAtOrigin(_)
            | Error::CouplingRange(..)
            | Error::ForwardCone { .. }
            | Error::Regime(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "abdirac", version, about = "Dirac electrons near bare and shielded magnetic strings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub io: IoArgs,
}

#[derive(Debug, Args, Serialize, Default)]
pub struct IoArgs {
    /// Flat `key = value` parameter file; flags take precedence.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Output path; stdout when absent.
    #[arg(long, global = true)]
    pub out: Option<String>,
    /// csv or json.
    #[arg(long, global = true)]
    pub format: Option<String>,
    /// Shorthand for --format json.
    #[arg(long, global = true)]
    pub json: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exterior matching coefficients over a tube or barrier radius sweep.
    Coeffs(CoeffsArgs),
    /// Radial spinor components of one partial wave.
    Eigenfn(EigenfnArgs),
    /// Scattering amplitude and differential cross section.
    Xsection(XsectionArgs),
    /// Green's-function difference between bare and shielded strings.
    Greens(GreensArgs),
    /// Wave-packet difference against impact parameter.
    Packet(PacketArgs),
    /// Run the invariant suites and report pass/fail.
    Verify(VerifyArgs),
}

#[derive(Debug, Args, Serialize, Default)]
pub struct CoeffsArgs {
    /// bare (finite tube, r0 -> 0) or shielded (barrier at R0).
    pub kind: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// Angular momenta: `0`, `-2,-1,1,2` or `-2:2`.
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<String>,
    /// 1, 2 or `1,2`.
    #[arg(long, allow_hyphen_values = true)]
    pub channel: Option<String>,
    /// Sweep of k r0 for the bare kind.
    #[arg(long, allow_hyphen_values = true)]
    pub kr0: Option<String>,
    /// Sweep of k R0 for the shielded kind.
    #[arg(long = "kR0", allow_hyphen_values = true)]
    #[serde(rename = "kR0")]
    pub k_r_outer: Option<String>,
    /// kappa R0 held fixed in the shielded sweep.
    #[arg(long = "kappaR0", allow_hyphen_values = true)]
    #[serde(rename = "kappaR0")]
    pub kappa_r_outer: Option<String>,
    /// Total energy (bare kind), in units of Mc^2 when mass = 1.
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<String>,
    /// Barrier height U (shielded kind).
    #[arg(long = "barrier-height", allow_hyphen_values = true)]
    pub barrier_height: Option<String>,
}

#[derive(Debug, Args, Serialize, Default)]
pub struct EigenfnArgs {
    /// bare or shielded.
    pub kind: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub l: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<String>,
    /// Radius sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
}

#[derive(Debug, Args, Serialize, Default)]
pub struct XsectionArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub energy: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<String>,
    /// Angle sweep; must avoid theta = +-pi.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// Half-width of the forward cone excluded from the integrated cross section.
    #[arg(long, allow_hyphen_values = true)]
    pub cut: Option<String>,
}

#[derive(Debug, Args, Serialize, Default)]
pub struct GreensArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rprime: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub thetaprime: Option<String>,
    /// Time sweep.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Add the regularized-integral columns.
    #[arg(long)]
    pub oracle: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub epsilon: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub levels: Option<String>,
    #[arg(long = "spread-tol", allow_hyphen_values = true)]
    pub spread_tol: Option<String>,
}

#[derive(Debug, Args, Serialize, Default)]
pub struct PacketArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub mass: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub rho0: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub delta: Option<String>,
    /// Impact-parameter sweep (exclusive with theta0).
    #[arg(long, allow_hyphen_values = true)]
    pub d: Option<String>,
    /// Angular-offset sweep (exclusive with d).
    #[arg(long, allow_hyphen_values = true)]
    pub theta0: Option<String>,
    /// Field radius; defaults to rho0.
    #[arg(long, allow_hyphen_values = true)]
    pub r: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    /// `matched` (envelope peak of each row) or a fixed time.
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<String>,
    /// Add exact-kernel quadrature columns.
    #[arg(long)]
    pub quadrature: bool,
}

#[derive(Debug, Args, Serialize, Default)]
pub struct VerifyArgs {
    /// Comma-separated suite names; all suites when absent.
    #[arg(long, allow_hyphen_values = true)]
    pub suite: Option<String>,
}

/// Flag values as key -> string, skipping absent options and false flags,
/// plus every key the struct accepts.
fn flag_map<T: Serialize + Default>(args: &T) -> (BTreeMap<String, String>, Vec<String>) {
    let to_obj = |v: serde_json::Value| match v {
        serde_json::Value::Object(m) => m,
        _ => serde_json::Map::new(),
    };
    let keys = to_obj(serde_json::to_value(T::default()).unwrap_or_default()).keys().cloned().collect();
    let mut out = BTreeMap::new();
    for (k, v) in to_obj(serde_json::to_value(args).unwrap_or_default()) {
        match v {
            serde_json::Value::String(s) => {
                out.insert(k, s);
            }
            serde_json::Value::Bool(true) => {
                out.insert(k, "true".into());
            }
            _ => {}
        }
    }
    (out, keys)
}

fn params_for<T: Serialize + Default>(args: &T, io: &IoArgs) -> Result<Params, CliError> {
    let (mut flags, mut keys) = flag_map(args);
    let (io_flags, io_keys) = flag_map(io);
    flags.extend(io_flags);
    keys.extend(io_keys);
    let allowed: Vec<&str> = keys.iter().map(String::as_str).collect();
    Params::merge(io.config.as_deref(), flags, &allowed)
}

/// Worker pool sized by ABDIRAC_THREADS, else by available parallelism.
pub fn thread_pool() -> Result<rayon::ThreadPool, CliError> {
    let n = match std::env::var(THREADS_ENV) {
        Ok(s) => s
            .trim()
            .parse::<usize>()
            .ok()
            .filter(|&n| n >= 1)
            .ok_or_else(|| CliError::Config(format!("{THREADS_ENV} must be a positive integer, got `{s}`")))?,
        Err(_) => std::thread::available_parallelism().map_or(1, |n| n.get()),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build()
        .map_err(|e| CliError::Numerical(format!("cannot start worker pool: {e}")))
}

/// Outcome of one command: the table and whether a verification failed.
pub struct Outcome {
    pub table: Table,
    pub failed: Option<String>,
}

/// Parse-free entry point used by `main` and the tests.
pub fn execute(cli: &Cli) -> Result<(Outcome, Params), CliError> {
    let pool = thread_pool()?;
    let (params, name) = match &cli.command {
        Command::Coeffs(a) => (params_for(a, &cli.io)?, "coeffs"),
        Command::Eigenfn(a) => (params_for(a, &cli.io)?, "eigenfn"),
        Command::Xsection(a) => (params_for(a, &cli.io)?, "xsection"),
        Command::Greens(a) => (params_for(a, &cli.io)?, "greens"),
        Command::Packet(a) => (params_for(a, &cli.io)?, "packet"),
        Command::Verify(a) => (params_for(a, &cli.io)?, "verify"),
    };
    let outcome = pool.install(|| -> Result<Outcome, CliError> {
        let table = match name {
            "coeffs" => commands::run_coeffs(&params)?,
            "eigenfn" => commands::run_eigenfn(&params)?,
            "xsection" => commands::run_xsection(&params)?,
            "greens" => commands::run_greens(&params)?,
            "packet" => commands::run_packet(&params)?,
            _ => {
                let report = verify::run_verify(&params)?;
                let failed = report.failures();
                return Ok(Outcome {
                    table: report.table(),
                    failed: (!failed.is_empty()).then(|| failed.join(", ")),
                });
            }
        };
        Ok(Outcome { table, failed: None })
    })?;
    eprintln!("{name}: {} rows, {} threads", outcome.table.rows.len(), pool.current_num_threads());
    Ok((outcome, params))
}

fn output_format(params: &Params) -> Result<Format, CliError> {
    if params.bool_or("json", false)? {
        return Ok(Format::Json);
    }
    params.raw("format").unwrap_or("csv").parse()
}

/// Runs the command and writes its table; returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    let result = execute(cli).and_then(|(outcome, params)| {
        let format = output_format(&params)?;
        match params.raw("out") {
            Some(path) => {
                let mut f = std::fs::File::create(path).map_err(|e| CliError::Io(format!("cannot create {path}: {e}")))?;
                outcome.table.write(&mut f, format)?;
            }
            None => {
                let stdout = std::io::stdout();
                let mut lock = stdout.lock();
                outcome.table.write(&mut lock, format)?;
            }
        }
        match outcome.failed {
            Some(names) => Err(CliError::Verification(names)),
            None => Ok(()),
        }
    });
    match result {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("abdirac: {e}");
            e.exit_code()
        }
    }
}

/// Parses arguments (clap usage errors exit 1) and runs.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            code
        }
    }
}
