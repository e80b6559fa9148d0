//! Command-line driver: argument parsing, configuration, report rendering,
//! the power-sum disk cache and the `verify` battery.
//!
//! Every report is a JSON object
//! `{schemaVersion, command, config, result, timing}`; only `timing` varies
//! between identical runs. Exit codes: 0 success, 2 usage error, 3 a
//! mathematical check failed, 4 resource limits or I/O.

mod cache;
mod commands;
mod parse;
pub mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

pub use cache::{decode_entry, encode_entry, CacheStats, DiskCache, CACHE_ENV};
pub use commands::{render_fixed_runs, FIXED_RUNS};
pub use parse::{parse_poly, ParseError};

/// Version of the JSON report layout.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MATH: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("{0}")]
    Math(String),
    #[error("resource: {0}")]
    Resource(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Math(_) => EXIT_MATH,
            CliError::Resource(_) => EXIT_RESOURCE,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ModuleKind {
    #[default]
    Carlitz,
    Rank2,
}

#[derive(Debug, Parser)]
#[command(name = "fzeta", version, about = "Zeta and L-series data over F_r[T]")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Worker threads for data-parallel loops (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Power-sum cache directory; overrides the FZETA_CACHE_DIR variable.
    #[arg(long, global = true)]
    pub cache_dir: Option<std::path::PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FieldArgs {
    /// Characteristic.
    #[arg(long)]
    pub p: u32,
    /// Degree of F_r over F_p.
    #[arg(long, default_value_t = 1)]
    pub m: u32,
    /// Monic modulus of F_r over F_p as base-p digits, constant term first (e.g. 111).
    #[arg(long)]
    pub modulus: Option<String>,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExponentArgs {
    /// Integer exponent (y at infinity, the image of y in S_v otherwise).
    #[arg(long, allow_hyphen_values = true, conflicts_with = "y_digits")]
    pub y: Option<i64>,
    /// p-adic exponent as comma-separated base-p digits, lowest first.
    #[arg(long)]
    pub y_digits: Option<String>,
    /// Finite-order coordinate of a v-adic exponent given by digits.
    #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
    pub s1: i64,
    /// p-adic digits used when embedding an integer exponent.
    #[arg(long, default_value_t = 8)]
    pub digits: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ModuleArgs {
    #[arg(long, value_enum, default_value_t = ModuleKind::Carlitz)]
    pub module: ModuleKind,
    /// g1 of a rank-2 module theta + g1 tau + g2 tau^2, as a polynomial in T (= theta).
    #[arg(long)]
    pub g1: Option<String>,
    /// g2 of a rank-2 module.
    #[arg(long)]
    pub g2: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Special polynomial z(x, -j) = sum_d S_d(j) x^-d.
    Special {
        #[command(flatten)]
        field: FieldArgs,
        #[arg(long)]
        j: u64,
        /// Compute at least this many coefficients.
        #[arg(long)]
        dmax: Option<usize>,
    },
    /// Newton polygon and zero spectrum of a zeta coefficient family.
    Newton {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        exponent: ExponentArgs,
        /// Finite place as a monic prime in T; infinity when absent.
        #[arg(long)]
        prime: Option<String>,
        #[arg(long, default_value_t = 8)]
        dmax: usize,
        /// Target precision M.
        #[arg(long, default_value_t = 64)]
        precision: usize,
        /// Refine the zeros of simple segments by Newton iteration (infinity only).
        #[arg(long)]
        refine: bool,
    },
    /// Frobenius characteristic data of a Drinfeld module at a prime.
    Frobenius {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        module: ModuleArgs,
        #[arg(long)]
        f: String,
    },
    /// Dirichlet coefficients of L(phi, s), optionally with a local family.
    Lseries {
        #[command(flatten)]
        field: FieldArgs,
        #[command(flatten)]
        module: ModuleArgs,
        /// Degree bound D.
        #[arg(long)]
        degree: usize,
        #[command(flatten)]
        exponent: ExponentArgs,
        #[arg(long)]
        prime: Option<String>,
        #[arg(long, default_value_t = 64)]
        precision: usize,
    },
    /// The CM example over F_2[sqrt T].
    Sqrtcar {
        #[arg(long)]
        j: u64,
        #[arg(long, default_value_t = 8)]
        dmax: usize,
        #[arg(long, default_value_t = 64)]
        precision: usize,
        #[arg(long, default_value_t = 4)]
        psi_degree: usize,
    },
    /// Run the acceptance battery.
    Verify {
        #[arg(long, conflicts_with = "full")]
        quick: bool,
        #[arg(long)]
        full: bool,
        /// Run only these criteria (comma-separated ids).
        #[arg(long, value_delimiter = ',')]
        only: Vec<u8>,
    },
}

/// The validated configuration embedded in every report.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub command: &'static str,
    pub format: Format,
    pub threads: Option<usize>,
    pub params: Value,
}

/// What a command produces before rendering.
pub struct Outcome {
    pub result: Value,
    /// CSV and text renderings, when the command supports them.
    pub csv: Option<String>,
    pub text: String,
    /// Per-item timings merged into the timing object.
    pub timing: Value,
    /// A mathematical check in the result failed.
    pub failed: bool,
}

fn resolve_cache(cli: &Cli) -> Result<Option<DiskCache>, CliError> {
    let dir = cli.cache_dir.clone().or_else(|| std::env::var_os(CACHE_ENV).map(Into::into));
    dir.map(|d| DiskCache::new(d).map_err(|e| CliError::Resource(format!("cache directory: {e}")))).transpose()
}

/// The full report document for an outcome.
pub fn envelope(config: &RunConfig, outcome: &Outcome, timing: Value) -> Value {
    json!({
        "schemaVersion": SCHEMA_VERSION,
        "command": config.command,
        "config": config,
        "result": outcome.result,
        "timing": timing,
    })
}

/// Drops the timing object so reports can be compared byte for byte.
pub fn strip_timing(report: &str) -> Option<String> {
    let mut v: Value = serde_json::from_str(report).ok()?;
    v.as_object_mut()?.remove("timing");
    serde_json::to_string_pretty(&v).ok()
}

fn execute(cli: &Cli) -> Result<(String, i32), CliError> {
    let cache = resolve_cache(cli)?;
    let start = Instant::now();
    let (config, outcome) = commands::dispatch(cli, cache.as_ref().map(|c| c as &dyn crate::zeta::PowerSumCache))?;
    let mut timing = json!({ "elapsedMs": start.elapsed().as_secs_f64() * 1e3 });
    if let Value::Object(extra) = &outcome.timing {
        timing.as_object_mut().unwrap().extend(extra.clone());
    }
    if let Some(c) = &cache {
        timing["cache"] = json!({ "dir": c.root().display().to_string(), "stats": c.stats() });
    }
    let rendered = match cli.format {
        Format::Json => serde_json::to_string_pretty(&envelope(&config, &outcome, timing)).expect("reports serialize") + "\n",
        Format::Text => outcome.text.clone(),
        Format::Csv => outcome
            .csv
            .clone()
            .ok_or_else(|| CliError::Usage(format!("csv output is not available for {}", config.command)))?,
    };
    Ok((rendered, if outcome.failed { EXIT_MATH } else { EXIT_OK }))
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = match cli.threads {
        Some(0) => Err(CliError::Usage("--threads must be positive".into())),
        Some(k) => match rayon::ThreadPoolBuilder::new().num_threads(k).build() {
            Ok(pool) => pool.install(|| execute(&cli)),
            Err(e) => Err(CliError::Resource(e.to_string())),
        },
        None => execute(&cli),
    };
    match result.and_then(|(text, code)| {
        out.write_all(text.as_bytes()).map_err(|e| CliError::Resource(e.to_string()))?;
        Ok(code)
    }) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "fzeta: {e}");
            e.exit_code()
        }
    }
}
