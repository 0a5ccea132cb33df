//! Command-line arguments, run configuration and its hash.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use flagvertex::xxz::FittedInsertions;
use flagvertex::{Error, FlagData, ParamPoint, SeriesConvention, Q};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Error carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
}

impl CliError {
    pub fn config(message: impl Into<String>) -> Self {
        CliError {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Pole(_)
            | Error::RewritePole(_)
            | Error::Limit(_)
            | Error::SingularSystem(_)
            | Error::Calibration(_)
            | Error::Weight(_)
            | Error::NoFit(_) => 3,
            Error::Invalid(m) if m.contains("genericity") => 3,
            Error::Convergence(_) | Error::JacobianSingular(_) | Error::DegenerateRoot(_) => 4,
            Error::Shape(_) | Error::Range(_) | Error::Reliability(_) | Error::Invalid(_) | Error::Parse(_) => 2,
        };
        CliError {
            code,
            message: e.to_string(),
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "flagvertex", version, about = "Vertex functions of type-A quiver varieties and their verification suites")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Opts,
}

#[derive(Subcommand, Debug, Clone, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Vertex series for every fixed point (or the one chosen by --point).
    Vertex,
    /// The `ℏ → ∞` limit of the vertex series.
    TodaLimit,
    /// Solve the Bethe equations of every weight block (or --weight).
    BetheSolve,
    /// Run a verification suite; exits 0 on PASS and 1 on FAIL.
    Check {
        #[arg(value_enum)]
        suite: Suite,
    },
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    TrsEigen,
    Xxz,
    QkzTrsSum,
    Lemma,
    Calibrate,
    Bethe,
}

#[derive(ValueEnum, Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ConventionArg {
    Z,
    Zh,
}

impl From<ConventionArg> for SeriesConvention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Z => SeriesConvention::Z,
            ConventionArg::Zh => SeriesConvention::Zh,
        }
    }
}

#[derive(Args, Debug, Clone)]
pub struct Opts {
    /// Flag data as JSON (`{"v":[1],"w":2}`) or a path to a JSON file.
    #[arg(long, global = true)]
    pub quiver: Option<String>,
    /// Parameter point as JSON or a path to a JSON file.
    #[arg(long, global = true)]
    pub params: Option<String>,
    /// Zero-based index of a fixed point in enumeration order.
    #[arg(long, global = true)]
    pub point: Option<usize>,
    /// Truncation order, one entry per level or a single value for all levels.
    #[arg(long, global = true, value_delimiter = ',')]
    pub order: Option<Vec<i64>>,
    /// Index of the tRS operator (all indices when omitted).
    #[arg(long, global = true)]
    pub r: Option<usize>,
    /// Identity or lemma case name.
    #[arg(long, global = true)]
    pub identity: Option<String>,
    /// Number of spin states per site.
    #[arg(long, global = true)]
    pub n: Option<usize>,
    /// Number of sites (framing rank).
    #[arg(long, global = true)]
    pub w: Option<usize>,
    /// Weight block for the Bethe commands (site counts per state).
    #[arg(long, global = true, value_delimiter = ',')]
    pub weight: Option<Vec<usize>>,
    /// Insertion coefficients for qkz-trs-sum as JSON or a path.
    #[arg(long, global = true)]
    pub insertions: Option<String>,
    /// Series variable for `vertex`.
    #[arg(long, global = true, value_enum)]
    pub convention: Option<ConventionArg>,
    /// Seed for every random choice.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output path; standard output when omitted.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Decimal digits for the Bethe solver.
    #[arg(long, global = true)]
    pub precision: Option<u32>,
}

/// Read an argument that is either inline JSON or a path to a JSON file.
pub fn json_or_path(arg: &str) -> Result<String, CliError> {
    let t = arg.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(arg.to_string());
    }
    std::fs::read_to_string(Path::new(arg)).map_err(|e| CliError::config(format!("reading {arg}: {e}")))
}

/// Numeric parameters for the Bethe commands: either a full parameter point
/// or `{"hbar": .., "a": [..], "zeta": [..]}`.
#[derive(Deserialize)]
struct BetheParamsJson {
    #[serde(with = "flagvertex::kernel::scalar::serde_q")]
    hbar: Q,
    #[serde(with = "flagvertex::kernel::scalar::serde_qvec")]
    a: Vec<Q>,
    #[serde(with = "flagvertex::kernel::scalar::serde_qvec")]
    zeta: Vec<Q>,
}

/// Parameters accepted by the Bethe commands.
#[derive(Clone, Debug)]
pub enum BetheParams {
    Point(ParamPoint),
    Hbar { hbar: Q, a: Vec<Q>, zeta: Vec<Q> },
}

/// Everything that determines the output; hashed into every report.
#[derive(Serialize, Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub quiver: Option<FlagData>,
    pub params: Option<serde_json::Value>,
    pub point: Option<usize>,
    pub order: Option<Vec<i64>>,
    pub r: Option<usize>,
    pub identity: Option<String>,
    pub n: Option<usize>,
    pub w: Option<usize>,
    pub weight: Option<Vec<usize>>,
    pub insertions: Option<FittedInsertions>,
    pub convention: Option<ConventionArg>,
    pub seed: u64,
    pub precision: Option<u32>,
}

impl RunConfig {
    /// Hex SHA-256 of the canonical JSON of the configuration.
    pub fn hash(&self) -> String {
        let bytes = serde_json::to_vec(self).expect("config serializes");
        Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Parsed configuration plus the typed values the runners need.
pub struct Resolved {
    pub config: RunConfig,
    pub params_text: Option<String>,
    pub out: Option<PathBuf>,
}

fn parse_json_value(text: &str, what: &str) -> Result<serde_json::Value, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::config(format!("{what}: {e}")))
}

/// Parse and normalize the command line.
pub fn resolve(cli: &Cli) -> Result<Resolved, CliError> {
    let o = &cli.opts;
    let quiver = match &o.quiver {
        Some(q) => Some(FlagData::from_json(&json_or_path(q)?)?),
        None => None,
    };
    let params_text = match &o.params {
        Some(p) => Some(json_or_path(p)?),
        None => None,
    };
    let params = match &params_text {
        Some(t) => Some(parse_json_value(t, "params")?),
        None => None,
    };
    let insertions = match &o.insertions {
        Some(s) => Some(
            serde_json::from_str::<FittedInsertions>(&json_or_path(s)?)
                .map_err(|e| CliError::config(format!("insertions: {e}")))?,
        ),
        None => None,
    };
    if let Some(ord) = &o.order {
        if ord.is_empty() || ord.iter().any(|&d| d < 0) {
            return Err(CliError::config("--order entries must be nonnegative"));
        }
    }
    Ok(Resolved {
        config: RunConfig {
            command: cli.command.clone(),
            quiver,
            params,
            point: o.point,
            order: o.order.clone(),
            r: o.r,
            identity: o.identity.clone(),
            n: o.n,
            w: o.w,
            weight: o.weight.clone(),
            insertions,
            convention: o.convention,
            seed: o.seed,
            precision: o.precision,
        },
        params_text,
        out: o.out.clone(),
    })
}

/// Parse a parameter point from text.
pub fn param_point(text: &str) -> Result<ParamPoint, CliError> {
    Ok(ParamPoint::from_json(text)?)
}

/// Parse Bethe parameters from text.
pub fn bethe_params(text: &str) -> Result<BetheParams, CliError> {
    let v = parse_json_value(text, "params")?;
    if v.get("hbar").is_some() {
        let b: BetheParamsJson = serde_json::from_value(v).map_err(|e| CliError::config(format!("params: {e}")))?;
        Ok(BetheParams::Hbar {
            hbar: b.hbar,
            a: b.a,
            zeta: b.zeta,
        })
    } else {
        Ok(BetheParams::Point(param_point(text)?))
    }
}
