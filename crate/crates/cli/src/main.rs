//! `ssp`: batch runs of the enumeration, classification and verification
//! pipeline. Exit codes: 0 success, 1 internal error, 2 configuration
//! error, 3 budget refusal, 4 verification failures found.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ssp_core::families::CaseTag;

#[derive(Parser, Debug)]
#[command(name = "ssp", version, about = "Superspecial genus-4 curves over small prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Enumerate superspecial curves of one quadric case with preset splits.
    Enumerate(EnumerateArgs),
    /// Partition the curves of one or more report files into isomorphism classes.
    Classify(ClassifyArgs),
    /// Check superspeciality, smoothness and point counts of curve records.
    Verify(VerifyArgs),
    /// Exhaustive enumeration of a whole template, for differential testing.
    Oracle(OracleArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CaseArg {
    N1,
    N2,
    Dege,
}

impl From<CaseArg> for CaseTag {
    fn from(c: CaseArg) -> Self {
        match c {
            CaseArg::N1 => CaseTag::N1,
            CaseArg::N2 => CaseTag::N2,
            CaseArg::Dege => CaseTag::Dege,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BackendArg {
    Hybrid,
    Brute,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FieldArg {
    Rational,
    Closure,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Worker threads (default: available parallelism).
    #[arg(long)]
    pub workers: Option<usize>,
    /// Output file (default: standard output).
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct BudgetArgs {
    /// Inner systems with at most this many points are solved exhaustively.
    #[arg(long, env = "SSP_BRUTE_THRESHOLD")]
    pub brute_threshold: Option<u128>,
    /// Largest parameter space the exhaustive backend accepts.
    #[arg(long, env = "SSP_ORACLE_BUDGET")]
    pub oracle_budget: Option<u128>,
}

#[derive(Args, Debug, Clone)]
pub struct EnumerateArgs {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    #[arg(long)]
    pub q: u32,
    /// Preset split id (default: every split of the case).
    #[arg(long)]
    pub split: Option<String>,
    /// Template form (default: every form).
    #[arg(long)]
    pub form: Option<u8>,
    /// Pinned slot values, e.g. `b1=1,b2=0,a1=1`.
    #[arg(long, default_value = "")]
    pub slice: String,
    #[arg(long, value_enum, default_value = "hybrid")]
    pub backend: BackendArg,
    /// JSON-lines checkpoint; an interrupted run resumes from it.
    #[arg(long)]
    pub checkpoint: Option<PathBuf>,
    /// Preset table replacing the built-in one.
    #[arg(long)]
    pub preset_file: Option<PathBuf>,
    #[command(flatten)]
    pub budgets: BudgetArgs,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct ClassifyArgs {
    /// Enumeration reports or curve files.
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "rational")]
    pub field: FieldArg,
    /// Skip the orthogonal-group deduplication pass.
    #[arg(long)]
    pub no_phase1: bool,
    /// Skip the point-count comparison before the Gröbner test.
    #[arg(long)]
    pub no_prefilter: bool,
    /// Do not record transformation matrices.
    #[arg(long)]
    pub no_witness: bool,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct VerifyArgs {
    /// Enumeration report or curve file.
    pub input: PathBuf,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct OracleArgs {
    #[arg(long, value_enum)]
    pub case: CaseArg,
    #[arg(long)]
    pub q: u32,
    /// Template form (default: every form).
    #[arg(long)]
    pub form: Option<u8>,
    #[arg(long, default_value = "")]
    pub slice: String,
    #[command(flatten)]
    pub budgets: BudgetArgs,
    #[command(flatten)]
    pub common: Common,
}

/// Failure classes, each with its own exit code.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Budget(String),
    Verification(usize),
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Internal(_) => 1,
            CliError::Config(_) => 2,
            CliError::Budget(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "configuration error: {m}"),
            CliError::Budget(m) => write!(f, "refused: {m}"),
            CliError::Verification(n) => write!(f, "{n} record(s) failed verification"),
            CliError::Internal(m) => write!(f, "error: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.command {
        Command::Enumerate(a) => commands::enumerate(&a),
        Command::Classify(a) => commands::classify(&a),
        Command::Verify(a) => commands::verify(&a),
        Command::Oracle(a) => commands::oracle(&a),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ssp: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
