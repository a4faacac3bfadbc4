//! The `esscert` command line.
//!
//! Exit codes are shared by every subcommand: `0` for a positive answer
//! (yes, an ESS, a passing check), `1` for a negative one and `2` for usage,
//! parse or validation errors.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod roundtrip;

pub use commands::*;
pub use roundtrip::{check_instance, cmd_roundtrip, shrink_failure, RoundtripMode, RoundtripRow, RowOutcome};

pub const EXIT_POSITIVE: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

/// Exact ESS decisions, certificates and the MINMAX-CLIQUE reduction.
#[derive(Debug, Parser)]
#[command(name = "esscert", version)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide a MINMAX-CLIQUE instance.
    SolveClique(SolveCliqueArgs),
    /// List every ESS of a game.
    FindEss(FindEssArgs),
    /// Decide whether one strategy vector is an ESS.
    Verify(VerifyArgs),
    /// Build the game of a MINMAX-CLIQUE instance.
    Reduce(ReduceArgs),
    /// Remove a support restriction by duplicating or triplicating strategies.
    Transform(TransformArgs),
    /// Check that every pure strategy is the unique best response to something.
    AuditUbr(AuditUbrArgs),
    /// Check the reduction equivalences over a directory of instances.
    Roundtrip(RoundtripArgs),
    /// Write instance corpora.
    GenerateCorpus(GenerateCorpusArgs),
    /// Recheck a certificate against its game.
    CheckCertificate(CheckCertificateArgs),
}

#[derive(Debug, Args)]
pub struct SolveCliqueArgs {
    /// Instance JSON file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Print the clique found for every selector on a "yes" answer.
    #[arg(long)]
    pub all: bool,
    /// Remove dominated vertices first and print the removal log.
    #[arg(long)]
    pub preprocess: bool,
}

#[derive(Debug, Args)]
pub struct FindEssArgs {
    /// Game JSON file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Only report ESS supported on these strategies (comma separated).
    #[arg(long, value_delimiter = ',', conflicts_with = "restrict_target")]
    pub restrict: Option<Vec<String>>,
    /// Use the target set embedded in the game file as the restriction.
    #[arg(long)]
    pub restrict_target: bool,
    /// Largest support size to enumerate.
    #[arg(long)]
    pub max_support: Option<usize>,
    /// Write a JSON array with one certificate per ESS.
    #[arg(long)]
    pub certificate_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Game JSON file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// `p1,...,pn` over all strategies, or `name=p,...` over the support.
    pub strategy: String,
    /// Write the certificate JSON here.
    #[arg(long)]
    pub certificate_out: Option<PathBuf>,
    /// Free-form provenance recorded in the certificate.
    #[arg(long)]
    pub provenance: Option<String>,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Instance JSON file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Game JSON output (with the target embedded); stdout if absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    /// Also write the target set as a JSON list of strategy names.
    #[arg(long)]
    pub target_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TransformMode {
    Duplicate,
    Rps,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Game JSON file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Game JSON output; stdout if absent.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub mode: TransformMode,
    /// Target strategies (comma separated); defaults to the embedded target.
    #[arg(long, value_delimiter = ',')]
    pub target: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct AuditUbrArgs {
    /// Game JSON file.
    #[arg(short, long)]
    pub input: PathBuf,
}

#[derive(Debug, Args)]
pub struct RoundtripArgs {
    /// Directory of instance files (`*.json`).
    pub corpus_dir: PathBuf,
    #[arg(long, value_enum, default_value = "restricted")]
    pub mode: RoundtripMode,
    /// Worker threads; all available cores if absent.
    #[arg(long)]
    pub jobs: Option<usize>,
    /// Where to write the shrunken failing instance.
    #[arg(long, default_value = "roundtrip-failure.json")]
    pub dump: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorpusKind {
    Exhaustive,
    Random,
    Normalized,
    All,
}

#[derive(Debug, Args)]
pub struct GenerateCorpusArgs {
    /// Output directory (created if missing).
    #[arg(short, long)]
    pub output: PathBuf,
    #[arg(long, value_enum, default_value = "all")]
    pub kind: CorpusKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of random instances.
    #[arg(long, default_value_t = 200)]
    pub random: usize,
    /// Number of normalized instances.
    #[arg(long, default_value_t = 10)]
    pub normalized: usize,
    /// Vertex cap for normalized instances.
    #[arg(long, default_value_t = 3)]
    pub normalized_vertices: usize,
}

#[derive(Debug, Args)]
pub struct CheckCertificateArgs {
    /// Game JSON file.
    #[arg(short, long)]
    pub input: PathBuf,
    /// Certificate JSON (one document or an array).
    pub certificate: PathBuf,
}

/// Runs a parsed command line and returns its exit code. Reports go to
/// `out`, diagnostics to `err`.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let result = match &cli.command {
        Command::SolveClique(a) => cmd_solve_clique(a, out),
        Command::FindEss(a) => cmd_find_ess(a, out),
        Command::Verify(a) => cmd_verify(a, out),
        Command::Reduce(a) => cmd_reduce(a, out),
        Command::Transform(a) => cmd_transform(a, out),
        Command::AuditUbr(a) => cmd_audit_ubr(a, out),
        Command::Roundtrip(a) => cmd_roundtrip(a, out, err),
        Command::GenerateCorpus(a) => cmd_generate_corpus(a, out),
        Command::CheckCertificate(a) => cmd_check_certificate(a, out),
    };
    match result {
        Ok(true) => EXIT_POSITIVE,
        Ok(false) => EXIT_NEGATIVE,
        Err(e) => {
            let _ = writeln!(err, "error: {e:#}");
            EXIT_ERROR
        }
    }
}

/// Parses `args` (including the program name) and runs them.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{e}");
                EXIT_POSITIVE
            }
        }
    }
}
