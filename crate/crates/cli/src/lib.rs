//! `wrcomm` command-line front end. Exit codes: 0 success, 1 negative
//! verdict, 2 input error, 3 internal invariant violation.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use thiserror::Error;
use wrcomm_core::oracle::DEFAULT_GUARD;
use wrcomm_core::wrformat::{parse_element_document, DocumentError};
use wrcomm_core::{AritySignature, TreeAut, WreathError};

mod bench;
mod elements;
mod suites;

pub use bench::{bench_rows, BenchOp, BenchRow, CSV_HEADER};

#[derive(Debug, Parser)]
#[command(
    name = "wrcomm",
    version,
    about = "Commutators in iterated wreath products of cyclic groups"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print level-index tables and oracle cross-checks.
    #[arg(short, long, global = true)]
    pub verbose: bool,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Multiply two elements (left acts first).
    Mul {
        /// Element files, given twice: `--in a --in b`.
        #[arg(long = "in", required = true, num_args = 1..=2)]
        inputs: Vec<PathBuf>,
        #[arg(long)]
        sig: Option<AritySignature>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Membership report with the verdict of every applicable criterion.
    Check {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sig: Option<AritySignature>,
        #[arg(long, value_enum, default_value_t = GroupArg::DerivedWreath)]
        group: GroupArg,
    },
    /// Write a verified commutator witness for a derived-subgroup element.
    Solve {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        sig: Option<AritySignature>,
        #[arg(long, value_enum, default_value_t = GroupArg::DerivedWreath)]
        group: GroupArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Draw a random element of a group.
    Random {
        #[arg(long)]
        sig: AritySignature,
        #[arg(long, value_enum, default_value_t = GroupArg::Wreath)]
        group: GroupArg,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive cross-check against the permutation oracle.
    OracleVerify {
        #[arg(long)]
        sig: AritySignature,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        /// Largest group order the oracle will enumerate.
        #[arg(long, env = "WRCOMM_GUARD", default_value_t = DEFAULT_GUARD)]
        guard: u64,
    },
    /// Median and p95 wall time of the core operations.
    Bench {
        #[arg(long, default_value_t = 16)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = BenchOp::All)]
        op: BenchOp,
        #[arg(long, default_value_t = 10)]
        reps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Write the CSV here instead of stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Reproduce the derived subgroup of Syl_2(A_8) with witnesses.
    ExampleA8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GroupArg {
    Wreath,
    SylowS,
    SylowA,
    DerivedWreath,
    DerivedSylowA,
}

impl From<GroupArg> for wrcomm_core::GroupKind {
    fn from(g: GroupArg) -> Self {
        use wrcomm_core::GroupKind::*;
        match g {
            GroupArg::Wreath | GroupArg::SylowS => FullWreath,
            GroupArg::SylowA => SylowAlt,
            GroupArg::DerivedWreath => DerivedFullWreath,
            GroupArg::DerivedSylowA => DerivedSylowAlt,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Wreath,
    Sylow,
    All,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Negative(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Negative(_) => 1,
            CliError::Input(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<DocumentError> for CliError {
    fn from(e: DocumentError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<WreathError> for CliError {
    fn from(e: WreathError) -> Self {
        match e {
            WreathError::NotInDerived(_) | WreathError::NotInGroup(_) => CliError::Negative(e.to_string()),
            WreathError::VerificationFailed(_) => CliError::Internal(e.to_string()),
            WreathError::GuardExceeded { .. } | WreathError::CapExceeded { .. } => CliError::Input(format!(
                "{e}; the oracle cannot enumerate this group, use `check` and `solve` (solver-only mode) instead"
            )),
            _ => CliError::Input(e.to_string()),
        }
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

pub(crate) fn read_element(path: &Path, sig: Option<&AritySignature>) -> CliResult<TreeAut> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_element_document(&text, sig)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

pub(crate) fn write_or_print(out: &mut dyn Write, path: Option<&Path>, text: &str) -> CliResult {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::Input(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn dispatch(cli: &Cli, out: &mut dyn Write) -> CliResult {
    let verbose = cli.verbose;
    match &cli.command {
        Command::Mul {
            inputs,
            sig,
            out: dest,
        } => elements::mul(inputs, sig.as_ref(), dest.as_deref(), verbose, out),
        Command::Check { input, sig, group } => {
            elements::check(input, sig.as_ref(), (*group).into(), verbose, out)
        }
        Command::Solve {
            input,
            sig,
            group,
            out: dest,
        } => elements::solve(input, sig.as_ref(), (*group).into(), dest.as_deref(), out),
        Command::Random {
            sig,
            group,
            seed,
            out: dest,
        } => elements::random(sig, (*group).into(), *seed, dest.as_deref(), out),
        Command::OracleVerify { sig, suite, guard } => {
            suites::oracle_verify(sig, *suite, *guard, verbose, out)
        }
        Command::Bench {
            depth,
            op,
            reps,
            seed,
            csv,
        } => bench::run(*depth, *op, *reps, *seed, csv.as_deref(), out),
        Command::ExampleA8 => suites::example_a8(verbose, out),
    }
}

/// Runs a parsed command, reporting failures on `err`. Returns the exit code.
pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

/// Parses `args` (including the program name) and runs. Usage errors map to
/// exit code 2, `--help` and `--version` to 0.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let rendered = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(rendered.as_bytes());
            } else {
                let _ = err.write_all(rendered.as_bytes());
            }
            code
        }
    }
}
