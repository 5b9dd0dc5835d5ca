//! Command-line front end for the `supermatch` library.
//!
//! [`run`] takes the full argument vector and returns a [`CommandOutcome`]
//! instead of printing or exiting, so every subcommand can be driven from
//! tests. Exit codes: 0 success, 1 a well-formed negative answer (UNSAT, no
//! supermatch, verification disagreement), 2 usage, parse or validation
//! errors, 3 a resource limit.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use thiserror::Error;

mod marriage;
mod reduction;
mod satsm;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_LIMIT: i32 = 3;

/// What a command produced: its exit code and the text for each stream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CommandOutcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandOutcome {
    fn ok(stdout: String) -> Self {
        CommandOutcome {
            code: EXIT_OK,
            stdout,
            stderr: String::new(),
        }
    }

    fn answer(yes: bool, stdout: String) -> Self {
        CommandOutcome {
            code: if yes { EXIT_OK } else { EXIT_NO },
            stdout,
            stderr: String::new(),
        }
    }
}

#[derive(Debug, Error)]
pub(crate) enum Failure {
    /// Bad input: unreadable files, parse errors, invalid instances.
    #[error("{0}")]
    Input(String),
    /// Bad input whose explanation belongs on stdout (validation reports).
    #[error("{message}")]
    Report { message: String, stdout: String },
    #[error("{0}")]
    Limit(String),
}

impl Failure {
    fn outcome(self) -> CommandOutcome {
        let (code, stdout, stderr) = match self {
            Failure::Input(msg) => (EXIT_USAGE, String::new(), msg),
            Failure::Report { message, stdout } => (EXIT_USAGE, stdout, message),
            Failure::Limit(msg) => (EXIT_LIMIT, String::new(), msg),
        };
        CommandOutcome {
            code,
            stdout,
            stderr: format!("error: {stderr}\n"),
        }
    }
}

pub(crate) type CmdResult = Result<CommandOutcome, Failure>;

#[derive(Debug, Parser)]
#[command(
    name = "supermatch",
    version,
    about = "Stable marriage rotation posets, (a,b)-supermatch checks and SAT-SM tooling"
)]
struct Cli {
    /// Print JSON instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct InstanceArg {
    /// Stable marriage instance file.
    file: PathBuf,
}

#[derive(Debug, Args)]
struct SatSmArg {
    /// SAT-SM instance file.
    file: PathBuf,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse an instance and print it in canonical form.
    Parse(InstanceArg),
    /// Run deferred acceptance.
    Solve {
        #[command(flatten)]
        input: InstanceArg,
        /// Let the women propose (woman-optimal matching).
        #[arg(long)]
        women: bool,
    },
    /// List every stable matching with its closed subset of rotations.
    Enumerate {
        #[command(flatten)]
        input: InstanceArg,
        /// Give up beyond this many stable matchings.
        #[arg(long, default_value_t = supermatch::DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Print the rotation poset.
    Poset {
        #[command(flatten)]
        input: InstanceArg,
        /// Graphviz output (takes precedence over --json).
        #[arg(long)]
        dot: bool,
    },
    /// Test one matching, or search for an (a,b)-supermatch.
    CheckSupermatch {
        #[command(flatten)]
        input: InstanceArg,
        #[arg(long)]
        a: usize,
        #[arg(long)]
        b: usize,
        /// Matching file (`man woman` per line) to test instead of searching.
        #[arg(long)]
        matching: Option<PathBuf>,
        #[arg(long, default_value_t = supermatch::DEFAULT_ENUMERATION_CAP)]
        cap: usize,
    },
    /// Check a SAT-SM instance and report every violation.
    SatsmValidate(SatSmArg),
    /// Build the CNF and print or write it in DIMACS form.
    SatsmCnf {
        #[command(flatten)]
        input: SatSmArg,
        /// Write DIMACS here instead of standard output.
        #[arg(long)]
        dimacs: Option<PathBuf>,
    },
    /// Solve the CNF with the built-in solver or an external one.
    SatsmSolve {
        #[command(flatten)]
        input: SatSmArg,
        /// DIMACS solver executable, called as `SOLVER file.cnf`.
        #[arg(long)]
        external_solver: Option<PathBuf>,
        /// Conflict limit for the built-in solver.
        #[arg(long, default_value_t = supermatch::satsm::DEFAULT_CONFLICT_CAP)]
        conflicts: u64,
    },
    /// Build the stable marriage instance for a SAT-SM instance.
    Reduce {
        #[command(flatten)]
        input: SatSmArg,
        /// Output directory, created if missing.
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a random valid SAT-SM instance.
    GenSatsm {
        /// Universe size |X|.
        #[arg(long)]
        x: usize,
        /// Number of lists.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check SAT-SM satisfiability against brute-force supermatch search on
    /// random reduced instances.
    VerifyEquivalence {
        #[arg(long, default_value_t = 100)]
        count: u64,
        #[arg(long, default_value_t = 12)]
        max_x: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I) -> CommandOutcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                CommandOutcome::ok(text)
            } else {
                CommandOutcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    dispatch(cli).unwrap_or_else(Failure::outcome)
}

fn dispatch(cli: Cli) -> CmdResult {
    let json = cli.json;
    match cli.command {
        Command::Parse(i) => marriage::parse(&i.file, json),
        Command::Solve { input, women } => marriage::solve(&input.file, women, json),
        Command::Enumerate { input, cap } => marriage::enumerate(&input.file, cap, json),
        Command::Poset { input, dot } => marriage::poset(&input.file, dot, json),
        Command::CheckSupermatch {
            input,
            a,
            b,
            matching,
            cap,
        } => marriage::check_supermatch(&input.file, a, b, matching.as_deref(), cap, json),
        Command::SatsmValidate(i) => satsm::validate(&i.file, json),
        Command::SatsmCnf { input, dimacs } => satsm::cnf(&input.file, dimacs.as_deref(), json),
        Command::SatsmSolve {
            input,
            external_solver,
            conflicts,
        } => satsm::solve(&input.file, external_solver.as_deref(), conflicts, json),
        Command::Reduce { input, out } => reduction::reduce(&input.file, &out, json),
        Command::GenSatsm { x, n, seed } => reduction::gen_satsm(x, n, seed, json),
        Command::VerifyEquivalence { count, max_x, seed } => {
            reduction::verify_equivalence(count, max_x, seed, json)
        }
    }
}

pub(crate) fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

pub(crate) fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("output types serialize");
    s.push('\n');
    s
}

pub(crate) fn pairs_text(m: &supermatch::Matching) -> String {
    let pairs: Vec<String> = m.pairs().map(|(a, b)| format!("({a},{b})")).collect();
    pairs.join(" ")
}
