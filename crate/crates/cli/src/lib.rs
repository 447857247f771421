//! Front end for the `ncfgl` binary: argument parsing, rendering and exit codes.

mod commands;
mod figures;
mod output;
mod verify;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use ncfgl_core::error::Error;
use ncfgl_core::hur::Convention;

pub use figures::{reproduce_figures, FIGURE_FILES};
pub use output::{render, Entry, Report};
pub use verify::{run_suite, Check, Suite};

/// Exit status for a failed verification suite.
pub const EXIT_VERIFY_FAILED: u8 = 1;
/// Exit status for malformed arguments or input.
pub const EXIT_BAD_ARGS: u8 = 2;
/// Exit status when a request needs more precision than the configured order.
pub const EXIT_PRECISION: u8 = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Latex,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Text => "txt",
            Format::Json => "json",
            Format::Latex => "tex",
        }
    }
}

/// Settings shared by every subcommand.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub order: usize,
    pub convention: Convention,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub max_weight: Option<usize>,
    /// Report degrees as topological degrees (twice the weight).
    pub topological: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            order: 10,
            convention: Convention::default(),
            format: Format::Text,
            out: None,
            max_weight: None,
            topological: false,
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "ncfgl", version, about = "Exact computations with the universal noncommutative formal group law")]
struct Cli {
    /// Weight bound for all computations.
    #[arg(short = 'n', long, global = true, default_value_t = 10)]
    order: usize,
    /// Orientation convention: paper-figures or literal.
    #[arg(long, global = true, default_value = "paper-figures")]
    convention: String,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Output file (a directory for reproduce-figures).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Largest weight for tables, rank checks and verification suites.
    #[arg(long, global = true)]
    max_weight: Option<usize>,
    /// Print topological degrees (twice the weight) instead of weights.
    #[arg(long, global = true)]
    topological_degrees: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
pub(crate) enum Command {
    /// phi_k(a); without arguments the table of phi_k(Z_l).
    Phi {
        #[arg(long)]
        k: Option<usize>,
        /// Any expression accepted by the symbolic evaluator, e.g. Z2 or Ups[1,2].
        #[arg(long)]
        arg: Option<String>,
    },
    /// Braiding coefficients Ups[p,q].
    Upsilon {
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
    },
    /// Formal group law coefficients a_{i,j}.
    Fgl {
        #[arg(long)]
        i: Option<usize>,
        #[arg(long)]
        j: Option<usize>,
    },
    /// Coefficients of the formal inverse.
    Inverse,
    /// Polynomial generators X_n.
    Gens,
    /// Commutators [X_i, X_j] in the module basis.
    Commutators,
    /// Vieta coordinates y_k.
    Vieta {
        #[arg(long, default_value_t = 3)]
        vars: usize,
        /// Total x-degree of the truncation.
        #[arg(long, default_value_t = 7)]
        degree: usize,
    },
    /// Chern class c_k in the m_I basis.
    Chern {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
    /// Product m_A m_B of monomial quasi-symmetric functions.
    QsymMul {
        /// Composition such as 1,2 or m[1,2].
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
    /// m_I r rewritten with scalars on the left.
    QsymScalar {
        #[arg(long)]
        i: String,
        #[arg(long)]
        r: String,
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
    /// Deconcatenation coproduct of m_I or of a Chern class.
    Whitney {
        #[arg(long, conflicts_with = "chern")]
        i: Option<String>,
        #[arg(long)]
        chern: Option<usize>,
        #[arg(long)]
        vars: Option<usize>,
        #[arg(long, default_value_t = 8)]
        degree: usize,
    },
    /// Coefficients theta_{p,q} of the second elementary symmetric function.
    Theta,
    /// Coefficients of the commutator X(T2) X(T1) X(T2)^-1 X(T1)^-1.
    SplittingB,
    /// Ranks of the module basis and the graded dimensions.
    Ranks,
    /// Run verification suites; exits 1 on any failure.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Regenerate the published tables and displays.
    ReproduceFigures,
}

/// Failure modes, each mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Core(Error),
    Io(std::io::Error),
    VerifyFailed(usize),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_BAD_ARGS,
            CliError::Core(Error::PrecisionExhausted(_)) => EXIT_PRECISION,
            CliError::Core(Error::BadInput(_) | Error::Parse(_)) => EXIT_BAD_ARGS,
            CliError::Core(_) | CliError::Io(_) | CliError::VerifyFailed(_) => EXIT_VERIFY_FAILED,
        }
    }

    pub fn message(&self) -> String {
        match self {
            CliError::Usage(m) => m.clone(),
            CliError::Core(e) => e.to_string(),
            CliError::Io(e) => format!("i/o: {e}"),
            CliError::VerifyFailed(n) => format!("{n} check(s) failed"),
        }
    }
}

/// Sizes the global rayon pool from `NCFGL_THREADS`, if set.
pub fn init_threads_from_env() -> Result<(), String> {
    let Ok(v) = std::env::var("NCFGL_THREADS") else {
        return Ok(());
    };
    let n: usize = v.trim().parse().map_err(|_| format!("NCFGL_THREADS must be a positive integer, got {v:?}"))?;
    if n == 0 {
        return Err("NCFGL_THREADS must be positive".into());
    }
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global().map_err(|e| e.to_string())
}

/// Parses `args` (including the program name), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_ARGS } else { 0 };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { stderr.write_all(text.as_bytes()) } else { stdout.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(cli, stdout) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.exit_code()
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    if cli.order < 2 {
        return Err(CliError::Usage(format!("--order must be at least 2, got {}", cli.order)));
    }
    let cfg = RunConfig {
        order: cli.order,
        convention: Convention::from_name(&cli.convention).map_err(|e| CliError::Usage(e.to_string()))?,
        format: cli.format,
        out: cli.out,
        max_weight: cli.max_weight,
        topological: cli.topological_degrees,
    };
    if let Command::ReproduceFigures = cli.command {
        return figures::write_figures(&cfg, stdout);
    }
    let (report, failures) = commands::dispatch(&cli.command, &cfg)?;
    let text = render(&report, &cfg);
    match &cfg.out {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    if failures > 0 {
        return Err(CliError::VerifyFailed(failures));
    }
    Ok(())
}
