//! File-based front end behind the `flyqubit` binary.
//!
//! Sweeps and engine traces are written as CSV, tomography and validation
//! reports as JSON. Output goes to `--out` or, without it, to stdout.
//! Exit codes: 0 success, 1 usage error, 2 validation failure, 3 numerical
//! guard tripped.

mod commands;
mod state;

use std::fmt;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};

pub use commands::{cmd_engine, cmd_sweep, cmd_tomo, cmd_validate, Outcome};
pub use state::parse_state;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_VALIDATION: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Inclusive grid `start:stop:step`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub step: f64,
}

impl Range {
    pub fn single(v: f64) -> Self {
        Range {
            start: v,
            stop: v,
            step: 1.0,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        if self.start == self.stop {
            return vec![self.start];
        }
        let n = ((self.stop - self.start) / self.step + 1e-9).floor() as usize;
        (0..=n).map(|k| self.start + k as f64 * self.step).collect()
    }
}

impl FromStr for Range {
    type Err = Error;

    fn from_str(s: &str) -> Result<Range> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("range `{s}` is not start:stop:step")));
        }
        let num = |p: &str| {
            p.trim()
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("range `{s}`: {e}")))
        };
        let r = Range {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            step: num(parts[2])?,
        };
        let finite = r.start.is_finite() && r.stop.is_finite() && r.step.is_finite();
        if !finite || r.stop < r.start || (r.stop > r.start && r.step <= 0.0) {
            return Err(Error::InvalidConfig(format!("empty or invalid range `{s}`")));
        }
        Ok(r)
    }
}

impl fmt::Display for Range {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}", self.start, self.stop, self.step)
    }
}

#[derive(Debug, Parser)]
#[command(name = "flyqubit", version, about = "Flying-qubit scattering, tomography and heat-engine runs")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate P_T (closed form and full matrix) over a parameter grid.
    Sweep(SweepArgs),
    /// Simulate a tomography experiment end to end.
    Tomo(TomoArgs),
    /// Run one magnetize/demagnetize cycle of the reflection engine.
    Engine(EngineArgs),
    /// Run the invariant suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, allow_hyphen_values = true, conflicts_with = "omega_range")]
    pub omega: Option<f64>,
    /// `start:stop:step`
    #[arg(long)]
    pub omega_range: Option<Range>,
    /// Sweep the angle of a frozen spin pair instead of a two-qubit state.
    #[arg(long, conflicts_with = "state")]
    pub theta_range: Option<Range>,
    #[arg(long, allow_hyphen_values = true, conflicts_with = "kd_range")]
    pub kd: Option<f64>,
    #[arg(long)]
    pub kd_range: Option<Range>,
    /// Static two-qubit state: generator or JSON file.
    #[arg(long)]
    pub state: Option<String>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TomoArgs {
    #[arg(long)]
    pub mode: String,
    /// True state: generator or JSON file.
    #[arg(long)]
    pub state: String,
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub kd: f64,
    /// Flying qubits per setting; 0 gives noiseless records.
    #[arg(long, default_value_t = 0)]
    pub shots: u64,
    /// Required whenever `--shots` is positive.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct EngineArgs {
    #[arg(long, default_value_t = 0.3, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mirror_phase: f64,
    #[arg(long, default_value_t = 200)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    /// Initial static-qubit state (dimension 2).
    #[arg(long, default_value = "mixed")]
    pub state: String,
    /// Accepted for uniformity; the engine draws no random numbers.
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Writes `body` to `out`, or to stdout when absent.
pub(crate) fn emit(out: Option<&PathBuf>, body: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, body)?,
        None => std::io::stdout().write_all(body.as_bytes())?,
    }
    Ok(())
}

pub fn exit_code(err: &Error) -> i32 {
    if err.is_numerical_guard() {
        EXIT_NUMERICAL
    } else {
        EXIT_USAGE
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code; diagnostics go to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let result = match &cli.command {
        Command::Sweep(a) => cmd_sweep(a),
        Command::Tomo(a) => cmd_tomo(a),
        Command::Engine(a) => cmd_engine(a),
        Command::Validate(a) => cmd_validate(a),
    };
    match result {
        Ok(Outcome { summary, passed }) => {
            if let Some(s) = summary {
                eprintln!("{s}");
            }
            if passed {
                EXIT_OK
            } else {
                EXIT_VALIDATION
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
