//! Command-line front end for the `tnd` binary.
//!
//! Exit codes: 0 stabilized / verified / target reached, 2 cycle, 3 budget
//! exhausted, 4 verification failure, 64 usage or input error, 70 internal
//! contract violation.

mod commands;
mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::error::Error;

pub use config::{
    Experiment, ExperimentConfig, GraphSpec, OutputSpec, PotentialSpec, SchedulerSpec, StopSpec,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Cycle = 2,
    Budget = 3,
    VerifyFailed = 4,
    Usage = 64,
    Internal = 70,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn of_verdict(v: &crate::engine::Verdict) -> Exit {
        match v {
            crate::engine::Verdict::Stabilized { .. } => Exit::Success,
            crate::engine::Verdict::Cycle { .. } => Exit::Cycle,
            crate::engine::Verdict::BudgetExhausted { .. } => Exit::Budget,
        }
    }

    fn of_error(e: &Error) -> Exit {
        match e {
            Error::Contract(_) => Exit::Internal,
            _ => Exit::Usage,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tnd",
    version,
    about = "Threshold network dynamics: runs, verifiers and constructions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VerifyMode {
    Kcore,
    Rule110,
    DegreeProps,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SocialSchedule {
    Social,
    RoundRobin,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Execute a run described by a TOML config.
    Run {
        config: PathBuf,
        /// Trace output (overrides `output.trace`).
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Final graph output (overrides `output.final_graph`).
        #[arg(long)]
        final_graph: Option<PathBuf>,
    },
    /// Re-check a finished run from its trace and final graph.
    Verify {
        #[arg(long, value_enum)]
        mode: VerifyMode,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Print the k-core and (k-1)-crust of a graph.
    Kcore {
        graph: PathBuf,
        #[arg(long)]
        k: usize,
    },
    /// Simulate Rule 110 on the gadget graph and compare with the automaton.
    Rule110 {
        /// Initial tape, e.g. 0001000.
        #[arg(long)]
        tape: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        /// Use the two-step merged potential (one round per step).
        #[arg(long)]
        merged: bool,
        /// Write the initial assembly as an edge list, with labels in `<file>.labels`.
        #[arg(long)]
        dump_assembly: Option<PathBuf>,
        /// Ring length; a multiple of the tape width.
        #[arg(long)]
        ring_cells: Option<usize>,
        /// Evaluate every pair instead of only the filtered candidates.
        #[arg(long)]
        no_prune: bool,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        final_graph: Option<PathBuf>,
    },
    /// Build a spanning star by the edge-moving protocol.
    Star {
        /// Input graph; a connected random graph is generated otherwise.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        n: usize,
        #[arg(long, default_value_t = 0.2)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1_000_000)]
        budget: u64,
        #[arg(long)]
        final_graph: Option<PathBuf>,
    },
    /// Run the social model: niceness potential, extroversion and enemies.
    Social {
        /// Profile file; a random profile is generated otherwise.
        #[arg(long)]
        profile: Option<PathBuf>,
        /// Input graph; a random graph is generated otherwise.
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long, default_value_t = 30)]
        n: usize,
        #[arg(long, default_value_t = 0.15)]
        p: f64,
        #[arg(long, default_value_t = 2)]
        gamma: usize,
        #[arg(long, default_value_t = 12.0)]
        alpha: f64,
        #[arg(long, default_value_t = 14.0)]
        beta: f64,
        #[arg(long, value_enum, default_value_t = SocialSchedule::Social)]
        scheduler: SocialSchedule,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 10_000)]
        max_rounds: u64,
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        final_graph: Option<PathBuf>,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_cli<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> Exit
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return Exit::Usage;
            }
            let _ = write!(out, "{}", e.render());
            return Exit::Success;
        }
    };
    match commands::dispatch(cli.command, out) {
        Ok(exit) => exit,
        Err(e) => {
            let _ = writeln!(err, "tnd: {e}");
            Exit::of_error(&e)
        }
    }
}
