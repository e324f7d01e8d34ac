//! `randcirc` command-line front end.
//!
//! Exit codes: 0 success, 1 usage or runtime error, 2 a checked assertion failed.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use commands::{CliError, Report};
use config::{Flags, Settings};

#[derive(Parser)]
#[command(name = "randcirc", version, about = "Worst-to-average-case reduction lab for random circuits")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full output distribution of a circuit file or the hard circuit
    Simulate(Flags),
    /// Sample one random draw and print it as JSON
    SampleDraw(Flags),
    /// Tabulate p(θ) on a grid over [0, m]
    PThetaScan(Flags),
    /// Compare p(θ) with its degree-d interpolant on [0, 1]
    PolyfitCheck(Flags),
    /// Robust-fit trials against synthetic ground truth
    RobustFitTrials(Flags),
    /// Run the reduction and append verdicts to a ledger CSV
    Reduce(Flags),
    /// Check the hiding transport for QAOA_P1 and IQP
    HidingCheck(Flags),
    /// TVD between eigenphase distributions at θ and at 0
    TvdReport(Flags),
    /// Ising partition function against direct simulation
    IsingCheck(Flags),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Simulate(_) => "simulate",
            Command::SampleDraw(_) => "sample-draw",
            Command::PThetaScan(_) => "p-theta-scan",
            Command::PolyfitCheck(_) => "polyfit-check",
            Command::RobustFitTrials(_) => "robust-fit-trials",
            Command::Reduce(_) => "reduce",
            Command::HidingCheck(_) => "hiding-check",
            Command::TvdReport(_) => "tvd-report",
            Command::IsingCheck(_) => "ising-check",
        }
    }

    fn flags(&self) -> &Flags {
        match self {
            Command::Simulate(f)
            | Command::SampleDraw(f)
            | Command::PThetaScan(f)
            | Command::PolyfitCheck(f)
            | Command::RobustFitTrials(f)
            | Command::Reduce(f)
            | Command::HidingCheck(f)
            | Command::TvdReport(f)
            | Command::IsingCheck(f) => f,
        }
    }
}

fn dispatch(cmd: &Command, s: &Settings) -> Result<Report, CliError> {
    match cmd {
        Command::Simulate(_) => commands::simulate_cmd(s),
        Command::SampleDraw(_) => commands::sample_draw_cmd(s),
        Command::PThetaScan(_) => commands::p_theta_scan_cmd(s),
        Command::PolyfitCheck(_) => commands::polyfit_check_cmd(s),
        Command::RobustFitTrials(_) => commands::robust_fit_trials_cmd(s),
        Command::Reduce(_) => commands::reduce_cmd(s),
        Command::HidingCheck(_) => commands::hiding_check_cmd(s),
        Command::TvdReport(_) => commands::tvd_report_cmd(s),
        Command::IsingCheck(_) => commands::ising_check_cmd(s),
    }
}

fn write_meta(cmd: &Command, s: &Settings, seed: u64, wall: f64) -> std::io::Result<()> {
    let Some(out) = s.path("out") else { return Ok(()) };
    let mut meta =
        format!("command={}\nseed={seed}\nwall_time_s={wall:.3}\nversion={}\n", cmd.name(), env!("CARGO_PKG_VERSION"));
    for (k, v) in s.entries() {
        meta.push_str(&format!("{k}={v}\n"));
    }
    let mut path = out.into_os_string();
    path.push(".meta");
    std::fs::write(path, meta)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let cmd = cli.command;
    let settings = match Settings::resolve(cmd.flags()) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let seed = match settings.seed() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let start = Instant::now();
    let report = match dispatch(&cmd, &settings) {
        Ok(r) => r,
        Err(CliError::Usage(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
        Err(CliError::Run(e)) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = write_meta(&cmd, &settings, seed, start.elapsed().as_secs_f64()) {
        eprintln!("error: writing metadata: {e}");
        return ExitCode::from(1);
    }
    for line in &report.lines {
        eprintln!("{line}");
    }
    for (name, ok) in &report.checks {
        eprintln!("{} {name}", if *ok { "PASS" } else { "FAIL" });
    }
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}
