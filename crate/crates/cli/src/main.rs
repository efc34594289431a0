//! Command-line driver: `newton-extremal run <scenario> [--config PATH] [--out DIR] [--seed N] [--parallel]`.
//!
//! Exit status is 0 when every check passes, 2 when a check fails (a `witness.csv` is written
//! next to the reports) and 1 on operational errors. Reports are only written once every
//! requested scenario has finished, so a bad configuration leaves nothing behind.

mod config;
mod report;
mod scenarios;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::Config;
use report::{Table, CHECK_HEADER};
use scenarios::{Output, Scenario, NAMES};

const OUT_ENV: &str = "NEWTON_EXTREMAL_OUT";

#[derive(Parser, Debug)]
#[command(name = "newton-extremal", version, about = "Verification suites for extremal Newtonian potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario, or `all`.
    Run {
        #[arg(value_parser = clap::builder::PossibleValuesParser::new(["prop41", "build-extremal", "thm12", "ineq19", "kelvin-limit", "planar", "massmove", "all"]))]
        scenario: String,
        /// INI-style file with one section per scenario.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory (the NEWTON_EXTREMAL_OUT variable takes precedence).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Seed for scenarios that sample random measures.
        #[arg(long)]
        seed: Option<u64>,
        /// Sweep grids on several threads.
        #[arg(long)]
        parallel: bool,
    },
}

enum Failure {
    Operational(String),
    Checks,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let Command::Run { scenario, config, out, seed, parallel } = cli.command;
    match run(&scenario, config.as_deref(), out, seed, parallel) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(2),
        Err(Failure::Operational(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn run(name: &str, config: Option<&Path>, out: Option<PathBuf>, seed: Option<u64>, parallel: bool) -> Result<(), Failure> {
    let op = Failure::Operational;
    let cfg = match config {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| op(format!("reading {}: {e}", p.display())))?;
            Config::parse(&text).map_err(|e| op(e.to_string()))?
        }
        None => Config::default(),
    };
    let mut general = cfg.section("general");
    let cfg_out = general.string("out");
    general.seed().map_err(|e| op(e.to_string()))?;
    general.finish().map_err(|e| op(e.to_string()))?;
    let out_dir = std::env::var_os(OUT_ENV)
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
        .or(out)
        .or(cfg_out.map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));

    let names: Vec<&str> = if name == "all" { NAMES.to_vec() } else { vec![name] };
    let plans = names
        .iter()
        .map(|n| Scenario::configure(n, &cfg, seed))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| op(e.to_string()))?;

    let mut results: Vec<(&'static str, Output)> = Vec::new();
    for plan in &plans {
        eprintln!("running {}", plan.name());
        results.push((plan.name(), plan.run(parallel).map_err(op)?));
    }

    let mut summary = Table::new(&CHECK_HEADER);
    let mut witness = Table::new(&CHECK_HEADER);
    for (scenario, output) in &results {
        let dir = out_dir.join(scenario);
        std::fs::create_dir_all(&dir).map_err(|e| op(format!("creating {}: {e}", dir.display())))?;
        for (file, contents) in &output.files {
            let path = dir.join(file);
            std::fs::write(&path, contents).map_err(|e| op(format!("writing {}: {e}", path.display())))?;
        }
        for c in &output.checks {
            summary.push(c.row(scenario));
            if !c.passed() {
                witness.push(c.row(scenario));
            }
            println!("{} {scenario} {} = {:e} (limit {:e})", if c.passed() { "PASS" } else { "FAIL" }, c.name, c.value, c.limit);
        }
    }
    std::fs::create_dir_all(&out_dir).map_err(|e| op(format!("creating {}: {e}", out_dir.display())))?;
    let write = |file: &str, t: &Table| {
        let path = out_dir.join(file);
        std::fs::write(&path, t.render()).map_err(|e| op(format!("writing {}: {e}", path.display())))
    };
    write("summary.csv", &summary)?;
    if witness.len() > 0 {
        write("witness.csv", &witness)?;
        return Err(Failure::Checks);
    }
    Ok(())
}
