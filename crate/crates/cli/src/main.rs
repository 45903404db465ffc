//! `hardedge`: evaluate limit laws, run Monte Carlo experiments, verify the
//! deterministic identities and reproduce the figures.
//!
//! Exit status is 0 when every asserted bound passes, 1 when one fails and 2
//! on bad input.

mod verify;

use std::io::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use hardedge_core::ensembles::AtomDistribution;
use hardedge_core::harness::{default_workers, figure, linspace, run_experiment_with, with_workers, ExperimentConfig, FigureOptions};
use hardedge_core::limitlaws::LimitLaw;
use hardedge_core::{Error, Result};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "hardedge", version, about = "Hard-edge statistics of random matrices")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Limiting distributions.
    Laws {
        #[command(subcommand)]
        command: LawsCommand,
    },
    /// Run an experiment described by a JSON config.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Write `run.csv` and `run.json` here instead of the config's paths.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check identities and inequalities; prints a JSON report.
    Verify {
        #[command(subcommand)]
        suite: Suite,
    },
    /// Reproduce the data, plots and checks of figure 1 to 7.
    Figure {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=7))]
        number: u8,
        #[arg(long, default_value = "figures")]
        out: PathBuf,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, default_value_t = 2009)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
}

#[derive(Subcommand)]
enum LawsCommand {
    /// Prints CSV `t,cdf` on an evenly spaced grid.
    Eval {
        #[arg(long)]
        law: LimitLaw,
        /// `a:b:steps`, giving `steps + 1` points from `a` to `b`.
        #[arg(long)]
        grid: String,
    },
    /// Lists the known law names.
    List,
}

#[derive(Subcommand)]
enum Suite {
    /// Projection, distance, correlation, sampling and pipeline checks.
    Reduction {
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Matrix size of the pipeline suite.
        #[arg(long, default_value_t = 100)]
        n: usize,
    },
    /// Frame central limit theorem on a random tight frame.
    Clt {
        /// `n,N`: `n` frame vectors in dimension `N`.
        #[arg(long)]
        frame: String,
        #[arg(long, default_value = "bernoulli")]
        atom: AtomDistribution,
        #[arg(long, default_value_t = 5000)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Weyl, Hoffman-Wielandt, interlacing and duality on random matrices.
    Spectral {
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Closed forms against quadrature.
    Laws,
    /// Singular values and duality checks of a matrix file.
    Matrix { file: PathBuf },
}

/// Writes to stdout; a closed pipe ends output quietly.
fn emit(text: &str) -> Result<()> {
    match std::io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn parse_grid(s: &str) -> Result<Vec<f64>> {
    let bad = || Error::Parse(format!("grid must be a:b:steps, got '{s}'"));
    let parts: Vec<&str> = s.split(':').collect();
    let [a, b, steps] = parts[..] else {
        return Err(bad());
    };
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    let steps: usize = steps.trim().parse().map_err(|_| bad())?;
    if steps == 0 || !a.is_finite() || !b.is_finite() || b < a {
        return Err(bad());
    }
    Ok(linspace(a, b, steps))
}

fn parse_frame(s: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parse(format!("frame must be n,N, got '{s}'"));
    let (n, dim) = s.split_once(',').ok_or_else(bad)?;
    Ok((n.trim().parse().map_err(|_| bad())?, dim.trim().parse().map_err(|_| bad())?))
}

/// Returns whether every asserted bound passed.
fn execute(cmd: Command) -> Result<bool> {
    match cmd {
        Command::Laws { command: LawsCommand::Eval { law, grid } } => {
            let mut out = String::from("t,cdf\n");
            for t in parse_grid(&grid)? {
                out.push_str(&format!("{t},{}\n", law.cdf(t)));
            }
            emit(&out)?;
            Ok(true)
        }
        Command::Laws { command: LawsCommand::List } => {
            for law in LimitLaw::ALL {
                emit(&format!("{law}\t{}\n", law.support()))?;
            }
            Ok(true)
        }
        Command::Run { config, trials, seed, out } => {
            let text = std::fs::read_to_string(&config)?;
            let mut cfg: ExperimentConfig = serde_json::from_str(&text)?;
            if let Some(t) = trials {
                cfg.trials = t;
            }
            if let Some(s) = seed {
                cfg.ensemble.seed = s;
            }
            if let Some(dir) = out {
                std::fs::create_dir_all(&dir)?;
                cfg.output.csv = Some(dir.join("run.csv"));
                cfg.output.json = Some(dir.join("run.json"));
            }
            let r = run_experiment_with(&cfg, default_workers())?;
            r.write_outputs()?;
            emit(&(r.report_json()? + "\n"))?;
            Ok(true)
        }
        Command::Verify { suite } => {
            let report: Value = match suite {
                Suite::Reduction { suite, trials, seed, n } => verify::reduction(&suite, trials, seed, n)?,
                Suite::Clt { frame, atom, trials, seed } => verify::clt(parse_frame(&frame)?, &atom, trials, seed)?,
                Suite::Spectral { trials, seed } => verify::spectral(trials, seed)?,
                Suite::Laws => verify::laws()?,
                Suite::Matrix { file } => verify::matrix(&file)?,
            };
            emit(&(serde_json::to_string_pretty(&report)? + "\n"))?;
            Ok(report["pass"] == json!(true))
        }
        Command::Figure { number, out, trials, seed, n } => {
            let fig = figure(number, &FigureOptions { n, trials, seed })?;
            let files = fig.write(&out)?;
            let summary = json!({
                "figure": fig.number,
                "title": fig.title,
                "n": fig.n,
                "trials": fig.trials,
                "seed": fig.seed,
                "pass": fig.passed(),
                "checks": fig.checks,
                "files": files,
            });
            emit(&(serde_json::to_string_pretty(&summary)? + "\n"))?;
            Ok(fig.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match with_workers(default_workers(), || execute(cli.command)).and_then(|r| r) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
