//! Command-line front end: solve runs, exact/simulated statistics tables,
//! and repeated-trial experiments, all reproducible from one 64-bit seed.
//!
//! Exit codes: 0 when the stop criterion was satisfied, 1 on usage or
//! input errors, 2 when a solve exhausted the graph without satisfying
//! its criterion.

mod config;
mod run;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use config::{RunConfig, TrackerConfig, SCHEMA_VERSION};
use monodromy::stats;

#[derive(Parser)]
#[command(name = "monodromy", version, about = "Polynomial system solving by graph monodromy")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a generic member of a parametrized family.
    Solve(SolveArgs),
    /// Print the exact transitivity table and expected cycle counts.
    Stats(StatsArgs),
    /// Run repeated solve trials with consecutive seeds and summarize.
    Experiment(ExperimentArgs),
}

#[derive(Args, Clone)]
struct SolveArgs {
    /// Family name (cyclic:7, katsura:6, nash:3x3, crn-small, dense:2,2,
    /// sparse:@file.json, @file.json).
    #[arg(long)]
    family: Option<String>,
    /// Graph layout: flower:s,t or complete:s,t.
    #[arg(long, default_value = "complete:3,2")]
    graph: String,
    /// Edge selection: random | lower-bound | potential-e.
    #[arg(long, default_value = "random")]
    strategy: String,
    /// Stop criterion: count:<n> | count:auto | saturation |
    /// stabilization:<w>.
    #[arg(long, default_value = "stabilization:10")]
    stop: String,
    /// Augment the graph when the criterion is not reached.
    #[arg(long)]
    dynamic: bool,
    /// Fruitless augmentations tolerated in dynamic mode.
    #[arg(long, default_value_t = 3)]
    augment_budget: usize,
    /// RNG seed; falls back to MONODROMY_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the full JSON report here.
    #[arg(long)]
    out: Option<String>,
    /// Load a complete run configuration (as echoed in a report) instead
    /// of the individual flags.
    #[arg(long, conflicts_with_all = ["family", "seed"])]
    config: Option<String>,
    #[arg(long = "tracker.tol", default_value_t = 1e-8)]
    tracker_tol: f64,
    #[arg(long = "tracker.max-steps", default_value_t = 10_000)]
    tracker_max_steps: usize,
    #[arg(long = "tracker.step", default_value_t = 0.05)]
    tracker_step: f64,
    #[arg(long = "tracker.min-step", default_value_t = 1e-7)]
    tracker_min_step: f64,
    /// Predictor: euler | rk4.
    #[arg(long = "tracker.predictor", default_value = "euler")]
    tracker_predictor: String,
    #[arg(long = "dedup-tol", default_value_t = 1e-6)]
    dedup_tol: f64,
    #[arg(long = "store-tol", default_value_t = 1e-8)]
    store_tol: f64,
}

#[derive(Args)]
struct StatsArgs {
    /// Largest fiber size to tabulate.
    #[arg(long, default_value_t = 30)]
    d_max: usize,
    /// Generator counts, comma separated.
    #[arg(long, default_value = "2,3,4")]
    j: String,
    /// Add Monte Carlo columns with this many trials per cell.
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Write CSV here instead of stdout.
    #[arg(long)]
    csv: Option<String>,
}

#[derive(Args)]
struct ExperimentArgs {
    #[command(flatten)]
    solve: SolveArgs,
    /// Number of trials; trial k uses seed + k.
    #[arg(long, default_value_t = 20)]
    repeats: usize,
    /// Write the per-trial CSV here instead of stdout.
    #[arg(long)]
    csv: Option<String>,
}

fn seed_or_env(seed: Option<u64>) -> u64 {
    seed.or_else(|| {
        std::env::var("MONODROMY_SEED")
            .ok()
            .and_then(|v| v.parse().ok())
    })
    .unwrap_or(0)
}

impl SolveArgs {
    fn to_config(&self) -> Result<RunConfig> {
        if let Some(path) = &self.config {
            let text = std::fs::read_to_string(path)
                .with_context(|| format!("reading config {path}"))?;
            let config: RunConfig =
                serde_json::from_str(&text).with_context(|| format!("parsing config {path}"))?;
            return Ok(config);
        }
        let family = self
            .family
            .clone()
            .context("--family (or --config) is required")?;
        Ok(RunConfig {
            version: SCHEMA_VERSION,
            family,
            graph: self.graph.clone(),
            strategy: self.strategy.clone(),
            stop: self.stop.clone(),
            dynamic: self.dynamic,
            augment_budget: self.augment_budget,
            seed: seed_or_env(self.seed),
            tracker: TrackerConfig {
                tol: self.tracker_tol,
                max_steps: self.tracker_max_steps,
                step: self.tracker_step,
                min_step: self.tracker_min_step,
                predictor: self.tracker_predictor.clone(),
            },
            dedup_tol: self.dedup_tol,
            store_tol: self.store_tol,
        })
    }
}

fn cmd_solve(args: &SolveArgs) -> Result<u8> {
    let config = args.to_config()?;
    let report = run::run_solve(&config)?;
    println!(
        "{}: {} solutions at vertex {} ({}, {} paths tracked, {} failed, beta1 {}) in {} ms",
        report.family,
        report.num_solutions,
        report.vertex,
        report.stop_reason,
        report.graph.counters.attempted,
        report.graph.counters.failed,
        report.graph.betti,
        report.wall_time_ms
    );
    if let Some(path) = &args.out {
        let json = serde_json::to_string_pretty(&report)?;
        std::fs::write(path, json).with_context(|| format!("writing {path}"))?;
    }
    Ok(if report.satisfied { 0 } else { 2 })
}

fn cmd_stats(args: &StatsArgs) -> Result<u8> {
    let js: Vec<u32> = args
        .j
        .split(',')
        .map(|v| v.trim().parse().context("generator count"))
        .collect::<Result<_>>()?;
    let d_max = args.d_max.max(1);
    let tables: Vec<stats::TransitivityTable> = js
        .iter()
        .map(|&j| stats::TransitivityTable::compute(d_max, j))
        .collect();
    let expected = stats::expected_betti_range(d_max, stats::EXPECTED_BETTI_J_MAX);
    let mut sim_rng = monodromy::rng::stream(seed_or_env(args.seed), monodromy::rng::STREAM_SIM);

    let mut out: Box<dyn Write> = match &args.csv {
        Some(path) => Box::new(
            std::fs::File::create(path).with_context(|| format!("creating {path}"))?,
        ),
        None => Box::new(std::io::stdout()),
    };
    writeln!(out, "# monodromy-stats-v{SCHEMA_VERSION}")?;
    let mut header = vec!["d".to_string()];
    header.extend(js.iter().map(|j| format!("t_j{j}")));
    header.push("e_xd".into());
    if args.trials.is_some() {
        header.extend(js.iter().map(|j| format!("mc_j{j}")));
    }
    writeln!(out, "{}", header.join(","))?;
    for d in 1..=d_max {
        let mut row = vec![d.to_string()];
        for table in &tables {
            row.push(format!("{:.8}", table.value_f64(d)));
        }
        row.push(format!("{:.8}", expected[d - 1].value));
        if let Some(trials) = args.trials {
            for &j in &js {
                let p = stats::simulate_transitivity(d, j, trials, &mut sim_rng);
                row.push(format!("{p:.8}"));
            }
        }
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(0)
}

fn cmd_experiment(args: &ExperimentArgs) -> Result<u8> {
    let base = args.solve.to_config()?;
    let mut out: Box<dyn Write> = match &args.csv {
        Some(path) => Box::new(
            std::fs::File::create(path).with_context(|| format!("creating {path}"))?,
        ),
        None => Box::new(std::io::stdout()),
    };
    writeln!(out, "# monodromy-experiment-v{SCHEMA_VERSION}")?;
    writeln!(
        out,
        "trial,seed,completed,solutions,attempted,succeeded,failed,betti,seconds,error"
    )?;
    let mut completed = 0usize;
    let mut succeeded_sum = 0usize;
    for trial in 0..args.repeats {
        let mut config = base.clone();
        config.seed = base.seed + trial as u64;
        match run::run_solve(&config) {
            Ok(report) => {
                if report.satisfied {
                    completed += 1;
                    succeeded_sum += report.graph.counters.succeeded;
                }
                writeln!(
                    out,
                    "{trial},{},{},{},{},{},{},{},{:.3},",
                    config.seed,
                    report.satisfied,
                    report.num_solutions,
                    report.graph.counters.attempted,
                    report.graph.counters.succeeded,
                    report.graph.counters.failed,
                    report.graph.betti,
                    report.wall_time_ms as f64 / 1000.0
                )?;
            }
            Err(e) => {
                // A failed trial is a row, never an abort of the batch.
                writeln!(
                    out,
                    "{trial},{},false,0,0,0,0,0,0.000,{}",
                    config.seed,
                    e.to_string().replace(',', ";")
                )?;
            }
        }
    }
    let rate = completed as f64 / args.repeats.max(1) as f64;
    let mean_paths = if completed > 0 {
        succeeded_sum as f64 / completed as f64
    } else {
        0.0
    };
    writeln!(
        out,
        "summary,,{:.3},,,{mean_paths:.1},,,,completion-rate-and-mean-successful-paths",
        rate
    )?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Experiment(args) => cmd_experiment(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
