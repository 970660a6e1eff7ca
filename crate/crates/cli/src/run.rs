//! Engine setup and the solve runner shared by `solve` and `experiment`.

use std::sync::Arc;
use std::time::Instant;

use anyhow::{anyhow, Result};
use serde::Serialize;

use monodromy::graph::{
    DynamicOptions, GraphError, GraphOptions, GraphReport, HomotopyGraph, SolveOutcome,
    StopReason,
};
use monodromy::polysys::create_seed_pair;
use monodromy::rng;

use crate::config::{parse_family, parse_graph, parse_stop, parse_strategy, GraphLayout, RunConfig};

/// Machine-readable record of one solve run.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub version: u32,
    pub config: RunConfig,
    pub family: String,
    pub satisfied: bool,
    pub stop_reason: String,
    pub vertex: usize,
    pub num_solutions: usize,
    pub solutions: Vec<Vec<[f64; 2]>>,
    pub iterations: usize,
    pub graph: GraphReport,
    /// Squaring matrix when the family was squared down, for replay.
    pub squaring: Option<Vec<Vec<[f64; 2]>>>,
    pub wall_time_ms: u64,
}

pub fn stop_reason_name(reason: StopReason) -> &'static str {
    match reason {
        StopReason::CountReached => "count-reached",
        StopReason::Saturated => "saturated",
        StopReason::Stabilized => "stabilized",
    }
}

/// Runs one configured solve. `Err` means the input was unusable; a clean
/// run that merely fails its stop criterion is an `Ok` report with
/// `satisfied: false`.
pub fn run_solve(config: &RunConfig) -> Result<RunReport> {
    let started = Instant::now();
    let mut family_rng = rng::stream(config.seed, rng::STREAM_FAMILY);
    let mut seed_rng = rng::stream(config.seed, rng::STREAM_SEED);
    let graph_rng = rng::stream(config.seed, rng::STREAM_GRAPH);

    let family = parse_family(&config.family, &mut family_rng)?;
    let stop = parse_stop(&config.stop, &family)?;
    let strategy = parse_strategy(&config.strategy, &stop, &family)?;
    let layout = parse_graph(&config.graph)?;
    let opts = GraphOptions {
        dedup_tol: config.dedup_tol,
        store_tol: config.store_tol,
        refine_iters: 10,
        track: config.tracker.to_options()?,
    };

    let (p0, x0) = create_seed_pair(family.seeding_system(), &mut seed_rng)
        .map_err(|e| anyhow!("seeding {}: {e}", family.name))?;
    let squaring = family.squaring.as_ref().map(|m| {
        (0..m.rows())
            .map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect())
            .collect()
    });
    let system = Arc::new(family.system.clone());
    let mut graph = match layout {
        GraphLayout::Flower(s, t) => {
            HomotopyGraph::flower(system, p0, s, t, opts, graph_rng)?
        }
        GraphLayout::Complete(s, t) => {
            HomotopyGraph::complete(system, p0, s, t, opts, graph_rng)?
        }
    };
    graph.seed(0, &x0)?;

    let outcome: SolveOutcome = if config.dynamic {
        graph.dynamic_solve(
            &stop,
            &strategy,
            &DynamicOptions {
                max_fruitless: config.augment_budget,
            },
        )
    } else {
        graph.monodromy_solve(&[], &stop, &strategy)
    }
    .map_err(|e| match e {
        GraphError::CountExceeded { .. } => anyhow!("{e}"),
        other => anyhow!("engine failure: {other}"),
    })?;

    let solutions: Vec<Vec<[f64; 2]>> = graph
        .vertex(outcome.vertex)
        .known()
        .iter()
        .map(|x| x.iter().map(|z| [z.re, z.im]).collect())
        .collect();
    Ok(RunReport {
        version: crate::config::SCHEMA_VERSION,
        config: config.clone(),
        family: family.name.clone(),
        satisfied: outcome.satisfied,
        stop_reason: stop_reason_name(outcome.reason).into(),
        vertex: outcome.vertex,
        num_solutions: solutions.len(),
        solutions,
        iterations: outcome.iterations,
        graph: graph.report(),
        squaring,
        wall_time_ms: started.elapsed().as_millis() as u64,
    })
}
