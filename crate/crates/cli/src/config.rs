//! Run configuration: the JSON-round-trippable description of one solve,
//! and the parsers from its compact string fields to engine values.

use anyhow::{anyhow, bail, Context, Result};
use serde::{Deserialize, Serialize};

use monodromy::families::{self, Family};
use monodromy::graph::{StopCriterion, Strategy};
use monodromy::polysys::ParametricSystem;
use monodromy::tracker::{Predictor, TrackOptions};
use monodromy::rng::ChaCha8Rng;
use monodromy::Family64;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrackerConfig {
    pub tol: f64,
    pub max_steps: usize,
    pub step: f64,
    pub min_step: f64,
    pub predictor: String,
}

impl Default for TrackerConfig {
    fn default() -> Self {
        let d = TrackOptions::<f64>::default();
        TrackerConfig {
            tol: d.corrector_tol,
            max_steps: d.max_steps,
            step: d.initial_step,
            min_step: d.min_step,
            predictor: "euler".into(),
        }
    }
}

impl TrackerConfig {
    pub fn to_options(&self) -> Result<TrackOptions<f64>> {
        let predictor = match self.predictor.as_str() {
            "euler" => Predictor::Euler,
            "rk4" => Predictor::RungeKutta4,
            other => bail!("unknown predictor {other:?} (expected euler or rk4)"),
        };
        let opts = TrackOptions {
            corrector_tol: self.tol,
            max_steps: self.max_steps,
            initial_step: self.step,
            min_step: self.min_step,
            predictor,
            ..TrackOptions::default()
        };
        opts.validate().map_err(|e| anyhow!("tracker options: {e}"))?;
        Ok(opts)
    }
}

/// Everything a solve run depends on; echoed into every report so a run can
/// be replayed from its output.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunConfig {
    pub version: u32,
    pub family: String,
    pub graph: String,
    pub strategy: String,
    pub stop: String,
    pub dynamic: bool,
    pub augment_budget: usize,
    pub seed: u64,
    pub tracker: TrackerConfig,
    pub dedup_tol: f64,
    pub store_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            version: SCHEMA_VERSION,
            family: String::new(),
            graph: "complete:3,2".into(),
            strategy: "random".into(),
            stop: "stabilization:10".into(),
            dynamic: false,
            augment_budget: 3,
            seed: 0,
            tracker: TrackerConfig::default(),
            dedup_tol: 1e-6,
            store_tol: 1e-8,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphLayout {
    Flower(usize, usize),
    Complete(usize, usize),
}

pub fn parse_graph(text: &str) -> Result<GraphLayout> {
    let (kind, args) = text
        .split_once(':')
        .ok_or_else(|| anyhow!("graph must look like flower:s,t or complete:s,t, got {text:?}"))?;
    let (s, t) = args
        .split_once(',')
        .ok_or_else(|| anyhow!("graph arguments must be s,t, got {args:?}"))?;
    let s: usize = s.trim().parse().context("graph size")?;
    let t: usize = t.trim().parse().context("edge multiplicity")?;
    match kind {
        "flower" => Ok(GraphLayout::Flower(s, t)),
        "complete" => Ok(GraphLayout::Complete(s, t)),
        other => bail!("unknown graph layout {other:?}"),
    }
}

/// Stop criterion; `count:auto` reads the family's count metadata.
pub fn parse_stop(text: &str, family: &Family64) -> Result<StopCriterion> {
    match text.split_once(':') {
        Some(("count", "auto")) => {
            let d = family.count.ok_or_else(|| {
                anyhow!(
                    "family {} has no solution count metadata; give count:<n> explicitly",
                    family.name
                )
            })?;
            Ok(StopCriterion::KnownCount(d))
        }
        Some(("count", n)) => Ok(StopCriterion::KnownCount(
            n.parse().context("count argument")?,
        )),
        Some(("stabilization", w)) => Ok(StopCriterion::Stabilization(
            w.parse().context("stabilization window")?,
        )),
        None if text == "saturation" => Ok(StopCriterion::Saturation),
        _ => bail!("unknown stop criterion {text:?}"),
    }
}

pub fn parse_strategy(
    text: &str,
    stop: &StopCriterion,
    family: &Family64,
) -> Result<Strategy> {
    match text {
        "random" => Ok(Strategy::Random),
        "lower-bound" => Ok(Strategy::PotentialLowerBound),
        "potential-e" => {
            let count = match stop {
                StopCriterion::KnownCount(d) => Some(*d),
                _ => family.count,
            };
            let count = count.ok_or_else(|| {
                anyhow!("potential-e needs a solution count (count:<n> stop or family metadata)")
            })?;
            Ok(Strategy::PotentialE { count })
        }
        other => bail!("unknown strategy {other:?} (random | lower-bound | potential-e)"),
    }
}

/// Family from its CLI name. `@path` and `sparse:@path` load the JSON
/// system format; the RNG drives once-per-run randomization such as the
/// squaring matrix.
pub fn parse_family(text: &str, rng: &mut ChaCha8Rng) -> Result<Family64> {
    if let Some(path) = text.strip_prefix('@') {
        return load_system_json(path);
    }
    match text.split_once(':') {
        None if text == "crn-small" => Ok(families::crn_small(rng)?),
        Some(("sparse", arg)) => {
            let path = arg
                .strip_prefix('@')
                .ok_or_else(|| anyhow!("sparse family wants sparse:@file.json"))?;
            load_system_json(path)
        }
        Some(("dense", degrees)) => {
            let degrees: Vec<u32> = degrees
                .split(',')
                .map(|d| d.trim().parse().context("dense degree"))
                .collect::<Result<_>>()?;
            Ok(families::dense_family(&degrees)?)
        }
        Some(("cyclic", n)) => Ok(families::cyclic_family(n.parse().context("cyclic size")?)?),
        Some(("katsura", n)) => Ok(families::katsura_family(
            n.parse().context("katsura size")?,
        )?),
        Some(("nash", dims)) => {
            let (players, options) = dims
                .split_once('x')
                .ok_or_else(|| anyhow!("nash family wants nash:NxM"))?;
            Ok(families::nash_family(
                players.parse().context("nash players")?,
                options.parse().context("nash options")?,
            )?)
        }
        _ => bail!("unknown family {text:?}"),
    }
}

fn load_system_json(path: &str) -> Result<Family64> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading system file {path}"))?;
    let system =
        ParametricSystem::from_json(&text).with_context(|| format!("parsing {path}"))?;
    Ok(Family {
        kind: families::FamilyKind::Sparse,
        name: format!("@{path}"),
        system,
        seed_system: None,
        count: None,
        count_source: None,
        squaring: None,
    })
}
