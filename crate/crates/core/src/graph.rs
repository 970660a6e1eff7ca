//! The homotopy-graph engine.
//!
//! Vertices carry parameter points and their known fibers; multi-edges carry
//! a scaling pair `(gamma1, gamma2)` and the partial correspondence the
//! tracked paths have established so far. One engine iteration picks an
//! edge and direction, tracks every eligible start point across it, and
//! files the results: new points extend the target fiber, matched pairs
//! extend the correspondence, and failures go into a per-direction blocklist
//! that is never retried.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_complex::Complex;
use num_rational::Rational64;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::polysys::{build_homotopy, ParametricSystem, SquareSystem, SystemError};
use crate::scalar::{inf_norm, random_unit_box_vec, Real};
use crate::stats::DisjointSets;
use crate::tracker::{newton_refine, track_path, TrackOptions};

pub type Point<T> = Vec<Complex<T>>;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("bad graph layout: {0}")]
    BadLayout(String),
    #[error("self-loop edges are not allowed (vertex {0})")]
    SelfLoop(usize),
    #[error("vertex index {0} out of range")]
    BadVertex(usize),
    #[error("no vertex has a known point; seed the graph first")]
    NoSeed,
    #[error("point rejected at vertex {vertex}: refinement stalled at residual {residual}")]
    PointRejected { vertex: usize, residual: f64 },
    #[error(
        "fiber at vertex {vertex} grew to {found} points, past the declared count {expected}; \
         the dedup tolerance is inconsistent with the family"
    )]
    CountExceeded {
        vertex: usize,
        found: usize,
        expected: usize,
    },
    #[error(transparent)]
    System(#[from] SystemError),
}

/// Tolerance-deduplicating, append-only set of complex solution vectors.
///
/// Two points are considered equal when their coordinatewise distance is at
/// most `tol * (1 + inf_norm(query))`. Indices are stable and never reused.
#[derive(Clone, Debug)]
pub struct PointArray<T> {
    points: Vec<Point<T>>,
    tol: T,
}

impl<T: Real> PointArray<T> {
    pub fn new(tol: T) -> Self {
        PointArray {
            points: Vec::new(),
            tol,
        }
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, index: usize) -> &Point<T> {
        &self.points[index]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Point<T>> {
        self.points.iter()
    }

    pub fn tol(&self) -> T {
        self.tol
    }

    /// Index of the stored point within dedup distance of `x`, if any.
    pub fn position(&self, x: &[Complex<T>]) -> Option<usize> {
        let bound = self.tol * (T::one() + inf_norm(x));
        self.points
            .iter()
            .position(|y| crate::scalar::inf_dist(x, y) <= bound)
    }

    /// Inserts `x` unless a stored point dedups with it; returns the index
    /// and whether the point is new.
    pub fn insert(&mut self, x: Point<T>) -> (usize, bool) {
        if let Some(i) = self.position(&x) {
            return (i, false);
        }
        self.points.push(x);
        (self.points.len() - 1, true)
    }
}

/// Graph vertex: a parameter point and the known subset of its fiber.
#[derive(Clone, Debug)]
pub struct Vertex<T> {
    params: Point<T>,
    known: PointArray<T>,
    is_base: bool,
    square: SquareSystem<T>,
}

impl<T: Real> Vertex<T> {
    pub fn params(&self) -> &[Complex<T>] {
        &self.params
    }

    pub fn known(&self) -> &PointArray<T> {
        &self.known
    }

    pub fn is_base(&self) -> bool {
        self.is_base
    }

    pub fn square_system(&self) -> &SquareSystem<T> {
        &self.square
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Direction {
    /// From the edge's first endpoint to its second.
    Forward,
    /// From the edge's second endpoint to its first.
    Reverse,
}

impl Direction {
    pub fn flip(self) -> Self {
        match self {
            Direction::Forward => Direction::Reverse,
            Direction::Reverse => Direction::Forward,
        }
    }
}

/// Multi-edge between two vertices, decorated with its gamma pair and the
/// partial correspondence established so far.
#[derive(Clone, Debug)]
pub struct HomotopyEdge<T> {
    v1: usize,
    v2: usize,
    gamma1: Complex<T>,
    gamma2: Complex<T>,
    /// Partial bijection from fiber indices at `v1` to fiber indices at `v2`.
    pairs: BTreeMap<usize, usize>,
    rpairs: BTreeMap<usize, usize>,
    failed_fwd: BTreeSet<usize>,
    failed_rev: BTreeSet<usize>,
    attempted: usize,
    succeeded: usize,
    failed: usize,
}

impl<T: Real> HomotopyEdge<T> {
    pub fn endpoints(&self) -> (usize, usize) {
        (self.v1, self.v2)
    }

    pub fn gammas(&self) -> (Complex<T>, Complex<T>) {
        (self.gamma1, self.gamma2)
    }

    pub fn source(&self, dir: Direction) -> usize {
        match dir {
            Direction::Forward => self.v1,
            Direction::Reverse => self.v2,
        }
    }

    pub fn target(&self, dir: Direction) -> usize {
        self.source(dir.flip())
    }

    /// Size of the correspondence `C_e`.
    pub fn matched(&self) -> usize {
        self.pairs.len()
    }

    pub fn correspondence(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().map(|(&a, &b)| (a, b))
    }

    fn is_matched_source(&self, dir: Direction, index: usize) -> bool {
        match dir {
            Direction::Forward => self.pairs.contains_key(&index),
            Direction::Reverse => self.rpairs.contains_key(&index),
        }
    }

    fn matched_partner(&self, dir: Direction, target_index: usize) -> Option<usize> {
        match dir {
            Direction::Forward => self.rpairs.get(&target_index).copied(),
            Direction::Reverse => self.pairs.get(&target_index).copied(),
        }
    }

    fn is_failed(&self, dir: Direction, index: usize) -> bool {
        match dir {
            Direction::Forward => self.failed_fwd.contains(&index),
            Direction::Reverse => self.failed_rev.contains(&index),
        }
    }

    fn mark_failed(&mut self, dir: Direction, index: usize) {
        match dir {
            Direction::Forward => self.failed_fwd.insert(index),
            Direction::Reverse => self.failed_rev.insert(index),
        };
    }

    /// Records `source -> target` in the given direction.
    fn insert_pair(&mut self, dir: Direction, source: usize, target: usize) {
        let (left, right) = match dir {
            Direction::Forward => (source, target),
            Direction::Reverse => (target, source),
        };
        let prev = self.pairs.insert(left, right);
        let rprev = self.rpairs.insert(right, left);
        debug_assert!(prev.is_none() && rprev.is_none(), "correspondence clash");
        // A matched point is never a start candidate again, so it no longer
        // belongs in any failure blocklist.
        self.failed_fwd.remove(&left);
        self.failed_rev.remove(&right);
    }
}

/// What the engine loop is told to stop on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StopCriterion {
    /// Stop once some fiber reaches this cardinality.
    KnownCount(usize),
    /// Run until no edge-direction has an eligible start point.
    Saturation,
    /// Stop after this many consecutive iterations without a new point.
    Stabilization(usize),
}

/// Edge-selection strategy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Strategy {
    /// Uniform over edge-directions with at least one eligible start.
    Random,
    /// Maximize the guaranteed number of new points.
    PotentialLowerBound,
    /// Maximize the expected number of new points per tracked path; needs
    /// the fiber cardinality.
    PotentialE { count: usize },
}

/// Why a solve loop returned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum StopReason {
    CountReached,
    Saturated,
    Stabilized,
}

/// Result of a solve loop. The points live in the graph; `vertex` names the
/// fiber to read.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct SolveOutcome {
    pub vertex: usize,
    pub satisfied: bool,
    pub reason: StopReason,
    pub iterations: usize,
}

/// Engine tolerances and tracker options.
#[derive(Clone, Debug)]
pub struct GraphOptions<T> {
    /// Relative dedup tolerance of the fiber point arrays.
    pub dedup_tol: T,
    /// Relative residual every stored point must meet after refinement.
    pub store_tol: T,
    /// Newton budget for the refinement before storage.
    pub refine_iters: usize,
    pub track: TrackOptions<T>,
}

impl<T: Real> Default for GraphOptions<T> {
    fn default() -> Self {
        GraphOptions {
            dedup_tol: T::of(1e-6),
            store_tol: T::of(1e-8),
            refine_iters: 10,
            track: TrackOptions::default(),
        }
    }
}

/// Dynamic-strategy knobs.
#[derive(Clone, Copy, Debug)]
pub struct DynamicOptions {
    /// Consecutive fruitless augmentations tolerated before giving up.
    pub max_fruitless: usize,
}

impl Default for DynamicOptions {
    fn default() -> Self {
        DynamicOptions { max_fruitless: 3 }
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize)]
pub struct PathCounters {
    pub attempted: usize,
    pub succeeded: usize,
    pub failed: usize,
}

/// One engine iteration: an edge-direction tracked with its maximal batch.
#[derive(Clone, Debug, Serialize)]
pub struct IterationRecord {
    pub edge: usize,
    pub from: usize,
    pub to: usize,
    pub batch: usize,
    pub succeeded: usize,
    pub failed: usize,
    pub new_points: usize,
    /// Fiber sizes after this iteration.
    pub fiber_sizes: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EdgeReport {
    pub v1: usize,
    pub v2: usize,
    pub attempted: usize,
    pub succeeded: usize,
    pub failed: usize,
    pub matched: usize,
}

/// Immutable snapshot of the engine state for reporting.
#[derive(Clone, Debug, Serialize)]
pub struct GraphReport {
    pub num_vertices: usize,
    pub num_edges: usize,
    pub betti: usize,
    pub fiber_sizes: Vec<usize>,
    pub counters: PathCounters,
    pub edges: Vec<EdgeReport>,
    pub history: Vec<IterationRecord>,
}

/// The decorated multigraph of homotopies plus all engine state.
pub struct HomotopyGraph<T: Real> {
    system: Arc<ParametricSystem<T>>,
    vertices: Vec<Vertex<T>>,
    edges: Vec<HomotopyEdge<T>>,
    opts: GraphOptions<T>,
    rng: ChaCha8Rng,
    counters: PathCounters,
    history: Vec<IterationRecord>,
}

impl<T: Real> HomotopyGraph<T> {
    /// Graph with the given base vertex and no edges.
    pub fn new(
        system: Arc<ParametricSystem<T>>,
        base_params: Point<T>,
        opts: GraphOptions<T>,
        rng: ChaCha8Rng,
    ) -> Result<Self, GraphError> {
        let mut graph = HomotopyGraph {
            system,
            vertices: Vec::new(),
            edges: Vec::new(),
            opts,
            rng,
            counters: PathCounters::default(),
            history: Vec::new(),
        };
        graph.push_vertex(base_params, true)?;
        Ok(graph)
    }

    /// Central vertex holding the seed, `petals` outer vertices, `t` edges
    /// to each.
    pub fn flower(
        system: Arc<ParametricSystem<T>>,
        base_params: Point<T>,
        petals: usize,
        multiplicity: usize,
        opts: GraphOptions<T>,
        rng: ChaCha8Rng,
    ) -> Result<Self, GraphError> {
        if petals < 1 || multiplicity < 1 {
            return Err(GraphError::BadLayout(format!(
                "flower needs petals >= 1 and multiplicity >= 1, got ({petals},{multiplicity})"
            )));
        }
        let mut graph = Self::new(system, base_params, opts, rng)?;
        for _ in 0..petals {
            graph.add_random_vertex()?;
        }
        for petal in 1..=petals {
            for _ in 0..multiplicity {
                graph.add_edge(0, petal)?;
            }
        }
        Ok(graph)
    }

    /// `s` vertices, every pair joined by `t` edges; the base vertex is 0.
    pub fn complete(
        system: Arc<ParametricSystem<T>>,
        base_params: Point<T>,
        vertices: usize,
        multiplicity: usize,
        opts: GraphOptions<T>,
        rng: ChaCha8Rng,
    ) -> Result<Self, GraphError> {
        if vertices < 2 || multiplicity < 1 {
            return Err(GraphError::BadLayout(format!(
                "complete graph needs vertices >= 2 and multiplicity >= 1, got ({vertices},{multiplicity})"
            )));
        }
        let mut graph = Self::new(system, base_params, opts, rng)?;
        for _ in 1..vertices {
            graph.add_random_vertex()?;
        }
        for i in 0..vertices {
            for j in i + 1..vertices {
                for _ in 0..multiplicity {
                    graph.add_edge(i, j)?;
                }
            }
        }
        Ok(graph)
    }

    /// Gamma draw: uniform on the unit box, redrawn while the modulus is
    /// tiny (a near-zero gamma makes a badly scaled homotopy).
    fn random_gamma(&mut self) -> Complex<T> {
        loop {
            let g: Complex<T> = crate::scalar::random_unit_box(&mut self.rng);
            if g.norm() > T::of(0.1) {
                return g;
            }
        }
    }

    fn push_vertex(&mut self, params: Point<T>, is_base: bool) -> Result<usize, GraphError> {
        let square = SquareSystem::new(Arc::clone(&self.system), params.clone())?;
        self.vertices.push(Vertex {
            params,
            known: PointArray::new(self.opts.dedup_tol),
            is_base,
            square,
        });
        Ok(self.vertices.len() - 1)
    }

    /// Adds a vertex at a fresh random parameter point.
    pub fn add_random_vertex(&mut self) -> Result<usize, GraphError> {
        let params = random_unit_box_vec(&mut self.rng, self.system.num_params());
        self.push_vertex(params, false)
    }

    /// Adds an edge with a fresh random gamma pair. Loops are rejected:
    /// they induce trivial homotopies.
    ///
    /// The gammas are drawn from the full unit box, not the unit circle:
    /// what matters for the induced matching is the arc the rescaled
    /// segment takes through the pencil, whose midpoint is the Moebius
    /// image of gamma2/gamma1. Unit-modulus pairs pin every midpoint to
    /// one line and leave most of the braiding unreachable.
    pub fn add_edge(&mut self, v1: usize, v2: usize) -> Result<usize, GraphError> {
        if v1 == v2 {
            return Err(GraphError::SelfLoop(v1));
        }
        let n = self.vertices.len();
        if v1 >= n || v2 >= n {
            return Err(GraphError::BadVertex(v1.max(v2)));
        }
        let gamma1 = self.random_gamma();
        let gamma2 = self.random_gamma();
        self.edges.push(HomotopyEdge {
            v1,
            v2,
            gamma1,
            gamma2,
            pairs: BTreeMap::new(),
            rpairs: BTreeMap::new(),
            failed_fwd: BTreeSet::new(),
            failed_rev: BTreeSet::new(),
            attempted: 0,
            succeeded: 0,
            failed: 0,
        });
        Ok(self.edges.len() - 1)
    }

    /// Refines a point against the vertex system and inserts it into the
    /// fiber. Returns the index and whether the point is new.
    pub fn seed(&mut self, vertex: usize, x: &[Complex<T>]) -> Result<(usize, bool), GraphError> {
        if vertex >= self.vertices.len() {
            return Err(GraphError::BadVertex(vertex));
        }
        let refined = newton_refine(
            &self.vertices[vertex].square,
            x,
            self.opts.store_tol,
            self.opts.refine_iters,
        );
        if !refined.converged {
            return Err(GraphError::PointRejected {
                vertex,
                residual: refined.residual.to_f64().unwrap_or(f64::NAN),
            });
        }
        Ok(self.vertices[vertex].known.insert(refined.x))
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn vertex(&self, index: usize) -> &Vertex<T> {
        &self.vertices[index]
    }

    pub fn edge(&self, index: usize) -> &HomotopyEdge<T> {
        &self.edges[index]
    }

    pub fn counters(&self) -> PathCounters {
        self.counters
    }

    pub fn options(&self) -> &GraphOptions<T> {
        &self.opts
    }

    pub fn system(&self) -> &Arc<ParametricSystem<T>> {
        &self.system
    }

    /// First Betti number `|E| - |V| + #components`: the number of
    /// independent cycles.
    pub fn betti(&self) -> usize {
        let mut dsu = DisjointSets::new(self.vertices.len());
        for e in &self.edges {
            dsu.union(e.v1, e.v2);
        }
        self.edges.len() + dsu.components() - self.vertices.len()
    }

    fn eligible_sources(&self, edge: usize, dir: Direction) -> Vec<usize> {
        let e = &self.edges[edge];
        let n = self.vertices[e.source(dir)].known.len();
        (0..n)
            .filter(|&a| !e.is_matched_source(dir, a) && !e.is_failed(dir, a))
            .collect()
    }

    fn has_eligible_source(&self, edge: usize, dir: Direction) -> bool {
        let e = &self.edges[edge];
        let n = self.vertices[e.source(dir)].known.len();
        (0..n).any(|a| !e.is_matched_source(dir, a) && !e.is_failed(dir, a))
    }

    /// True when no edge-direction has an eligible start point left.
    pub fn is_saturated(&self) -> bool {
        self.candidate_directions().is_empty()
    }

    fn candidate_directions(&self) -> Vec<(usize, Direction)> {
        let mut out = Vec::new();
        for e in 0..self.edges.len() {
            for dir in [Direction::Forward, Direction::Reverse] {
                if self.has_eligible_source(e, dir) {
                    out.push((e, dir));
                }
            }
        }
        out
    }

    /// Guaranteed number of new points from tracking the maximal batch:
    /// `max(|Q_source| - |Q_target|, 0)`.
    pub fn potential_lower_bound(&self, edge: usize, dir: Direction) -> usize {
        let e = &self.edges[edge];
        let qs = self.vertices[e.source(dir)].known.len();
        let qt = self.vertices[e.target(dir)].known.len();
        qs.saturating_sub(qt)
    }

    /// Expected number of new points per tracked path, given the fiber
    /// cardinality `count`: the fraction of undiscovered points among the
    /// unmatched ones, `(count - |Q_target|) / (count - |C_e|)`; zero when
    /// the source has no unmatched point or the correspondence is full.
    pub fn potential_e(&self, edge: usize, dir: Direction, count: usize) -> Rational64 {
        let e = &self.edges[edge];
        let qs = self.vertices[e.source(dir)].known.len();
        let qt = self.vertices[e.target(dir)].known.len();
        let matched = e.matched();
        if qs <= matched || count <= matched {
            return Rational64::from_integer(0);
        }
        let numer = count.saturating_sub(qt) as i64;
        Rational64::new(numer, (count - matched) as i64)
    }

    /// Picks an edge and direction among those with at least one eligible
    /// start point; potential strategies maximize their score with uniform
    /// random tie breaking. Returns `None` when the graph is saturated.
    pub fn select_edge(&mut self, strategy: &Strategy) -> Option<(usize, Direction)> {
        let candidates = self.candidate_directions();
        if candidates.is_empty() {
            return None;
        }
        let pick_max = |graph: &mut Self, scores: Vec<Rational64>, candidates: Vec<(usize, Direction)>| {
            let best = scores.iter().max().copied().expect("nonempty");
            let tied: Vec<(usize, Direction)> = candidates
                .into_iter()
                .zip(&scores)
                .filter(|(_, s)| **s == best)
                .map(|(c, _)| c)
                .collect();
            let k = graph.rng.random_range(0..tied.len());
            Some(tied[k])
        };
        match strategy {
            Strategy::Random => {
                let k = self.rng.random_range(0..candidates.len());
                Some(candidates[k])
            }
            Strategy::PotentialLowerBound => {
                let scores: Vec<Rational64> = candidates
                    .iter()
                    .map(|&(e, dir)| {
                        Rational64::from_integer(self.potential_lower_bound(e, dir) as i64)
                    })
                    .collect();
                pick_max(self, scores, candidates)
            }
            Strategy::PotentialE { count } => {
                let scores: Vec<Rational64> = candidates
                    .iter()
                    .map(|&(e, dir)| self.potential_e(e, dir, *count))
                    .collect();
                pick_max(self, scores, candidates)
            }
        }
    }

    /// Tracks the maximal eligible batch across one edge-direction and
    /// files the outcomes. Returns the number of new target points.
    ///
    /// Numerical failures are data: the start point lands in the
    /// direction's blocklist and is never retried here, though other edges
    /// may still reach its partner. A path whose endpoint collides with an
    /// already-matched target is filed as a failure of the later path,
    /// since the correspondence is a partial bijection.
    pub fn track_edge(&mut self, edge: usize, dir: Direction) -> usize {
        let sources = self.eligible_sources(edge, dir);
        let e = &self.edges[edge];
        let (src, dst) = (e.source(dir), e.target(dir));
        let (g1, g2) = match dir {
            Direction::Forward => (e.gamma1, e.gamma2),
            Direction::Reverse => (e.gamma2, e.gamma1),
        };
        let homotopy = build_homotopy(
            &self.system,
            self.vertices[src].params.clone(),
            self.vertices[dst].params.clone(),
            g1,
            g2,
        )
        .expect("edge endpoints are valid specializations");

        let mut new_points = 0;
        let mut succeeded = 0;
        let mut failed = 0;
        for &a in &sources {
            let start = self.vertices[src].known.get(a).clone();
            let outcome = track_path(&homotopy, &start, &self.opts.track);
            self.counters.attempted += 1;
            self.edges[edge].attempted += 1;
            let accepted = outcome.endpoint.and_then(|end| {
                let refined = newton_refine(
                    &self.vertices[dst].square,
                    &end,
                    self.opts.store_tol,
                    self.opts.refine_iters,
                );
                refined.converged.then_some(refined.x)
            });
            match accepted {
                Some(end) => {
                    let known = &mut self.vertices[dst].known;
                    let (b, is_new) = match known.position(&end) {
                        Some(b) => (b, false),
                        None => known.insert(end),
                    };
                    if !is_new && self.edges[edge].matched_partner(dir, b).is_some() {
                        // Endpoint already spoken for: correspondence
                        // conflict, treated as a failure of this path.
                        self.edges[edge].mark_failed(dir, a);
                        self.counters.failed += 1;
                        failed += 1;
                        self.edges[edge].failed += 1;
                    } else {
                        if is_new {
                            new_points += 1;
                        }
                        self.edges[edge].insert_pair(dir, a, b);
                        self.counters.succeeded += 1;
                        succeeded += 1;
                        self.edges[edge].succeeded += 1;
                    }
                }
                None => {
                    self.edges[edge].mark_failed(dir, a);
                    self.counters.failed += 1;
                    failed += 1;
                    self.edges[edge].failed += 1;
                }
            }
        }
        self.history.push(IterationRecord {
            edge,
            from: src,
            to: dst,
            batch: sources.len(),
            succeeded,
            failed,
            new_points,
            fiber_sizes: self.vertices.iter().map(|v| v.known.len()).collect(),
        });
        new_points
    }

    fn best_vertex(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.vertices.iter().enumerate() {
            if v.known.len() > self.vertices[best].known.len() {
                best = i;
            }
        }
        best
    }

    fn count_check(&self, expected: usize) -> Result<Option<usize>, GraphError> {
        for (i, v) in self.vertices.iter().enumerate() {
            if v.known.len() > expected {
                return Err(GraphError::CountExceeded {
                    vertex: i,
                    found: v.known.len(),
                    expected,
                });
            }
            if v.known.len() == expected {
                return Ok(Some(i));
            }
        }
        Ok(None)
    }

    /// Runs the static engine loop: select an edge-direction, track its
    /// batch, check the stop criterion; repeat until the criterion fires or
    /// the graph saturates.
    ///
    /// `initial` points are refined and inserted first. Reaching saturation
    /// is itself a valid stop under [`StopCriterion::Saturation`] and
    /// [`StopCriterion::Stabilization`] (nothing further is derivable); under
    /// [`StopCriterion::KnownCount`] it leaves the criterion unsatisfied.
    pub fn monodromy_solve(
        &mut self,
        initial: &[(usize, Vec<Point<T>>)],
        stop: &StopCriterion,
        strategy: &Strategy,
    ) -> Result<SolveOutcome, GraphError> {
        for (vertex, points) in initial {
            for x in points {
                self.seed(*vertex, x)?;
            }
        }
        if self.vertices.iter().all(|v| v.known.is_empty()) {
            return Err(GraphError::NoSeed);
        }
        let mut iterations = 0;
        let mut fruitless = 0;
        if let StopCriterion::KnownCount(d) = stop {
            if let Some(v) = self.count_check(*d)? {
                return Ok(SolveOutcome {
                    vertex: v,
                    satisfied: true,
                    reason: StopReason::CountReached,
                    iterations,
                });
            }
        }
        loop {
            let Some((edge, dir)) = self.select_edge(strategy) else {
                return Ok(SolveOutcome {
                    vertex: self.best_vertex(),
                    satisfied: !matches!(stop, StopCriterion::KnownCount(_)),
                    reason: StopReason::Saturated,
                    iterations,
                });
            };
            let new_points = self.track_edge(edge, dir);
            iterations += 1;
            match stop {
                StopCriterion::KnownCount(d) => {
                    if let Some(v) = self.count_check(*d)? {
                        return Ok(SolveOutcome {
                            vertex: v,
                            satisfied: true,
                            reason: StopReason::CountReached,
                            iterations,
                        });
                    }
                }
                StopCriterion::Stabilization(window) => {
                    if new_points == 0 {
                        fruitless += 1;
                        if fruitless >= *window {
                            return Ok(SolveOutcome {
                                vertex: self.best_vertex(),
                                satisfied: true,
                                reason: StopReason::Stabilized,
                                iterations,
                            });
                        }
                    } else {
                        fruitless = 0;
                    }
                }
                StopCriterion::Saturation => {}
            }
        }
    }

    /// Adds one randomly decorated edge between the two least-connected
    /// vertices (ties broken by index); raises the Betti number by exactly
    /// one.
    pub fn augment(&mut self) -> Result<usize, GraphError> {
        let n = self.vertices.len();
        if n < 2 {
            return Err(GraphError::BadLayout(
                "augmentation needs at least two vertices".into(),
            ));
        }
        let mut degree = vec![0usize; n];
        for e in &self.edges {
            degree[e.v1] += 1;
            degree[e.v2] += 1;
        }
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&v| (degree[v], v));
        self.add_edge(order[0], order[1])
    }

    /// The incremental dynamic strategy: run the static loop, and as long
    /// as the criterion is unsatisfied, augment the graph and rerun.
    ///
    /// Gives up after `opts.max_fruitless` consecutive augmentation rounds
    /// that fail to grow the largest known fiber.
    pub fn dynamic_solve(
        &mut self,
        stop: &StopCriterion,
        strategy: &Strategy,
        opts: &DynamicOptions,
    ) -> Result<SolveOutcome, GraphError> {
        let mut outcome = self.monodromy_solve(&[], stop, strategy)?;
        let mut fruitless = 0;
        while !outcome.satisfied && fruitless < opts.max_fruitless {
            let before = self.vertices[self.best_vertex()].known.len();
            self.augment()?;
            outcome = self.monodromy_solve(&[], stop, strategy)?;
            let after = self.vertices[self.best_vertex()].known.len();
            if after > before {
                fruitless = 0;
            } else {
                fruitless += 1;
            }
        }
        Ok(outcome)
    }

    /// Snapshot for reporting.
    pub fn report(&self) -> GraphReport {
        GraphReport {
            num_vertices: self.vertices.len(),
            num_edges: self.edges.len(),
            betti: self.betti(),
            fiber_sizes: self.vertices.iter().map(|v| v.known.len()).collect(),
            counters: self.counters,
            edges: self
                .edges
                .iter()
                .map(|e| EdgeReport {
                    v1: e.v1,
                    v2: e.v2,
                    attempted: e.attempted,
                    succeeded: e.succeeded,
                    failed: e.failed,
                    matched: e.matched(),
                })
                .collect(),
            history: self.history.clone(),
        }
    }

    /// Structural invariants, for test hooks: partial bijections, failure
    /// blocklists disjoint from matched starts, residual and separation
    /// bounds on every stored point, consistent counters.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (idx, e) in self.edges.iter().enumerate() {
            if e.v1 == e.v2 {
                return Err(format!("edge {idx} is a loop"));
            }
            if e.pairs.len() != e.rpairs.len() {
                return Err(format!("edge {idx}: pair maps out of sync"));
            }
            for (&a, &b) in &e.pairs {
                if e.rpairs.get(&b) != Some(&a) {
                    return Err(format!("edge {idx}: pair ({a},{b}) not mirrored"));
                }
                if a >= self.vertices[e.v1].known.len() || b >= self.vertices[e.v2].known.len() {
                    return Err(format!("edge {idx}: pair ({a},{b}) out of range"));
                }
            }
            let q1 = self.vertices[e.v1].known.len();
            let q2 = self.vertices[e.v2].known.len();
            if e.matched() > q1.min(q2) {
                return Err(format!("edge {idx}: |C_e| exceeds min fiber size"));
            }
            for a in &e.failed_fwd {
                if e.pairs.contains_key(a) {
                    return Err(format!("edge {idx}: failed forward start {a} is matched"));
                }
            }
            for b in &e.failed_rev {
                if e.rpairs.contains_key(b) {
                    return Err(format!("edge {idx}: failed reverse start {b} is matched"));
                }
            }
        }
        for (i, v) in self.vertices.iter().enumerate() {
            for (k, x) in v.known.iter().enumerate() {
                let r = inf_norm(&v.square.evaluate(x).expect("dimensions fixed"));
                let bound = self.opts.store_tol * (T::one() + inf_norm(x));
                if r > bound {
                    return Err(format!(
                        "vertex {i} point {k}: residual {r} above bound {bound}"
                    ));
                }
            }
            for a in 0..v.known.len() {
                for b in a + 1..v.known.len() {
                    let x = v.known.get(a);
                    let y = v.known.get(b);
                    let d = crate::scalar::inf_dist(x, y);
                    if d <= self.opts.dedup_tol * (T::one() + inf_norm(x)) {
                        return Err(format!("vertex {i}: points {a} and {b} collide"));
                    }
                }
            }
        }
        if self.counters.attempted != self.counters.succeeded + self.counters.failed {
            return Err("path counters out of balance".into());
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::{create_seed_pair, SystemBuilder};
    use crate::rng;
    use num_complex::Complex;

    type C = Complex<f64>;

    fn c(re: f64, im: f64) -> C {
        Complex::new(re, im)
    }

    /// Monic quadratic family x^2 + p1 x + p2.
    fn quadratic_family() -> Arc<ParametricSystem<f64>> {
        let mut b = SystemBuilder::new(1, 2);
        let eq = b.begin_equation();
        b.add_constant(eq, vec![2], c(1.0, 0.0));
        b.add_parameter(eq, vec![1], 0, c(1.0, 0.0));
        b.add_parameter(eq, vec![0], 1, c(1.0, 0.0));
        Arc::new(b.build().unwrap())
    }

    fn graph_rng(seed: u64) -> ChaCha8Rng {
        rng::stream(seed, rng::STREAM_GRAPH)
    }

    #[test]
    fn point_array_dedup() {
        let mut q = PointArray::new(1e-6);
        assert_eq!(q.insert(vec![c(1.0, 2.0)]), (0, true));
        assert_eq!(q.insert(vec![c(1.0, 2.0)]), (0, false));
        // Perturbation far below tolerance dedups.
        assert_eq!(q.insert(vec![c(1.0 + 1e-12, 2.0)]), (0, false));
        // A separated point appends.
        assert_eq!(q.insert(vec![c(1.1, 2.0)]), (1, true));
        assert_eq!(q.len(), 2);
    }

    #[test]
    fn flower_shapes_and_betti() {
        let f = quadratic_family();
        let base = vec![c(0.1, 0.2), c(0.3, -0.1)];
        let g = HomotopyGraph::flower(
            Arc::clone(&f),
            base.clone(),
            4,
            2,
            GraphOptions::default(),
            graph_rng(1),
        )
        .unwrap();
        assert_eq!(g.num_vertices(), 5);
        assert_eq!(g.num_edges(), 8);
        assert_eq!(g.betti(), 4);
        assert!(g.vertex(0).is_base());

        let g = HomotopyGraph::flower(
            Arc::clone(&f),
            base.clone(),
            3,
            3,
            GraphOptions::default(),
            graph_rng(2),
        )
        .unwrap();
        assert_eq!(g.num_edges(), 9);
        assert_eq!(g.betti(), 6);

        // Legal but useless for monodromy.
        let g = HomotopyGraph::flower(f, base, 1, 1, GraphOptions::default(), graph_rng(3))
            .unwrap();
        assert_eq!(g.num_vertices(), 2);
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.betti(), 0);
    }

    #[test]
    fn complete_shapes_and_betti() {
        let f = quadratic_family();
        let base = vec![c(0.1, 0.2), c(0.3, -0.1)];
        for (s, t, edges, betti) in [(2usize, 3usize, 3usize, 2usize), (4, 1, 6, 3), (2, 1, 1, 0)] {
            let g = HomotopyGraph::complete(
                Arc::clone(&f),
                base.clone(),
                s,
                t,
                GraphOptions::default(),
                graph_rng(s as u64),
            )
            .unwrap();
            assert_eq!(g.num_edges(), edges, "complete({s},{t})");
            assert_eq!(g.betti(), betti, "complete({s},{t})");
        }
    }

    #[test]
    fn layout_preconditions() {
        let f = quadratic_family();
        let base = vec![c(0.0, 0.0), c(0.0, 0.0)];
        assert!(HomotopyGraph::flower(
            Arc::clone(&f),
            base.clone(),
            0,
            1,
            GraphOptions::default(),
            graph_rng(0)
        )
        .is_err());
        assert!(HomotopyGraph::complete(
            f,
            base,
            1,
            1,
            GraphOptions::default(),
            graph_rng(0)
        )
        .is_err());
    }

    #[test]
    fn no_self_loops() {
        let f = quadratic_family();
        let mut g = HomotopyGraph::new(
            f,
            vec![c(0.1, 0.0), c(0.2, 0.0)],
            GraphOptions::default(),
            graph_rng(4),
        )
        .unwrap();
        assert!(matches!(g.add_edge(0, 0), Err(GraphError::SelfLoop(0))));
    }

    /// Builds the two-vertex, two-edge state of a five-sheet covering with
    /// fibers of size 4 and 3 and correspondences of size 3 and 2.
    fn fig2_state() -> HomotopyGraph<f64> {
        let f = quadratic_family();
        let mut g = HomotopyGraph::new(
            f,
            vec![c(0.1, 0.0), c(0.2, 0.0)],
            GraphOptions::default(),
            graph_rng(5),
        )
        .unwrap();
        g.add_random_vertex().unwrap();
        g.add_edge(0, 1).unwrap(); // e_a
        g.add_edge(0, 1).unwrap(); // e_b
        for k in 0..4 {
            g.vertices[0].known.points.push(vec![c(k as f64, 0.0)]);
        }
        for k in 0..3 {
            g.vertices[1].known.points.push(vec![c(10.0 + k as f64, 0.0)]);
        }
        // e_a matches x1, x2, x4 to all three known target points.
        g.edges[0].insert_pair(Direction::Forward, 0, 0);
        g.edges[0].insert_pair(Direction::Forward, 3, 1);
        g.edges[0].insert_pair(Direction::Forward, 1, 2);
        // e_b matches x4 and x2.
        g.edges[1].insert_pair(Direction::Forward, 3, 0);
        g.edges[1].insert_pair(Direction::Forward, 1, 2);
        g
    }

    #[test]
    fn potentials_on_partial_correspondences() {
        let g = fig2_state();
        let d = 5;
        assert_eq!(g.potential_lower_bound(0, Direction::Forward), 1);
        assert_eq!(g.potential_lower_bound(0, Direction::Reverse), 0);
        assert_eq!(
            g.potential_e(0, Direction::Forward, d),
            Rational64::from_integer(1)
        );
        assert_eq!(
            g.potential_e(1, Direction::Reverse, d),
            Rational64::new(1, 3)
        );
        // Equal-size fibers give a zero lower bound both ways.
        assert_eq!(
            g.potential_lower_bound(1, Direction::Forward),
            4usize.saturating_sub(3)
        );
    }

    #[test]
    fn potential_e_saturated_edge_is_zero() {
        let g = fig2_state();
        // Reverse across e_a: all three target-side points are matched, so
        // there is no unmatched start and the potential vanishes.
        assert_eq!(
            g.potential_e(0, Direction::Reverse, 5),
            Rational64::from_integer(0)
        );
        // A correspondence as large as the count also scores zero.
        assert_eq!(
            g.potential_e(0, Direction::Forward, 3),
            Rational64::from_integer(0)
        );
    }

    #[test]
    fn select_edge_prefers_guaranteed_progress() {
        let mut g = fig2_state();
        // The fully matched reverse direction of e_a is not a candidate;
        // among the rest, e_a forward has the top expected potential.
        let picked = g.select_edge(&Strategy::PotentialE { count: 5 }).unwrap();
        assert_eq!(picked, (0, Direction::Forward));

        // Single eligible candidate: every strategy returns it.
        let f = quadratic_family();
        let mut g = HomotopyGraph::new(
            f,
            vec![c(0.1, 0.0), c(0.2, 0.0)],
            GraphOptions::default(),
            graph_rng(6),
        )
        .unwrap();
        g.add_random_vertex().unwrap();
        g.add_edge(0, 1).unwrap();
        g.vertices[0].known.points.push(vec![c(0.5, 0.0)]);
        for strategy in [
            Strategy::Random,
            Strategy::PotentialLowerBound,
            Strategy::PotentialE { count: 2 },
        ] {
            assert_eq!(g.select_edge(&strategy), Some((0, Direction::Forward)));
        }
    }

    #[test]
    fn potential_lower_bound_equal_fibers_is_zero() {
        let mut g = fig2_state();
        // Grow the second fiber to the same size: no guaranteed gain in
        // either direction.
        g.vertices[1].known.points.push(vec![c(13.0, 0.0)]);
        for dir in [Direction::Forward, Direction::Reverse] {
            assert_eq!(g.potential_lower_bound(0, dir), 0);
            assert_eq!(g.potential_lower_bound(1, dir), 0);
        }
    }

    #[test]
    fn conflicting_endpoint_is_a_failure_of_the_later_path() {
        // Mis-pair the two endpoints of a known transport: the quadratic's
        // root 0 at the base still tracks to its true image, which is
        // already (wrongly) matched to root 1, so the new path must be
        // filed as failed and the correspondence left alone.
        let f = quadratic_family();
        let mut seed_rng = rng::stream(4, rng::STREAM_SEED);
        let (p0, x0) = create_seed_pair(f.as_ref(), &mut seed_rng).unwrap();
        let mut g = HomotopyGraph::complete(
            Arc::clone(&f),
            p0.clone(),
            2,
            1,
            GraphOptions::default(),
            graph_rng(14),
        )
        .unwrap();
        g.seed(0, &x0).unwrap();
        // Establish the true pair (0, 0) by tracking, then plant the other
        // base root and rewire the correspondence to claim (1, 0).
        assert_eq!(g.track_edge(0, Direction::Forward), 1);
        assert_eq!(g.edge(0).matched(), 1);
        let second_root = {
            let p = g.vertex(0).params();
            let disc = (p[0] * p[0] - c(4.0, 0.0) * p[1]).sqrt();
            let known = g.vertex(0).known().get(0)[0];
            let half = c(0.5, 0.0);
            let roots = [(-p[0] + disc) * half, (-p[0] - disc) * half];
            if (roots[0] - known).norm() > (roots[1] - known).norm() {
                roots[0]
            } else {
                roots[1]
            }
        };
        g.seed(0, &[second_root]).unwrap();
        g.edges[0].pairs.clear();
        g.edges[0].rpairs.clear();
        g.edges[0].insert_pair(Direction::Forward, 1, 0);
        let new_points = g.track_edge(0, Direction::Forward);
        assert_eq!(new_points, 0);
        assert_eq!(g.edge(0).matched(), 1, "correspondence must not grow");
        assert!(g.edges[0].is_failed(Direction::Forward, 0));
    }

    #[test]
    fn saturation_detection() {
        let mut g = fig2_state();
        assert!(!g.is_saturated());
        // Mark every remaining start as failed: saturation by exhaustion.
        g.edges[0].mark_failed(Direction::Forward, 2);
        g.edges[1].mark_failed(Direction::Forward, 0);
        g.edges[1].mark_failed(Direction::Forward, 2);
        g.edges[1].mark_failed(Direction::Reverse, 1);
        assert!(g.is_saturated());
        assert_eq!(g.select_edge(&Strategy::Random), None);
    }

    fn quadratic_engine(seed: u64) -> (HomotopyGraph<f64>, Point<f64>) {
        let f = quadratic_family();
        let mut seed_rng = rng::stream(seed, rng::STREAM_SEED);
        let (p0, x0) = create_seed_pair(f.as_ref(), &mut seed_rng).unwrap();
        let g = HomotopyGraph::complete(
            f,
            p0,
            2,
            2,
            GraphOptions::default(),
            graph_rng(seed),
        )
        .unwrap();
        (g, x0)
    }

    #[test]
    fn monodromy_finds_both_quadratic_roots() {
        // A single independent cycle swaps the two roots only when the loop
        // encircles the discriminant, so completion at this small layout is
        // probabilistic; every completed run must agree with the quadratic
        // formula and respect the path caps.
        let mut completed = 0;
        for seed in 0..20u64 {
            let (mut g, x0) = quadratic_engine(seed);
            g.seed(0, &x0).unwrap();
            let out = g
                .monodromy_solve(&[], &StopCriterion::KnownCount(2), &Strategy::Random)
                .unwrap();
            g.check_invariants().unwrap();
            // Successful paths are capped by d |E| and attempts by twice that.
            assert!(g.counters().succeeded <= 2 * g.num_edges());
            assert!(g.counters().attempted <= 4 * g.num_edges());
            if !out.satisfied {
                continue;
            }
            completed += 1;
            assert_eq!(out.reason, StopReason::CountReached);
            let v = g.vertex(out.vertex);
            assert_eq!(v.known().len(), 2);
            // Quadratic formula oracle at the returned vertex.
            let p = v.params();
            let disc = (p[0] * p[0] - c(4.0, 0.0) * p[1]).sqrt();
            let half = c(0.5, 0.0);
            let roots = [(-p[0] + disc) * half, (-p[0] - disc) * half];
            for x in v.known().iter() {
                let hit = roots.iter().any(|r| (x[0] - r).norm() < 1e-6);
                assert!(hit, "root {} not predicted by formula", x[0]);
            }
        }
        assert!(completed >= 5, "only {completed}/20 seeds completed");
    }

    #[test]
    fn known_count_one_returns_before_tracking() {
        let (mut g, x0) = quadratic_engine(3);
        g.seed(0, &x0).unwrap();
        let out = g
            .monodromy_solve(&[], &StopCriterion::KnownCount(1), &Strategy::Random)
            .unwrap();
        assert!(out.satisfied);
        assert_eq!(out.iterations, 0);
        assert_eq!(g.counters().attempted, 0);
    }

    #[test]
    fn initial_points_argument_seeds_the_graph() {
        let (mut g, x0) = quadratic_engine(4);
        let out = g
            .monodromy_solve(
                &[(0, vec![x0])],
                &StopCriterion::KnownCount(2),
                &Strategy::PotentialLowerBound,
            )
            .unwrap();
        assert!(out.satisfied);
    }

    #[test]
    fn empty_graph_is_an_error() {
        let (mut g, _) = quadratic_engine(5);
        assert!(matches!(
            g.monodromy_solve(&[], &StopCriterion::Saturation, &Strategy::Random),
            Err(GraphError::NoSeed)
        ));
    }

    #[test]
    fn saturation_stop_completes_the_correspondences() {
        // Seed 4 at multiplicity 4 discovers both roots; saturation then
        // completes every correspondence before stopping.
        let f = quadratic_family();
        let mut seed_rng = rng::stream(4, rng::STREAM_SEED);
        let (p0, x0) = create_seed_pair(f.as_ref(), &mut seed_rng).unwrap();
        let mut g =
            HomotopyGraph::complete(f, p0, 2, 4, GraphOptions::default(), graph_rng(4)).unwrap();
        g.seed(0, &x0).unwrap();
        let out = g
            .monodromy_solve(&[], &StopCriterion::Saturation, &Strategy::Random)
            .unwrap();
        assert!(out.satisfied);
        assert_eq!(out.reason, StopReason::Saturated);
        assert!(g.is_saturated());
        g.check_invariants().unwrap();
        assert_eq!(g.vertex(out.vertex).known().len(), 2);
        for e in 0..g.num_edges() {
            assert_eq!(g.edge(e).matched(), 2);
        }
    }

    #[test]
    fn stabilization_stop_fires_after_fruitless_window() {
        let f = quadratic_family();
        let mut seed_rng = rng::stream(5, rng::STREAM_SEED);
        let (p0, x0) = create_seed_pair(f.as_ref(), &mut seed_rng).unwrap();
        let mut g =
            HomotopyGraph::complete(f, p0, 2, 4, GraphOptions::default(), graph_rng(5)).unwrap();
        g.seed(0, &x0).unwrap();
        let out = g
            .monodromy_solve(&[], &StopCriterion::Stabilization(2), &Strategy::Random)
            .unwrap();
        assert!(out.satisfied);
        assert!(matches!(
            out.reason,
            StopReason::Stabilized | StopReason::Saturated
        ));
        assert_eq!(g.vertex(out.vertex).known().len(), 2);
    }

    #[test]
    fn count_overflow_aborts() {
        let (mut g, x0) = quadratic_engine(8);
        g.seed(0, &x0).unwrap();
        // Declaring d = 1 on a two-root family must abort once the second
        // root appears, not silently continue.
        let err = g.monodromy_solve(&[], &StopCriterion::KnownCount(1), &Strategy::Random);
        match err {
            Ok(out) => assert!(out.satisfied), // stopped at the seed point
            Err(GraphError::CountExceeded { expected: 1, .. }) => {}
            other => panic!("unexpected outcome {other:?}"),
        }
    }

    #[test]
    fn determinism_bit_for_bit() {
        let run = || {
            let (mut g, x0) = quadratic_engine(9);
            g.seed(0, &x0).unwrap();
            g.monodromy_solve(&[], &StopCriterion::Saturation, &Strategy::Random)
                .unwrap();
            let points: Vec<Vec<(f64, f64)>> = g
                .vertex(0)
                .known()
                .iter()
                .map(|x| x.iter().map(|z| (z.re, z.im)).collect())
                .collect();
            (g.counters().attempted, g.counters().succeeded, points)
        };
        assert_eq!(run(), run());
    }

    #[test]
    fn dynamic_augmentation_raises_betti_by_one() {
        let (mut g, x0) = quadratic_engine(10);
        g.seed(0, &x0).unwrap();
        for _ in 0..3 {
            let before = g.betti();
            g.augment().unwrap();
            assert_eq!(g.betti(), before + 1);
        }
    }

    #[test]
    fn dynamic_solve_without_needed_augmentation() {
        // Linear family x - p: one solution, satisfied with zero cycles.
        let mut b = SystemBuilder::new(1, 1);
        let eq = b.begin_equation();
        b.add_constant(eq, vec![1], c(1.0, 0.0));
        b.add_parameter(eq, vec![0], 0, c(-1.0, 0.0));
        let f = Arc::new(b.build().unwrap());
        let mut seed_rng = rng::stream(1, rng::STREAM_SEED);
        let (p0, x0) = create_seed_pair(f.as_ref(), &mut seed_rng).unwrap();
        let mut g =
            HomotopyGraph::flower(f, p0, 1, 1, GraphOptions::default(), graph_rng(11)).unwrap();
        g.seed(0, &x0).unwrap();
        let edges_before = g.num_edges();
        let out = g
            .dynamic_solve(
                &StopCriterion::KnownCount(1),
                &Strategy::Random,
                &DynamicOptions::default(),
            )
            .unwrap();
        assert!(out.satisfied);
        assert_eq!(g.num_edges(), edges_before, "no augmentation expected");
    }

    #[test]
    fn dynamic_solve_gives_up_after_fruitless_augmentations() {
        let (mut g, x0) = quadratic_engine(12);
        g.seed(0, &x0).unwrap();
        let edges_before = g.num_edges();
        // A quadratic never reaches count 3, so every augmentation round is
        // fruitless and the budget caps the loop.
        let out = g
            .dynamic_solve(
                &StopCriterion::KnownCount(3),
                &Strategy::Random,
                &DynamicOptions { max_fruitless: 3 },
            )
            .unwrap();
        assert!(!out.satisfied);
        assert_eq!(g.num_edges(), edges_before + 3);
        g.check_invariants().unwrap();
    }

    #[test]
    fn report_snapshot_is_consistent() {
        let (mut g, x0) = quadratic_engine(13);
        g.seed(0, &x0).unwrap();
        g.monodromy_solve(&[], &StopCriterion::Saturation, &Strategy::Random)
            .unwrap();
        let report = g.report();
        assert_eq!(report.num_vertices, g.num_vertices());
        assert_eq!(report.num_edges, g.num_edges());
        assert_eq!(report.betti, g.betti());
        assert_eq!(
            report.counters.attempted,
            report.counters.succeeded + report.counters.failed
        );
        assert_eq!(report.edges.len(), g.num_edges());
        assert!(!report.history.is_empty());
        let last = report.history.last().unwrap();
        assert_eq!(last.fiber_sizes, report.fiber_sizes);
        // Fiber history is monotone.
        let mut prev = vec![0usize; report.num_vertices];
        for rec in &report.history {
            for (a, b) in prev.iter().zip(&rec.fiber_sizes) {
                assert!(a <= b, "fiber shrank");
            }
            prev = rec.fiber_sizes.clone();
        }
    }
}
