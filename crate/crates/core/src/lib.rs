//! Solver for families of polynomial systems whose coefficients are
//! affine-linear in a set of parameters.
//!
//! Starting from a single seed solution, the solver walks a decorated graph
//! of linear segment homotopies between random parameter points and lets the
//! monodromy of the induced branched covering carry known solutions into new
//! ones. The crate also ships exact and Monte Carlo models ([`stats`]) for
//! how many independent graph cycles such a strategy needs, and generators
//! for the classic benchmark families ([`families`]).
//!
//! All numeric code is generic over the scalar type via [`scalar::Real`];
//! the `*64` aliases at the crate root fix `f64`, which is what the CLI and
//! the test suites use.

pub mod families;
pub mod graph;
pub mod linalg;
pub mod polysys;
pub mod rng;
pub mod scalar;
pub mod stats;
pub mod tracker;

use num_complex::Complex;

/// Complex scalar over `f64`.
pub type C64 = Complex<f64>;
/// Complex vector over `f64`.
pub type Point64 = Vec<C64>;
/// [`polysys::ParametricSystem`] over `f64`.
pub type System64 = polysys::ParametricSystem<f64>;
/// [`polysys::SquareSystem`] over `f64`.
pub type SquareSystem64 = polysys::SquareSystem<f64>;
/// [`polysys::Homotopy`] over `f64`.
pub type Homotopy64 = polysys::Homotopy<f64>;
/// [`tracker::TrackOptions`] over `f64`.
pub type TrackOptions64 = tracker::TrackOptions<f64>;
/// [`graph::HomotopyGraph`] over `f64`.
pub type Graph64 = graph::HomotopyGraph<f64>;
/// [`families::Family`] over `f64`.
pub type Family64 = families::Family<f64>;
