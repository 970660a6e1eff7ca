//! Newton refinement and adaptive predictor-corrector tracking of one
//! homotopy path from `t = 0` to `t = 1`.
//!
//! Tracking never panics on numerical failure: every abnormal end is a
//! [`TrackStatus`] so the graph layer can record it and move on.

use num_complex::Complex;

use crate::linalg::CMatrix;
pub use crate::linalg::{lu_solve, LinalgError};
use crate::polysys::{Homotopy, SquareSystem};
use crate::scalar::{inf_norm, Real};

/// Anything Newton can run on: a square map with a Jacobian.
pub trait EvalJac<T: Real> {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[Complex<T>]) -> Vec<Complex<T>>;
    fn jac(&self, x: &[Complex<T>]) -> CMatrix<T>;
}

impl<T: Real> EvalJac<T> for SquareSystem<T> {
    fn dim(&self) -> usize {
        self.dim()
    }
    fn eval(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        self.evaluate(x).expect("square system dimensions are fixed")
    }
    fn jac(&self, x: &[Complex<T>]) -> CMatrix<T> {
        self.jacobian(x).expect("square system dimensions are fixed")
    }
}

/// A homotopy with `t` pinned, as seen by the Newton corrector.
struct FrozenHomotopy<'a, T> {
    homotopy: &'a Homotopy<T>,
    t: T,
}

impl<T: Real> EvalJac<T> for FrozenHomotopy<'_, T> {
    fn dim(&self) -> usize {
        self.homotopy.dim()
    }
    fn eval(&self, x: &[Complex<T>]) -> Vec<Complex<T>> {
        self.homotopy
            .evaluate(self.t, x)
            .expect("homotopy dimensions are fixed")
    }
    fn jac(&self, x: &[Complex<T>]) -> CMatrix<T> {
        self.homotopy
            .jacobian_x(self.t, x)
            .expect("homotopy dimensions are fixed")
    }
}

/// Result of a Newton run.
#[derive(Clone, Debug)]
pub struct NewtonOutcome<T> {
    pub x: Vec<Complex<T>>,
    pub residual: T,
    pub converged: bool,
    pub iterations: usize,
    /// Set when the iteration stopped on a singular Jacobian.
    pub singular: bool,
}

/// Newton iteration on any [`EvalJac`] target.
///
/// Convergence means `inf_norm(F(x)) <= tol * (1 + inf_norm(x))`; the check
/// runs before the first iteration, so an exact root needs zero iterations.
pub fn newton_iterate<T: Real, S: EvalJac<T>>(
    system: &S,
    x0: &[Complex<T>],
    tol: T,
    max_iters: usize,
) -> NewtonOutcome<T> {
    let mut x = x0.to_vec();
    let mut iterations = 0;
    loop {
        let f = system.eval(&x);
        let residual = inf_norm(&f);
        if residual <= tol * (T::one() + inf_norm(&x)) {
            return NewtonOutcome {
                x,
                residual,
                converged: true,
                iterations,
                singular: false,
            };
        }
        if iterations >= max_iters {
            return NewtonOutcome {
                x,
                residual,
                converged: false,
                iterations,
                singular: false,
            };
        }
        let j = system.jac(&x);
        match lu_solve(&j, &f) {
            Ok(delta) => {
                for (xi, di) in x.iter_mut().zip(&delta) {
                    *xi = *xi - *di;
                }
                iterations += 1;
            }
            Err(_) => {
                return NewtonOutcome {
                    x,
                    residual,
                    converged: false,
                    iterations,
                    singular: true,
                }
            }
        }
    }
}

/// Refines an approximate solution of a square system in place.
pub fn newton_refine<T: Real>(
    system: &SquareSystem<T>,
    x: &[Complex<T>],
    tol: T,
    max_iters: usize,
) -> NewtonOutcome<T> {
    newton_iterate(system, x, tol, max_iters)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Predictor {
    Euler,
    RungeKutta4,
}

/// Knobs of the path tracker. Defaults: corrector tolerance `1e-8`, at most
/// 3 Newton iterations per step, steps in `[1e-7, 0.05]` initially, halving
/// on rejection and growing by 1.5 after 3 consecutive accepts, at most
/// 10000 step attempts, divergence above `1e8`.
#[derive(Clone, Debug)]
pub struct TrackOptions<T> {
    pub corrector_tol: T,
    pub max_corrector_iters: usize,
    pub initial_step: T,
    pub min_step: T,
    pub max_steps: usize,
    pub shrink: T,
    pub growth: T,
    pub accepts_before_growth: usize,
    pub divergence_threshold: T,
    pub predictor: Predictor,
}

impl<T: Real> Default for TrackOptions<T> {
    fn default() -> Self {
        TrackOptions {
            corrector_tol: T::of(1e-8),
            max_corrector_iters: 3,
            initial_step: T::of(0.05),
            min_step: T::of(1e-7),
            max_steps: 10_000,
            shrink: T::of(0.5),
            growth: T::of(1.5),
            accepts_before_growth: 3,
            divergence_threshold: T::of(1e8),
            predictor: Predictor::Euler,
        }
    }
}

impl<T: Real> TrackOptions<T> {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.min_step > T::zero()
            && self.min_step <= self.initial_step
            && self.initial_step <= T::one())
        {
            return Err("need 0 < min_step <= initial_step <= 1".into());
        }
        if !(self.shrink < T::one() && T::one() < self.growth) {
            return Err("need shrink < 1 < growth".into());
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TrackStatus {
    Success,
    SingularJacobian,
    MinStepReached,
    StepBudgetExhausted,
    Diverged,
}

/// Outcome of tracking one path; `endpoint` is present exactly on success.
#[derive(Clone, Debug)]
pub struct TrackOutcome<T> {
    pub status: TrackStatus,
    pub endpoint: Option<Vec<Complex<T>>>,
    pub steps: usize,
    pub newton_iters: usize,
}

impl<T> TrackOutcome<T> {
    pub fn is_success(&self) -> bool {
        self.status == TrackStatus::Success
    }
}

enum PredictError {
    /// Jacobian singular at the current accepted point; no step size helps.
    AtBasePoint,
    /// Jacobian singular at an intermediate stage; retry with smaller step.
    MidStage,
}

/// `dx/dt = -J(t, x)^{-1} dH/dt(x)`.
fn derivative<T: Real>(
    h: &Homotopy<T>,
    t: T,
    x: &[Complex<T>],
) -> Result<Vec<Complex<T>>, LinalgError> {
    let j = h.jacobian_x(t, x).expect("homotopy dimensions are fixed");
    let ht = h.dt(x).expect("homotopy dimensions are fixed");
    let v = lu_solve(&j, &ht)?;
    Ok(v.into_iter().map(|c| -c).collect())
}

fn predict<T: Real>(
    h: &Homotopy<T>,
    t: T,
    x: &[Complex<T>],
    step: T,
    predictor: Predictor,
) -> Result<Vec<Complex<T>>, PredictError> {
    let shift = |x: &[Complex<T>], v: &[Complex<T>], s: T| -> Vec<Complex<T>> {
        x.iter()
            .zip(v)
            .map(|(xi, vi)| xi + vi * Complex::new(s, T::zero()))
            .collect()
    };
    match predictor {
        Predictor::Euler => {
            let v = derivative(h, t, x).map_err(|_| PredictError::AtBasePoint)?;
            Ok(shift(x, &v, step))
        }
        Predictor::RungeKutta4 => {
            let half = step / T::of(2.0);
            let k1 = derivative(h, t, x).map_err(|_| PredictError::AtBasePoint)?;
            let k2 = derivative(h, t + half, &shift(x, &k1, half))
                .map_err(|_| PredictError::MidStage)?;
            let k3 = derivative(h, t + half, &shift(x, &k2, half))
                .map_err(|_| PredictError::MidStage)?;
            let k4 = derivative(h, t + step, &shift(x, &k3, step))
                .map_err(|_| PredictError::MidStage)?;
            let sixth = step / T::of(6.0);
            Ok(x.iter()
                .enumerate()
                .map(|(i, xi)| {
                    let two = Complex::new(T::of(2.0), T::zero());
                    xi + (k1[i] + two * k2[i] + two * k3[i] + k4[i])
                        * Complex::new(sixth, T::zero())
                })
                .collect())
        }
    }
}

/// Tracks one solution of `H(0, .)` to a solution of `H(1, .)`.
///
/// Explicit Euler (or fourth-order Runge-Kutta) on the Davidenko field
/// predicts, Newton at frozen `t` corrects. A step is accepted when the
/// corrector converges within its iteration budget, otherwise the step is
/// halved; after `accepts_before_growth` consecutive accepts the step grows
/// again. Success means `t` reached 1 and a final Newton polish converged.
pub fn track_path<T: Real>(
    h: &Homotopy<T>,
    x_start: &[Complex<T>],
    opts: &TrackOptions<T>,
) -> TrackOutcome<T> {
    debug_assert!(opts.validate().is_ok());
    let mut x = x_start.to_vec();
    let mut t = T::zero();
    let mut dt = opts.initial_step;
    let mut steps = 0usize;
    let mut newton_iters = 0usize;
    let mut accepts_in_row = 0usize;

    let fail = |status, steps, newton_iters| TrackOutcome {
        status,
        endpoint: None,
        steps,
        newton_iters,
    };

    while t < T::one() {
        if steps >= opts.max_steps {
            return fail(TrackStatus::StepBudgetExhausted, steps, newton_iters);
        }
        let step = dt.min(T::one() - t);
        let reject = |dt: &mut T, accepts_in_row: &mut usize| {
            *accepts_in_row = 0;
            *dt = *dt * opts.shrink;
            *dt >= opts.min_step
        };
        match predict(h, t, &x, step, opts.predictor) {
            Ok(x_pred) => {
                let t_new = t + step;
                let frozen = FrozenHomotopy { homotopy: h, t: t_new };
                let corr = newton_iterate(
                    &frozen,
                    &x_pred,
                    opts.corrector_tol,
                    opts.max_corrector_iters,
                );
                newton_iters += corr.iterations;
                steps += 1;
                if corr.converged {
                    x = corr.x;
                    t = t_new;
                    if inf_norm(&x) > opts.divergence_threshold {
                        return fail(TrackStatus::Diverged, steps, newton_iters);
                    }
                    accepts_in_row += 1;
                    if accepts_in_row >= opts.accepts_before_growth {
                        dt = (dt * opts.growth).min(T::one());
                        accepts_in_row = 0;
                    }
                } else if !reject(&mut dt, &mut accepts_in_row) {
                    return fail(TrackStatus::MinStepReached, steps, newton_iters);
                }
            }
            Err(PredictError::AtBasePoint) => {
                return fail(TrackStatus::SingularJacobian, steps, newton_iters);
            }
            Err(PredictError::MidStage) => {
                steps += 1;
                if !reject(&mut dt, &mut accepts_in_row) {
                    return fail(TrackStatus::MinStepReached, steps, newton_iters);
                }
            }
        }
    }

    let frozen = FrozenHomotopy {
        homotopy: h,
        t: T::one(),
    };
    let polish = newton_iterate(&frozen, &x, opts.corrector_tol, opts.max_corrector_iters);
    newton_iters += polish.iterations;
    if polish.converged {
        TrackOutcome {
            status: TrackStatus::Success,
            endpoint: Some(polish.x),
            steps,
            newton_iters,
        }
    } else if polish.singular {
        fail(TrackStatus::SingularJacobian, steps, newton_iters)
    } else {
        fail(TrackStatus::MinStepReached, steps, newton_iters)
    }
}
