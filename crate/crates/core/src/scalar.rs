//! Scalar abstraction and small complex-vector helpers.
//!
//! Everything downstream is generic over [`Real`], a floating-point scalar
//! assembled from `num-traits` bounds. Random draws are sampled in `f64` and
//! converted, so a fixed seed produces the same sequence of points for every
//! scalar type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};
use rand::Rng;

/// Floating-point scalar the solver is generic over (`f32`, `f64`, ...).
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Converts an `f64` constant (tolerances, step sizes) into `Self`.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("constant not representable in scalar type")
    }
}

impl<T> Real for T where
    T: Float
        + FloatConst
        + FromPrimitive
        + NumAssign
        + Sum
        + Debug
        + Display
        + Send
        + Sync
        + 'static
{
}

/// Max modulus over the entries of a complex vector.
pub fn inf_norm<T: Real>(v: &[Complex<T>]) -> T {
    v.iter()
        .map(|z| z.norm())
        .fold(T::zero(), |acc, x| acc.max(x))
}

/// Max modulus of the entrywise difference of two vectors.
pub fn inf_dist<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    debug_assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(T::zero(), |acc, d| acc.max(d))
}

/// Complex number with real and imaginary parts uniform in `[-1, 1]`.
pub fn random_unit_box<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let re: f64 = rng.random_range(-1.0..=1.0);
    let im: f64 = rng.random_range(-1.0..=1.0);
    Complex::new(T::of(re), T::of(im))
}

/// Vector of [`random_unit_box`] draws.
pub fn random_unit_box_vec<T: Real, R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<Complex<T>> {
    (0..len).map(|_| random_unit_box(rng)).collect()
}

/// Complex number of modulus one with uniform argument.
pub fn random_unit_circle<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Complex<T> {
    let theta: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    Complex::from_polar(T::one(), T::of(theta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn norms() {
        let v: Vec<Complex<f64>> = vec![Complex::new(3.0, 4.0), Complex::new(0.0, -1.0)];
        assert_eq!(inf_norm(&v), 5.0);
        let w = vec![Complex::new(3.0, 4.0), Complex::new(0.0, 0.0)];
        assert_eq!(inf_dist(&v, &w), 1.0);
    }

    #[test]
    fn unit_circle_has_modulus_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let g: Complex<f64> = random_unit_circle(&mut rng);
            assert!((g.norm() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn box_draws_match_across_scalar_types() {
        let mut r1 = ChaCha8Rng::seed_from_u64(3);
        let mut r2 = ChaCha8Rng::seed_from_u64(3);
        let a: Complex<f64> = random_unit_box(&mut r1);
        let b: Complex<f32> = random_unit_box(&mut r2);
        assert!((a.re as f32 - b.re).abs() < 1e-6);
        assert!((a.im as f32 - b.im).abs() < 1e-6);
    }
}
