//! Exact and Monte Carlo models of completion probability.
//!
//! `t_d(j)` is the probability that `j` independent uniform permutations of
//! `d` points generate a transitive group. The values satisfy
//!
//! ```text
//! d = sum_{i=1}^{d} C(d, i)^(1-j) * i * t_i(j)
//! ```
//!
//! which determines them by backward substitution, in exact big-rational
//! arithmetic: the binomial powers overflow any float long before the
//! table does. Floats appear only at the display boundary.

use num_bigint::BigInt;
use num_integer::binomial;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
#[cfg(test)]
use num_traits::{Signed, Zero};
use rand::Rng;

/// Exact table `t_1(j) .. t_{d_max}(j)` for one generator count `j`.
#[derive(Clone, Debug)]
pub struct TransitivityTable {
    pub d_max: usize,
    pub j: u32,
    values: Vec<BigRational>,
}

impl TransitivityTable {
    /// Computes the table by backward substitution.
    pub fn compute(d_max: usize, j: u32) -> Self {
        assert!(d_max >= 1);
        let mut values: Vec<BigRational> = Vec::with_capacity(d_max);
        for d in 1..=d_max {
            // t_d = (d - sum_{i<d} C(d,i)^{1-j} i t_i) / d
            let mut acc = BigRational::from_integer(BigInt::from(d));
            for (i, t_i) in values.iter().enumerate() {
                let i = i + 1;
                let coeff = binomial_power(d, i, j);
                acc -= coeff * BigRational::from_integer(BigInt::from(i)) * t_i;
            }
            values.push(acc / BigRational::from_integer(BigInt::from(d)));
        }
        TransitivityTable { d_max, j, values }
    }

    /// Exact `t_d(j)`.
    pub fn value(&self, d: usize) -> &BigRational {
        &self.values[d - 1]
    }

    /// `t_d(j)` as a float, for display.
    pub fn value_f64(&self, d: usize) -> f64 {
        self.values[d - 1].to_f64().expect("t_d is in [0, 1]")
    }

    /// Residual of the defining identity at `d`; zero when the table is
    /// exact.
    pub fn identity_residual(&self, d: usize) -> BigRational {
        let mut acc = BigRational::from_integer(BigInt::from(d));
        for i in 1..=d {
            let coeff = binomial_power(d, i, self.j);
            acc -= coeff * BigRational::from_integer(BigInt::from(i)) * self.value(i);
        }
        acc
    }
}

/// `C(d, i)^(1-j)` as an exact rational.
fn binomial_power(d: usize, i: usize, j: u32) -> BigRational {
    let b: BigInt = binomial(BigInt::from(d), BigInt::from(i));
    if j >= 1 {
        BigRational::new(BigInt::one(), b.pow(j - 1))
    } else {
        BigRational::from_integer(b)
    }
}

/// Exact probability that `j` uniform permutations act transitively on `d`
/// points.
pub fn transitivity_probability(d: usize, j: u32) -> BigRational {
    TransitivityTable::compute(d, j).value(d).clone()
}

/// Truncated expectation of the number of uniform generators needed for
/// transitivity on `d` points, plus a bound on the discarded tail.
#[derive(Clone, Copy, Debug)]
pub struct ExpectedBetti {
    pub value: f64,
    /// Upper bound on the truncation error: the tail terms decay at least
    /// geometrically with ratio `1/d <= 1/2`, so the last term bounds their
    /// sum.
    pub tail_bound: f64,
}

/// `E[X_d] = sum_{j >= 0} (1 - t_d(j))`, truncated at `j_max`.
///
/// The `j = 0` and `j = 1` terms come from the same recursion: zero
/// permutations are never transitive for `d > 1` and a single one is
/// transitive exactly when it is a `d`-cycle, so those terms contribute
/// `1 + (1 - 1/d)`.
pub fn expected_betti(d: usize, j_max: u32) -> ExpectedBetti {
    expected_betti_range(d, j_max).pop().expect("d >= 1")
}

/// [`expected_betti`] for every `d` in `1..=d_max`, sharing one table per
/// generator count across the whole range.
pub fn expected_betti_range(d_max: usize, j_max: u32) -> Vec<ExpectedBetti> {
    let mut out = vec![
        ExpectedBetti {
            value: 0.0,
            tail_bound: 0.0
        };
        d_max
    ];
    for j in 0..=j_max {
        let table = TransitivityTable::compute(d_max, j);
        for (d, e) in out.iter_mut().enumerate() {
            let term = (BigRational::one() - table.value(d + 1))
                .to_f64()
                .expect("finite");
            e.value += term;
            e.tail_bound = term;
        }
    }
    out
}

/// Default truncation depth for [`expected_betti`]; the tail is far below
/// 1e-9 here for every `d >= 2`.
pub const EXPECTED_BETTI_J_MAX: u32 = 60;

/// Union-find with path compression and union by size.
pub struct DisjointSets {
    parent: Vec<usize>,
    size: Vec<usize>,
    components: usize,
}

impl DisjointSets {
    pub fn new(len: usize) -> Self {
        DisjointSets {
            parent: (0..len).collect(),
            size: vec![1; len],
            components: len,
        }
    }

    pub fn find(&mut self, i: usize) -> usize {
        if self.parent[i] != i {
            let root = self.find(self.parent[i]);
            self.parent[i] = root;
        }
        self.parent[i]
    }

    pub fn union(&mut self, i: usize, j: usize) {
        let (mut a, mut b) = (self.find(i), self.find(j));
        if a == b {
            return;
        }
        if self.size[a] < self.size[b] {
            std::mem::swap(&mut a, &mut b);
        }
        self.parent[b] = a;
        self.size[a] += self.size[b];
        self.components -= 1;
    }

    pub fn components(&self) -> usize {
        self.components
    }
}

/// In-place Fisher-Yates shuffle driven by the caller's RNG.
fn fisher_yates<R: Rng + ?Sized>(perm: &mut [usize], rng: &mut R) {
    for i in (1..perm.len()).rev() {
        let j = rng.random_range(0..=i);
        perm.swap(i, j);
    }
}

/// Empirical probability that `j` uniform permutations of `d` points act
/// transitively, over `trials` independent draws.
pub fn simulate_transitivity<R: Rng + ?Sized>(
    d: usize,
    j: u32,
    trials: usize,
    rng: &mut R,
) -> f64 {
    assert!(trials >= 1);
    let mut perm: Vec<usize> = (0..d).collect();
    let mut hits = 0usize;
    for _ in 0..trials {
        let mut dsu = DisjointSets::new(d);
        for _ in 0..j {
            for (i, slot) in perm.iter_mut().enumerate() {
                *slot = i;
            }
            fisher_yates(&mut perm, rng);
            for (i, &image) in perm.iter().enumerate() {
                dsu.union(i, image);
            }
        }
        if dsu.components() == 1 {
            hits += 1;
        }
    }
    hits as f64 / trials as f64
}

/// Harmonic number `l(d) = 1 + 1/2 + ... + 1/d`.
pub fn harmonic(d: usize) -> f64 {
    (1..=d).map(|k| 1.0 / k as f64).sum()
}

/// Expected number of single-path loop iterations for the naive strategy:
/// the coupon collector number `d * l(d)`.
pub fn coupon_collector_expected(d: usize) -> f64 {
    d as f64 * harmonic(d)
}

/// Simulates the naive strategy that tracks one point around a fresh loop
/// per iteration until all `d` fiber labels have been seen; returns the
/// mean number of iterations over `trials`.
///
/// The image of a fixed point under a fresh uniform permutation is uniform
/// on the fiber, so each iteration draws a uniform label.
pub fn simulate_naive_strategy<R: Rng + ?Sized>(d: usize, trials: usize, rng: &mut R) -> f64 {
    assert!(d >= 1 && trials >= 1);
    let mut total: u64 = 0;
    let mut seen = vec![false; d];
    for _ in 0..trials {
        seen.fill(false);
        let mut remaining = d;
        while remaining > 0 {
            total += 1;
            let label = rng.random_range(0..d);
            if !seen[label] {
                seen[label] = true;
                remaining -= 1;
            }
        }
    }
    total as f64 / trials as f64
}

/// Proof-side quantity `r_d = d (1 - t_d)`; test helper.
#[cfg(test)]
fn proof_r(d: usize, j: u32) -> BigRational {
    let t = transitivity_probability(d, j);
    BigRational::from_integer(BigInt::from(d)) * (BigRational::one() - t)
}

/// Proof-side quantity `c_d = sum_{i=1}^{d-1} C(d,i)^{1-j} i`; test helper.
#[cfg(test)]
fn proof_c(d: usize, j: u32) -> BigRational {
    (1..d)
        .map(|i| binomial_power(d, i, j) * BigRational::from_integer(BigInt::from(i)))
        .fold(BigRational::zero(), |a, v| a + v)
}
