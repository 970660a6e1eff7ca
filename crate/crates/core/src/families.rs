//! Generators for the benchmark families: sparse/dense systems with one
//! fresh parameter per monomial, cyclic roots, Katsura, totally mixed Nash
//! equilibria, and a small chemical reaction network.
//!
//! Solution counts are attached only where an external source pins them
//! (BKK bounds for the sparse-type families, known equilibrium counts for
//! the others); nothing is guessed.

use num_complex::Complex;
use rand::Rng;
use thiserror::Error;

use crate::linalg::CMatrix;
use crate::polysys::{square_system, ParametricSystem, SystemBuilder, SystemError};
use crate::scalar::Real;

#[derive(Debug, Error)]
pub enum FamilyError {
    #[error("equation {index} has an empty monomial support")]
    EmptySupport { index: usize },
    #[error("support exponent vector has length {got}, expected {expected}")]
    SupportShape { expected: usize, got: usize },
    #[error("family size argument out of range: {0}")]
    BadSize(String),
    #[error(transparent)]
    System(#[from] SystemError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FamilyKind {
    Sparse,
    Dense,
    Cyclic,
    Katsura,
    Nash,
    CrnSmall,
}

/// A generated benchmark family: the parametrized system plus metadata.
///
/// `seed_system` is present when the tracked system is a squared-down
/// version of an overdetermined one; seed pairs must then be drawn against
/// the original so they land on the component of interest.
#[derive(Clone, Debug)]
pub struct Family<T> {
    pub kind: FamilyKind,
    pub name: String,
    pub system: ParametricSystem<T>,
    pub seed_system: Option<ParametricSystem<T>>,
    /// Generic solution count, when externally sourced.
    pub count: Option<usize>,
    /// Where the count comes from (`"bkk-bound"`, `"bezout-bound"`, ...).
    pub count_source: Option<&'static str>,
    /// Squaring matrix, when the system was squared down.
    pub squaring: Option<CMatrix<T>>,
}

impl<T> Family<T> {
    fn plain(kind: FamilyKind, name: String, system: ParametricSystem<T>) -> Self {
        Family {
            kind,
            name,
            system,
            seed_system: None,
            count: None,
            count_source: None,
            squaring: None,
        }
    }

    /// System to draw seed pairs against.
    pub fn seeding_system(&self) -> &ParametricSystem<T> {
        self.seed_system.as_ref().unwrap_or(&self.system)
    }
}

/// Square system with the given monomial supports and one fresh parameter
/// per monomial occurrence; `supports[i]` lists the exponent vectors of
/// equation `i`.
pub fn sparse_family<T: Real>(
    supports: &[Vec<Vec<u32>>],
) -> Result<ParametricSystem<T>, FamilyError> {
    let n = supports.len();
    let one = Complex::new(T::one(), T::zero());
    let total: usize = supports.iter().map(Vec::len).sum();
    let mut builder = SystemBuilder::new(n, total);
    let mut param = 0;
    for (i, support) in supports.iter().enumerate() {
        if support.is_empty() {
            return Err(FamilyError::EmptySupport { index: i });
        }
        let eq = builder.begin_equation();
        for exps in support {
            if exps.len() != n {
                return Err(FamilyError::SupportShape {
                    expected: n,
                    got: exps.len(),
                });
            }
            builder.add_parameter(eq, exps.clone(), param, one);
            param += 1;
        }
    }
    Ok(builder.build()?)
}

/// All exponent vectors in `n` variables of total degree at most `degree`.
fn dense_support(n: usize, degree: u32) -> Vec<Vec<u32>> {
    let mut out = Vec::new();
    let mut current = vec![0u32; n];
    fn rec(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, k: usize, left: u32) {
        if k == current.len() {
            out.push(current.clone());
            return;
        }
        for e in 0..=left {
            current[k] = e;
            rec(out, current, k + 1, left - e);
        }
        current[k] = 0;
    }
    rec(&mut out, &mut current, 0, degree);
    out
}

/// Dense system: equation `i` carries every monomial of total degree at
/// most `degrees[i]`, each with its own parameter. The generic solution
/// count is the Bezout number, the product of the degrees.
pub fn dense_family<T: Real>(degrees: &[u32]) -> Result<Family<T>, FamilyError> {
    if degrees.is_empty() || degrees.iter().any(|&d| d == 0) {
        return Err(FamilyError::BadSize(
            "dense family needs positive degrees".into(),
        ));
    }
    let n = degrees.len();
    let supports: Vec<Vec<Vec<u32>>> = degrees.iter().map(|&d| dense_support(n, d)).collect();
    let system = sparse_family(&supports)?;
    let count = degrees.iter().map(|&d| d as usize).product();
    let name = format!(
        "dense:{}",
        degrees
            .iter()
            .map(u32::to_string)
            .collect::<Vec<_>>()
            .join(",")
    );
    Ok(Family {
        count: Some(count),
        count_source: Some("bezout-bound"),
        ..Family::plain(FamilyKind::Dense, name, system)
    })
}

/// Cyclic `n`-roots support with every monomial coefficient parametrized,
/// including the slot of the trailing constant.
///
/// Equation `i` (for `i = 1..n-1`) sums the `n` cyclically consecutive
/// degree-`i` products; the last equation is the full product plus a
/// constant.
pub fn cyclic_family<T: Real>(n: usize) -> Result<Family<T>, FamilyError> {
    if n < 3 {
        return Err(FamilyError::BadSize(format!("cyclic needs n >= 3, got {n}")));
    }
    let mut supports: Vec<Vec<Vec<u32>>> = Vec::with_capacity(n);
    for i in 1..n {
        let mut support = Vec::with_capacity(n);
        for j in 0..n {
            let mut exps = vec![0u32; n];
            for k in j..j + i {
                exps[k % n] += 1;
            }
            support.push(exps);
        }
        supports.push(support);
    }
    supports.push(vec![vec![1u32; n], vec![0u32; n]]);
    let system = sparse_family(&supports)?;
    let (count, count_source) = match n {
        7 => (Some(924), Some("bkk-bound")),
        10 => (Some(35940), Some("bkk-bound")),
        11 => (Some(184756), Some("bkk-bound")),
        _ => (None, None),
    };
    Ok(Family {
        count,
        count_source,
        ..Family::plain(FamilyKind::Cyclic, format!("cyclic:{n}"), system)
    })
}

/// Katsura-type supports in `n` variables: `n - 1` quadratic convolution
/// equations plus one affine equation, all coefficients parametrized.
pub fn katsura_family<T: Real>(n: usize) -> Result<Family<T>, FamilyError> {
    if n < 2 {
        return Err(FamilyError::BadSize(format!(
            "katsura needs n >= 2, got {n}"
        )));
    }
    let m = (n - 1) as i64;
    let mut supports: Vec<Vec<Vec<u32>>> = Vec::with_capacity(n);
    for k in 0..m {
        let mut support: Vec<Vec<u32>> = Vec::new();
        for i in -m..=m {
            let j = k - i;
            if j.unsigned_abs() > m as u64 {
                continue;
            }
            let mut exps = vec![0u32; n];
            exps[i.unsigned_abs() as usize] += 1;
            exps[j.unsigned_abs() as usize] += 1;
            if !support.contains(&exps) {
                support.push(exps);
            }
        }
        let mut linear = vec![0u32; n];
        linear[k as usize] = 1;
        if !support.contains(&linear) {
            support.push(linear);
        }
        supports.push(support);
    }
    let mut affine: Vec<Vec<u32>> = (0..n)
        .map(|k| {
            let mut exps = vec![0u32; n];
            exps[k] = 1;
            exps
        })
        .collect();
    affine.push(vec![0u32; n]);
    supports.push(affine);
    let system = sparse_family(&supports)?;
    let (count, count_source) = match n {
        5 => (Some(12), Some("bkk-bound")),
        6 => (Some(30), Some("bkk-bound")),
        7 => (Some(54), Some("bkk-bound")),
        8 => (Some(126), Some("bkk-bound")),
        9 => (Some(240), Some("bkk-bound")),
        10 => (Some(504), Some("bkk-bound")),
        _ => (None, None),
    };
    Ok(Family {
        count,
        count_source,
        ..Family::plain(FamilyKind::Katsura, format!("katsura:{n}"), system)
    })
}

/// Totally mixed Nash equilibrium system for `players` players with
/// `options` options each.
///
/// Player `i`'s expected payoff for option `j` is a multilinear form in the
/// other players' mixed strategies with one payoff parameter per pure
/// strategy profile. The last probability of each player is eliminated via
/// the simplex condition and payoffs are equated option-against-first,
/// giving a square system of `players * (options - 1)` equations.
pub fn nash_family<T: Real>(players: usize, options: usize) -> Result<Family<T>, FamilyError> {
    if players < 2 || options < 2 {
        return Err(FamilyError::BadSize(format!(
            "nash needs players >= 2 and options >= 2, got {players}x{options}"
        )));
    }
    let n_vars = players * (options - 1);
    let n_params = players * options.pow(players as u32);
    // Variable index of probability k (k < options - 1) of player i.
    let var = |i: usize, k: usize| i * (options - 1) + k;
    // Parameter index of payoff a^{(i)}_{profile}.
    let param = |i: usize, profile: &[usize]| {
        let mut idx = 0;
        for &k in profile {
            idx = idx * options + k;
        }
        i * options.pow(players as u32) + idx
    };

    // Expansion of the product of the other players' probability factors:
    // a list of (exponent vector, sign) monomials.
    let expand_product = |others: &[usize], choices: &[usize]| {
        let mut monomials: Vec<(Vec<u32>, f64)> = vec![(vec![0u32; n_vars], 1.0)];
        for (&l, &k) in others.iter().zip(choices) {
            if k < options - 1 {
                for (exps, _) in &mut monomials {
                    exps[var(l, k)] += 1;
                }
            } else {
                // Last option: 1 - sum of the player's free probabilities.
                let mut next = Vec::with_capacity(monomials.len() * options);
                for (exps, sign) in &monomials {
                    next.push((exps.clone(), *sign));
                    for kk in 0..options - 1 {
                        let mut e = exps.clone();
                        e[var(l, kk)] += 1;
                        next.push((e, -sign));
                    }
                }
                monomials = next;
            }
        }
        monomials
    };

    // All option tuples of the other players.
    let mut tuples: Vec<Vec<usize>> = vec![Vec::new()];
    for _ in 0..players - 1 {
        let mut next = Vec::with_capacity(tuples.len() * options);
        for t in &tuples {
            for k in 0..options {
                let mut v = t.clone();
                v.push(k);
                next.push(v);
            }
        }
        tuples = next;
    }

    let mut builder = SystemBuilder::new(n_vars, n_params);
    for i in 0..players {
        let others: Vec<usize> = (0..players).filter(|&l| l != i).collect();
        for j in 1..options {
            let eq = builder.begin_equation();
            // P_0^{(i)} - P_j^{(i)} = 0.
            for (option_j, sign) in [(0usize, 1.0f64), (j, -1.0)] {
                for choices in &tuples {
                    let mut profile = vec![0usize; players];
                    profile[i] = option_j;
                    for (slot, &l) in others.iter().enumerate() {
                        profile[l] = choices[slot];
                    }
                    let a = param(i, &profile);
                    for (exps, mono_sign) in expand_product(&others, choices) {
                        builder.add_parameter(
                            eq,
                            exps,
                            a,
                            Complex::new(T::of(sign * mono_sign), T::zero()),
                        );
                    }
                }
            }
        }
    }
    let system = builder.build()?;
    let (count, count_source) = if players == 3 && options == 3 {
        (Some(10), Some("bkk-bound"))
    } else {
        (None, None)
    };
    Ok(Family {
        count,
        count_source,
        ..Family::plain(FamilyKind::Nash, format!("nash:{players}x{options}"), system)
    })
}

/// Small mass-action reaction network: five steady-state equations and two
/// conservation equations in five species concentrations, with the six rate
/// constants and two conserved totals as parameters, squared down to 5x5.
///
/// Seed pairs must be drawn against the original overdetermined system
/// (see [`Family::seeding_system`]).
pub fn crn_small<T: Real, R: Rng + ?Sized>(rng: &mut R) -> Result<Family<T>, FamilyError> {
    // Species x_A..x_E = variables 0..4; parameters k1..k6 = 0..5, c1 = 6,
    // c2 = 7.
    let (xa, xb, xc, xd, xe) = (0usize, 1usize, 2usize, 3usize, 4usize);
    let (k1, k2, k3, k4, k5, k6, c1, c2) = (0usize, 1, 2, 3, 4, 5, 6, 7);
    let e = |pairs: &[(usize, u32)]| {
        let mut exps = vec![0u32; 5];
        for &(v, p) in pairs {
            exps[v] = p;
        }
        exps
    };
    let mut b = SystemBuilder::new(5, 8);
    let cc = |v: f64| Complex::new(T::of(v), T::zero());

    // d x_A / dt
    let eq = b.begin_equation();
    b.add_parameter(eq, e(&[(xb, 2)]), k1, cc(1.0));
    b.add_parameter(eq, e(&[(xa, 1)]), k2, cc(-1.0));
    b.add_parameter(eq, e(&[(xa, 1), (xc, 1)]), k3, cc(-1.0));
    b.add_parameter(eq, e(&[(xd, 1)]), k4, cc(1.0));
    b.add_parameter(eq, e(&[(xb, 1), (xe, 1)]), k5, cc(1.0));
    // d x_B / dt
    let eq = b.begin_equation();
    b.add_parameter(eq, e(&[(xa, 1)]), k2, cc(2.0));
    b.add_parameter(eq, e(&[(xb, 2)]), k1, cc(-2.0));
    b.add_parameter(eq, e(&[(xd, 1)]), k6, cc(1.0));
    b.add_parameter(eq, e(&[(xb, 1), (xe, 1)]), k5, cc(-1.0));
    // d x_C / dt
    let eq = b.begin_equation();
    b.add_parameter(eq, e(&[(xa, 1), (xc, 1)]), k3, cc(-1.0));
    b.add_parameter(eq, e(&[(xd, 1)]), k4, cc(1.0));
    b.add_parameter(eq, e(&[(xb, 1), (xe, 1)]), k5, cc(1.0));
    // d x_D / dt
    let eq = b.begin_equation();
    b.add_parameter(eq, e(&[(xa, 1), (xc, 1)]), k3, cc(1.0));
    b.add_parameter(eq, e(&[(xd, 1)]), k4, cc(-1.0));
    b.add_parameter(eq, e(&[(xd, 1)]), k6, cc(-1.0));
    // d x_E / dt
    let eq = b.begin_equation();
    b.add_parameter(eq, e(&[(xb, 1), (xe, 1)]), k5, cc(-1.0));
    b.add_parameter(eq, e(&[(xd, 1)]), k6, cc(1.0));
    // Conservation: 2 x_A + x_B - x_C + x_D = c1.
    let eq = b.begin_equation();
    b.add_constant(eq, e(&[(xa, 1)]), cc(2.0));
    b.add_constant(eq, e(&[(xb, 1)]), cc(1.0));
    b.add_constant(eq, e(&[(xc, 1)]), cc(-1.0));
    b.add_constant(eq, e(&[(xd, 1)]), cc(1.0));
    b.add_parameter(eq, e(&[]), c1, cc(-1.0));
    // Conservation: -2 x_A - x_B + 2 x_C + x_E = c2.
    let eq = b.begin_equation();
    b.add_constant(eq, e(&[(xa, 1)]), cc(-2.0));
    b.add_constant(eq, e(&[(xb, 1)]), cc(-1.0));
    b.add_constant(eq, e(&[(xc, 1)]), cc(2.0));
    b.add_constant(eq, e(&[(xe, 1)]), cc(1.0));
    b.add_parameter(eq, e(&[]), c2, cc(-1.0));

    let original = b.build()?;
    let (squared, mix) = square_system(&original, rng)?;
    Ok(Family {
        kind: FamilyKind::CrnSmall,
        name: "crn-small".into(),
        system: squared,
        seed_system: Some(original),
        count: Some(4),
        count_source: Some("known-count"),
        squaring: mix,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polysys::create_seed_pair;
    use crate::rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn sparse_linear_pair() {
        // Supports {x, 1} and {y, 1}: a 2x2 affine system, one solution.
        let supports = vec![
            vec![vec![1, 0], vec![0, 0]],
            vec![vec![0, 1], vec![0, 0]],
        ];
        let f = sparse_family::<f64>(&supports).unwrap();
        assert_eq!(f.num_vars(), 2);
        assert_eq!(f.num_params(), 4);
    }

    #[test]
    fn sparse_parameter_count_is_total_support_size() {
        let supports = vec![
            vec![vec![2, 0], vec![1, 1], vec![0, 0]],
            vec![vec![0, 2], vec![0, 1]],
        ];
        let f = sparse_family::<f64>(&supports).unwrap();
        assert_eq!(f.num_params(), 5);
    }

    #[test]
    fn sparse_rejects_empty_support() {
        let supports = vec![vec![vec![1, 0]], vec![]];
        assert!(matches!(
            sparse_family::<f64>(&supports),
            Err(FamilyError::EmptySupport { index: 1 })
        ));
    }

    #[test]
    fn univariate_dense_has_expected_support() {
        let fam = dense_family::<f64>(&[30]).unwrap();
        assert_eq!(fam.system.num_params(), 31);
        assert_eq!(fam.count, Some(30));
    }

    #[test]
    fn dense_quadric_pair_bezout() {
        let fam = dense_family::<f64>(&[2, 2]).unwrap();
        assert_eq!(fam.count, Some(4));
        // 6 monomials of degree <= 2 in two variables, per equation.
        assert_eq!(fam.system.num_params(), 12);
    }

    #[test]
    fn cyclic_equation_shapes() {
        let fam = cyclic_family::<f64>(3).unwrap();
        let eqs = fam.system.equations();
        assert_eq!(eqs.len(), 3);
        assert_eq!(eqs[0].terms.len(), 3);
        assert_eq!(eqs[1].terms.len(), 3);
        assert_eq!(eqs[2].terms.len(), 2);
        // Degree-2 equation of cyclic-3 carries the consecutive products.
        let mut quads: Vec<Vec<u32>> = eqs[1].terms.iter().map(|t| t.exponents.clone()).collect();
        quads.sort();
        assert_eq!(quads, vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]]);
    }

    #[test]
    fn cyclic_monomial_counts() {
        let fam = cyclic_family::<f64>(7).unwrap();
        assert_eq!(fam.count, Some(924));
        for (i, eq) in fam.system.equations().iter().enumerate() {
            let expected = if i < 6 { 7 } else { 2 };
            assert_eq!(eq.terms.len(), expected, "equation {i}");
        }
    }

    #[test]
    fn katsura_counts_and_shape() {
        for (n, count) in [(5usize, 12usize), (8, 126)] {
            let fam = katsura_family::<f64>(n).unwrap();
            assert_eq!(fam.count, Some(count));
            assert_eq!(fam.system.num_equations(), n);
            assert_eq!(fam.system.num_vars(), n);
        }
    }

    #[test]
    fn nash_shape_3x3() {
        let fam = nash_family::<f64>(3, 3).unwrap();
        assert_eq!(fam.system.num_vars(), 6);
        assert_eq!(fam.system.num_equations(), 6);
        assert_eq!(fam.system.num_params(), 81);
        assert_eq!(fam.count, Some(10));
    }

    #[test]
    fn nash_shape_2x2() {
        let fam = nash_family::<f64>(2, 2).unwrap();
        assert_eq!(fam.system.num_vars(), 2);
        assert_eq!(fam.system.num_equations(), 2);
    }

    #[test]
    fn nash_multilinearity() {
        // Each equation has degree <= 1 in each other player's block.
        let fam = nash_family::<f64>(3, 3).unwrap();
        for eq in fam.system.equations() {
            for term in &eq.terms {
                for player in 0..3 {
                    let block_degree: u32 = term.exponents[player * 2..(player + 1) * 2]
                        .iter()
                        .sum();
                    assert!(block_degree <= 1);
                }
            }
        }
    }

    #[test]
    fn crn_steady_state_rank_is_three() {
        // The two conservation laws force two linear dependencies among the
        // five steady-state rows of the parameter Jacobian.
        let fam = crn_small::<f64, _>(&mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        let original = fam.seed_system.as_ref().unwrap();
        let mut rng = rng::stream(5, rng::STREAM_SEED);
        let x = crate::scalar::random_unit_box_vec(&mut rng, 5);
        let a = original.jacobian_p(&x).unwrap();
        // Rows 0..5 are the steady-state equations; columns 0..6 the rates.
        let steady = crate::linalg::CMatrix::from_rows(
            (0..5).map(|i| a.row(i).to_vec()).collect::<Vec<_>>(),
        );
        let zero = vec![num_complex::Complex::new(0.0, 0.0); 5];
        let sol = crate::linalg::solve_general(&steady, &zero).unwrap();
        assert_eq!(sol.rank, 3);
    }

    #[test]
    fn crn_parameters_enter_affinely() {
        let fam = crn_small::<f64, _>(&mut ChaCha8Rng::seed_from_u64(3)).unwrap();
        let f = &fam.system;
        let mut rng = rng::stream(11, rng::STREAM_SEED);
        let x = crate::scalar::random_unit_box_vec(&mut rng, 5);
        let a1 = f.jacobian_p(&x).unwrap();
        let a2 = f.jacobian_p(&x).unwrap();
        assert_eq!(a1, a2);
        // And the affine decomposition holds for random p.
        let p = crate::scalar::random_unit_box_vec(&mut rng, 8);
        let lhs = f.evaluate(&p, &x).unwrap();
        let b = f.constant_part(&x).unwrap();
        let rhs: Vec<_> = a1.mul_vec(&p).iter().zip(&b).map(|(u, v)| u + v).collect();
        assert!(crate::scalar::inf_dist(&lhs, &rhs) < 1e-12);
    }

    #[test]
    fn squared_crn_jacobian_is_regular_at_the_seed() {
        let fam = crn_small::<f64, _>(&mut ChaCha8Rng::seed_from_u64(6)).unwrap();
        let mut rng = rng::stream(17, rng::STREAM_SEED);
        for _ in 0..20 {
            let (p0, x0) = create_seed_pair(fam.seeding_system(), &mut rng).unwrap();
            let jac = fam.system.jacobian_x(&p0, &x0).unwrap();
            let rhs = vec![num_complex::Complex::new(1.0, 0.0); 5];
            assert!(
                crate::linalg::lu_solve(&jac, &rhs).is_ok(),
                "squared system Jacobian singular at a generic seed"
            );
        }
    }

    #[test]
    fn every_family_seeds_cleanly() {
        let mut graph_rng = ChaCha8Rng::seed_from_u64(8);
        let families: Vec<Family<f64>> = vec![
            dense_family(&[2, 2]).unwrap(),
            cyclic_family(5).unwrap(),
            katsura_family(5).unwrap(),
            nash_family(3, 3).unwrap(),
            crn_small(&mut graph_rng).unwrap(),
        ];
        let mut rng = rng::stream(13, rng::STREAM_SEED);
        for fam in &families {
            for _ in 0..100 {
                let seeding = fam.seeding_system();
                let (p0, x0) = create_seed_pair(seeding, &mut rng)
                    .unwrap_or_else(|e| panic!("{} failed to seed: {e}", fam.name));
                let r = crate::scalar::inf_norm(&fam.system.evaluate(&p0, &x0).unwrap());
                assert!(r < 1e-10, "{}: residual {r}", fam.name);
            }
        }
    }
}
