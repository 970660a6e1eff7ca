//! Polynomial families with affine-linear parametric coefficients.
//!
//! A family `F_p` is a list of polynomials in `x` whose monomial coefficients
//! are forms `c_0 + sum_k c_k p_k` in the parameters. This module evaluates
//! and differentiates such families, specializes them at parameter points,
//! builds the scaled linear segment homotopies between two specializations,
//! and produces seed pairs `(p_0, x_0)` by solving the parameter-linear
//! system `F_p(x_0) = 0`.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex;
use rand::Rng;
use thiserror::Error;

use crate::linalg::{solve_general, CMatrix, LinalgError};
use crate::scalar::{inf_norm, random_unit_box, random_unit_box_vec, Real};

#[derive(Debug, Error)]
pub enum SystemError {
    #[error("dimension mismatch: expected {expected} {what}, got {got}")]
    Dimension {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("term references parameter {index} but the system has {num_params} parameters")]
    ParamIndex { index: usize, num_params: usize },
    #[error("system of {num_equations} equations in {num_vars} variables is not square")]
    NotSquare {
        num_equations: usize,
        num_vars: usize,
    },
    #[error("gamma factors must be nonzero")]
    ZeroGamma,
    #[error("cannot square {num_equations} equations down to {num_vars} variables")]
    TooFewEquations {
        num_equations: usize,
        num_vars: usize,
    },
}

#[derive(Debug, Error)]
pub enum SeedError {
    #[error("parameter-linear system F_p(x0) = 0 is inconsistent; family cannot be seeded")]
    Inconsistent,
    #[error("seed pair residual {residual} exceeds bound {bound}")]
    Residual { residual: f64, bound: f64 },
}

/// Coefficient of one monomial: `constant + sum_k linear[k] * p_k`,
/// with the linear part stored sparsely by parameter index.
#[derive(Clone, Debug, PartialEq)]
pub struct CoeffForm<T> {
    pub constant: Complex<T>,
    pub linear: Vec<(usize, Complex<T>)>,
}

impl<T: Real> CoeffForm<T> {
    pub fn constant(c: Complex<T>) -> Self {
        CoeffForm {
            constant: c,
            linear: Vec::new(),
        }
    }

    pub fn parameter(index: usize, scale: Complex<T>) -> Self {
        CoeffForm {
            constant: Complex::new(T::zero(), T::zero()),
            linear: vec![(index, scale)],
        }
    }

    fn eval(&self, p: &[Complex<T>]) -> Complex<T> {
        self.linear
            .iter()
            .fold(self.constant, |acc, &(k, c)| acc + c * p[k])
    }

    fn scaled(&self, g: Complex<T>) -> Self {
        CoeffForm {
            constant: self.constant * g,
            linear: self.linear.iter().map(|&(k, c)| (k, c * g)).collect(),
        }
    }
}

/// One monomial with its coefficient form; `exponents[k]` is the power of
/// variable `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct Term<T> {
    pub exponents: Vec<u32>,
    pub coeff: CoeffForm<T>,
}

#[derive(Clone, Debug, PartialEq, Default)]
pub struct Polynomial<T> {
    pub terms: Vec<Term<T>>,
}

/// A family of `N` polynomials in `n` variables, affine-linear in `m`
/// parameters. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct ParametricSystem<T> {
    num_vars: usize,
    num_params: usize,
    equations: Vec<Polynomial<T>>,
    /// Per-variable maximum exponent, for the evaluation power cache.
    max_degrees: Vec<u32>,
}

impl<T: Real> ParametricSystem<T> {
    pub fn new(
        num_vars: usize,
        num_params: usize,
        equations: Vec<Polynomial<T>>,
    ) -> Result<Self, SystemError> {
        let mut max_degrees = vec![0u32; num_vars];
        for poly in &equations {
            for term in &poly.terms {
                if term.exponents.len() != num_vars {
                    return Err(SystemError::Dimension {
                        what: "exponents",
                        expected: num_vars,
                        got: term.exponents.len(),
                    });
                }
                for (k, &e) in term.exponents.iter().enumerate() {
                    max_degrees[k] = max_degrees[k].max(e);
                }
                for &(k, _) in &term.coeff.linear {
                    if k >= num_params {
                        return Err(SystemError::ParamIndex {
                            index: k,
                            num_params,
                        });
                    }
                }
            }
        }
        Ok(ParametricSystem {
            num_vars,
            num_params,
            equations,
            max_degrees,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_params(&self) -> usize {
        self.num_params
    }

    pub fn num_equations(&self) -> usize {
        self.equations.len()
    }

    pub fn equations(&self) -> &[Polynomial<T>] {
        &self.equations
    }

    fn check_args(&self, p: &[Complex<T>], x: &[Complex<T>]) -> Result<(), SystemError> {
        if p.len() != self.num_params {
            return Err(SystemError::Dimension {
                what: "parameters",
                expected: self.num_params,
                got: p.len(),
            });
        }
        if x.len() != self.num_vars {
            return Err(SystemError::Dimension {
                what: "variables",
                expected: self.num_vars,
                got: x.len(),
            });
        }
        Ok(())
    }

    fn power_table(&self, x: &[Complex<T>]) -> Vec<Vec<Complex<T>>> {
        let one = Complex::new(T::one(), T::zero());
        x.iter()
            .zip(&self.max_degrees)
            .map(|(&xi, &d)| {
                let mut pows = Vec::with_capacity(d as usize + 1);
                pows.push(one);
                for e in 1..=d as usize {
                    let prev = pows[e - 1];
                    pows.push(prev * xi);
                }
                pows
            })
            .collect()
    }

    fn monomial(pows: &[Vec<Complex<T>>], exps: &[u32]) -> Complex<T> {
        let mut acc = Complex::new(T::one(), T::zero());
        for (k, &e) in exps.iter().enumerate() {
            if e > 0 {
                acc = acc * pows[k][e as usize];
            }
        }
        acc
    }

    /// Evaluates `F_p(x)` componentwise as the exact sum of terms.
    pub fn evaluate(
        &self,
        p: &[Complex<T>],
        x: &[Complex<T>],
    ) -> Result<Vec<Complex<T>>, SystemError> {
        self.check_args(p, x)?;
        let pows = self.power_table(x);
        Ok(self
            .equations
            .iter()
            .map(|poly| {
                poly.terms
                    .iter()
                    .map(|t| t.coeff.eval(p) * Self::monomial(&pows, &t.exponents))
                    .fold(Complex::new(T::zero(), T::zero()), |a, v| a + v)
            })
            .collect())
    }

    /// Jacobian with respect to the variables, by term-by-term symbolic
    /// differentiation.
    pub fn jacobian_x(
        &self,
        p: &[Complex<T>],
        x: &[Complex<T>],
    ) -> Result<CMatrix<T>, SystemError> {
        self.check_args(p, x)?;
        let pows = self.power_table(x);
        let mut jac = CMatrix::zeros(self.equations.len(), self.num_vars);
        for (i, poly) in self.equations.iter().enumerate() {
            for t in &poly.terms {
                let coeff = t.coeff.eval(p);
                for (k, &e) in t.exponents.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    let mut prod = Complex::new(T::of(e as f64), T::zero()) * coeff;
                    for (l, &el) in t.exponents.iter().enumerate() {
                        let pow = if l == k { el - 1 } else { el };
                        if pow > 0 {
                            prod = prod * pows[l][pow as usize];
                        }
                    }
                    jac[(i, k)] = jac[(i, k)] + prod;
                }
            }
        }
        Ok(jac)
    }

    /// The constant matrix `A(x)` of the affine-linear map `p -> F_p(x)`.
    ///
    /// Together with [`Self::constant_part`] it satisfies
    /// `F_p(x) = A(x) p + b(x)` for every `p`; the map does not depend on
    /// any particular parameter value.
    pub fn jacobian_p(&self, x: &[Complex<T>]) -> Result<CMatrix<T>, SystemError> {
        if x.len() != self.num_vars {
            return Err(SystemError::Dimension {
                what: "variables",
                expected: self.num_vars,
                got: x.len(),
            });
        }
        let pows = self.power_table(x);
        let mut jac = CMatrix::zeros(self.equations.len(), self.num_params);
        for (i, poly) in self.equations.iter().enumerate() {
            for t in &poly.terms {
                let mono = Self::monomial(&pows, &t.exponents);
                for &(k, c) in &t.coeff.linear {
                    jac[(i, k)] = jac[(i, k)] + c * mono;
                }
            }
        }
        Ok(jac)
    }

    /// The constant part `b(x) = F_0(x)` of the map `p -> F_p(x)`.
    pub fn constant_part(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>, SystemError> {
        if x.len() != self.num_vars {
            return Err(SystemError::Dimension {
                what: "variables",
                expected: self.num_vars,
                got: x.len(),
            });
        }
        let pows = self.power_table(x);
        Ok(self
            .equations
            .iter()
            .map(|poly| {
                poly.terms
                    .iter()
                    .map(|t| t.coeff.constant * Self::monomial(&pows, &t.exponents))
                    .fold(Complex::new(T::zero(), T::zero()), |a, v| a + v)
            })
            .collect())
    }

    /// The same family with every equation multiplied by `g`.
    pub fn scaled(&self, g: Complex<T>) -> Self {
        ParametricSystem {
            num_vars: self.num_vars,
            num_params: self.num_params,
            equations: self
                .equations
                .iter()
                .map(|poly| Polynomial {
                    terms: poly
                        .terms
                        .iter()
                        .map(|t| Term {
                            exponents: t.exponents.clone(),
                            coeff: t.coeff.scaled(g),
                        })
                        .collect(),
                })
                .collect(),
            max_degrees: self.max_degrees.clone(),
        }
    }
}

/// Incremental builder that merges coefficient contributions landing on the
/// same monomial. Exact zero coefficients are dropped.
pub struct SystemBuilder<T> {
    num_vars: usize,
    num_params: usize,
    equations: Vec<BTreeMap<Vec<u32>, (Complex<T>, BTreeMap<usize, Complex<T>>)>>,
}

impl<T: Real> SystemBuilder<T> {
    pub fn new(num_vars: usize, num_params: usize) -> Self {
        SystemBuilder {
            num_vars,
            num_params,
            equations: Vec::new(),
        }
    }

    pub fn begin_equation(&mut self) -> usize {
        self.equations.push(BTreeMap::new());
        self.equations.len() - 1
    }

    pub fn add_constant(&mut self, eq: usize, exponents: Vec<u32>, c: Complex<T>) {
        assert_eq!(exponents.len(), self.num_vars);
        let entry = self.equations[eq]
            .entry(exponents)
            .or_insert_with(|| (Complex::new(T::zero(), T::zero()), BTreeMap::new()));
        entry.0 = entry.0 + c;
    }

    pub fn add_parameter(&mut self, eq: usize, exponents: Vec<u32>, param: usize, c: Complex<T>) {
        assert_eq!(exponents.len(), self.num_vars);
        assert!(param < self.num_params);
        let entry = self.equations[eq]
            .entry(exponents)
            .or_insert_with(|| (Complex::new(T::zero(), T::zero()), BTreeMap::new()));
        let slot = entry
            .1
            .entry(param)
            .or_insert_with(|| Complex::new(T::zero(), T::zero()));
        *slot = *slot + c;
    }

    pub fn build(self) -> Result<ParametricSystem<T>, SystemError> {
        let zero = Complex::new(T::zero(), T::zero());
        let equations = self
            .equations
            .into_iter()
            .map(|terms| Polynomial {
                terms: terms
                    .into_iter()
                    .filter_map(|(exps, (c0, linear))| {
                        let linear: Vec<(usize, Complex<T>)> =
                            linear.into_iter().filter(|&(_, c)| c != zero).collect();
                        if c0 == zero && linear.is_empty() {
                            None
                        } else {
                            Some(Term {
                                exponents: exps,
                                coeff: CoeffForm {
                                    constant: c0,
                                    linear,
                                },
                            })
                        }
                    })
                    .collect(),
            })
            .collect();
        ParametricSystem::new(self.num_vars, self.num_params, equations)
    }
}

/// A [`ParametricSystem`] specialized at one parameter point, with as many
/// equations as variables.
#[derive(Clone, Debug)]
pub struct SquareSystem<T> {
    system: Arc<ParametricSystem<T>>,
    params: Vec<Complex<T>>,
}

impl<T: Real> SquareSystem<T> {
    pub fn new(
        system: Arc<ParametricSystem<T>>,
        params: Vec<Complex<T>>,
    ) -> Result<Self, SystemError> {
        if system.num_equations() != system.num_vars() {
            return Err(SystemError::NotSquare {
                num_equations: system.num_equations(),
                num_vars: system.num_vars(),
            });
        }
        if params.len() != system.num_params() {
            return Err(SystemError::Dimension {
                what: "parameters",
                expected: system.num_params(),
                got: params.len(),
            });
        }
        Ok(SquareSystem { system, params })
    }

    pub fn dim(&self) -> usize {
        self.system.num_vars()
    }

    pub fn params(&self) -> &[Complex<T>] {
        &self.params
    }

    pub fn family(&self) -> &Arc<ParametricSystem<T>> {
        &self.system
    }

    pub fn evaluate(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>, SystemError> {
        self.system.evaluate(&self.params, x)
    }

    pub fn jacobian(&self, x: &[Complex<T>]) -> Result<CMatrix<T>, SystemError> {
        self.system.jacobian_x(&self.params, x)
    }
}

/// Scaled linear segment homotopy
/// `H(t, x) = (1 - t) g1 F_{p1}(x) + t g2 F_{p2}(x)`.
///
/// `H(0, .)` has the zero set of `F_{p1}` and `H(1, .)` that of `F_{p2}`;
/// the scalars only reshuffle which start solution flows to which target.
#[derive(Clone, Debug)]
pub struct Homotopy<T> {
    start: SquareSystem<T>,
    target: SquareSystem<T>,
    gamma1: Complex<T>,
    gamma2: Complex<T>,
}

/// Builds the homotopy between `g1 * F_{p1}` and `g2 * F_{p2}`.
pub fn build_homotopy<T: Real>(
    system: &Arc<ParametricSystem<T>>,
    p1: Vec<Complex<T>>,
    p2: Vec<Complex<T>>,
    gamma1: Complex<T>,
    gamma2: Complex<T>,
) -> Result<Homotopy<T>, SystemError> {
    let zero = Complex::new(T::zero(), T::zero());
    if gamma1 == zero || gamma2 == zero {
        return Err(SystemError::ZeroGamma);
    }
    Ok(Homotopy {
        start: SquareSystem::new(Arc::clone(system), p1)?,
        target: SquareSystem::new(Arc::clone(system), p2)?,
        gamma1,
        gamma2,
    })
}

impl<T: Real> Homotopy<T> {
    pub fn dim(&self) -> usize {
        self.start.dim()
    }

    pub fn start_system(&self) -> &SquareSystem<T> {
        &self.start
    }

    pub fn target_system(&self) -> &SquareSystem<T> {
        &self.target
    }

    /// `H(t, x)`.
    pub fn evaluate(&self, t: T, x: &[Complex<T>]) -> Result<Vec<Complex<T>>, SystemError> {
        let f1 = self.start.evaluate(x)?;
        let f2 = self.target.evaluate(x)?;
        let c1 = self.gamma1 * Complex::new(T::one() - t, T::zero());
        let c2 = self.gamma2 * Complex::new(t, T::zero());
        Ok(f1
            .iter()
            .zip(&f2)
            .map(|(a, b)| c1 * a + c2 * b)
            .collect())
    }

    /// `dH/dx (t, x)`.
    pub fn jacobian_x(&self, t: T, x: &[Complex<T>]) -> Result<CMatrix<T>, SystemError> {
        let j1 = self.start.jacobian(x)?;
        let j2 = self.target.jacobian(x)?;
        let c1 = self.gamma1 * Complex::new(T::one() - t, T::zero());
        let c2 = self.gamma2 * Complex::new(t, T::zero());
        Ok(j1.scale(c1).add_scaled(&j2, c2))
    }

    /// `dH/dt (x) = g2 F_{p2}(x) - g1 F_{p1}(x)`; constant in `t`.
    pub fn dt(&self, x: &[Complex<T>]) -> Result<Vec<Complex<T>>, SystemError> {
        let f1 = self.start.evaluate(x)?;
        let f2 = self.target.evaluate(x)?;
        Ok(f1
            .iter()
            .zip(&f2)
            .map(|(a, b)| self.gamma2 * b - self.gamma1 * a)
            .collect())
    }

    /// The same segment walked backwards: start and target swap roles.
    pub fn reversed(&self) -> Homotopy<T> {
        Homotopy {
            start: self.target.clone(),
            target: self.start.clone(),
            gamma1: self.gamma2,
            gamma2: self.gamma1,
        }
    }
}

/// Draws a seed pair: `x0` uniform in the complex unit box and `p0` a
/// generic solution of the linear system `F_p(x0) = 0`.
///
/// The particular solution is shifted by a random combination of a
/// nullspace basis of `A(x0)`, so repeated calls land on generic points of
/// the solution subspace.
pub fn create_seed_pair<T: Real, R: Rng + ?Sized>(
    system: &ParametricSystem<T>,
    rng: &mut R,
) -> Result<(Vec<Complex<T>>, Vec<Complex<T>>), SeedError> {
    let x0: Vec<Complex<T>> = random_unit_box_vec(rng, system.num_vars());
    let a = system.jacobian_p(&x0).expect("dimensions fixed above");
    let b = system.constant_part(&x0).expect("dimensions fixed above");
    // Row equilibration: high-degree monomials make the rows of [A | b]
    // wildly different in scale, which spoils pivoting and rank decisions.
    // Scaling rows leaves the solution set untouched.
    let mut scaled_a = CMatrix::zeros(a.rows(), a.cols());
    let mut rhs: Vec<Complex<T>> = Vec::with_capacity(b.len());
    for i in 0..a.rows() {
        let row_max = a
            .row(i)
            .iter()
            .map(|z| z.norm())
            .fold(b[i].norm(), |acc, x| acc.max(x));
        let s = if row_max > T::zero() {
            T::one() / row_max
        } else {
            T::one()
        };
        for j in 0..a.cols() {
            scaled_a[(i, j)] = a[(i, j)] * Complex::new(s, T::zero());
        }
        rhs.push(-b[i] * Complex::new(s, T::zero()));
    }
    let sol = match solve_general(&scaled_a, &rhs) {
        Ok(sol) => sol,
        Err(LinalgError::Inconsistent) => return Err(SeedError::Inconsistent),
        Err(e) => unreachable!("solve_general dimension error: {e}"),
    };
    let mut p0 = sol.particular;
    for basis_vec in &sol.nullspace {
        let w: Complex<T> = random_unit_box(rng);
        for (pi, vi) in p0.iter_mut().zip(basis_vec) {
            *pi = *pi + w * *vi;
        }
    }
    let residual = inf_norm(&system.evaluate(&p0, &x0).expect("dimensions fixed above"));
    // Bound relative to the magnitude of the evaluated data: the terms of
    // F_p(x0) can reach |A| * |p|, and no solution evaluates below the
    // roundoff of that sum.
    let bound = T::of(1e-12)
        * (T::one() + inf_norm(&b) + a.max_abs() * (T::one() + inf_norm(&p0)));
    if residual > bound {
        return Err(SeedError::Residual {
            residual: residual.to_f64().unwrap_or(f64::NAN),
            bound: bound.to_f64().unwrap_or(f64::NAN),
        });
    }
    Ok((p0, x0))
}

/// Replaces an overdetermined family (`N > n`) by `n` generic complex linear
/// combinations of its equations; returns the combination matrix alongside.
///
/// A square input passes through unchanged. Every common zero of the input
/// family is a zero of the output family at the same parameters.
pub fn square_system<T: Real, R: Rng + ?Sized>(
    system: &ParametricSystem<T>,
    rng: &mut R,
) -> Result<(ParametricSystem<T>, Option<CMatrix<T>>), SystemError> {
    let (n_eq, n_vars) = (system.num_equations(), system.num_vars());
    if n_eq < n_vars {
        return Err(SystemError::TooFewEquations {
            num_equations: n_eq,
            num_vars: n_vars,
        });
    }
    if n_eq == n_vars {
        return Ok((system.clone(), None));
    }
    let rows: Vec<Vec<Complex<T>>> = (0..n_vars)
        .map(|_| random_unit_box_vec(rng, n_eq))
        .collect();
    let mix = CMatrix::from_rows(rows);
    let mut builder = SystemBuilder::new(n_vars, system.num_params());
    for i in 0..n_vars {
        let eq = builder.begin_equation();
        for (j, poly) in system.equations().iter().enumerate() {
            let w = mix[(i, j)];
            for term in &poly.terms {
                if term.coeff.constant != Complex::new(T::zero(), T::zero()) {
                    builder.add_constant(eq, term.exponents.clone(), term.coeff.constant * w);
                }
                for &(k, c) in &term.coeff.linear {
                    builder.add_parameter(eq, term.exponents.clone(), k, c * w);
                }
            }
        }
    }
    Ok((builder.build()?, Some(mix)))
}

mod json {
    //! JSON wire format for systems over `f64`. Complex numbers serialize
    //! as `[re, im]` pairs; the parameter-linear part of a coefficient is a
    //! map from parameter index (as a decimal string) to such a pair.

    use std::collections::BTreeMap;

    use num_complex::Complex;
    use serde::{Deserialize, Serialize};

    use super::{CoeffForm, ParametricSystem, Polynomial, SystemError, Term};

    #[derive(Serialize, Deserialize)]
    struct TermRepr {
        exps: Vec<u32>,
        c0: [f64; 2],
        #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
        cp: BTreeMap<String, [f64; 2]>,
    }

    #[derive(Serialize, Deserialize)]
    struct SystemRepr {
        vars: usize,
        params: usize,
        equations: Vec<Vec<TermRepr>>,
    }

    #[derive(Debug, thiserror::Error)]
    pub enum JsonError {
        #[error("malformed system JSON: {0}")]
        Parse(#[from] serde_json::Error),
        #[error("invalid parameter key {0:?}: expected a decimal index")]
        BadKey(String),
        #[error(transparent)]
        System(#[from] SystemError),
    }

    impl ParametricSystem<f64> {
        pub fn to_json(&self) -> String {
            let repr = SystemRepr {
                vars: self.num_vars,
                params: self.num_params,
                equations: self
                    .equations
                    .iter()
                    .map(|poly| {
                        poly.terms
                            .iter()
                            .map(|t| TermRepr {
                                exps: t.exponents.clone(),
                                c0: [t.coeff.constant.re, t.coeff.constant.im],
                                cp: t
                                    .coeff
                                    .linear
                                    .iter()
                                    .map(|&(k, c)| (k.to_string(), [c.re, c.im]))
                                    .collect(),
                            })
                            .collect()
                    })
                    .collect(),
            };
            serde_json::to_string_pretty(&repr).expect("system serialization cannot fail")
        }

        pub fn from_json(text: &str) -> Result<Self, JsonError> {
            let repr: SystemRepr = serde_json::from_str(text)?;
            let equations = repr
                .equations
                .into_iter()
                .map(|terms| {
                    let terms = terms
                        .into_iter()
                        .map(|t| {
                            let linear = t
                                .cp
                                .into_iter()
                                .map(|(key, c)| {
                                    let k: usize =
                                        key.parse().map_err(|_| JsonError::BadKey(key.clone()))?;
                                    Ok((k, Complex::new(c[0], c[1])))
                                })
                                .collect::<Result<Vec<_>, JsonError>>()?;
                            let mut linear = linear;
                            linear.sort_by_key(|&(k, _)| k);
                            Ok(Term {
                                exponents: t.exps,
                                coeff: CoeffForm {
                                    constant: Complex::new(t.c0[0], t.c0[1]),
                                    linear,
                                },
                            })
                        })
                        .collect::<Result<Vec<_>, JsonError>>()?;
                    Ok(Polynomial { terms })
                })
                .collect::<Result<Vec<_>, JsonError>>()?;
            Ok(ParametricSystem::new(repr.vars, repr.params, equations)?)
        }
    }
}

pub use json::JsonError;
