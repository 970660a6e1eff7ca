//! Dense complex linear algebra: LU with partial pivoting and a general
//! (possibly rank-deficient) solver used for seeding.

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::{inf_norm, Real};

/// Relative pivot threshold below which a matrix is declared singular.
pub const SINGULAR_PIVOT_REL: f64 = 1e-14;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum LinalgError {
    #[error("matrix is singular (pivot below threshold at step {step})")]
    Singular { step: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("linear system is inconsistent")]
    Inconsistent,
}

/// Dense row-major complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> CMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex::new(T::zero(), T::zero()); rows * cols],
        }
    }

    /// Builds a matrix from rows; all rows must have equal length.
    pub fn from_rows(rows: Vec<Vec<Complex<T>>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        CMatrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex::new(T::one(), T::zero());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, i: usize) -> &[Complex<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Max entry modulus.
    pub fn max_abs(&self) -> T {
        self.data
            .iter()
            .map(|z| z.norm())
            .fold(T::zero(), |a, x| a.max(x))
    }

    pub fn mul_vec(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols, "matrix-vector dimension mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .map(|(a, x)| a * x)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, t| acc + t)
            })
            .collect()
    }

    /// Entrywise `self + c * other`.
    pub fn add_scaled(&self, other: &CMatrix<T>, c: Complex<T>) -> CMatrix<T> {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + c * b)
                .collect(),
        }
    }

    pub fn scale(&self, c: Complex<T>) -> CMatrix<T> {
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * c).collect(),
        }
    }
}

impl<T: Real> std::ops::Index<(usize, usize)> for CMatrix<T> {
    type Output = Complex<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Real> std::ops::IndexMut<(usize, usize)> for CMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        &mut self.data[i * self.cols + j]
    }
}

/// Solves `A x = b` by LU decomposition with partial pivoting.
///
/// Signals [`LinalgError::Singular`] when a pivot modulus drops below
/// `1e-14 * max|a_ij|`, rather than dividing through by it.
pub fn lu_solve<T: Real>(a: &CMatrix<T>, b: &[Complex<T>]) -> Result<Vec<Complex<T>>, LinalgError> {
    let n = a.rows();
    if a.cols() != n {
        return Err(LinalgError::Dimension(format!(
            "expected square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if b.len() != n {
        return Err(LinalgError::Dimension(format!(
            "rhs length {} does not match matrix size {n}",
            b.len()
        )));
    }
    let mut lu = a.clone();
    let mut x = b.to_vec();
    let threshold = T::of(SINGULAR_PIVOT_REL) * a.max_abs();

    for k in 0..n {
        // Partial pivoting on column k.
        let mut piv = k;
        let mut piv_mag = lu[(k, k)].norm();
        for i in k + 1..n {
            let mag = lu[(i, k)].norm();
            if mag > piv_mag {
                piv_mag = mag;
                piv = i;
            }
        }
        if piv_mag <= threshold {
            return Err(LinalgError::Singular { step: k });
        }
        if piv != k {
            for j in 0..n {
                let tmp = lu[(k, j)];
                lu[(k, j)] = lu[(piv, j)];
                lu[(piv, j)] = tmp;
            }
            x.swap(k, piv);
        }
        let inv_pivot = Complex::new(T::one(), T::zero()) / lu[(k, k)];
        for i in k + 1..n {
            let mult = lu[(i, k)] * inv_pivot;
            if mult.norm() > T::zero() {
                for j in k + 1..n {
                    let adj = mult * lu[(k, j)];
                    lu[(i, j)] = lu[(i, j)] - adj;
                }
                x[i] = x[i] - mult * x[k];
            }
            lu[(i, k)] = mult;
        }
    }
    // Back substitution.
    for k in (0..n).rev() {
        for j in k + 1..n {
            let adj = lu[(k, j)] * x[j];
            x[k] = x[k] - adj;
        }
        x[k] = x[k] / lu[(k, k)];
    }
    Ok(x)
}

/// Solution of a general rectangular system `A x = b`: one particular
/// solution plus a basis of the nullspace of `A`.
#[derive(Clone, Debug)]
pub struct GeneralSolution<T> {
    pub particular: Vec<Complex<T>>,
    pub nullspace: Vec<Vec<Complex<T>>>,
    pub rank: usize,
}

/// Solves a general `A x = b` by Gaussian elimination with complete pivoting.
///
/// Returns [`LinalgError::Inconsistent`] when the residual of the computed
/// particular solution exceeds `1e-12 * (1 + inf_norm(b))`.
pub fn solve_general<T: Real>(
    a: &CMatrix<T>,
    b: &[Complex<T>],
) -> Result<GeneralSolution<T>, LinalgError> {
    let (n_rows, n_cols) = (a.rows(), a.cols());
    if b.len() != n_rows {
        return Err(LinalgError::Dimension(format!(
            "rhs length {} does not match row count {n_rows}",
            b.len()
        )));
    }
    let zero = Complex::new(T::zero(), T::zero());
    let one = Complex::new(T::one(), T::zero());
    let mut m = a.clone();
    let mut rhs = b.to_vec();
    // col_of[k] = original column eliminated at step k.
    let mut col_of: Vec<usize> = (0..n_cols).collect();
    let threshold = T::of(SINGULAR_PIVOT_REL) * a.max_abs().max(T::one());

    let mut rank = 0;
    while rank < n_rows.min(n_cols) {
        // Complete pivoting: largest modulus in the trailing submatrix.
        let (mut pr, mut pc, mut best) = (rank, rank, T::zero());
        for i in rank..n_rows {
            for j in rank..n_cols {
                let mag = m[(i, j)].norm();
                if mag > best {
                    best = mag;
                    pr = i;
                    pc = j;
                }
            }
        }
        if best <= threshold {
            break;
        }
        if pr != rank {
            for j in 0..n_cols {
                let tmp = m[(rank, j)];
                m[(rank, j)] = m[(pr, j)];
                m[(pr, j)] = tmp;
            }
            rhs.swap(rank, pr);
        }
        if pc != rank {
            for i in 0..n_rows {
                let tmp = m[(i, rank)];
                m[(i, rank)] = m[(i, pc)];
                m[(i, pc)] = tmp;
            }
            col_of.swap(rank, pc);
        }
        let inv_pivot = one / m[(rank, rank)];
        for i in rank + 1..n_rows {
            let mult = m[(i, rank)] * inv_pivot;
            if mult.norm() > T::zero() {
                for j in rank..n_cols {
                    let adj = mult * m[(rank, j)];
                    m[(i, j)] = m[(i, j)] - adj;
                }
                rhs[i] = rhs[i] - mult * rhs[rank];
            }
        }
        rank += 1;
    }

    // Back substitution on the leading rank x rank triangle; free variables
    // are pinned to zero for the particular solution.
    let solve_upper = |rhs_head: &[Complex<T>], tail: &dyn Fn(usize) -> Complex<T>| {
        let mut y = vec![zero; n_cols];
        for j in rank..n_cols {
            y[j] = tail(j);
        }
        for k in (0..rank).rev() {
            let mut acc = rhs_head[k];
            for j in k + 1..n_cols {
                acc = acc - m[(k, j)] * y[j];
            }
            y[k] = acc / m[(k, k)];
        }
        // Undo the column permutation.
        let mut x = vec![zero; n_cols];
        for k in 0..n_cols {
            x[col_of[k]] = y[k];
        }
        x
    };

    let particular = solve_upper(&rhs[..rank], &|_| zero);
    let residual = inf_dist_residual(a, &particular, b);
    if residual > T::of(1e-12) * (T::one() + inf_norm(b)) {
        return Err(LinalgError::Inconsistent);
    }

    let zeros = vec![zero; rank];
    let nullspace: Vec<Vec<Complex<T>>> = (rank..n_cols)
        .map(|free| solve_upper(&zeros, &|j| if j == free { one } else { zero }))
        .collect();

    Ok(GeneralSolution {
        particular,
        nullspace,
        rank,
    })
}

fn inf_dist_residual<T: Real>(a: &CMatrix<T>, x: &[Complex<T>], b: &[Complex<T>]) -> T {
    let ax = a.mul_vec(x);
    ax.iter()
        .zip(b)
        .map(|(u, v)| (u - v).norm())
        .fold(T::zero(), |acc, d| acc.max(d))
}
