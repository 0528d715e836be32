//! Dense complex matrix kernels.
//!
//! Every matrix-valued object in the crate (open-chain Hamiltonians, drive
//! matrices, device Green functions) goes through the types here. The
//! heavy lifting is done by `nalgebra`; this layer adds the validation,
//! ordering and singularity rules the rest of the crate relies on.
//!
//! Norms are Frobenius for matrices and Euclidean for vectors.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Relative asymmetry tolerated by [`hermitian_eig`].
pub const HERMITIAN_TOL: f64 = 1e-12;
/// Relative pivot size below which [`solve_linear`] reports singularity.
pub const PIVOT_TOL: f64 = 1e-14;

const EIG_MAX_SWEEPS: usize = 10_000;

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(DMatrix<C64>);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexVector(DVector<C64>);

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(DMatrix::zeros(rows, cols))
    }

    pub fn identity(n: usize) -> Self {
        Self(DMatrix::identity(n, n))
    }

    /// Builds a matrix from entries listed row by row.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self(DMatrix::from_row_slice(rows, cols, entries)))
    }

    pub fn from_real_row_major(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        let c: Vec<C64> = entries.iter().map(|&x| C64::new(x, 0.0)).collect();
        Self::from_row_major(rows, cols, &c)
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        Self(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.rows() == self.cols()
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.0[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, value: C64) {
        self.0[(i, j)] = value;
    }

    pub fn add_to(&mut self, i: usize, j: usize, value: C64) {
        self.0[(i, j)] += value;
    }

    /// Entries in row-major order.
    pub fn to_row_major(&self) -> Vec<C64> {
        self.0.transpose().iter().copied().collect()
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        ComplexVector(self.0.column(j).into_owned())
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.0.iter().fold(0.0_f64, |m, z| m.max(z.norm()))
    }

    /// `max |M[i][j] - conj(M[j][i])|`, or infinity for a non-square matrix.
    pub fn hermitian_asymmetry(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self.0[(i, j)] - self.0[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian_asymmetry() <= HERMITIAN_TOL * self.max_abs()
    }

    pub fn adjoint(&self) -> Self {
        Self(self.0.adjoint())
    }

    /// Adds `shift` to every diagonal entry.
    pub fn shifted(&self, shift: C64) -> Self {
        let mut m = self.0.clone();
        for i in 0..m.nrows().min(m.ncols()) {
            m[(i, i)] += shift;
        }
        Self(m)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn mul_vec(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols() != v.len() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: v.len(),
            });
        }
        Ok(ComplexVector(&self.0 * &v.0))
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols() != other.rows() {
            return Err(Error::DimensionMismatch {
                expected: self.cols(),
                found: other.rows(),
            });
        }
        Ok(Self(&self.0 * &other.0))
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.rows() != other.rows() || self.cols() != other.cols() {
            return Err(Error::DimensionMismatch {
                expected: self.rows() * self.cols(),
                found: other.rows() * other.cols(),
            });
        }
        Ok(Self(&self.0 - &other.0))
    }

    pub fn as_nalgebra(&self) -> &DMatrix<C64> {
        &self.0
    }
}

impl From<DMatrix<C64>> for ComplexMatrix {
    fn from(m: DMatrix<C64>) -> Self {
        Self(m)
    }
}

impl ComplexVector {
    pub fn zeros(n: usize) -> Self {
        Self(DVector::zeros(n))
    }

    pub fn from_slice(entries: &[C64]) -> Self {
        Self(DVector::from_column_slice(entries))
    }

    pub fn from_real(entries: &[f64]) -> Self {
        Self(DVector::from_iterator(
            entries.len(),
            entries.iter().map(|&x| C64::new(x, 0.0)),
        ))
    }

    /// The `i`-th standard basis vector of length `n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = DVector::zeros(n);
        v[i] = C64::new(1.0, 0.0);
        Self(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn get(&self, i: usize) -> C64 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, value: C64) {
        self.0[i] = value;
    }

    pub fn iter(&self) -> impl Iterator<Item = &C64> {
        self.0.iter()
    }

    pub fn as_slice(&self) -> &[C64] {
        self.0.as_slice()
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn dot(&self, other: &ComplexVector) -> C64 {
        self.0.dotc(&other.0)
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self(&self.0 * factor)
    }

    pub fn add(&self, other: &ComplexVector) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &ComplexVector) -> Self {
        Self(&self.0 - &other.0)
    }
}

/// Eigenvalues in ascending order with matching unit eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    pub fn vector(&self, k: usize) -> ComplexVector {
        self.vectors.column(k)
    }
}

pub fn hermitian_eig(m: &ComplexMatrix) -> Result<EigenDecomposition> {
    if !m.is_square() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            found: m.cols(),
        });
    }
    if m.rows() == 0 {
        return Err(Error::InvalidParams("eigenproblem of an empty matrix".into()));
    }
    let asymmetry = m.hermitian_asymmetry();
    let tolerance = HERMITIAN_TOL * m.max_abs();
    if asymmetry > tolerance {
        return Err(Error::NotHermitian {
            asymmetry,
            tolerance,
        });
    }

    let eig = SymmetricEigen::try_new(m.0.clone(), f64::EPSILON, EIG_MAX_SWEEPS).ok_or(
        Error::NoConvergence {
            max_iterations: EIG_MAX_SWEEPS,
        },
    )?;

    let n = m.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |i, j| eig.eigenvectors[(i, order[j])]);
    Ok(EigenDecomposition {
        values,
        vectors: ComplexMatrix(vectors),
    })
}

/// Solves `A x = b` by LU factorisation with partial pivoting.
pub fn solve_linear(a: &ComplexMatrix, b: &ComplexVector) -> Result<ComplexVector> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    if a.rows() != b.len() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: b.len(),
        });
    }
    let lu = a.0.clone().lu();
    let threshold = PIVOT_TOL * a.frobenius_norm();
    let u = lu.u();
    let pivot = (0..u.nrows())
        .map(|i| u[(i, i)].norm())
        .fold(f64::INFINITY, f64::min);
    if !(pivot > threshold) {
        return Err(Error::Singular { pivot, threshold });
    }
    lu.solve(&b.0)
        .map(ComplexVector)
        .ok_or(Error::Singular { pivot, threshold })
}

/// Returns `[A^{-1}]_{ij}`.
pub fn inverse_element(a: &ComplexMatrix, i: usize, j: usize) -> Result<C64> {
    if i >= a.rows() || j >= a.cols() {
        return Err(Error::DimensionMismatch {
            expected: a.rows(),
            found: i.max(j) + 1,
        });
    }
    let x = solve_linear(a, &ComplexVector::basis(a.rows(), j))?;
    Ok(x.get(i))
}
