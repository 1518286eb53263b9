//! Dense matrix realization and exact spectral methods.
//!
//! Registers are capped (default 14 qubits) so every operator fits in a dense
//! `2^n x 2^n` matrix and propagators can be computed by exact
//! eigendecomposition instead of Trotterization.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::pauli::OperatorSum;
use crate::register::QubitRegister;

/// Sign `s` of the exponent in `exp(s * i * t * H)`.
///
/// Physical propagators use `Neg` (`e^{-itH}`); the minor-embedding pulse
/// uses `Pos` (`e^{+i pi H}`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Neg,
    Pos,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Neg => -1.0,
            Sign::Pos => 1.0,
        }
    }
}

/// Dense complex matrix over the full register.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    matrix: DMatrix<Complex64>,
}

impl DenseOperator {
    pub fn new(matrix: DMatrix<Complex64>) -> Self {
        assert_eq!(matrix.nrows(), matrix.ncols(), "operators are square");
        Self { matrix }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            matrix: DMatrix::identity(dim, dim),
        }
    }

    /// Diagonal operator from complex entries.
    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let dim = diag.len();
        let mut m = DMatrix::zeros(dim, dim);
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        Self { matrix: m }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<Complex64> {
        self.matrix
    }

    pub fn adjoint(&self) -> Self {
        Self {
            matrix: self.matrix.adjoint(),
        }
    }

    /// Max entrywise magnitude of `M - M^dagger`.
    pub fn hermiticity_residual(&self) -> f64 {
        let adj = self.matrix.adjoint();
        (&self.matrix - adj)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Max entrywise magnitude of `M^dagger M - I`.
    pub fn unitarity_residual(&self) -> f64 {
        let dim = self.dim();
        let prod = self.matrix.adjoint() * &self.matrix;
        let eye = DMatrix::<Complex64>::identity(dim, dim);
        (prod - eye).iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Max entrywise magnitude of the difference to another operator.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        (&self.matrix - &other.matrix)
            .iter()
            .map(|c| c.norm())
            .fold(0.0, f64::max)
    }

    /// Max magnitude over off-diagonal entries.
    pub fn max_offdiagonal(&self) -> f64 {
        let mut max = 0.0_f64;
        for r in 0..self.dim() {
            for c in 0..self.dim() {
                if r != c {
                    max = max.max(self.matrix[(r, c)].norm());
                }
            }
        }
        max
    }

    pub fn max_abs(&self) -> f64 {
        self.matrix.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace()
    }
}

impl std::ops::Mul for &DenseOperator {
    type Output = DenseOperator;
    fn mul(self, rhs: &DenseOperator) -> DenseOperator {
        DenseOperator::new(&self.matrix * &rhs.matrix)
    }
}

/// Realize an operator sum as a dense matrix under the crate bit convention.
///
/// Each Pauli string is a generalized permutation, so the cost is
/// `O(terms * 2^total)` on top of the matrix allocation.
pub fn realize(op: &OperatorSum, reg: &QubitRegister) -> Result<DenseOperator> {
    op.check_register(reg)?;
    let dim = reg.dim();
    let mut m = DMatrix::<Complex64>::zeros(dim, dim);
    for term in op.terms() {
        for col in 0..dim {
            let (row, phase) = term.apply_to_basis(reg, col);
            m[(row, col)] += phase;
        }
    }
    Ok(DenseOperator::new(m))
}

/// Eigendecomposition of a real symmetric matrix with eigenvalues sorted
/// ascending (eigenvectors as columns, order matching).
pub fn symmetric_eigen_sorted(mat: &DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let eig = mat.clone().symmetric_eigen();
    let n = mat.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

fn hermitian_eigen_sorted(mat: &DMatrix<Complex64>) -> (DVector<f64>, DMatrix<Complex64>) {
    let eig = mat.clone().symmetric_eigen();
    let n = mat.nrows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| eig.eigenvalues[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Exact spectral decomposition of a Hermitian operator.
///
/// Real symmetric inputs (every Hamiltonian built from X/Z strings) take the
/// cheaper real path; anything with Y factors falls back to the complex
/// Hermitian solver.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    values: DVector<f64>,
    vectors: DMatrix<Complex64>,
}

impl SpectralDecomposition {
    pub fn new(op: &DenseOperator) -> Result<Self> {
        let tol = 1e-9 * op.max_abs().max(1.0);
        let residual = op.hermiticity_residual();
        if residual > tol {
            return Err(Error::Contract(format!(
                "operator is not Hermitian (residual {residual:.3e} > {tol:.3e})"
            )));
        }
        let dim = op.dim();
        let max_im = op.matrix().iter().map(|c| c.im.abs()).fold(0.0, f64::max);
        if max_im < 1e-14 {
            let real = DMatrix::from_fn(dim, dim, |r, c| op.matrix()[(r, c)].re);
            let (values, vectors) = symmetric_eigen_sorted(&real);
            let vectors = vectors.map(|x| Complex64::new(x, 0.0));
            Ok(Self { values, vectors })
        } else {
            let (values, vectors) = hermitian_eigen_sorted(op.matrix());
            Ok(Self { values, vectors })
        }
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues, ascending.
    pub fn values(&self) -> &DVector<f64> {
        &self.values
    }

    /// Eigenvector columns, matching [`Self::values`].
    pub fn vectors(&self) -> &DMatrix<Complex64> {
        &self.vectors
    }

    pub fn ground_energy(&self) -> f64 {
        self.values[0]
    }

    /// Phases `exp(sign * i * t * lambda_k)`.
    pub fn phases(&self, t: f64, sign: Sign) -> DVector<Complex64> {
        let s = sign.factor();
        DVector::from_iterator(
            self.dim(),
            self.values
                .iter()
                .map(|&l| Complex64::new(0.0, s * t * l).exp()),
        )
    }

    /// Full unitary `exp(sign * i * t * H)`.
    pub fn propagator(&self, t: f64, sign: Sign) -> Result<DenseOperator> {
        let phases = self.phases(t, sign);
        let mut scaled = self.vectors.clone();
        for (k, mut col) in scaled.column_iter_mut().enumerate() {
            col *= phases[k];
        }
        let u = DenseOperator::new(scaled * self.vectors.adjoint());
        let residual = u.unitarity_residual();
        if residual > 1e-10 {
            return Err(Error::Numerical(format!(
                "propagator lost unitarity (residual {residual:.3e})"
            )));
        }
        Ok(u)
    }

    /// Apply `exp(sign * i * t * H)` to a coefficient vector.
    pub fn apply_to_vector(
        &self,
        amplitudes: &DVector<Complex64>,
        t: f64,
        sign: Sign,
    ) -> DVector<Complex64> {
        let mut coeffs = self.vectors.adjoint() * amplitudes;
        let phases = self.phases(t, sign);
        for k in 0..self.dim() {
            coeffs[k] *= phases[k];
        }
        &self.vectors * coeffs
    }
}
