use std::ops::Deref;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;
pub type CMat = DMatrix<C64>;

/// Symmetry tolerance accepted by the Hermitian routines.
pub const HERMITIAN_TOL: f64 = 1e-10;

/// Dense complex matrix with finite entries.
///
/// Dereferences to the underlying `nalgebra` matrix, so all read-only
/// arithmetic is available directly.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix(CMat);

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn new(rows: usize, cols: usize, entries: Vec<C64>) -> Result<Self> {
        if rows * cols != entries.len() {
            return Err(Error::InvalidMatrix(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        Self::from_dmatrix(CMat::from_row_slice(rows, cols, &entries))
    }

    pub fn from_dmatrix(m: CMat) -> Result<Self> {
        if m.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        Ok(Self(m))
    }

    /// Builds a matrix from separate real and imaginary row lists.
    pub fn from_parts(re: &[Vec<f64>], im: &[Vec<f64>]) -> Result<Self> {
        let rows = re.len();
        if im.len() != rows {
            return Err(Error::InvalidMatrix("re/im row counts differ".into()));
        }
        let cols = re.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows * cols);
        for (r, i) in re.iter().zip(im) {
            if r.len() != cols || i.len() != cols {
                return Err(Error::InvalidMatrix("ragged rows".into()));
            }
            entries.extend(r.iter().zip(i).map(|(&a, &b)| C64::new(a, b)));
        }
        Self::new(rows, cols, entries)
    }

    /// Splits into real and imaginary row lists (the JSON layout).
    pub fn to_parts(&self) -> (Vec<Vec<f64>>, Vec<Vec<f64>>) {
        let re = (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self[(i, j)].re).collect())
            .collect();
        let im = (0..self.nrows())
            .map(|i| (0..self.ncols()).map(|j| self[(i, j)].im).collect())
            .collect();
        (re, im)
    }

    pub fn identity(n: usize) -> Self {
        Self(CMat::identity(n, n))
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self(CMat::zeros(rows, cols))
    }

    pub fn rows(&self) -> usize {
        self.0.nrows()
    }

    pub fn cols(&self) -> usize {
        self.0.ncols()
    }

    pub fn as_dmatrix(&self) -> &CMat {
        &self.0
    }

    pub fn into_dmatrix(self) -> CMat {
        self.0
    }

    pub fn hermitian_residual(&self) -> f64 {
        hermitian_residual(&self.0)
    }

    /// Wraps a matrix produced by internal arithmetic on finite inputs.
    pub(crate) fn wrap(m: CMat) -> Self {
        debug_assert!(m.iter().all(|z| z.re.is_finite() && z.im.is_finite()));
        Self(m)
    }
}

impl Deref for ComplexMatrix {
    type Target = CMat;

    fn deref(&self) -> &CMat {
        &self.0
    }
}

impl From<ComplexMatrix> for CMat {
    fn from(m: ComplexMatrix) -> CMat {
        m.0
    }
}

/// Eigendecomposition of a Hermitian matrix, eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub values: Vec<f64>,
    /// Columns are the eigenvectors, in the order of `values`.
    pub vectors: CMat,
}

impl HermitianEig {
    /// Returns `V diag(f(λ)) V†`.
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> CMat {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            for i in 0..n {
                scaled[(i, k)] *= w;
            }
        }
        &scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMat {
        self.map(|x| x)
    }

    pub fn min(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }
}

pub fn hermitian_residual(m: &CMat) -> f64 {
    if !m.is_square() {
        return f64::INFINITY;
    }
    let n = m.nrows();
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

/// Hermitian part `(M + M†)/2`.
pub fn hermitize(m: &CMat) -> CMat {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is symmetrized before decomposition; eigenvalues are returned
/// ascending with matching eigenvector columns.
pub fn hermitian_eig(m: &CMat) -> Result<HermitianEig> {
    if !m.is_square() {
        return Err(Error::InvalidMatrix(format!(
            "{}x{} matrix is not square",
            m.nrows(),
            m.ncols()
        )));
    }
    let res = hermitian_residual(m);
    if res > HERMITIAN_TOL {
        return Err(Error::NonHermitian(res));
    }
    Ok(eig_unchecked(&hermitize(m)))
}

/// Decomposes a matrix already known to be Hermitian.
pub(crate) fn eig_unchecked(m: &CMat) -> HermitianEig {
    let n = m.nrows();
    if n == 0 {
        return HermitianEig {
            values: Vec::new(),
            vectors: CMat::zeros(0, 0),
        };
    }
    let se = m.clone().symmetric_eigen();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| se.eigenvalues[a].total_cmp(&se.eigenvalues[b]));
    let values = order.iter().map(|&k| se.eigenvalues[k]).collect();
    let vectors = CMat::from_fn(n, n, |i, j| se.eigenvectors[(i, order[j])]);
    HermitianEig { values, vectors }
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

/// Kronecker product of a list of factors, left to right.
pub fn tensor_all<'a, I: IntoIterator<Item = &'a CMat>>(factors: I) -> CMat {
    factors
        .into_iter()
        .fold(CMat::identity(1, 1), |acc, f| acc.kronecker(f))
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    if a.shape() != b.shape() {
        return f64::INFINITY;
    }
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Real part of the Hilbert–Schmidt inner product `Tr(A† B)`.
pub fn inner_re(a: &CMat, b: &CMat) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| (x.conj() * y).re).sum()
}

pub fn frobenius(a: &CMat) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn trace(a: &CMat) -> C64 {
    a.diagonal().sum()
}

/// Column vector of a computational basis state.
pub fn basis_ket(dim: usize, index: usize) -> CMat {
    let mut v = CMat::zeros(dim, 1);
    v[(index, 0)] = C64::new(1.0, 0.0);
    v
}

/// `|ψ⟩⟨ψ|` for a column vector.
pub fn projector(ket: &CMat) -> CMat {
    ket * ket.adjoint()
}

pub fn real_scalar(x: f64) -> C64 {
    C64::new(x, 0.0)
}
