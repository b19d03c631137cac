use serde::{Deserialize, Serialize};

use super::matrix::{eig_unchecked, hermitian_residual, trace, CMat, ComplexMatrix, C64};
use crate::error::{Error, Result};

pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-9;

/// Hermitian, unit-trace, positive semidefinite matrix over a
/// tensor product of subsystems.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl DensityMatrix {
    pub fn new(matrix: CMat, dims: Vec<usize>) -> Result<Self> {
        let matrix = ComplexMatrix::from_dmatrix(matrix)?;
        if !matrix.is_square() {
            return Err(Error::InvalidState("matrix is not square".into()));
        }
        if dims.is_empty() || dims.contains(&0) || dims.iter().product::<usize>() != matrix.nrows() {
            return Err(Error::InvalidState(format!(
                "dims {dims:?} do not multiply to side length {}",
                matrix.nrows()
            )));
        }
        let herm = hermitian_residual(&matrix);
        if herm > super::HERMITIAN_TOL {
            return Err(Error::NonHermitian(herm));
        }
        let tr = trace(&matrix).re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::InvalidState(format!("trace {tr} is not 1")));
        }
        let min = eig_unchecked(&super::hermitize(&matrix)).min();
        if min < -PSD_TOL {
            return Err(Error::InvalidState(format!("minimum eigenvalue {min:e}")));
        }
        Ok(Self { matrix, dims })
    }

    /// A single-subsystem state.
    pub fn from_matrix(matrix: CMat) -> Result<Self> {
        let n = matrix.nrows();
        Self::new(matrix, vec![n])
    }

    /// Pure state `|ψ⟩⟨ψ|` from a (not necessarily normalized) vector.
    pub fn pure(ket: &CMat, dims: Vec<usize>) -> Result<Self> {
        let norm = ket.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        let k = ket / C64::new(norm, 0.0);
        Self::new(&k * k.adjoint(), dims)
    }

    /// Maximally mixed state `I/d`.
    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n: usize = dims.iter().product();
        let m = CMat::identity(n, n) / C64::new(n as f64, 0.0);
        Self {
            matrix: ComplexMatrix::wrap(m),
            dims,
        }
    }

    /// Maximally entangled state of Schmidt rank `d`, dims `[d, d]`.
    pub fn max_entangled(d: usize) -> Self {
        Self {
            matrix: ComplexMatrix::wrap(super::projector(&max_entangled_ket(d))),
            dims: vec![d, d],
        }
    }

    pub fn matrix(&self) -> &CMat {
        &self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// Same operator viewed with a different subsystem split.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<Self> {
        if dims.iter().product::<usize>() != self.dim() || dims.contains(&0) {
            return Err(Error::DimMismatch(format!(
                "dims {dims:?} incompatible with side {}",
                self.dim()
            )));
        }
        Ok(Self {
            matrix: self.matrix.clone(),
            dims,
        })
    }

    /// `self ⊗ other` with concatenated dims.
    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            matrix: ComplexMatrix::wrap(self.matrix.kronecker(other.matrix())),
            dims,
        }
    }

    /// Wraps an operator that is a state by construction (e.g. a channel
    /// output), re-symmetrizing it to remove rounding drift.
    pub(crate) fn from_trusted(matrix: CMat, dims: Vec<usize>) -> Self {
        debug_assert_eq!(dims.iter().product::<usize>(), matrix.nrows());
        Self {
            matrix: ComplexMatrix::wrap(super::hermitize(&matrix)),
            dims,
        }
    }

    pub fn to_json(&self) -> String {
        let (re, im) = self.matrix.to_parts();
        serde_json::to_string(&DensityJson {
            dims: self.dims.clone(),
            re,
            im,
        })
        .expect("plain numeric data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: DensityJson = serde_json::from_str(text)?;
        let m = ComplexMatrix::from_parts(&raw.re, &raw.im)?;
        Self::new(m.into_dmatrix(), raw.dims)
    }
}

#[derive(Serialize, Deserialize)]
struct DensityJson {
    dims: Vec<usize>,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// `|Φ⟩ = d^{-1/2} Σ_i |i⟩|i⟩`.
pub fn max_entangled_ket(d: usize) -> CMat {
    let mut v = CMat::zeros(d * d, 1);
    let amp = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    for i in 0..d {
        v[(i * d + i, 0)] = amp;
    }
    v
}

fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
    out
}

fn check_index(which: usize, count: usize) -> Result<()> {
    if which >= count {
        return Err(Error::BadIndex {
            index: which,
            count,
        });
    }
    Ok(())
}

/// Partial trace of an operator over every subsystem not listed in `keep`.
/// Kept subsystems retain their original order.
pub fn partial_trace_op(m: &CMat, dims: &[usize], keep: &[usize]) -> Result<(CMat, Vec<usize>)> {
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    for &k in &keep {
        check_index(k, dims.len())?;
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kdims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let tdims: Vec<usize> = traced.iter().map(|&k| dims[k]).collect();
    let st = strides(dims);
    let nk: usize = kdims.iter().product();
    let nt: usize = tdims.iter().product();

    let offset = |sub: &[usize], which: &[usize], idx: usize| -> usize {
        digits(idx, sub)
            .iter()
            .zip(which)
            .map(|(d, &w)| d * st[w])
            .sum()
    };
    let koff: Vec<usize> = (0..nk).map(|i| offset(&kdims, &keep, i)).collect();
    let toff: Vec<usize> = (0..nt).map(|i| offset(&tdims, &traced, i)).collect();

    let mut out = CMat::zeros(nk, nk);
    for r in 0..nk {
        for c in 0..nk {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &toff {
                acc += m[(koff[r] + t, koff[c] + t)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok((out, kdims))
}

/// Reduced state on the subsystems in `keep`.
pub fn partial_trace(rho: &DensityMatrix, keep: &[usize]) -> Result<DensityMatrix> {
    let (m, dims) = partial_trace_op(rho.matrix(), rho.dims(), keep)?;
    Ok(DensityMatrix::from_trusted(m, dims))
}

/// Transpose of subsystem `which` of an operator.
pub fn partial_transpose_op(m: &CMat, dims: &[usize], which: usize) -> Result<CMat> {
    check_index(which, dims.len())?;
    let n = m.nrows();
    let st = strides(dims);
    let s = st[which];
    let d = dims[which];
    let component = |i: usize| (i / s) % d;
    Ok(CMat::from_fn(n, n, |r, c| {
        let (a, b) = (component(r), component(c));
        let r2 = r - a * s + b * s;
        let c2 = c - b * s + a * s;
        m[(r2, c2)]
    }))
}

pub fn partial_transpose(rho: &DensityMatrix, which: usize) -> Result<ComplexMatrix> {
    partial_transpose_op(rho.matrix(), rho.dims(), which).map(ComplexMatrix::wrap)
}

/// Lifts `op` (acting on subsystem `which`) to the full space, replacing
/// that subsystem's dimension by `op.nrows()`.
pub fn embed_operator(op: &CMat, dims: &[usize], which: usize) -> Result<CMat> {
    check_index(which, dims.len())?;
    if op.ncols() != dims[which] {
        return Err(Error::DimMismatch(format!(
            "operator with {} columns acting on subsystem of dim {}",
            op.ncols(),
            dims[which]
        )));
    }
    let left: usize = dims[..which].iter().product();
    let right: usize = dims[which + 1..].iter().product();
    Ok(CMat::identity(left, left)
        .kronecker(op)
        .kronecker(&CMat::identity(right, right)))
}
