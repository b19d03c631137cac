use rand::Rng;
use rand_distr::StandardNormal;

use super::matrix::{CMat, C64};
use super::state::DensityMatrix;

fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMat {
    CMat::from_fn(rows, cols, |_, _| {
        C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
}

/// Haar-random unitary (QR of a Ginibre matrix with phase fix).
pub fn random_unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMat {
    let qr = gaussian_matrix(n, n, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random state of the given rank, induced by the Hilbert–Schmidt measure
/// on a purification.
pub fn random_density<R: Rng + ?Sized>(dims: &[usize], rank: usize, rng: &mut R) -> DensityMatrix {
    let n: usize = dims.iter().product();
    let g = gaussian_matrix(n, rank.clamp(1, n), rng);
    let m = &g * g.adjoint();
    let tr = super::trace(&m).re;
    DensityMatrix::from_trusted(m / C64::new(tr, 0.0), dims.to_vec())
}

/// Random pure state.
pub fn random_pure<R: Rng + ?Sized>(dims: &[usize], rng: &mut R) -> DensityMatrix {
    random_density(dims, 1, rng)
}
