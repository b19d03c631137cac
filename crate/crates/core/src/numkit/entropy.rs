use std::f64::consts::LN_2;

use super::matrix::eig_unchecked;
use super::state::DensityMatrix;
use crate::error::{Error, Result};

/// Eigenvalues below this floor contribute nothing to entropies.
pub const EIG_FLOOR: f64 = 1e-14;

/// `-Σ p log2 p` over the given weights, skipping weights below the floor.
pub fn shannon_bits<I: IntoIterator<Item = f64>>(weights: I) -> f64 {
    weights
        .into_iter()
        .filter(|&p| p > EIG_FLOOR)
        .map(|p| -p * p.log2())
        .sum::<f64>()
        .max(0.0)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    shannon_bits(eig_unchecked(rho.matrix()).values)
}

/// Binary entropy `h2(x)`, in bits.
pub fn binary_entropy(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::DomainError(format!("binary entropy needs x in [0,1], got {x}")));
    }
    Ok(h2(x))
}

/// Bosonic entropy `g2(x) = (x+1)log2(x+1) - x log2 x`, the entropy of a
/// thermal state with mean photon number `x`.
pub fn bosonic_entropy(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::DomainError(format!("bosonic entropy needs x >= 0, got {x}")));
    }
    Ok(g2(x))
}

pub(crate) fn h2(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    term(x) + term(1.0 - x)
}

pub(crate) fn g2(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    // log2(x+1) + x log2(1 + 1/x); avoids cancellation for large x
    x.ln_1p() / LN_2 + x * (1.0 / x).ln_1p() / LN_2
}

/// Trace distance `½‖ρ - σ‖₁`.
pub fn trace_distance(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::DimMismatch(format!(
            "trace distance between {}- and {}-dimensional states",
            rho.dim(),
            sigma.dim()
        )));
    }
    let diff = rho.matrix() - sigma.matrix();
    let e = eig_unchecked(&super::hermitize(&diff));
    Ok((0.5 * e.values.iter().map(|v| v.abs()).sum::<f64>()).min(1.0))
}
