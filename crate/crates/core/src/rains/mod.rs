//! Rains relative entropy `R(A;B)_ρ = min { D(ρ‖τ) : τ ⪰ 0, ‖T_B τ‖₁ ≤ 1 }`
//! by projected gradient descent.
//!
//! Feasibility is kept by Dykstra's alternating projection onto the PSD cone
//! and the preimage of the trace-norm ball under the partial transpose, both
//! of which have closed-form projections. Iterates are made exactly feasible
//! after each projection by clipping and rescaling.

mod kernel;

#[cfg(test)]
use std::f64::consts::LN_2;

use self::kernel::{Settings, Split};
use crate::channels::{apply_on, build_channel, ChannelSpec};
use crate::error::{Error, Result};
use crate::numkit::{
    hermitian_residual, hermitize, max_entangled_ket, projector, von_neumann_entropy, CMat,
    ComplexMatrix, DensityMatrix, C64, HERMITIAN_TOL,
};
#[cfg(test)]
use crate::numkit::{eig_unchecked, frobenius, inner_re};

pub const DEFAULT_TOL_BITS: f64 = 1e-6;
pub const DEFAULT_MAX_ITER: usize = 20_000;
pub const DEFAULT_DYKSTRA_TOL: f64 = 1e-12;
pub const DEFAULT_EIG_FLOOR: f64 = 1e-12;
pub const DYKSTRA_MAX_ITER: usize = 1_000_000;
pub const MAX_TOTAL_DIM: usize = 64;
/// Dykstra sweeps per projection inside the solver.
pub const SOLVER_DYKSTRA_CAP: usize = 30;
/// Identity admixtures `ε` in `τ = (1−ε)σ + ε I/n`, solved in turn.
pub const MIX_SCHEDULE: [f64; 4] = [1e-3, 1e-4, 1e-5, 1e-6];

/// A Rains relative entropy instance.
#[derive(Clone, Debug)]
pub struct RainsProblem {
    pub rho: DensityMatrix,
    pub tol_bits: f64,
    pub max_iter: usize,
    pub dykstra_tol: f64,
    pub eig_floor: f64,
}

impl RainsProblem {
    pub fn new(rho: DensityMatrix) -> Self {
        Self {
            rho,
            tol_bits: DEFAULT_TOL_BITS,
            max_iter: DEFAULT_MAX_ITER,
            dykstra_tol: DEFAULT_DYKSTRA_TOL,
            eig_floor: DEFAULT_EIG_FLOOR,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rho.dims().len() != 2 {
            return Err(Error::DimMismatch(format!(
                "expected a bipartite state, got dims {:?}",
                self.rho.dims()
            )));
        }
        if self.rho.dim() > MAX_TOTAL_DIM {
            return Err(Error::BadParams(format!(
                "total dimension {} exceeds {MAX_TOTAL_DIM}",
                self.rho.dim()
            )));
        }
        if !(self.tol_bits > 0.0 && self.dykstra_tol > 0.0 && self.eig_floor > 0.0) {
            return Err(Error::BadParams("tolerances must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct RainsResult {
    pub value_bits: f64,
    /// Optimal PPT′ operator (PSD, trace at most one).
    pub tau_opt: ComplexMatrix,
    pub iterations: usize,
    /// First-order decrease still available along the last projected
    /// gradient step.
    pub final_gap: f64,
    /// `max(0, ‖T_B τ‖₁ − 1)`.
    pub feasibility_residual: f64,
}

fn check_hermitian(x: &CMat) -> Result<()> {
    if !x.is_square() {
        return Err(Error::InvalidMatrix("matrix is not square".into()));
    }
    let r = hermitian_residual(x);
    if r > HERMITIAN_TOL {
        return Err(Error::NonHermitian(r));
    }
    Ok(())
}

fn split_of(x: &CMat, dims: &[usize]) -> Result<Split> {
    if dims.len() != 2 || dims[0] * dims[1] != x.nrows() {
        return Err(Error::DimMismatch(format!(
            "dims {dims:?} do not describe a bipartite {}x{} operator",
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(Split { da: dims[0], db: dims[1] })
}

/// `‖T_B x‖₁` for Hermitian `x`.
pub fn ppt_norm(x: &CMat, dims: &[usize]) -> Result<f64> {
    Ok(split_of(x, dims)?.pt_norm(x))
}

/// Frobenius-nearest PSD matrix.
pub fn project_psd(x: &CMat) -> Result<CMat> {
    check_hermitian(x)?;
    Ok(kernel::clip_psd(x))
}

/// Frobenius-nearest point of `{y : ‖T_B y‖₁ ≤ 1}`.
///
/// The partial transpose is a Frobenius isometry, so this is the trace-norm
/// ball projection (eigenvalue soft thresholding) conjugated by `T_B`.
pub fn project_ppt_ball(x: &CMat, dims: &[usize]) -> Result<CMat> {
    check_hermitian(x)?;
    Ok(split_of(x, dims)?.ball(x))
}

/// Projection onto `PSD ∩ {‖T_B y‖₁ ≤ 1}` by Dykstra's algorithm, stopping
/// when successive iterates move less than `tol` in Frobenius norm. The last
/// iterate is clipped to PSD and rescaled into the ball, so the result is
/// feasible.
pub fn dykstra_project(x: &CMat, dims: &[usize], tol: f64) -> Result<CMat> {
    check_hermitian(x)?;
    let split = split_of(x, dims)?;
    let mut q = CMat::zeros(x.nrows(), x.ncols());
    match split.dykstra(&hermitize(x), tol, DYKSTRA_MAX_ITER, &mut q) {
        (y, true) => Ok(kernel::restore(&split, &y)),
        (_, false) => Err(Error::NoConvergence {
            iterations: DYKSTRA_MAX_ITER,
            best_value: f64::NAN,
            final_gap: f64::NAN,
        }),
    }
}

/// Gradient of `τ ↦ D(ρ‖τ)` (bits), via the divided differences of the
/// logarithm in the eigenbasis of `τ`.
pub fn rel_entropy_gradient(rho: &DensityMatrix, tau: &CMat) -> Result<CMat> {
    check_hermitian(tau)?;
    if tau.nrows() != rho.dim() {
        return Err(Error::DimMismatch(format!(
            "{}-dimensional state against a {}x{} operator",
            rho.dim(),
            tau.nrows(),
            tau.ncols()
        )));
    }
    let e = kernel::eigh(tau);
    let rho_t = e.vectors.adjoint() * rho.matrix() * &e.vectors;
    let floor = DEFAULT_EIG_FLOOR;
    if e.values.iter().enumerate().any(|(i, &l)| l <= floor && rho_t[(i, i)].re > floor) {
        return Err(Error::SupportViolation("state has weight outside the support of tau".into()));
    }
    let lam = e.values.iter().map(|l| l.max(floor)).collect();
    Ok(kernel::Point::new(rho.matrix(), 0.0, lam, e.vectors).gradient())
}

fn is_real(m: &CMat) -> bool {
    m.iter().all(|z| z.im == 0.0)
}

/// Computes the Rains relative entropy of a bipartite state.
///
/// Real states are solved over real symmetric `τ`, which loses nothing: the
/// objective and the feasible set are invariant under complex conjugation.
pub fn solve_rains(p: &RainsProblem) -> Result<RainsResult> {
    p.validate()?;
    let rho = p.rho.matrix();
    let dims = p.rho.dims();
    let split = split_of(rho, dims)?;
    let entropy = von_neumann_entropy(&p.rho);
    let settings = Settings {
        tol_bits: p.tol_bits,
        max_iter: p.max_iter,
        dykstra_tol: p.dykstra_tol,
        dykstra_cap: SOLVER_DYKSTRA_CAP,
        eig_floor: p.eig_floor,
        mix_schedule: &MIX_SCHEDULE,
    };
    let out = if is_real(rho) {
        let real = rho.map(|z| z.re);
        let o = kernel::minimize(&real, entropy, split, &settings);
        kernel::Outcome {
            value: o.value,
            tau: o.tau.map(|x| C64::new(x, 0.0)),
            iterations: o.iterations,
            final_gap: o.final_gap,
            converged: o.converged,
        }
    } else {
        kernel::minimize(rho, entropy, split, &settings)
    };
    if !out.converged {
        return Err(Error::NoConvergence {
            iterations: out.iterations,
            best_value: out.value,
            final_gap: out.final_gap,
        });
    }
    let tau = hermitize(&out.tau);
    Ok(RainsResult {
        value_bits: out.value.max(0.0),
        feasibility_residual: (split.pt_norm(&tau) - 1.0).max(0.0),
        tau_opt: ComplexMatrix::from_dmatrix(tau)?,
        iterations: out.iterations,
        final_gap: out.final_gap,
    })
}

/// Choi state of the epolarizing channel with the reference qubit first:
/// `(id ⊗ Λ^q)(Φ)` with dims `[d, 2d²]`.
pub fn epolarizing_choi(d: usize, q: f64) -> Result<DensityMatrix> {
    let ch = build_channel(&ChannelSpec::epolarizing(d, q))?;
    let phi = DensityMatrix::pure(&max_entangled_ket(d), vec![d, d])?;
    apply_on(&ch, &phi, 1)
}

/// Rains relative entropy of the epolarizing Choi state at each `q`,
/// returned as `(q, bits)` rows.
pub fn rains_epolarizing_curve(d: usize, q_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    q_grid
        .iter()
        .map(|&q| {
            let annotate = |e: Error| Error::AtParameter { q, source: Box::new(e) };
            let rho = epolarizing_choi(d, q).map_err(annotate)?;
            let r = solve_rains(&RainsProblem::new(rho)).map_err(annotate)?;
            Ok((q, r.value_bits))
        })
        .collect()
}

/// Isotropic PPT witness `(Φ + (I − Φ)/(d²−1))/2`, optimal for `Φ`.
pub fn isotropic_witness(d: usize) -> CMat {
    let n = d * d;
    let phi = projector(&max_entangled_ket(d));
    let rest = CMat::identity(n, n) - &phi;
    (phi + rest / C64::new((n - 1) as f64, 0.0)) * C64::new(0.5, 0.0)
}
