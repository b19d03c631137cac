//! Bosonic Gaussian states in the covariance-matrix picture.
//!
//! Quadratures are ordered `(x₁, p₁, x₂, p₂, …)` and the vacuum has the
//! identity covariance. Channels act mode-wise as `γ ↦ KγKᵀ + α`.

use nalgebra::{DMatrix, DVector, Matrix2};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::g2;

pub type RMat = DMatrix<f64>;

/// Symmetry tolerance on covariance matrices.
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Smallest symplectic eigenvalue accepted when a state is constructed.
pub const BONA_FIDE_TOL: f64 = 1e-9;
/// Smallest symplectic eigenvalue accepted by [`symplectic_eigenvalues`].
pub const SPECTRUM_TOL: f64 = 1e-6;
pub const PURITY_TOL: f64 = 1e-8;
/// Largest mean photon number accepted by the TMSV-based evaluations.
pub const MAX_NS: f64 = 1e6;

/// A Gaussian state of `modes` bosonic modes.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianState {
    modes: usize,
    cov: RMat,
    mean: DVector<f64>,
}

#[derive(Serialize, Deserialize)]
struct GaussianJson {
    modes: usize,
    cov: Vec<Vec<f64>>,
    mean: Vec<f64>,
}

impl GaussianState {
    /// Validates shape, symmetry and the bona fide condition.
    pub fn new(cov: RMat, mean: DVector<f64>) -> Result<Self> {
        let n = cov.nrows();
        if n == 0 || n % 2 != 0 || !cov.is_square() || mean.len() != n {
            return Err(Error::DimMismatch(format!(
                "covariance {}x{} with mean of length {} is not a mode-pair layout",
                cov.nrows(),
                cov.ncols(),
                mean.len()
            )));
        }
        if cov.iter().chain(mean.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidMatrix("non-finite entry".into()));
        }
        let asym = (&cov - cov.transpose()).abs().max();
        if asym > SYMMETRY_TOL {
            return Err(Error::InvalidMatrix(format!("covariance not symmetric ({asym:e})")));
        }
        let st = Self::trusted(cov, mean);
        let nu = spectrum(&st.cov)?;
        if nu[0] < 1.0 - BONA_FIDE_TOL {
            return Err(Error::NotBonaFide(nu[0]));
        }
        Ok(st)
    }

    fn trusted(cov: RMat, mean: DVector<f64>) -> Self {
        let cov = (&cov + cov.transpose()) * 0.5;
        Self {
            modes: cov.nrows() / 2,
            cov,
            mean,
        }
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::trusted(RMat::identity(2 * modes, 2 * modes), DVector::zeros(2 * modes))
    }

    /// Single-mode thermal state with mean photon number `n`.
    pub fn thermal(n: f64) -> Result<Self> {
        if !(n >= 0.0 && n.is_finite()) {
            return Err(Error::BadSpec(format!("mean photon number must be >= 0, got {n}")));
        }
        Ok(Self::trusted(RMat::identity(2, 2) * (2.0 * n + 1.0), DVector::zeros(2)))
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn cov(&self) -> &RMat {
        &self.cov
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    /// Marginal on the listed modes, in the listed order.
    pub fn reduced(&self, keep: &[usize]) -> Result<Self> {
        for &k in keep {
            check_mode(k, self.modes)?;
        }
        let idx: Vec<usize> = keep.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
        let cov = RMat::from_fn(idx.len(), idx.len(), |i, j| self.cov[(idx[i], idx[j])]);
        let mean = DVector::from_iterator(idx.len(), idx.iter().map(|&i| self.mean[i]));
        Ok(Self::trusted(cov, mean))
    }

    pub fn to_json(&self) -> String {
        let cov = (0..self.cov.nrows())
            .map(|i| self.cov.row(i).iter().copied().collect())
            .collect();
        serde_json::to_string(&GaussianJson {
            modes: self.modes,
            cov,
            mean: self.mean.iter().copied().collect(),
        })
        .expect("plain numeric data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: GaussianJson = serde_json::from_str(text)?;
        let n = raw.cov.len();
        if raw.modes * 2 != n || raw.cov.iter().any(|r| r.len() != n) {
            return Err(Error::DimMismatch(format!(
                "{} modes need a {}x{} covariance",
                raw.modes,
                2 * raw.modes,
                2 * raw.modes
            )));
        }
        let cov = RMat::from_fn(n, n, |i, j| raw.cov[i][j]);
        Self::new(cov, DVector::from_vec(raw.mean))
    }
}

fn check_mode(mode: usize, modes: usize) -> Result<()> {
    if mode >= modes {
        return Err(Error::BadIndex {
            index: mode,
            count: modes,
        });
    }
    Ok(())
}

/// The bosonic channels acting on a single mode.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum BosonicChannelParams {
    /// Thermal channel of transmissivity `eta` and environment photon number `n_b`.
    Thermal { eta: f64, n_b: f64 },
    /// Phase-insensitive amplifier of gain `g`.
    Amplifier { g: f64, n_b: f64 },
    /// Additive Gaussian noise of variance `xi`.
    Additive { xi: f64 },
}

impl BosonicChannelParams {
    pub fn pure_loss(eta: f64) -> Self {
        Self::Thermal { eta, n_b: 0.0 }
    }

    pub fn pure_amplifier(g: f64) -> Self {
        Self::Amplifier { g, n_b: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Thermal { eta, n_b } => (0.0..=1.0).contains(&eta) && n_b >= 0.0 && n_b.is_finite(),
            Self::Amplifier { g, n_b } => g >= 1.0 && g.is_finite() && n_b >= 0.0 && n_b.is_finite(),
            Self::Additive { xi } => xi >= 0.0 && xi.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::BadSpec(format!("channel parameters out of range: {self:?}")))
        }
    }

    /// Gain `k` and added noise `a` in `γ ↦ k²γ + a·I` on the target mode.
    fn action(&self) -> (f64, f64) {
        match *self {
            Self::Thermal { eta, n_b } => (eta.sqrt(), (1.0 - eta) * (2.0 * n_b + 1.0)),
            Self::Amplifier { g, n_b } => (g.sqrt(), (g - 1.0) * (2.0 * n_b + 1.0)),
            Self::Additive { xi } => (1.0, 2.0 * xi),
        }
    }
}

/// Two-mode squeezed vacuum parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TmsvParams {
    pub n_s: f64,
}

impl TmsvParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.n_s >= 0.0 && self.n_s <= MAX_NS) {
            return Err(Error::BadSpec(format!("N_S must lie in [0, {MAX_NS:e}], got {}", self.n_s)));
        }
        Ok(())
    }
}

fn pauli_z() -> Matrix2<f64> {
    Matrix2::new(1.0, 0.0, 0.0, -1.0)
}

fn set_block(m: &mut RMat, i: usize, j: usize, b: &Matrix2<f64>) {
    m.fixed_view_mut::<2, 2>(2 * i, 2 * j).copy_from(b);
}

/// Two-mode squeezed vacuum with mean photon number `N_S` per mode.
pub fn tmsv(p: TmsvParams) -> Result<GaussianState> {
    p.validate()?;
    let a = 2.0 * p.n_s + 1.0;
    let c = 2.0 * (p.n_s * (p.n_s + 1.0)).sqrt();
    let mut cov = RMat::zeros(4, 4);
    set_block(&mut cov, 0, 0, &(Matrix2::identity() * a));
    set_block(&mut cov, 1, 1, &(Matrix2::identity() * a));
    set_block(&mut cov, 0, 1, &(pauli_z() * c));
    set_block(&mut cov, 1, 0, &(pauli_z() * c));
    Ok(GaussianState::trusted(cov, DVector::zeros(4)))
}

/// Applies a single-mode bosonic channel to `mode`.
pub fn apply_bosonic(ch: &BosonicChannelParams, st: &GaussianState, mode: usize) -> Result<GaussianState> {
    ch.validate()?;
    check_mode(mode, st.modes)?;
    let (k, noise) = ch.action();
    let mut scale = DVector::from_element(2 * st.modes, 1.0);
    scale[2 * mode] = k;
    scale[2 * mode + 1] = k;
    let mut cov = RMat::from_fn(st.cov.nrows(), st.cov.ncols(), |i, j| scale[i] * st.cov[(i, j)] * scale[j]);
    cov[(2 * mode, 2 * mode)] += noise;
    cov[(2 * mode + 1, 2 * mode + 1)] += noise;
    let mean = st.mean.component_mul(&scale);
    Ok(GaussianState::trusted(cov, mean))
}

/// Symplectic form `⊕ [[0, 1], [−1, 0]]`.
fn omega(modes: usize) -> RMat {
    let mut w = RMat::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        w[(2 * k, 2 * k + 1)] = 1.0;
        w[(2 * k + 1, 2 * k)] = -1.0;
    }
    w
}

/// Ascending symplectic spectrum without the bona fide check.
fn spectrum(cov: &RMat) -> Result<Vec<f64>> {
    let modes = cov.nrows() / 2;
    if modes == 1 {
        return Ok(vec![cov.determinant().max(0.0).sqrt()]);
    }
    // ν² are the eigenvalues of Lᵀ(ΩᵀγΩ)L with γ = LLᵀ, each twice
    let Some(chol) = cov.clone().cholesky() else {
        let lowest = cov.clone().symmetric_eigen().eigenvalues.min();
        return Err(Error::NotBonaFide(lowest));
    };
    let l = chol.l();
    let w = omega(modes);
    let m = l.transpose() * w.transpose() * cov * &w * &l;
    let mut sq: Vec<f64> = ((&m + m.transpose()) * 0.5).symmetric_eigen().eigenvalues.iter().copied().collect();
    sq.sort_by(f64::total_cmp);
    Ok(sq.chunks(2).map(|p| (0.5 * (p[0] + p[1])).max(0.0).sqrt()).collect())
}

/// Symplectic eigenvalues `ν₁ ≤ … ≤ ν_m`.
pub fn symplectic_eigenvalues(st: &GaussianState) -> Result<Vec<f64>> {
    let nu = spectrum(&st.cov)?;
    if nu[0] < 1.0 - SPECTRUM_TOL {
        return Err(Error::NotBonaFide(nu[0]));
    }
    Ok(nu)
}

/// Von Neumann entropy in bits, `Σ g2((ν_k − 1)/2)`.
pub fn gaussian_entropy(st: &GaussianState) -> Result<f64> {
    Ok(symplectic_eigenvalues(st)?
        .iter()
        .map(|&nu| g2(((nu - 1.0) / 2.0).max(0.0)))
        .sum())
}

/// Conditional state of the remaining modes after heterodyning
/// `measured_mode`: `γ_A − C(γ_B + I)⁻¹Cᵀ`, independent of the outcome.
pub fn heterodyne_condition(st: &GaussianState, measured_mode: usize) -> Result<GaussianState> {
    check_mode(measured_mode, st.modes)?;
    if st.modes < 2 {
        return Err(Error::BadSpec("heterodyne conditioning needs at least two modes".into()));
    }
    let rest: Vec<usize> = (0..st.modes).filter(|&k| k != measured_mode).collect();
    let a_idx: Vec<usize> = rest.iter().flat_map(|&k| [2 * k, 2 * k + 1]).collect();
    let b_idx = [2 * measured_mode, 2 * measured_mode + 1];
    let ga = RMat::from_fn(a_idx.len(), a_idx.len(), |i, j| st.cov[(a_idx[i], a_idx[j])]);
    let c = RMat::from_fn(a_idx.len(), 2, |i, j| st.cov[(a_idx[i], b_idx[j])]);
    let gb = Matrix2::from_fn(|i, j| st.cov[(b_idx[i], b_idx[j])]) + Matrix2::identity();
    let inv = gb
        .try_inverse()
        .expect("gamma_B + I is positive definite for a bona fide state");
    let inv = RMat::from_fn(2, 2, |i, j| inv[(i, j)]);
    let cov = ga - &c * inv * c.transpose();
    Ok(GaussianState::trusted(cov, DVector::zeros(a_idx.len())))
}

/// `true` iff every symplectic eigenvalue is within `1e-8` of one.
pub fn pure_state_check(st: &GaussianState) -> bool {
    spectrum(&st.cov).is_ok_and(|nu| nu.iter().all(|v| (v - 1.0).abs() <= PURITY_TOL))
}

/// Pure-loss or pure-amplifier dilation.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PureDilation {
    /// Beamsplitter of transmissivity `eta` against a vacuum environment.
    Loss(f64),
    /// Two-mode squeezer of gain `G` against a vacuum environment.
    Amplifier(f64),
}

impl PureDilation {
    fn symplectic(&self) -> Result<RMat> {
        let mut s = RMat::zeros(4, 4);
        match *self {
            Self::Loss(eta) => {
                if !(eta > 0.0 && eta < 1.0) {
                    return Err(Error::BadSpec(format!("transmissivity must lie in (0,1), got {eta}")));
                }
                let (t, r) = (eta.sqrt(), (1.0 - eta).sqrt());
                set_block(&mut s, 0, 0, &(Matrix2::identity() * t));
                set_block(&mut s, 0, 1, &(Matrix2::identity() * r));
                set_block(&mut s, 1, 0, &(Matrix2::identity() * -r));
                set_block(&mut s, 1, 1, &(Matrix2::identity() * t));
            }
            Self::Amplifier(g) => {
                if !(g > 1.0 && g.is_finite()) {
                    return Err(Error::BadSpec(format!("gain must exceed 1, got {g}")));
                }
                let (c, sh) = (g.sqrt(), (g - 1.0).sqrt());
                set_block(&mut s, 0, 0, &(Matrix2::identity() * c));
                set_block(&mut s, 0, 1, &(pauli_z() * sh));
                set_block(&mut s, 1, 0, &(pauli_z() * sh));
                set_block(&mut s, 1, 1, &(Matrix2::identity() * c));
            }
        }
        Ok(s)
    }
}

/// Pure three-mode state `ψ_RBE`: the TMSV reference `R`, the channel output
/// `B` and the environment `E`.
pub fn purification(dilation: PureDilation, n_s: f64) -> Result<GaussianState> {
    let phi = tmsv(TmsvParams { n_s })?;
    let mut cov = RMat::identity(6, 6);
    cov.view_mut((0, 0), (4, 4)).copy_from(phi.cov());
    let mut s = RMat::identity(6, 6);
    s.view_mut((2, 2), (4, 4)).copy_from(&dilation.symplectic()?);
    let out = &s * cov * s.transpose();
    Ok(GaussianState::trusted(out, DVector::zeros(6)))
}

fn eof_via_heterodyne(dilation: PureDilation, n_s: f64) -> Result<f64> {
    let re = purification(dilation, n_s)?.reduced(&[0, 2])?;
    gaussian_entropy(&heterodyne_condition(&re, 1)?)
}

/// Entanglement of formation of the pure-loss channel's output on a TMSV
/// input, `H(R|Ē)` after heterodyning the environment.
pub fn eof_pure_loss(eta: f64, n_s: f64) -> Result<f64> {
    eof_via_heterodyne(PureDilation::Loss(eta), n_s)
}

/// As [`eof_pure_loss`] for the pure amplifier of gain `G`.
pub fn eof_pure_amp(g: f64, n_s: f64) -> Result<f64> {
    eof_via_heterodyne(PureDilation::Amplifier(g), n_s)
}
