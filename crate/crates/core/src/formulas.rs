//! Closed-form entanglement costs, distillable entanglement and bounds for
//! the channel families covered by this crate, plus finite-blocklength lower
//! bounds for simulation codes.

use std::f64::consts::LN_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{g2, h2};

fn check_prob(name: &str, q: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::BadSpec(format!("{name} must lie in [0, 1], got {q}")));
    }
    Ok(())
}

fn check_dim(d: usize) -> Result<()> {
    if d < 2 {
        return Err(Error::BadSpec(format!("dimension must be at least 2, got {d}")));
    }
    Ok(())
}

/// Entanglement cost of the `d`-dimensional erasure channel, `(1−q)log2 d`.
pub fn erasure_cost(d: usize, q: f64) -> Result<f64> {
    check_dim(d)?;
    check_prob("q", q)?;
    Ok((1.0 - q) * (d as f64).log2())
}

/// Distillable entanglement of the erasure channel; equal to its cost.
pub fn erasure_distillable(d: usize, q: f64) -> Result<f64> {
    erasure_cost(d, q)
}

/// `h2(1/2 + √(q(1−q)))`.
pub fn dephasing_cost(q: f64) -> Result<f64> {
    check_prob("q", q)?;
    Ok(h2(0.5 + (q * (1.0 - q)).sqrt()))
}

/// `1 − h2(q)`.
pub fn dephasing_distillable(q: f64) -> Result<f64> {
    check_prob("q", q)?;
    Ok(1.0 - h2(q))
}

/// Leading term of the expansion of cost minus distillable entanglement
/// about `q = 1/2`.
pub fn dephasing_gap_quadratic(q: f64) -> Result<f64> {
    check_prob("q", q)?;
    let x = (q - 0.5).abs();
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok((2.0 * (1.0 / x).ln() - 1.0) * x * x / LN_2)
}

/// Cost and distillable-entanglement bounds for the Werner–Holevo channel.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WhBounds {
    pub d: usize,
    pub cost_lower: f64,
    pub cost_upper: f64,
    pub cost_exact: Option<f64>,
    pub distillable_upper: f64,
    pub distillable_taylor: f64,
}

pub fn wh_bounds(d: usize) -> Result<WhBounds> {
    check_dim(d)?;
    let df = d as f64;
    let (cost_lower, cost_exact) = match d {
        2 => (1.0, Some(1.0)),
        3 => ((4.0f64 / 3.0).log2(), Some(1.0)),
        _ => ((4.0f64 / 3.0).log2(), None),
    };
    let distillable_upper = if d == 2 {
        1.0
    } else if d % 2 == 0 {
        ((df + 2.0) / df).log2()
    } else {
        0.5 * ((df + 3.0) / (df - 1.0)).log2()
    };
    Ok(WhBounds {
        d,
        cost_lower,
        cost_upper: 1.0,
        cost_exact,
        distillable_upper,
        distillable_taylor: 2.0 / (df * LN_2) * (1.0 - 1.0 / df),
    })
}

/// Entanglement cost of the epolarizing channel: the minimum output entropy
/// of the depolarizing channel.
pub fn epolarizing_cost(d: usize, q: f64) -> Result<f64> {
    check_dim(d)?;
    check_prob("q", q)?;
    let df = d as f64;
    let big = 1.0 - q + q / df;
    let small = q / df;
    let term = |p: f64| if p > 0.0 { -p * p.log2() } else { 0.0 };
    Ok(term(big) + (df - 1.0) * term(small))
}

/// Parameters of an `(n, M, ε)` channel simulation code.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulationCodeParams {
    pub n: usize,
    /// Schmidt rank of the resource state.
    pub m: usize,
    pub eps: f64,
    /// Smaller of the channel input and output dimensions.
    pub d: usize,
}

impl SimulationCodeParams {
    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.m == 0 {
            return Err(Error::BadSpec("n and M must be positive".into()));
        }
        check_prob("eps", self.eps)?;
        if self.d == 0 {
            return Err(Error::BadSpec("d must be positive".into()));
        }
        Ok(())
    }
}

/// `E − √ε log2 d − g2(√ε)/n`, where `E` is the formation rate of the
/// channel; any code must have `(1/n) log2 M` at least this large.
pub fn simulation_code_lower_bound(p: &SimulationCodeParams, ef_rate: f64) -> Result<f64> {
    p.validate()?;
    let r = p.eps.sqrt();
    Ok(ef_rate - r * (p.d as f64).log2() - g2(r) / p.n as f64)
}

/// Parameters of the energy-constrained bosonic simulation bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BosonicBoundParams {
    pub n: usize,
    pub eps: f64,
    pub eps_prime: f64,
    /// Mean photon number constraint.
    pub n_s: f64,
    /// Caller-supplied `(1/n) E_F(Rⁿ;Bⁿ)`.
    pub ef_term: f64,
}

impl BosonicBoundParams {
    /// `δ = (ε′ − √(2ε)) / (1 + ε′)`.
    pub fn delta(&self) -> f64 {
        (self.eps_prime - (2.0 * self.eps).sqrt()) / (1.0 + self.eps_prime)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::BadSpec("n must be positive".into()));
        }
        if !(0.0..0.5).contains(&self.eps) {
            return Err(Error::BadSpec(format!("eps must lie in [0, 1/2), got {}", self.eps)));
        }
        if !(self.eps_prime > (2.0 * self.eps).sqrt() && self.eps_prime <= 1.0) {
            return Err(Error::BadSpec(format!(
                "eps' must lie in (sqrt(2 eps), 1], got {}",
                self.eps_prime
            )));
        }
        if !(self.n_s >= 0.0) {
            return Err(Error::BadSpec(format!("N_S must be nonnegative, got {}", self.n_s)));
        }
        Ok(())
    }
}

/// `E − (ε′ + 2δ) g2(N_S/δ) − [2(1+ε′) g2(ε′) + 2 h2(δ)] / n`.
pub fn bosonic_code_lower_bound(p: &BosonicBoundParams) -> Result<f64> {
    p.validate()?;
    let delta = p.delta();
    Ok(p.ef_term
        - (p.eps_prime + 2.0 * delta) * g2(p.n_s / delta)
        - (2.0 * (1.0 + p.eps_prime) * g2(p.eps_prime) + 2.0 * h2(delta)) / p.n as f64)
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::BadSpec(format!("transmissivity must lie in (0, 1), got {eta}")));
    }
    Ok(())
}

fn check_gain(g: f64) -> Result<()> {
    if !(g > 1.0 && g.is_finite()) {
        return Err(Error::BadSpec(format!("gain must exceed 1, got {g}")));
    }
    Ok(())
}

/// `h2(1−η)/(1−η)`.
pub fn pure_loss_cost(eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(h2(1.0 - eta) / (1.0 - eta))
}

/// `g2(G−1)/(G−1)`.
pub fn pure_amp_cost(g: f64) -> Result<f64> {
    check_gain(g)?;
    Ok(g2(g - 1.0) / (g - 1.0))
}

/// `−log2(1−η)`.
pub fn pure_loss_distillable(eta: f64) -> Result<f64> {
    check_eta(eta)?;
    Ok(-(-eta).ln_1p() / LN_2)
}

/// `−log2(1−1/G)`.
pub fn pure_amp_distillable(g: f64) -> Result<f64> {
    check_gain(g)?;
    Ok(-(-1.0 / g).ln_1p() / LN_2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PureKind {
    Loss,
    Amplifier,
}

/// Closed-form cost minus distillable entanglement: `−η log2 η/(1−η)` for
/// loss, `log2 G/(G−1)` for amplification.
pub fn pure_gap(kind: PureKind, param: f64) -> Result<f64> {
    match kind {
        PureKind::Loss => {
            check_eta(param)?;
            Ok(-param * param.log2() / (1.0 - param))
        }
        PureKind::Amplifier => {
            check_gain(param)?;
            Ok(param.log2() / (param - 1.0))
        }
    }
}

/// Numerical checks of the symmetry, small-η expansion and limits of the
/// pure-loss formulas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PureIdentityReport {
    pub eta: f64,
    /// `|h2(1−η)/(1−η) − g2(1/η−1)/(1/η−1)|`.
    pub symmetry_residual: f64,
    /// `|cost − (η/ln2)(1 − ln η)|` at η = 1e-2 and 1e-3.
    pub taylor_residuals: [f64; 2],
    /// Residuals divided by η², which stay bounded when the expansion holds.
    pub taylor_ratios: [f64; 2],
    /// Cost at η = 1 − 1e-6.
    pub cost_near_one: f64,
    /// Cost at η = 1e-9.
    pub cost_near_zero: f64,
}

pub fn pure_formula_identities(eta: f64) -> Result<PureIdentityReport> {
    check_eta(eta)?;
    let g = 1.0 / eta;
    let symmetry_residual = (pure_loss_cost(eta)? - g2(g - 1.0) / (g - 1.0)).abs();
    let taylor = |e: f64| -> Result<f64> {
        Ok((pure_loss_cost(e)? - e / LN_2 * (1.0 - e.ln())).abs())
    };
    let taylor_residuals = [taylor(1e-2)?, taylor(1e-3)?];
    Ok(PureIdentityReport {
        eta,
        symmetry_residual,
        taylor_residuals,
        taylor_ratios: [taylor_residuals[0] / 1e-4, taylor_residuals[1] / 1e-6],
        cost_near_one: pure_loss_cost(1.0 - 1e-6)?,
        cost_near_zero: pure_loss_cost(1e-9)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GaussianKind {
    Thermal,
    Amplifier,
    Additive,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostRegion {
    /// Entanglement breaking, so the cost is zero.
    ZeroEb,
    Finite,
    Infinite,
}

/// Classifies the entanglement cost of a phase-insensitive Gaussian channel.
///
/// `param` is η for thermal, G for amplifier and ξ for additive noise; `n_b`
/// is ignored for additive noise. The noiseless boundary η = 1 or G = 1 is
/// the identity channel whatever `n_b` is.
pub fn gaussian_cost_region(kind: GaussianKind, param: f64, n_b: f64) -> Result<CostRegion> {
    if !(n_b >= 0.0 && n_b.is_finite()) {
        return Err(Error::BadSpec(format!("N_B must be nonnegative, got {n_b}")));
    }
    match kind {
        GaussianKind::Thermal => {
            if !(param > 0.0 && param <= 1.0) {
                return Err(Error::BadSpec(format!("transmissivity must lie in (0, 1], got {param}")));
            }
            if param == 1.0 {
                Ok(CostRegion::Infinite)
            } else if (1.0 - param) * n_b >= param {
                Ok(CostRegion::ZeroEb)
            } else {
                Ok(CostRegion::Finite)
            }
        }
        GaussianKind::Amplifier => {
            if !(param >= 1.0 && param.is_finite()) {
                return Err(Error::BadSpec(format!("gain must be at least 1, got {param}")));
            }
            if param == 1.0 {
                Ok(CostRegion::Infinite)
            } else if (param - 1.0) * n_b >= 1.0 {
                Ok(CostRegion::ZeroEb)
            } else {
                Ok(CostRegion::Finite)
            }
        }
        GaussianKind::Additive => {
            if !(param >= 0.0 && param.is_finite()) {
                return Err(Error::BadSpec(format!("noise variance must be nonnegative, got {param}")));
            }
            if param == 0.0 {
                Ok(CostRegion::Infinite)
            } else if param >= 1.0 {
                Ok(CostRegion::ZeroEb)
            } else {
                Ok(CostRegion::Finite)
            }
        }
    }
}
