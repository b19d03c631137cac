//! Single-value queries behind the `cost`, `distill`, `measure`, `rains` and
//! `gaussian` subcommands.

use std::path::Path;

use clap::ValueEnum;
use entcost::formulas::{
    dephasing_cost, dephasing_distillable, epolarizing_cost, erasure_cost, erasure_distillable,
    pure_amp_cost, pure_amp_distillable, pure_loss_cost, pure_loss_distillable, wh_bounds,
};
use entcost::gaussian::{eof_pure_amp, eof_pure_loss, gaussian_entropy, GaussianState};
use entcost::measures::{coherent_information, concurrence, eof_estimate_default, eof_two_qubit};
use entcost::numkit::{von_neumann_entropy, DensityMatrix};
use entcost::rains::{solve_rains, RainsProblem, RainsResult};

use crate::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChannelFamily {
    Erasure,
    Dephasing,
    WernerHolevo,
    Epolarizing,
    PureLoss,
    PureAmp,
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FamilyParams {
    pub d: Option<usize>,
    pub q: Option<f64>,
    pub eta: Option<f64>,
    pub g: Option<f64>,
}

fn need<T: Copy>(v: Option<T>, flag: &str, family: ChannelFamily) -> CliResult<T> {
    v.ok_or_else(|| CliError::Usage(format!("{family:?} needs --{flag}")))
}

/// Entanglement cost. For Werner–Holevo channels without a known exact value
/// this is the lower bound.
pub fn cost(family: ChannelFamily, p: &FamilyParams) -> CliResult<f64> {
    use ChannelFamily::*;
    Ok(match family {
        Erasure => erasure_cost(need(p.d, "d", family)?, need(p.q, "q", family)?)?,
        Dephasing => dephasing_cost(need(p.q, "q", family)?)?,
        WernerHolevo => {
            let b = wh_bounds(need(p.d, "d", family)?)?;
            b.cost_exact.unwrap_or(b.cost_lower)
        }
        Epolarizing => epolarizing_cost(need(p.d, "d", family)?, need(p.q, "q", family)?)?,
        PureLoss => pure_loss_cost(need(p.eta, "eta", family)?)?,
        PureAmp => pure_amp_cost(need(p.g, "G", family)?)?,
    })
}

/// Distillable entanglement; the upper bound for Werner–Holevo channels.
pub fn distill(family: ChannelFamily, p: &FamilyParams) -> CliResult<f64> {
    use ChannelFamily::*;
    Ok(match family {
        Erasure => erasure_distillable(need(p.d, "d", family)?, need(p.q, "q", family)?)?,
        Dephasing => dephasing_distillable(need(p.q, "q", family)?)?,
        WernerHolevo => wh_bounds(need(p.d, "d", family)?)?.distillable_upper,
        Epolarizing => {
            return Err(CliError::Usage(
                "no closed form for the epolarizing channel; run `rains` on its Choi state".into(),
            ))
        }
        PureLoss => pure_loss_distillable(need(p.eta, "eta", family)?)?,
        PureAmp => pure_amp_distillable(need(p.g, "G", family)?)?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Measure {
    /// Von Neumann entropy of a density matrix.
    Entropy,
    /// Two-qubit concurrence.
    Concurrence,
    /// Entanglement of formation (exact for two qubits, upper bound otherwise).
    Eof,
    /// Coherent information with subsystem 0 as the reference.
    CoherentInfo,
    /// Entropy of a Gaussian state given as a covariance matrix.
    GaussianEntropy,
}

pub fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub fn measure(m: Measure, text: &str) -> CliResult<f64> {
    if m == Measure::GaussianEntropy {
        return Ok(gaussian_entropy(&GaussianState::from_json(text)?)?);
    }
    let rho = DensityMatrix::from_json(text)?;
    Ok(match m {
        Measure::Entropy => von_neumann_entropy(&rho),
        Measure::Concurrence => concurrence(&rho)?,
        Measure::Eof if rho.dims() == [2, 2] => eof_two_qubit(&rho)?.value,
        Measure::Eof => eof_estimate_default(&rho)?.value,
        Measure::CoherentInfo => coherent_information(&rho, &[0])?,
        Measure::GaussianEntropy => unreachable!(),
    })
}

pub fn rains(text: &str, tol: Option<f64>, max_iter: Option<usize>) -> CliResult<RainsResult> {
    let mut p = RainsProblem::new(DensityMatrix::from_json(text)?);
    if let Some(t) = tol {
        p.tol_bits = t;
    }
    if let Some(n) = max_iter {
        p.max_iter = n;
    }
    Ok(solve_rains(&p)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PureChannel {
    Loss,
    Amp,
}

pub fn gaussian_eof(kind: PureChannel, eta: Option<f64>, g: Option<f64>, n_s: f64) -> CliResult<f64> {
    Ok(match kind {
        PureChannel::Loss => {
            let eta = eta.ok_or_else(|| CliError::Usage("--kind loss needs --eta".into()))?;
            eof_pure_loss(eta, n_s)?
        }
        PureChannel::Amp => {
            let g = g.ok_or_else(|| CliError::Usage("--kind amp needs --G".into()))?;
            eof_pure_amp(g, n_s)?
        }
    })
}
