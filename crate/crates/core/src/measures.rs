//! Entanglement and information measures on finite-dimensional states.
//!
//! Entanglement of formation is exact for two qubits (concurrence formula)
//! and otherwise estimated from above by searching over pure-state
//! decompositions.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_on, build_channel, ChannelSpec};
use crate::error::{Error, Result};
use crate::numkit::{
    eig_unchecked, h2, partial_trace, random_unitary, shannon_bits, von_neumann_entropy, CMat,
    DensityMatrix, C64,
};

/// Support and rank detection floor.
pub const SUPPORT_FLOOR: f64 = 1e-12;
pub const DEFAULT_RESTARTS: usize = 32;
pub const DEFAULT_SEED: u64 = 42;
/// Largest local dimension accepted by [`eof_estimate`].
pub const MAX_LOCAL_DIM: usize = 16;

const GOLDEN_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EofKind {
    ExactWootters,
    UpperBoundSearch,
}

/// Entanglement of formation, exact or as a search upper bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EofEstimate {
    pub value: f64,
    pub kind: EofKind,
    pub ensemble_size: usize,
    pub restarts: usize,
    pub seed: u64,
}

/// `D(ρ‖τ) = Tr ρ(log2 ρ − log2 τ)`, or `+∞` when the support of `ρ` is not
/// contained in that of `τ`.
pub fn quantum_relative_entropy(rho: &DensityMatrix, tau: &DensityMatrix) -> Result<f64> {
    if rho.dim() != tau.dim() {
        return Err(Error::DimMismatch(format!(
            "relative entropy between {}- and {}-dimensional states",
            rho.dim(),
            tau.dim()
        )));
    }
    let et = eig_unchecked(tau.matrix());
    // ρ in τ's eigenbasis
    let r = et.vectors.adjoint() * rho.matrix() * &et.vectors;
    let null: Vec<usize> = (0..et.values.len())
        .filter(|&i| et.values[i] <= SUPPORT_FLOOR)
        .collect();
    if !null.is_empty() {
        let block = CMat::from_fn(null.len(), null.len(), |a, b| r[(null[a], null[b])]);
        if eig_unchecked(&block).values.last().copied().unwrap_or(0.0) > SUPPORT_FLOOR {
            return Ok(f64::INFINITY);
        }
    }
    let cross: f64 = (0..et.values.len())
        .filter(|&i| et.values[i] > SUPPORT_FLOOR)
        .map(|i| r[(i, i)].re * et.values[i].log2())
        .sum();
    Ok((-von_neumann_entropy(rho) - cross).max(0.0))
}

fn two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::DimMismatch(format!("expected dims [2, 2], got {:?}", rho.dims())));
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit state.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    two_qubits(rho)?;
    let m = rho.matrix();
    // σy⊗σy is real with entries ±1 on the anti-diagonal
    let yy = CMat::from_fn(4, 4, |i, j| match (i, j) {
        (0, 3) | (3, 0) => C64::new(-1.0, 0.0),
        (1, 2) | (2, 1) => C64::new(1.0, 0.0),
        _ => C64::new(0.0, 0.0),
    });
    // λ_i are the singular values of √ρ √ρ̃ with √ρ̃ = (σy⊗σy) √ρ* (σy⊗σy)
    let sqrt_rho = eig_unchecked(m).map(|x| x.max(0.0).sqrt());
    let sqrt_flipped = &yy * sqrt_rho.map(|z| z.conj()) * &yy;
    let mut lam: Vec<f64> = (sqrt_rho * sqrt_flipped)
        .singular_values()
        .iter()
        .copied()
        .collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    Ok((lam[0] - lam[1] - lam[2] - lam[3]).max(0.0))
}

/// Exact entanglement of formation of a two-qubit state.
pub fn eof_two_qubit(rho: &DensityMatrix) -> Result<EofEstimate> {
    let c = concurrence(rho)?.min(1.0);
    Ok(EofEstimate {
        value: h2(0.5 * (1.0 + (1.0 - c * c).max(0.0).sqrt())),
        kind: EofKind::ExactWootters,
        ensemble_size: 0,
        restarts: 0,
        seed: 0,
    })
}

/// Entanglement entropy of an unnormalized bipartite vector, weighted by its
/// squared norm.
fn weighted_entanglement(psi: &[C64], da: usize, db: usize) -> f64 {
    let p: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
    if p <= 1e-300 {
        return 0.0;
    }
    // reduced operator on the smaller side
    let (rows, cols, at) = if da <= db {
        (da, db, Box::new(|i: usize, j: usize| psi[i * db + j]) as Box<dyn Fn(usize, usize) -> C64>)
    } else {
        (db, da, Box::new(|i: usize, j: usize| psi[j * db + i]) as Box<dyn Fn(usize, usize) -> C64>)
    };
    let mut red = CMat::zeros(rows, rows);
    for i in 0..rows {
        for k in i..rows {
            let v: C64 = (0..cols).map(|j| at(i, j) * at(k, j).conj()).sum();
            red[(i, k)] = v / p;
            red[(k, i)] = v.conj() / p;
        }
    }
    p * shannon_bits(eig_unchecked(&red).values)
}

struct Decomposition<'a> {
    // rows of the isometry; member i is Σ_j u[i][j] w_j
    u: Vec<Vec<C64>>,
    w: &'a [Vec<C64>],
    da: usize,
    db: usize,
    terms: Vec<f64>,
}

impl<'a> Decomposition<'a> {
    fn new(u: Vec<Vec<C64>>, w: &'a [Vec<C64>], da: usize, db: usize) -> Self {
        let mut d = Self { u, w, da, db, terms: Vec::new() };
        d.terms = (0..d.u.len()).map(|i| d.term(&d.u[i])).collect();
        d
    }

    fn member(&self, row: &[C64]) -> Vec<C64> {
        let n = self.da * self.db;
        let mut psi = vec![C64::new(0.0, 0.0); n];
        for (c, wj) in row.iter().zip(self.w) {
            if c.norm_sqr() == 0.0 {
                continue;
            }
            for (x, y) in psi.iter_mut().zip(wj) {
                *x += c * y;
            }
        }
        psi
    }

    fn term(&self, row: &[C64]) -> f64 {
        weighted_entanglement(&self.member(row), self.da, self.db)
    }

    fn value(&self) -> f64 {
        self.terms.iter().sum()
    }

    fn rotated(&self, p: usize, q: usize, theta: f64, phi: f64) -> (Vec<C64>, Vec<C64>) {
        let (s, c) = theta.sin_cos();
        let e = C64::from_polar(1.0, phi);
        let rp = self.u[p].iter().zip(&self.u[q]).map(|(a, b)| a * c - e * b * s).collect();
        let rq = self.u[p].iter().zip(&self.u[q]).map(|(a, b)| e.conj() * a * s + b * c).collect();
        (rp, rq)
    }

    /// Tries the rotation and keeps it if it lowers the objective.
    fn try_rotation(&mut self, p: usize, q: usize, theta: f64, phi: f64) -> bool {
        let (rp, rq) = self.rotated(p, q, theta, phi);
        let (tp, tq) = (self.term(&rp), self.term(&rq));
        if tp + tq < self.terms[p] + self.terms[q] - 1e-15 {
            self.u[p] = rp;
            self.u[q] = rq;
            self.terms[p] = tp;
            self.terms[q] = tq;
            true
        } else {
            false
        }
    }

    /// Pattern search over Givens angles and phases, halving the step when a
    /// full sweep over row pairs makes no progress.
    fn descend(&mut self) {
        let k = self.u.len();
        let mut h = PI / 8.0;
        let mut sweeps = 0;
        while h > 1e-7 && sweeps < 4000 {
            sweeps += 1;
            let mut improved = false;
            for p in 0..k {
                for q in p + 1..k {
                    for phi in [0.0, PI / 2.0] {
                        for theta in [h, -h] {
                            if self.try_rotation(p, q, theta, phi) {
                                improved = true;
                                break;
                            }
                        }
                    }
                }
            }
            if !improved {
                h *= 0.5;
            }
        }
    }
}

/// Upper bound on the entanglement of formation of a bipartite state.
///
/// Decompositions of size `ensemble_size` are parameterized by isometries
/// acting on the eigenvectors of `ρ`; restart `i` starts from a Haar-random
/// unitary drawn from stream `i` of the seeded generator (restart 0 starts
/// from the spectral decomposition). The result is the minimum over restarts,
/// so it never increases as `restarts` grows.
pub fn eof_estimate(
    rho: &DensityMatrix,
    ensemble_size: usize,
    restarts: usize,
    seed: u64,
) -> Result<EofEstimate> {
    let (da, db) = match rho.dims() {
        [a, b] => (*a, *b),
        dims => return Err(Error::DimMismatch(format!("expected a bipartite state, got dims {dims:?}"))),
    };
    if da > MAX_LOCAL_DIM || db > MAX_LOCAL_DIM {
        return Err(Error::BadParams(format!("local dimensions {da}x{db} exceed {MAX_LOCAL_DIM}")));
    }
    let e = eig_unchecked(rho.matrix());
    let w: Vec<Vec<C64>> = (0..e.values.len())
        .rev()
        .filter(|&k| e.values[k] > SUPPORT_FLOOR)
        .map(|k| e.vectors.column(k).iter().map(|z| z * e.values[k].sqrt()).collect())
        .collect();
    let rank = w.len();
    if ensemble_size < rank {
        return Err(Error::BadParams(format!("ensemble size {ensemble_size} below rank {rank}")));
    }
    if restarts == 0 {
        return Err(Error::BadParams("at least one restart is required".into()));
    }
    let mut best = f64::INFINITY;
    for i in 0..restarts {
        let u: Vec<Vec<C64>> = if i == 0 {
            (0..ensemble_size)
                .map(|r| (0..rank).map(|c| C64::new(if r == c { 1.0 } else { 0.0 }, 0.0)).collect())
                .collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(i as u64);
            // burn one draw so streams never alias the seed itself
            let _: u32 = rng.random();
            let full = random_unitary(ensemble_size, &mut rng);
            (0..ensemble_size)
                .map(|r| (0..rank).map(|c| full[(r, c)]).collect())
                .collect()
        };
        let mut dec = Decomposition::new(u, &w, da, db);
        dec.descend();
        best = best.min(dec.value());
    }
    Ok(EofEstimate {
        value: best.max(0.0),
        kind: EofKind::UpperBoundSearch,
        ensemble_size,
        restarts,
        seed,
    })
}

/// [`eof_estimate`] with ensemble size `rank²`, the default restart count and
/// seed.
pub fn eof_estimate_default(rho: &DensityMatrix) -> Result<EofEstimate> {
    let rank = eig_unchecked(rho.matrix())
        .values
        .iter()
        .filter(|&&v| v > SUPPORT_FLOOR)
        .count();
    eof_estimate(rho, rank * rank, DEFAULT_RESTARTS, DEFAULT_SEED)
}

/// Coherent information `H(B) − H(RB)`, where `r_systems` lists the
/// subsystems forming `R` and the rest form `B`.
pub fn coherent_information(rho: &DensityMatrix, r_systems: &[usize]) -> Result<f64> {
    let n = rho.dims().len();
    if let Some(&bad) = r_systems.iter().find(|&&i| i >= n) {
        return Err(Error::BadIndex { index: bad, count: n });
    }
    let b: Vec<usize> = (0..n).filter(|i| !r_systems.contains(i)).collect();
    if b.is_empty() || b.len() == n {
        return Err(Error::DimMismatch(format!(
            "cut {r_systems:?} is not a bipartition of {n} subsystems"
        )));
    }
    let rho_b = partial_trace(rho, &b)?;
    Ok(von_neumann_entropy(&rho_b) - von_neumann_entropy(rho))
}

/// `√s|00⟩ + √(1−s)|11⟩` on a qubit and a `d`-dimensional system.
fn psi_s(d: usize, s: f64) -> DensityMatrix {
    let mut ket = CMat::zeros(2 * d, 1);
    ket[(0, 0)] = C64::new(s.clamp(0.0, 1.0).sqrt(), 0.0);
    ket[(d + 1, 0)] = C64::new((1.0 - s).clamp(0.0, 1.0).sqrt(), 0.0);
    DensityMatrix::pure(&ket, vec![2, d]).expect("unit vector")
}

/// Maximizes the coherent information of the epolarizing channel over the
/// inputs `√s|00⟩ + √(1−s)|11⟩`, returning `(s*, value)`.
///
/// The `s_grid` points span `[0, 1]`; the grid maximizer is refined by
/// golden-section search on its neighbouring interval.
pub fn epolarizing_coherent_info_max(d: usize, q: f64, s_grid: usize) -> Result<(f64, f64)> {
    if s_grid < 3 {
        return Err(Error::BadSpec(format!("s grid needs at least 3 points, got {s_grid}")));
    }
    let ch = build_channel(&ChannelSpec::epolarizing(d, q))?;
    let f = |s: f64| -> Result<f64> {
        let out = apply_on(&ch, &psi_s(d, s), 1)?;
        coherent_information(&out, &[0])
    };
    let step = 1.0 / (s_grid - 1) as f64;
    let mut best = (0.0, f64::NEG_INFINITY);
    let mut best_k = 0;
    for k in 0..s_grid {
        let s = k as f64 * step;
        let v = f(s)?;
        if v > best.1 {
            best = (s, v);
            best_k = k;
        }
    }
    let lo = best_k.saturating_sub(1) as f64 * step;
    let hi = ((best_k + 1).min(s_grid - 1)) as f64 * step;
    let (s, v) = golden_max(&f, lo, hi)?;
    if v > best.1 {
        best = (s, v);
    }
    Ok(best)
}

fn golden_max<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1)?, f(x2)?);
    while b - a > GOLDEN_TOL {
        if f1 < f2 {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2)?;
        } else {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1)?;
        }
    }
    Ok(if f1 >= f2 { (x1, f1) } else { (x2, f2) })
}
