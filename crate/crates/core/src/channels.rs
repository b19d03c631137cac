//! Finite-dimensional channel families in Kraus form.
//!
//! Every builder returns a [`KrausChannel`] whose Kraus operators satisfy
//! `Σ K†K = I` to within [`COMPLETENESS_TOL`]. Channels that are covariant
//! under the Heisenberg–Weyl group carry their output representation
//! ([`OutputRep`]), which is what [`check_hw_covariance`] and
//! [`teleportation_simulate`] use.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numkit::{
    eig_unchecked, embed_operator, max_abs_diff, partial_transpose_op, trace_distance, CMat,
    ComplexMatrix, DensityMatrix, C64,
};

pub const COMPLETENESS_TOL: f64 = 1e-10;
pub const COVARIANCE_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    Erasure,
    Dephasing,
    QubitDephasing,
    Depolarizing,
    WernerHolevo,
    Epolarizing,
}

impl std::str::FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s.replace('-', "_").as_str() {
            "erasure" => Self::Erasure,
            "dephasing" => Self::Dephasing,
            "qubit_dephasing" => Self::QubitDephasing,
            "depolarizing" => Self::Depolarizing,
            "werner_holevo" => Self::WernerHolevo,
            "epolarizing" => Self::Epolarizing,
            other => return Err(Error::BadSpec(format!("unknown channel kind {other:?}"))),
        })
    }
}

/// Parameters selecting one member of a channel family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    pub kind: ChannelKind,
    pub d: usize,
    /// Probability parameter; ignored for Werner–Holevo.
    pub q: f64,
    /// Phase-flip distribution for the d-dimensional dephasing channel.
    pub qvec: Option<Vec<f64>>,
}

impl ChannelSpec {
    pub fn erasure(d: usize, q: f64) -> Self {
        Self { kind: ChannelKind::Erasure, d, q, qvec: None }
    }

    pub fn qubit_dephasing(q: f64) -> Self {
        Self { kind: ChannelKind::QubitDephasing, d: 2, q, qvec: None }
    }

    pub fn dephasing(qvec: Vec<f64>) -> Self {
        Self { kind: ChannelKind::Dephasing, d: qvec.len(), q: 0.0, qvec: Some(qvec) }
    }

    pub fn depolarizing(d: usize, q: f64) -> Self {
        Self { kind: ChannelKind::Depolarizing, d, q, qvec: None }
    }

    pub fn werner_holevo(d: usize) -> Self {
        Self { kind: ChannelKind::WernerHolevo, d, q: 0.0, qvec: None }
    }

    pub fn epolarizing(d: usize, q: f64) -> Self {
        Self { kind: ChannelKind::Epolarizing, d, q, qvec: None }
    }

    pub fn validate(&self) -> Result<()> {
        if self.d < 2 {
            return Err(Error::BadSpec(format!("dimension {} < 2", self.d)));
        }
        if !(0.0..=1.0).contains(&self.q) {
            return Err(Error::BadSpec(format!("q = {} outside [0,1]", self.q)));
        }
        if self.kind == ChannelKind::QubitDephasing && self.d != 2 {
            return Err(Error::BadSpec("qubit dephasing needs d = 2".into()));
        }
        if let Some(qv) = &self.qvec {
            if qv.len() != self.d {
                return Err(Error::BadSpec(format!("qvec has {} entries, d = {}", qv.len(), self.d)));
            }
            if qv.iter().any(|&p| !(p >= 0.0)) || (qv.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
                return Err(Error::BadSpec("qvec is not a probability vector".into()));
            }
        }
        Ok(())
    }

    /// Phase-flip weights used by the dephasing builders. Without an explicit
    /// `qvec`, weight `1-q` stays on the identity and `q` is spread evenly
    /// over the nontrivial powers of the clock operator.
    fn dephasing_weights(&self) -> Vec<f64> {
        match &self.qvec {
            Some(qv) => qv.clone(),
            None => {
                let rest = self.q / (self.d - 1) as f64;
                std::iter::once(1.0 - self.q)
                    .chain(std::iter::repeat(rest).take(self.d - 1))
                    .collect()
            }
        }
    }
}

/// How a unitary on the channel input is mirrored on the output.
#[derive(Clone, Debug, PartialEq)]
pub enum OutputRep {
    /// `V = U`.
    Same,
    /// `V = Ū` (complex conjugate).
    Conjugate,
    /// `V = U ⊕ 1` on the input block plus the erasure flag.
    ErasureBlock,
    /// `V = 1_S ⊗ U ⊗ Ū` on the control qubit and the two copies.
    Epolarizing,
    /// `V = W U W†` for a unitary channel with unitary `W`.
    Unitary(CMat),
}

impl OutputRep {
    pub fn apply(&self, u: &CMat) -> CMat {
        match self {
            Self::Same => u.clone(),
            Self::Conjugate => u.map(|z| z.conj()),
            Self::ErasureBlock => {
                let d = u.nrows();
                let mut v = CMat::zeros(d + 1, d + 1);
                v.view_mut((0, 0), (d, d)).copy_from(u);
                v[(d, d)] = C64::new(1.0, 0.0);
                v
            }
            Self::Epolarizing => CMat::identity(2, 2)
                .kronecker(u)
                .kronecker(&u.map(|z| z.conj())),
            Self::Unitary(w) => w * u * w.adjoint(),
        }
    }
}

/// A channel given by Kraus operators of shape `out_dim × in_dim`.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<CMat>,
    rep: Option<OutputRep>,
}

impl KrausChannel {
    pub fn new(in_dim: usize, out_dim: usize, kraus: Vec<ComplexMatrix>) -> Result<Self> {
        Self::from_ops(in_dim, out_dim, kraus.into_iter().map(CMat::from).collect())
    }

    fn from_ops(in_dim: usize, out_dim: usize, kraus: Vec<CMat>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::BadSpec("channel needs at least one Kraus operator".into()));
        }
        if let Some(k) = kraus.iter().find(|k| k.shape() != (out_dim, in_dim)) {
            return Err(Error::DimMismatch(format!(
                "Kraus operator {:?} in a {in_dim}->{out_dim} channel",
                k.shape()
            )));
        }
        let ch = Self { in_dim, out_dim, kraus, rep: None };
        let res = ch.completeness_residual();
        if !(res <= COMPLETENESS_TOL) {
            return Err(Error::BadSpec(format!("Kraus completeness residual {res:e}")));
        }
        Ok(ch)
    }

    pub fn identity(d: usize) -> Self {
        Self {
            in_dim: d,
            out_dim: d,
            kraus: vec![CMat::identity(d, d)],
            rep: Some(OutputRep::Same),
        }
    }

    /// The unitary channel `ρ ↦ WρW†`.
    pub fn unitary(w: &CMat) -> Result<Self> {
        let n = w.nrows();
        let ch = Self::from_ops(n, n, vec![w.clone()])?;
        Ok(ch.with_output_rep(OutputRep::Unitary(w.clone())))
    }

    pub fn with_output_rep(mut self, rep: OutputRep) -> Self {
        self.rep = Some(rep);
        self
    }

    pub fn in_dim(&self) -> usize {
        self.in_dim
    }

    pub fn out_dim(&self) -> usize {
        self.out_dim
    }

    pub fn kraus(&self) -> &[CMat] {
        &self.kraus
    }

    pub fn output_rep(&self) -> Option<&OutputRep> {
        self.rep.as_ref()
    }

    pub fn completeness_residual(&self) -> f64 {
        let sum = self
            .kraus
            .iter()
            .fold(CMat::zeros(self.in_dim, self.in_dim), |acc, k| acc + k.adjoint() * k);
        max_abs_diff(&sum, &CMat::identity(self.in_dim, self.in_dim))
    }

    pub fn to_json(&self) -> String {
        let kraus = self
            .kraus
            .iter()
            .map(|k| {
                let (re, im) = ComplexMatrix::wrap(k.clone()).to_parts();
                MatrixJson { re, im }
            })
            .collect();
        serde_json::to_string(&ChannelJson { in_dim: self.in_dim, out_dim: self.out_dim, kraus })
            .expect("plain numeric data serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: ChannelJson = serde_json::from_str(text)?;
        let ops = raw
            .kraus
            .iter()
            .map(|m| ComplexMatrix::from_parts(&m.re, &m.im))
            .collect::<Result<Vec<_>>>()?;
        Self::new(raw.in_dim, raw.out_dim, ops)
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ChannelJson {
    in_dim: usize,
    out_dim: usize,
    kraus: Vec<MatrixJson>,
}

/// Shift operator `X|j⟩ = |j+1 mod d⟩`.
pub fn shift(d: usize) -> CMat {
    CMat::from_fn(d, d, |i, j| if i == (j + 1) % d { 1.0.into() } else { 0.0.into() })
}

/// Clock operator `Z|j⟩ = e^{2πij/d}|j⟩`.
pub fn clock(d: usize) -> CMat {
    CMat::from_fn(d, d, |i, j| {
        if i == j {
            C64::from_polar(1.0, 2.0 * std::f64::consts::PI * i as f64 / d as f64)
        } else {
            0.0.into()
        }
    })
}

/// Heisenberg–Weyl element `X^a Z^b`.
pub fn heisenberg_weyl(d: usize, a: usize, b: usize) -> CMat {
    let x = shift(d);
    let z = clock(d);
    let mut u = CMat::identity(d, d);
    for _ in 0..a {
        u = &x * u;
    }
    let mut zb = CMat::identity(d, d);
    for _ in 0..b {
        zb = &z * zb;
    }
    u * zb
}

/// Kraus operators on the first factor of an isometry `in → X ⊗ Y`,
/// obtained by tracing out `Y`.
fn kraus_keep_first(v: &CMat, x: usize, y: usize) -> Vec<CMat> {
    (0..y)
        .map(|k| CMat::from_fn(x, v.ncols(), |i, j| v[(i * y + k, j)]))
        .collect()
}

/// Kraus operators on the second factor of an isometry `in → X ⊗ Y`.
fn kraus_keep_second(v: &CMat, x: usize, y: usize) -> Vec<CMat> {
    (0..x)
        .map(|k| CMat::from_fn(y, v.ncols(), |i, j| v[(k * y + i, j)]))
        .collect()
}

/// The isometry `A → S G1 G2 A` that applies a controlled swap of `A` and
/// `G1` to `|φ^q⟩_S ⊗ |Φ⟩_{G1G2} ⊗ |ψ⟩_A`, with control
/// `|φ^q⟩ = √(1-q)|0⟩ + √q|1⟩`. Output ordering is `(S, G1, G2, A)`.
pub fn epolarizing_isometry(d: usize, q: f64) -> CMat {
    let idx = |s: usize, g1: usize, g2: usize, a: usize| ((s * d + g1) * d + g2) * d + a;
    let keep = ((1.0 - q) / d as f64).sqrt();
    let swap = (q / d as f64).sqrt();
    let mut v = CMat::zeros(2 * d * d * d, d);
    for j in 0..d {
        for m in 0..d {
            v[(idx(0, m, m, j), j)] += C64::new(keep, 0.0);
            v[(idx(1, j, m, m), j)] += C64::new(swap, 0.0);
        }
    }
    v
}

/// Depolarizing channel recovered from [`epolarizing_isometry`] by tracing
/// out `S G1 G2`.
pub fn depolarizing_from_isometry(d: usize, q: f64) -> Result<KrausChannel> {
    let v = epolarizing_isometry(d, q);
    KrausChannel::from_ops(d, d, kraus_keep_second(&v, 2 * d * d, d))
}

pub fn build_channel(spec: &ChannelSpec) -> Result<KrausChannel> {
    spec.validate()?;
    let d = spec.d;
    let q = spec.q;
    let r = |x: f64| C64::new(x, 0.0);
    match spec.kind {
        ChannelKind::Erasure => {
            let mut ops = Vec::with_capacity(d + 1);
            let mut keep = CMat::zeros(d + 1, d);
            for i in 0..d {
                keep[(i, i)] = r((1.0 - q).sqrt());
            }
            ops.push(keep);
            for j in 0..d {
                let mut k = CMat::zeros(d + 1, d);
                k[(d, j)] = r(q.sqrt());
                ops.push(k);
            }
            Ok(KrausChannel::from_ops(d, d + 1, ops)?.with_output_rep(OutputRep::ErasureBlock))
        }
        ChannelKind::Dephasing | ChannelKind::QubitDephasing => {
            let z = clock(d);
            let mut zi = CMat::identity(d, d);
            let mut ops = Vec::with_capacity(d);
            for p in spec.dephasing_weights() {
                ops.push(&zi * r(p.sqrt()));
                zi = &z * zi;
            }
            Ok(KrausChannel::from_ops(d, d, ops)?.with_output_rep(OutputRep::Same))
        }
        ChannelKind::Depolarizing => {
            let mut ops = vec![CMat::identity(d, d) * r((1.0 - q).sqrt())];
            let w = r((q / d as f64).sqrt());
            for i in 0..d {
                for j in 0..d {
                    let mut k = CMat::zeros(d, d);
                    k[(i, j)] = w;
                    ops.push(k);
                }
            }
            Ok(KrausChannel::from_ops(d, d, ops)?.with_output_rep(OutputRep::Same))
        }
        ChannelKind::WernerHolevo => {
            let w = r(1.0 / ((d - 1) as f64).sqrt());
            let mut ops = Vec::with_capacity(d * (d - 1) / 2);
            for i in 0..d {
                for j in i + 1..d {
                    let mut k = CMat::zeros(d, d);
                    k[(i, j)] = w;
                    k[(j, i)] = -w;
                    ops.push(k);
                }
            }
            Ok(KrausChannel::from_ops(d, d, ops)?.with_output_rep(OutputRep::Conjugate))
        }
        ChannelKind::Epolarizing => {
            let v = epolarizing_isometry(d, q);
            let ops = kraus_keep_first(&v, 2 * d * d, d);
            Ok(KrausChannel::from_ops(d, 2 * d * d, ops)?.with_output_rep(OutputRep::Epolarizing))
        }
    }
}

fn apply_ops(ops: &[CMat], m: &CMat) -> CMat {
    let mut out = CMat::zeros(ops[0].nrows(), ops[0].nrows());
    for k in ops {
        out += k * m * k.adjoint();
    }
    out
}

/// `N(ρ)` for a state on the channel input.
pub fn apply(ch: &KrausChannel, rho: &DensityMatrix) -> Result<DensityMatrix> {
    if rho.dim() != ch.in_dim {
        return Err(Error::DimMismatch(format!(
            "{}-dimensional state into a channel with input dimension {}",
            rho.dim(),
            ch.in_dim
        )));
    }
    Ok(DensityMatrix::from_trusted(apply_ops(&ch.kraus, rho.matrix()), vec![ch.out_dim]))
}

/// Applies the channel to subsystem `which` of a multipartite state.
pub fn apply_on(ch: &KrausChannel, rho: &DensityMatrix, which: usize) -> Result<DensityMatrix> {
    let dims = rho.dims();
    if which >= dims.len() {
        return Err(Error::BadIndex { index: which, count: dims.len() });
    }
    if dims[which] != ch.in_dim {
        return Err(Error::DimMismatch(format!(
            "subsystem {which} has dimension {}, channel input is {}",
            dims[which], ch.in_dim
        )));
    }
    let lifted = ch
        .kraus
        .iter()
        .map(|k| embed_operator(k, dims, which))
        .collect::<Result<Vec<_>>>()?;
    let mut out_dims = dims.to_vec();
    out_dims[which] = ch.out_dim;
    Ok(DensityMatrix::from_trusted(apply_ops(&lifted, rho.matrix()), out_dims))
}

fn choi_of_ops(ops: &[CMat], in_dim: usize) -> CMat {
    let out_dim = ops[0].nrows();
    let lifted: Vec<CMat> = ops
        .iter()
        .map(|k| CMat::identity(in_dim, in_dim).kronecker(k))
        .collect();
    let phi = crate::numkit::projector(&crate::numkit::max_entangled_ket(in_dim));
    let m = apply_ops(&lifted, &phi);
    debug_assert_eq!(m.nrows(), in_dim * out_dim);
    m
}

/// Choi state `(id ⊗ N)(Φ)`, dims `[in_dim, out_dim]`.
pub fn choi(ch: &KrausChannel) -> DensityMatrix {
    DensityMatrix::from_trusted(choi_of_ops(&ch.kraus, ch.in_dim), vec![ch.in_dim, ch.out_dim])
}

/// Trace distance between the Choi states of two channels.
pub fn choi_distance(a: &KrausChannel, b: &KrausChannel) -> Result<f64> {
    if a.in_dim != b.in_dim || a.out_dim != b.out_dim {
        return Err(Error::DimMismatch(format!(
            "{}->{} vs {}->{} channels",
            a.in_dim, a.out_dim, b.in_dim, b.out_dim
        )));
    }
    trace_distance(&choi(a), &choi(b))
}

/// The isometry `Σ_i K_i ⊗ |i⟩_E`, mapping input to `B ⊗ E`.
pub fn isometric_extension(ch: &KrausChannel) -> CMat {
    let r = ch.kraus.len();
    let mut v = CMat::zeros(ch.out_dim * r, ch.in_dim);
    for (i, k) in ch.kraus.iter().enumerate() {
        for b in 0..ch.out_dim {
            for j in 0..ch.in_dim {
                v[(b * r + i, j)] = k[(b, j)];
            }
        }
    }
    v
}

/// Complementary channel in the environment basis indexed by the Kraus
/// operators: `ρ ↦ Σ_ij Tr(K_i ρ K_j†) |i⟩⟨j|`.
pub fn complementary(ch: &KrausChannel) -> KrausChannel {
    let r = ch.kraus.len();
    let v = isometric_extension(ch);
    KrausChannel {
        in_dim: ch.in_dim,
        out_dim: r,
        kraus: kraus_keep_second(&v, ch.out_dim, r),
        rep: None,
    }
}

/// Maximum Choi-matrix discrepancy `|N∘U^g − V^g∘N|` over the generators
/// `g ∈ {X, Z}` of the Heisenberg–Weyl group.
pub fn check_hw_covariance(ch: &KrausChannel) -> Result<f64> {
    let rep = ch.rep.as_ref().ok_or(Error::NoOutputRep)?;
    let d = ch.in_dim;
    let mut worst = 0.0f64;
    for u in [shift(d), clock(d)] {
        let v = rep.apply(&u);
        if v.nrows() != ch.out_dim {
            return Err(Error::NoOutputRep);
        }
        let before: Vec<CMat> = ch.kraus.iter().map(|k| k * &u).collect();
        let after: Vec<CMat> = ch.kraus.iter().map(|k| &v * k).collect();
        worst = worst.max(max_abs_diff(&choi_of_ops(&before, d), &choi_of_ops(&after, d)));
    }
    Ok(worst)
}

/// Simulates a covariant channel by teleporting the input through its own
/// Choi state: a generalized Bell measurement on the input and the first
/// half of the Choi state, then the output-representation correction
/// `V^{ab}` on the second half.
pub fn teleportation_simulate(ch: &KrausChannel) -> Result<KrausChannel> {
    let residual = check_hw_covariance(ch)?;
    if residual > COVARIANCE_TOL {
        return Err(Error::NotCovariant(residual));
    }
    let rep = ch.rep.as_ref().ok_or(Error::NoOutputRep)?;
    let (d, n) = (ch.in_dim, ch.out_dim);
    let resource = choi(ch);
    let eig = eig_unchecked(resource.matrix());
    // resource = Σ_r |w_r⟩⟨w_r|, each reshaped to a d×n matrix W_r
    let components: Vec<CMat> = eig
        .values
        .iter()
        .enumerate()
        .filter(|(_, &mu)| mu > 1e-15)
        .map(|(r, &mu)| CMat::from_fn(d, n, |m, b| eig.vectors[(m * n + b, r)] * mu.sqrt()))
        .collect();
    let scale = C64::new(1.0 / (d as f64).sqrt(), 0.0);
    let mut ops = Vec::with_capacity(d * d * components.len());
    for a in 0..d {
        for b in 0..d {
            let u = heisenberg_weyl(d, a, b);
            let v = rep.apply(&u);
            let u_dag = u.adjoint();
            for w in &components {
                ops.push(&v * w.transpose() * &u_dag * scale);
            }
        }
    }
    Ok(KrausChannel::from_ops(d, n, ops)?.with_output_rep(rep.clone()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EbVerdict {
    Yes,
    No,
    Inconclusive,
}

/// Entanglement-breaking test via the partial transpose of the Choi state.
/// Exact when `in_dim · out_dim ≤ 6`; otherwise a PPT Choi state is
/// reported as inconclusive.
pub fn is_entanglement_breaking(ch: &KrausChannel) -> EbVerdict {
    let c = choi(ch);
    let pt = partial_transpose_op(c.matrix(), c.dims(), 1).expect("choi state is bipartite");
    let min = eig_unchecked(&crate::numkit::hermitize(&pt)).min();
    if min < -1e-12 {
        EbVerdict::No
    } else if ch.in_dim * ch.out_dim <= 6 {
        EbVerdict::Yes
    } else {
        EbVerdict::Inconclusive
    }
}

/// Result of [`complement_choi_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplementChoiCheck {
    /// Whether `K_i K_j† = (K_j† K_i)^T` for every pair of Kraus operators.
    pub condition_holds: bool,
    /// Trace distance between the Choi state of the complement and the
    /// maximally mixed state sent through the isometric extension.
    pub choi_vs_isometry_distance: f64,
    /// Half trace norm between the Choi operators of the channel and of the
    /// map with transposed Kraus operators. Zero iff the two states above
    /// agree up to a unitary on the environment.
    pub environment_gauge_distance: f64,
}

/// Tests the Kraus condition under which the Choi state of the
/// complementary channel equals the isometric extension applied to the
/// maximally mixed input.
pub fn complement_choi_check(ch: &KrausChannel) -> ComplementChoiCheck {
    if ch.in_dim != ch.out_dim {
        return ComplementChoiCheck {
            condition_holds: false,
            choi_vs_isometry_distance: f64::INFINITY,
            environment_gauge_distance: f64::INFINITY,
        };
    }
    let mut worst = 0.0f64;
    for ki in &ch.kraus {
        for kj in &ch.kraus {
            let lhs = ki * kj.adjoint();
            let rhs = (kj.adjoint() * ki).transpose();
            worst = worst.max(max_abs_diff(&lhs, &rhs));
        }
    }
    let comp_choi = choi(&complementary(ch));
    let v = isometric_extension(ch);
    let pi = CMat::identity(ch.in_dim, ch.in_dim) / C64::new(ch.in_dim as f64, 0.0);
    let through = DensityMatrix::from_trusted(&v * pi * v.adjoint(), comp_choi.dims().to_vec());
    let transposed: Vec<CMat> = ch.kraus.iter().map(|k| k.transpose()).collect();
    let gauge_diff = choi_of_ops(&ch.kraus, ch.in_dim) - choi_of_ops(&transposed, ch.in_dim);
    let gauge = 0.5
        * eig_unchecked(&crate::numkit::hermitize(&gauge_diff))
            .values
            .iter()
            .map(|v| v.abs())
            .sum::<f64>();
    ComplementChoiCheck {
        condition_holds: worst <= 1e-10,
        choi_vs_isometry_distance: trace_distance(&comp_choi, &through)
            .expect("dimensions agree by construction"),
        environment_gauge_distance: gauge,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numkit::{basis_ket, hermitian_eig, max_entangled_ket, partial_trace, projector};

    #[test]
    fn completeness_for_every_family() {
        let specs = [
            ChannelSpec::erasure(3, 0.4),
            ChannelSpec::qubit_dephasing(0.3),
            ChannelSpec::dephasing(vec![0.5, 0.2, 0.3]),
            ChannelSpec::depolarizing(3, 0.7),
            ChannelSpec::werner_holevo(4),
            ChannelSpec::epolarizing(2, 0.5),
            ChannelSpec::epolarizing(3, 0.2),
        ];
        for s in &specs {
            let ch = build_channel(s).unwrap();
            assert!(ch.completeness_residual() <= 1e-12, "{s:?}");
            let c = choi(&ch);
            let marg = partial_trace(&c, &[0]).unwrap();
            let pi = DensityMatrix::maximally_mixed(vec![ch.in_dim()]);
            assert!(max_abs_diff(marg.matrix(), pi.matrix()) < 1e-10, "{s:?}");
        }
        assert_eq!(build_channel(&ChannelSpec::erasure(3, 0.4)).unwrap().out_dim(), 4);
        assert_eq!(build_channel(&ChannelSpec::epolarizing(3, 0.4)).unwrap().out_dim(), 18);
    }

    #[test]
    fn bad_specs_rejected() {
        assert!(matches!(build_channel(&ChannelSpec::erasure(1, 0.5)), Err(Error::BadSpec(_))));
        assert!(build_channel(&ChannelSpec::depolarizing(2, 1.5)).is_err());
        assert!(build_channel(&ChannelSpec::dephasing(vec![0.5, 0.6])).is_err());
        let mut s = ChannelSpec::qubit_dephasing(0.2);
        s.d = 3;
        assert!(build_channel(&s).is_err());
    }

    #[test]
    fn noiseless_erasure_embeds_identity() {
        let ch = build_channel(&ChannelSpec::erasure(2, 0.0)).unwrap();
        let c = choi(&ch);
        // restrict to the non-erasure block of the output
        let block = CMat::from_fn(4, 4, |r, s| c.matrix()[((r / 2) * 3 + r % 2, (s / 2) * 3 + s % 2)]);
        assert!(max_abs_diff(&block, &projector(&max_entangled_ket(2))) < 1e-15);
    }

    #[test]
    fn werner_holevo_qubit_is_pauli_y() {
        let ch = build_channel(&ChannelSpec::werner_holevo(2)).unwrap();
        let y = CMat::from_row_slice(2, 2, &[0.0.into(), C64::new(0.0, -1.0), C64::new(0.0, 1.0), 0.0.into()]);
        let yc = KrausChannel::unitary(&y).unwrap();
        assert!(choi_distance(&ch, &yc).unwrap() < 1e-14);
    }

    #[test]
    fn werner_holevo_choi_is_antisymmetric_state() {
        for d in 2..=4 {
            let ch = build_channel(&ChannelSpec::werner_holevo(d)).unwrap();
            let swap = CMat::from_fn(d * d, d * d, |r, s| {
                if r == (s % d) * d + s / d { 1.0.into() } else { 0.0.into() }
            });
            let alpha = (CMat::identity(d * d, d * d) - swap) / C64::new((d * (d - 1)) as f64, 0.0);
            assert!(max_abs_diff(choi(&ch).matrix(), &alpha) < 1e-14);
        }
    }

    #[test]
    fn epolarizing_without_noise_is_constant() {
        let ch = build_channel(&ChannelSpec::epolarizing(2, 0.0)).unwrap();
        let target = CMat::identity(1, 1)
            .kronecker(&projector(&basis_ket(2, 0)))
            .kronecker(&projector(&max_entangled_ket(2)));
        for psi in [basis_ket(2, 0), basis_ket(2, 1), basis_ket(2, 0) + basis_ket(2, 1)] {
            let rho = DensityMatrix::pure(&psi, vec![2]).unwrap();
            let out = apply(&ch, &rho).unwrap();
            assert!(max_abs_diff(out.matrix(), &target) < 1e-15);
        }
    }

    #[test]
    fn epolarizing_isometry_recovers_depolarizing() {
        for d in [2, 3] {
            for q in [0.0, 0.25, 0.6, 1.0] {
                let from_iso = depolarizing_from_isometry(d, q).unwrap();
                let direct = build_channel(&ChannelSpec::depolarizing(d, q)).unwrap();
                assert!(choi_distance(&from_iso, &direct).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn apply_examples() {
        let plus = DensityMatrix::pure(&(basis_ket(2, 0) + basis_ket(2, 1)), vec![2]).unwrap();
        let id = KrausChannel::identity(2);
        assert!(max_abs_diff(apply(&id, &plus).unwrap().matrix(), plus.matrix()) < 1e-15);
        let pi = DensityMatrix::maximally_mixed(vec![2]);
        let full = build_channel(&ChannelSpec::depolarizing(2, 1.0)).unwrap();
        assert!(max_abs_diff(apply(&full, &plus).unwrap().matrix(), pi.matrix()) < 1e-15);
        let deph = build_channel(&ChannelSpec::qubit_dephasing(0.5)).unwrap();
        assert!(max_abs_diff(apply(&deph, &plus).unwrap().matrix(), pi.matrix()) < 1e-15);
        assert!(matches!(apply(&deph, &DensityMatrix::maximally_mixed(vec![3])), Err(Error::DimMismatch(_))));
    }

    #[test]
    fn choi_examples() {
        let id = KrausChannel::identity(2);
        assert!(max_abs_diff(choi(&id).matrix(), &projector(&max_entangled_ket(2))) < 1e-15);
        // erasure(2, 0.5): 0.5 Φ + 0.5 π ⊗ |e⟩⟨e|
        let ch = build_channel(&ChannelSpec::erasure(2, 0.5)).unwrap();
        let mut phi3 = CMat::zeros(6, 1);
        phi3[(0, 0)] = (0.5f64).sqrt().into();
        phi3[(4, 0)] = (0.5f64).sqrt().into();
        let flag = CMat::identity(2, 2).kronecker(&projector(&basis_ket(3, 2))) * C64::new(0.25, 0.0);
        let expect = projector(&phi3) * C64::new(0.5, 0.0) + flag;
        assert!(max_abs_diff(choi(&ch).matrix(), &expect) < 1e-15);
        let marg_b = partial_trace(&choi(&ch), &[1]).unwrap();
        let diag = [0.25, 0.25, 0.5];
        for (i, v) in diag.iter().enumerate() {
            assert!((marg_b.matrix()[(i, i)].re - v).abs() < 1e-15);
        }
    }

    #[test]
    fn dephasing_choi_spectrum() {
        let ch = build_channel(&ChannelSpec::qubit_dephasing(0.25)).unwrap();
        let e = hermitian_eig(choi(&ch).matrix()).unwrap();
        for (v, x) in e.values.iter().zip([0.0, 0.0, 0.25, 0.75]) {
            assert!((v - x).abs() < 1e-12);
        }
    }

    #[test]
    fn complement_of_unitary_is_constant() {
        let h = CMat::from_row_slice(2, 2, &[1.0.into(), 1.0.into(), 1.0.into(), (-1.0).into()])
            * C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let comp = complementary(&KrausChannel::unitary(&h).unwrap());
        assert_eq!(comp.out_dim(), 1);
        let id_comp = complementary(&KrausChannel::identity(2));
        let rho = DensityMatrix::pure(&basis_ket(2, 1), vec![2]).unwrap();
        assert!((apply(&id_comp, &rho).unwrap().matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complement_entropy_matches_on_pure_inputs() {
        use crate::numkit::von_neumann_entropy;
        let ch = build_channel(&ChannelSpec::depolarizing(2, 0.4)).unwrap();
        let comp = complementary(&ch);
        let psi = basis_ket(2, 0) * C64::new(0.6, 0.0) + basis_ket(2, 1) * C64::new(0.0, 0.8);
        let rho = DensityMatrix::pure(&psi, vec![2]).unwrap();
        let a = von_neumann_entropy(&apply(&ch, &rho).unwrap());
        let b = von_neumann_entropy(&apply(&comp, &rho).unwrap());
        assert!((a - b).abs() < 1e-10);
    }

    #[test]
    fn covariance_residuals() {
        let dep = build_channel(&ChannelSpec::depolarizing(3, 0.7)).unwrap();
        assert!(check_hw_covariance(&dep).unwrap() <= 1e-12);
        let era = build_channel(&ChannelSpec::erasure(2, 0.3)).unwrap();
        assert!(check_hw_covariance(&era).unwrap() <= 1e-12);
        let epo = build_channel(&ChannelSpec::epolarizing(2, 0.5)).unwrap();
        assert!(check_hw_covariance(&epo).unwrap() <= 1e-12);
        let wh = build_channel(&ChannelSpec::werner_holevo(3)).unwrap();
        assert!(check_hw_covariance(&wh).unwrap() <= 1e-12);
        let comp = complementary(&dep);
        assert_eq!(check_hw_covariance(&comp), Err(Error::NoOutputRep));
        // wrong representation is detected
        let wrong = build_channel(&ChannelSpec::werner_holevo(3)).unwrap().with_output_rep(OutputRep::Same);
        assert!(check_hw_covariance(&wrong).unwrap() > 1e-3);
    }

    #[test]
    fn teleportation_examples() {
        let id = KrausChannel::identity(2);
        let sim = teleportation_simulate(&id).unwrap();
        assert!(choi_distance(&sim, &id).unwrap() <= 1e-12);
        let deph = build_channel(&ChannelSpec::qubit_dephasing(0.3)).unwrap();
        assert!(choi_distance(&teleportation_simulate(&deph).unwrap(), &deph).unwrap() <= 1e-10);
        let wh = build_channel(&ChannelSpec::werner_holevo(3)).unwrap();
        assert!(choi_distance(&teleportation_simulate(&wh).unwrap(), &wh).unwrap() <= 1e-10);
        let bad = build_channel(&ChannelSpec::werner_holevo(3)).unwrap().with_output_rep(OutputRep::Same);
        assert!(matches!(teleportation_simulate(&bad), Err(Error::NotCovariant(_))));
    }

    #[test]
    fn entanglement_breaking_verdicts() {
        let half = build_channel(&ChannelSpec::qubit_dephasing(0.5)).unwrap();
        assert_eq!(is_entanglement_breaking(&half), EbVerdict::Yes);
        let part = build_channel(&ChannelSpec::qubit_dephasing(0.3)).unwrap();
        assert_eq!(is_entanglement_breaking(&part), EbVerdict::No);
        let wh = build_channel(&ChannelSpec::werner_holevo(4)).unwrap();
        assert_eq!(is_entanglement_breaking(&wh), EbVerdict::No);
        let full = build_channel(&ChannelSpec::depolarizing(3, 1.0)).unwrap();
        assert_eq!(is_entanglement_breaking(&full), EbVerdict::Inconclusive);
    }

    #[test]
    fn complement_choi_check_examples() {
        for d in [2, 3, 4] {
            let ch = build_channel(&ChannelSpec::depolarizing(d, 0.0)).unwrap();
            let r = complement_choi_check(&ch);
            assert!(r.condition_holds);
            assert!(r.choi_vs_isometry_distance <= 1e-10);
        }
        // With noise the |i><j| Kraus operators break the pairwise condition
        // (K = |0><1| gives |0><0| against |1><1|); the two states then agree
        // only after relabeling the environment.
        for (d, q) in [(2, 0.5), (3, 0.25)] {
            let ch = build_channel(&ChannelSpec::depolarizing(d, q)).unwrap();
            let r = complement_choi_check(&ch);
            assert!(!r.condition_holds);
            assert!(r.choi_vs_isometry_distance > 1e-3);
            assert!(r.environment_gauge_distance <= 1e-10);
        }
        // amplitude damping: transposing the Kraus set changes the map
        let g: f64 = 0.3;
        let k0 = CMat::from_row_slice(2, 2, &[1.0.into(), 0.0.into(), 0.0.into(), (1.0 - g).sqrt().into()]);
        let k1 = CMat::from_row_slice(2, 2, &[0.0.into(), g.sqrt().into(), 0.0.into(), 0.0.into()]);
        let ch = KrausChannel::new(2, 2, vec![ComplexMatrix::wrap(k0), ComplexMatrix::wrap(k1)]).unwrap();
        let r = complement_choi_check(&ch);
        assert!(!r.condition_holds);
        assert!(r.choi_vs_isometry_distance > 1e-3);
        assert!(r.environment_gauge_distance > 1e-3);
    }

    #[test]
    fn choi_distance_examples() {
        let id = KrausChannel::identity(2);
        let x = KrausChannel::unitary(&shift(2)).unwrap();
        assert!((choi_distance(&id, &x).unwrap() - 1.0).abs() < 1e-14);
        let dep0 = build_channel(&ChannelSpec::depolarizing(2, 0.0)).unwrap();
        assert!(choi_distance(&dep0, &id).unwrap() < 1e-15);
        assert!(choi_distance(&id, &KrausChannel::identity(3)).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let ch = build_channel(&ChannelSpec::erasure(2, 0.3)).unwrap();
        let back = KrausChannel::from_json(&ch.to_json()).unwrap();
        assert!(choi_distance(&ch, &back).unwrap() < 1e-15);
        assert!(KrausChannel::from_json(r#"{"in_dim":1,"out_dim":1,"kraus":[{"re":[[0.5]],"im":[[0]]}]}"#).is_err());
    }
}
