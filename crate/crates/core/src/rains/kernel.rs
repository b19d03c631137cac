//! Scalar-generic numerics behind the Rains solver. Real states run the same
//! code on real symmetric matrices, which is several times cheaper.

use std::f64::consts::LN_2;

use nalgebra::{ComplexField, DMatrix};

pub(crate) trait Field: ComplexField<RealField = f64> + Copy {}
impl<T: ComplexField<RealField = f64> + Copy> Field for T {}

pub(crate) type Mat<T> = DMatrix<T>;

pub(crate) struct Eig<T> {
    pub values: Vec<f64>,
    pub vectors: Mat<T>,
}

impl<T: Field> Eig<T> {
    pub fn map<F: Fn(f64) -> f64>(&self, f: F) -> Mat<T> {
        let mut scaled = self.vectors.clone();
        for (k, &lam) in self.values.iter().enumerate() {
            scaled.column_mut(k).scale_mut(f(lam));
        }
        scaled * self.vectors.adjoint()
    }
}

pub(crate) fn hermitize<T: Field>(x: &Mat<T>) -> Mat<T> {
    (x + x.adjoint()) * T::from_real(0.5)
}

pub(crate) fn eigh<T: Field>(x: &Mat<T>) -> Eig<T> {
    let se = hermitize(x).symmetric_eigen();
    Eig {
        values: se.eigenvalues.iter().copied().collect(),
        vectors: se.eigenvectors,
    }
}

pub(crate) fn inner<T: Field>(a: &Mat<T>, b: &Mat<T>) -> f64 {
    a.dotc(b).real()
}

/// Bipartite split `[dA, dB]` with the partial transpose on `B`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Split {
    pub da: usize,
    pub db: usize,
}

impl Split {
    pub fn n(&self) -> usize {
        self.da * self.db
    }

    pub fn pt<T: Field>(&self, x: &Mat<T>) -> Mat<T> {
        let db = self.db;
        Mat::from_fn(self.n(), self.n(), |r, c| {
            let (a1, b1) = (r / db, r % db);
            let (a2, b2) = (c / db, c % db);
            x[(a1 * db + b2, a2 * db + b1)]
        })
    }

    pub fn pt_norm<T: Field>(&self, x: &Mat<T>) -> f64 {
        eigh(&self.pt(x)).values.iter().map(|v| v.abs()).sum()
    }

    pub fn ball<T: Field>(&self, x: &Mat<T>) -> Mat<T> {
        let e = eigh(&self.pt(x));
        let theta = l1_threshold(&e.values);
        if theta == 0.0 {
            return hermitize(x);
        }
        self.pt(&e.map(|v| v.signum() * (v.abs() - theta).max(0.0)))
    }

    /// Dykstra's algorithm as block coordinate ascent on the dual variable
    /// `q` of the ball constraint; any starting `q` is valid. Returns the last
    /// ball iterate and whether successive iterates settled within `tol`.
    pub fn dykstra<T: Field>(&self, x: &Mat<T>, tol: f64, cap: usize, q: &mut Mat<T>) -> (Mat<T>, bool) {
        let mut prev: Option<Mat<T>> = None;
        for _ in 0..cap {
            let xq = x - &*q;
            let a = clip_psd(&xq);
            let xp = x - (&xq - &a);
            let b = self.ball(&xp);
            *q = &xp - &b;
            if let Some(prev) = &prev {
                if (&b - prev).norm() <= tol {
                    return (b, true);
                }
            }
            prev = Some(b);
        }
        (prev.unwrap_or_else(|| x.clone()), false)
    }

    /// Approximate projection made exactly feasible: clip to PSD, then scale
    /// into the ball. Both operations preserve the other constraint.
    pub fn feasible_projection<T: Field>(&self, x: &Mat<T>, tol: f64, cap: usize, q: &mut Mat<T>) -> Mat<T> {
        let (y, _) = self.dykstra(x, tol, cap, q);
        restore(self, &y)
    }
}

pub(crate) fn restore<T: Field>(split: &Split, y: &Mat<T>) -> Mat<T> {
    let c = clip_psd(y);
    let s = split.pt_norm(&c);
    if s > 1.0 {
        c * T::from_real(1.0 / s)
    } else {
        c
    }
}

pub(crate) fn clip_psd<T: Field>(x: &Mat<T>) -> Mat<T> {
    eigh(x).map(|v| v.max(0.0))
}

/// Soft threshold that projects the vector onto the unit l1 ball.
pub(crate) fn l1_threshold(values: &[f64]) -> f64 {
    let mut mags: Vec<f64> = values.iter().map(|v| v.abs()).collect();
    if mags.iter().sum::<f64>() <= 1.0 {
        return 0.0;
    }
    mags.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, &m) in mags.iter().enumerate() {
        cum += m;
        let t = (cum - 1.0) / (k + 1) as f64;
        if m > t {
            theta = t;
        } else {
            break;
        }
    }
    theta
}

/// `(ln a − ln b)/(a − b)`, and `1/b` on the diagonal.
pub(crate) fn first_divided_log(a: f64, b: f64) -> f64 {
    let r = (a - b) / b;
    if r == 0.0 {
        1.0 / b
    } else {
        r.ln_1p() / (r * b)
    }
}

/// `D(ρ‖τ)` data at one point, kept in the eigenbasis of `τ`.
pub(crate) struct Point<T> {
    pub value: f64,
    pub lam: Vec<f64>,
    pub vectors: Mat<T>,
    pub rho_t: Mat<T>,
}

impl<T: Field> Point<T> {
    /// Evaluates at `τ` with eigenvalues `lam` (all positive) and eigenvectors
    /// `vectors`.
    pub fn new(rho: &Mat<T>, entropy: f64, lam: Vec<f64>, vectors: Mat<T>) -> Self {
        let rho_t = vectors.adjoint() * rho * &vectors;
        let cross: f64 = lam
            .iter()
            .enumerate()
            .map(|(i, &l)| rho_t[(i, i)].real() * l.log2())
            .sum();
        Point {
            value: -entropy - cross,
            lam,
            vectors,
            rho_t,
        }
    }

    /// Gradient in bits, `−(1/ln 2) V (ρ̃ ∘ L) V†` with `L` the divided
    /// differences of the logarithm.
    pub fn gradient(&self) -> Mat<T> {
        let n = self.lam.len();
        let lam = &self.lam;
        let g = Mat::from_fn(n, n, |i, j| self.rho_t[(i, j)] * T::from_real(first_divided_log(lam[i], lam[j])));
        hermitize(&(&self.vectors * g * self.vectors.adjoint())) * T::from_real(-1.0 / LN_2)
    }
}

pub(crate) struct Settings {
    pub tol_bits: f64,
    pub max_iter: usize,
    pub dykstra_tol: f64,
    pub dykstra_cap: usize,
    pub eig_floor: f64,
    pub mix_schedule: &'static [f64],
}

pub(crate) struct Outcome<T> {
    pub value: f64,
    pub tau: Mat<T>,
    pub iterations: usize,
    pub final_gap: f64,
    pub converged: bool,
}

const ARMIJO: f64 = 1e-4;
const SHRINK: f64 = 0.5;
const WINDOW: usize = 50;
const MIN_STEP: f64 = 1e-20;
const MAX_STEP: f64 = 1e4;

/// Objective in the mixed variable: `τ = (1−ε)σ + ε I/n` for feasible `σ`.
struct Mixed<'a, T> {
    rho: &'a Mat<T>,
    entropy: f64,
    eps: f64,
    n: usize,
}

struct Iterate<T> {
    sigma: Mat<T>,
    point: Point<T>,
    grad: Mat<T>,
}

impl<T: Field> Mixed<'_, T> {
    fn point(&self, sigma: &Mat<T>) -> Point<T> {
        let e = eigh(sigma);
        let lam = e
            .values
            .iter()
            .map(|&v| (1.0 - self.eps) * v.max(0.0) + self.eps / self.n as f64)
            .collect();
        Point::new(self.rho, self.entropy, lam, e.vectors)
    }

    fn iterate(&self, sigma: Mat<T>, point: Point<T>) -> Iterate<T> {
        let grad = point.gradient() * T::from_real(1.0 - self.eps);
        Iterate { sigma, point, grad }
    }

    fn tau(&self, sigma: &Mat<T>) -> Mat<T> {
        sigma * T::from_real(1.0 - self.eps) + Mat::identity(self.n, self.n) * T::from_real(self.eps / self.n as f64)
    }
}

/// Projected gradient descent over the PPT′ set, run through a decreasing
/// schedule of identity admixtures so that the objective stays finite and
/// well conditioned early on.
pub(crate) fn minimize<T: Field>(rho: &Mat<T>, entropy: f64, split: Split, s: &Settings) -> Outcome<T> {
    let n = split.n();
    let mut q = Mat::<T>::zeros(n, n);
    let scale = 1.0 / split.pt_norm(rho).max(1.0);
    let sigma = split.feasible_projection(&(rho * T::from_real(scale)), s.dykstra_tol, s.dykstra_cap, &mut q);
    let mut iterations = 0;
    let mut converged = true;
    let mut step = f64::NAN;
    let mut model = Mixed { rho, entropy, eps: s.mix_schedule[0], n };
    let mut cur = {
        let p = model.point(&sigma);
        model.iterate(sigma.clone(), p)
    };
    for &eps in s.mix_schedule {
        model.eps = eps;
        let p = model.point(&cur.sigma);
        cur = model.iterate(cur.sigma, p);
        if !step.is_finite() {
            step = 1.0 / cur.grad.norm().max(1.0);
        }
        let mut history = vec![cur.point.value];
        loop {
            if iterations >= s.max_iter {
                converged = false;
                break;
            }
            iterations += 1;
            let mut t = step;
            let mut accepted = None;
            let mut cold = false;
            loop {
                if t < MIN_STEP {
                    // a warm dual can keep short steps away from σ; retry cold
                    if cold {
                        break;
                    }
                    cold = true;
                    q.fill(T::zero());
                    t = step;
                }
                let mut q_try = q.clone();
                let trial = split.feasible_projection(
                    &(&cur.sigma - &cur.grad * T::from_real(t)),
                    s.dykstra_tol,
                    s.dykstra_cap,
                    &mut q_try,
                );
                let p = model.point(&trial);
                let dec = inner(&cur.grad, &(&trial - &cur.sigma)).min(0.0);
                if p.value <= cur.point.value + ARMIJO * dec && p.value <= cur.point.value {
                    q = q_try;
                    accepted = Some((trial, p));
                    break;
                }
                t *= SHRINK;
            }
            let Some((trial, p)) = accepted else {
                // no decrease at any step length: stationary up to rounding
                break;
            };
            let next = model.iterate(trial, p);
            let d = &next.sigma - &cur.sigma;
            let sy = inner(&d, &(&next.grad - &cur.grad));
            step = if sy > 0.0 {
                (inner(&d, &d) / sy).clamp(MIN_STEP, MAX_STEP)
            } else {
                (2.0 * t).min(MAX_STEP)
            };
            cur = next;
            history.push(cur.point.value);
            if history.len() > WINDOW && history[history.len() - 1 - WINDOW] - cur.point.value <= s.tol_bits / 10.0 {
                break;
            }
        }
        if !converged {
            break;
        }
    }
    let probe = split.feasible_projection(
        &(&cur.sigma - &cur.grad * T::from_real(step)),
        s.dykstra_tol,
        s.dykstra_cap,
        &mut q,
    );
    let final_gap = inner(&cur.grad, &(&cur.sigma - probe)).max(0.0);
    let mut value = cur.point.value;
    let mut tau = model.tau(&cur.sigma);
    // σ itself is feasible and may beat the mixture when it covers supp ρ
    let e = eigh(&cur.sigma);
    let rho_t = e.vectors.adjoint() * rho * &e.vectors;
    let covered = e
        .values
        .iter()
        .enumerate()
        .all(|(i, &l)| l > s.eig_floor || rho_t[(i, i)].real() <= s.eig_floor);
    if covered {
        let lam = e.values.iter().map(|l| l.max(s.eig_floor)).collect();
        let bare = Point::new(rho, entropy, lam, e.vectors);
        if bare.value < value {
            value = bare.value;
            tau = hermitize(&cur.sigma);
        }
    }
    Outcome {
        value,
        tau,
        iterations,
        final_gap,
        converged,
    }
}
