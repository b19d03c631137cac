//! One test per acceptance criterion. Each writes a `PASS`/`FAIL` line to
//! stderr (bypassing the test harness capture) before asserting.

use std::io::Write;
use std::time::{Duration, Instant};

use entcost::channels::{
    build_channel, choi_distance, complement_choi_check, teleportation_simulate, ChannelSpec, KrausChannel,
};
use entcost::formulas::{
    dephasing_cost, dephasing_distillable, erasure_cost, erasure_distillable, pure_amp_cost,
    pure_amp_distillable, pure_loss_cost, pure_loss_distillable, wh_bounds,
};
use entcost::gaussian::{
    apply_bosonic, eof_pure_amp, eof_pure_loss, symplectic_eigenvalues, tmsv, BosonicChannelParams,
    TmsvParams, BONA_FIDE_TOL,
};
use entcost::measures::{eof_estimate, eof_two_qubit};
use entcost::numkit::{
    basis_ket, hermitian_eig, hermitize, max_abs_diff, random_density, random_unitary,
    von_neumann_entropy, CMat, DensityMatrix, C64,
};
use entcost::rains::{
    dykstra_project, ppt_norm, project_ppt_ball, rel_entropy_gradient, solve_rains, RainsProblem,
};
use entcost_cli::{figure, RunConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Criterion {
    id: u8,
    title: &'static str,
    budget: Duration,
    start: Instant,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: u8, title: &'static str, budget_secs: u64) -> Self {
        Self {
            id,
            title,
            budget: Duration::from_secs(budget_secs),
            start: Instant::now(),
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn close(&mut self, what: &str, got: f64, want: f64, tol: f64) {
        self.check((got - want).abs() <= tol, || format!("{what}: {got} vs {want} (tol {tol:e})"));
    }

    fn note(&mut self, s: String) {
        self.notes.push(s);
    }

    fn finish(mut self) {
        let elapsed = self.start.elapsed();
        if elapsed > self.budget {
            self.failures
                .push(format!("runtime {elapsed:.2?} exceeds {:?}", self.budget));
        }
        let status = if self.failures.is_empty() { "PASS" } else { "FAIL" };
        let mut detail = self.notes.join("; ");
        if !self.failures.is_empty() {
            let shown: Vec<_> = self.failures.iter().take(4).cloned().collect();
            detail = format!("{} failure(s): {}", self.failures.len(), shown.join("; "));
        }
        let line = format!(
            "criterion {:>2} {status} {} [{elapsed:.2?}] {detail}\n",
            self.id, self.title
        );
        std::io::stderr().write_all(line.as_bytes()).unwrap();
        assert!(self.failures.is_empty(), "{line}");
    }
}

// reference entropy functions, written out independently of the library
fn h2(x: f64) -> f64 {
    let t = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    t(x) + t(1.0 - x)
}

fn g2(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        (x + 1.0) * (x + 1.0).log2() - x * x.log2()
    }
}

fn grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| a + (b - a) * k as f64 / (n - 1) as f64).collect()
}

#[test]
fn criterion_01_dephasing() {
    let mut c = Criterion::new(1, "dephasing cost and distillable entanglement", 1);
    for q in grid(0.0, 1.0, 101) {
        let cost = dephasing_cost(q).unwrap();
        let dist = dephasing_distillable(q).unwrap();
        c.close(&format!("E_C({q})"), cost, h2(0.5 + (q * (1.0 - q)).sqrt()), 1e-12);
        c.close(&format!("E_D({q})"), dist, 1.0 - h2(q), 1e-12);
        c.check(cost >= dist, || format!("E_C < E_D at q={q}"));
    }
    // 50-digit reference evaluations
    c.close("E_C(0.25)", dephasing_cost(0.25).unwrap(), 0.354578902665, 1e-9);
    c.close("E_D(0.25)", dephasing_distillable(0.25).unwrap(), 0.188721875540, 1e-9);
    c.check(dephasing_cost(0.5).unwrap() == 0.0, || "E_C(1/2) != 0".into());
    c.check(dephasing_distillable(0.5).unwrap() == 0.0, || "E_D(1/2) != 0".into());
    c.finish();
}

#[test]
fn criterion_02_erasure() {
    let mut c = Criterion::new(2, "erasure reversibility", 1);
    for d in [2usize, 3, 4] {
        for q in [0.0, 0.25, 0.5, 1.0] {
            let want = (1.0 - q) * (d as f64).log2();
            c.close(&format!("E_C(d={d},q={q})"), erasure_cost(d, q).unwrap(), want, 1e-12);
            c.close(&format!("E_D(d={d},q={q})"), erasure_distillable(d, q).unwrap(), want, 1e-12);
        }
    }
    c.finish();
}

#[test]
fn criterion_03_werner_holevo() {
    let mut c = Criterion::new(3, "Werner-Holevo bounds", 1);
    let b3 = wh_bounds(3).unwrap();
    c.close("cost(3)", b3.cost_exact.unwrap_or(f64::NAN), 1.0, 0.0);
    c.close("distillable_upper(3)", b3.distillable_upper, 0.792481, 1e-6);
    c.close("distillable_upper(3) = log2(3)/2", b3.distillable_upper, 0.5 * 3f64.log2(), 1e-12);
    let b6 = wh_bounds(6).unwrap();
    c.close("distillable_upper(6) = log2(8/6)", b6.distillable_upper, (8.0f64 / 6.0).log2(), 1e-12);
    c.close("cost_lower(6) = log2(4/3)", b6.cost_lower, (4.0f64 / 3.0).log2(), 1e-12);
    c.close("log2(8/6) = log2(4/3)", b6.distillable_upper, b6.cost_lower, 1e-12);
    for d in 7..=30 {
        let b = wh_bounds(d).unwrap();
        c.check(b.cost_lower > b.distillable_upper, || format!("no strict gap at d={d}"));
    }
    c.finish();
}

#[test]
fn criterion_04_epolarizing_curve() {
    let mut c = Criterion::new(4, "epolarizing cost, Rains and coherent information", 120);
    let t = figure(4, &RunConfig::default()).unwrap();
    c.check(t.rows() == 51, || format!("{} rows", t.rows()));
    let (q, cost) = (t.grid(), t.column("cost").unwrap());
    let (rains, ci) = (t.column("rains").unwrap(), t.column("coherent_info").unwrap());
    for i in 0..t.rows() {
        c.close(&format!("cost({})", q[i]), cost[i], h2(q[i] / 2.0), 1e-12);
        c.check(rains[i] >= ci[i] - 2e-3, || {
            format!("rains {} < coherent info {} at q={}", rains[i], ci[i], q[i])
        });
    }
    c.check(rains[0] <= 1e-3, || format!("rains(0) = {}", rains[0]));
    c.close("rains(1)", rains[t.rows() - 1], 1.0, 1e-3);
    c.note(format!("rains(0) = {:.2e}, rains(1) = {:.9}", rains[0], rains[t.rows() - 1]));
    c.finish();
}

fn neg_log_overlap(rho: &DensityMatrix, tau: &CMat) -> f64 {
    let log = hermitian_eig(tau).unwrap().map(f64::log2);
    -(rho.matrix() * log).trace().re
}

fn fd_gradient_error(rho: &DensityMatrix, tau: &CMat) -> f64 {
    let g = rel_entropy_gradient(rho, tau).unwrap();
    let n = tau.nrows();
    let h = 1e-5;
    let mut worst = 0.0f64;
    for i in 0..n {
        for j in i..n {
            for dir in [C64::new(1.0, 0.0), C64::new(0.0, 1.0)] {
                if i == j && dir.im != 0.0 {
                    continue;
                }
                let mut e = CMat::zeros(n, n);
                e[(i, j)] += dir;
                e[(j, i)] += dir.conj();
                let step = &e * C64::new(h, 0.0);
                let fd = (neg_log_overlap(rho, &(tau + &step)) - neg_log_overlap(rho, &(tau - &step))) / (2.0 * h);
                let analytic = (g.adjoint() * &e).trace().re;
                worst = worst.max((fd - analytic).abs());
            }
        }
    }
    worst
}

#[test]
fn criterion_05_rains_oracles() {
    let mut c = Criterion::new(5, "Rains solver oracle suite", 30);
    let rains = |rho: DensityMatrix| solve_rains(&RainsProblem::new(rho)).unwrap().value_bits;
    c.close("Bell", rains(DensityMatrix::max_entangled(2)), 1.0, 1e-4);
    let mixed = rains(DensityMatrix::maximally_mixed(vec![2, 2]));
    c.check(mixed <= 1e-6, || format!("maximally mixed: {mixed}"));
    let product = rains(DensityMatrix::pure(&basis_ket(4, 0), vec![2, 2]).unwrap());
    c.check(product <= 1e-6, || format!("|00>: {product}"));
    let classical = CMat::from_fn(4, 4, |i, j| {
        C64::new(if i == j && (i == 0 || i == 3) { 0.5 } else { 0.0 }, 0.0)
    });
    let classical = rains(DensityMatrix::new(classical, vec![2, 2]).unwrap());
    c.check(classical <= 1e-6, || format!("classically correlated: {classical}"));
    for q in [0.1, 0.25, 0.4] {
        let ch = build_channel(&ChannelSpec::qubit_dephasing(q)).unwrap();
        let v = rains(entcost::channels::choi(&ch));
        c.close(&format!("dephasing Choi q={q}"), v, 1.0 - h2(q), 1e-4);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut worst = 0.0f64;
    for dims in [[2usize, 2], [2, 3]] {
        let n = dims[0] * dims[1];
        for _ in 0..10 {
            let rho = random_density(&dims, n, &mut rng);
            let tau = random_density(&dims, n, &mut rng);
            let tau = tau.matrix() * C64::new(0.5, 0.0) + CMat::identity(n, n) * C64::new(0.5 / n as f64, 0.0);
            worst = worst.max(fd_gradient_error(&rho, &tau));
        }
    }
    c.check(worst <= 1e-6, || format!("gradient vs finite differences {worst:e}"));
    c.note(format!("max gradient FD error {worst:.1e}"));
    c.finish();
}

#[test]
fn criterion_06_teleportation() {
    let mut c = Criterion::new(6, "teleportation simulation", 5);
    let mut channels: Vec<(String, KrausChannel)> = Vec::new();
    for d in [2, 3] {
        channels.push((format!("identity d={d}"), KrausChannel::identity(d)));
        channels.push((format!("depolarizing d={d}"), build_channel(&ChannelSpec::depolarizing(d, 0.3)).unwrap()));
        channels.push((format!("werner-holevo d={d}"), build_channel(&ChannelSpec::werner_holevo(d)).unwrap()));
    }
    for k in 1..=9 {
        let q = k as f64 / 10.0;
        channels.push((format!("dephasing q={q}"), build_channel(&ChannelSpec::qubit_dephasing(q)).unwrap()));
    }
    channels.push(("erasure d=2".into(), build_channel(&ChannelSpec::erasure(2, 0.4)).unwrap()));
    let mut worst = 0.0f64;
    for (name, ch) in &channels {
        match teleportation_simulate(ch).and_then(|sim| choi_distance(&sim, ch)) {
            Ok(dist) => {
                worst = worst.max(dist);
                c.check(dist <= 1e-10, || format!("{name}: {dist:e}"));
            }
            Err(e) => c.check(false, || format!("{name}: {e}")),
        }
    }
    c.note(format!("{} channels, worst Choi distance {worst:.1e}", channels.len()));
    c.finish();
}

#[test]
fn criterion_07_complement_choi() {
    let mut c = Criterion::new(7, "complementary-channel Choi identity for depolarizing", 2);
    for d in [2, 3, 4] {
        for q in [0.0, 0.3, 1.0] {
            let ch = build_channel(&ChannelSpec::depolarizing(d, q)).unwrap();
            let r = complement_choi_check(&ch);
            c.check(r.condition_holds, || format!("Kraus condition fails (d={d}, q={q})"));
            c.check(r.choi_vs_isometry_distance <= 1e-10, || {
                format!(
                    "distance {:.3} at d={d}, q={q} (environment-relabeled distance {:.1e})",
                    r.choi_vs_isometry_distance, r.environment_gauge_distance
                )
            });
        }
    }
    c.finish();
}

#[test]
fn criterion_08_pure_loss_and_amplifier() {
    let mut c = Criterion::new(8, "pure-loss and pure-amplifier formulas", 1);
    c.close("E_C(eta=0.5)", pure_loss_cost(0.5).unwrap(), 2.0, 1e-6);
    c.close("E_D(eta=0.5)", pure_loss_distillable(0.5).unwrap(), 1.0, 1e-6);
    c.close("E_C(G=2)", pure_amp_cost(2.0).unwrap(), 2.0, 1e-6);
    c.close("E_D(G=2)", pure_amp_distillable(2.0).unwrap(), 1.0, 1e-6);
    // 50-digit reference evaluations
    c.close("E_C(eta=0.9)", pure_loss_cost(0.9).unwrap(), 4.689955935892, 1e-6);
    c.close("E_D(eta=0.9)", pure_loss_distillable(0.9).unwrap(), 3.321928094887, 1e-6);
    for eta in grid(0.01, 0.99, 101) {
        let gap = pure_loss_cost(eta).unwrap() - pure_loss_distillable(eta).unwrap();
        c.close(&format!("loss gap({eta})"), gap, -eta * eta.log2() / (1.0 - eta), 1e-12);
        let sym = h2(1.0 - eta) / (1.0 - eta);
        let x = 1.0 / eta - 1.0;
        c.close(&format!("symmetry({eta})"), sym, g2(x) / x, 1e-12);
        c.close(&format!("loss vs amp({eta})"), pure_loss_cost(eta).unwrap(), pure_amp_cost(1.0 / eta).unwrap(), 1e-12);
    }
    for g in grid(1.09, 10.0, 101) {
        let gap = pure_amp_cost(g).unwrap() - pure_amp_distillable(g).unwrap();
        c.close(&format!("amp gap({g})"), gap, g.log2() / (g - 1.0), 1e-12);
    }
    c.finish();
}

#[test]
fn criterion_09_gaussian_heterodyne() {
    let mut c = Criterion::new(9, "Gaussian heterodyne evaluation", 1);
    c.close("eof_loss(0.5, 100)", eof_pure_loss(0.5, 100.0).unwrap(), 1.9802, 1e-3);
    let loss = eof_pure_loss(0.5, 1e4).unwrap();
    c.close("eof_loss(0.5, 1e4)", loss, pure_loss_cost(0.5).unwrap(), 1e-2);
    let amp = eof_pure_amp(2.0, 1e4).unwrap();
    c.close("eof_amp(2, 1e4)", amp, pure_amp_cost(2.0).unwrap(), 2e-2);
    for eta in [0.2, 0.5, 0.8] {
        let values: Vec<f64> = (0..=4).map(|k| eof_pure_loss(eta, 10f64.powi(k)).unwrap()).collect();
        c.check(values.windows(2).all(|w| w[1] >= w[0]), || format!("not monotone at eta={eta}: {values:?}"));
    }
    c.note(format!("eof_loss(0.5, 1e4) = {loss:.6}, eof_amp(2, 1e4) = {amp:.6}"));
    c.finish();
}

fn random_hermitian(n: usize, scale: f64, rng: &mut ChaCha8Rng) -> CMat {
    let m = CMat::from_fn(n, n, |_, _| C64::new(rng.random_range(-scale..scale), rng.random_range(-scale..scale)));
    hermitize(&m)
}

#[test]
fn criterion_10_property_suites() {
    let mut c = Criterion::new(10, "property suites", 60);
    let mut rng = ChaCha8Rng::seed_from_u64(10);

    for _ in 0..50 {
        let rho = random_density(&[2, 3], rng.random_range(1..=6), &mut rng);
        let eig = hermitian_eig(rho.matrix()).unwrap();
        let back = eig.map(|x| x);
        c.check(max_abs_diff(&back, rho.matrix()) <= 1e-12, || "eigen reconstruction".into());
        let s = von_neumann_entropy(&rho);
        c.check((-1e-12..=6f64.log2() + 1e-12).contains(&s), || format!("entropy {s} out of range"));
        let u = random_unitary(6, &mut rng);
        let moved = DensityMatrix::new(hermitize(&(&u * rho.matrix() * u.adjoint())), vec![2, 3]).unwrap();
        c.close("unitary invariance of entropy", von_neumann_entropy(&moved), s, 1e-10);
    }

    for _ in 0..50 {
        let x = random_hermitian(4, 1.0, &mut rng);
        let y = random_hermitian(4, 1.0, &mut rng);
        let (px, py) = (project_ppt_ball(&x, &[2, 2]).unwrap(), project_ppt_ball(&y, &[2, 2]).unwrap());
        let norm = ppt_norm(&px, &[2, 2]).unwrap();
        c.check(norm <= 1.0 + 1e-9, || format!("ball projection norm {norm}"));
        let (dp, dx) = ((&px - &py).norm(), (&x - &y).norm());
        c.check(dp <= dx + 1e-10, || format!("ball projection expands: {dp} > {dx}"));
    }
    for _ in 0..5 {
        let x = random_hermitian(4, 1.0, &mut rng) + CMat::identity(4, 4) * C64::new(0.5, 0.0);
        let p = dykstra_project(&x, &[2, 2], 1e-12).unwrap();
        let norm = ppt_norm(&p, &[2, 2]).unwrap();
        let lowest = hermitian_eig(&p).unwrap().values.iter().copied().fold(f64::INFINITY, f64::min);
        c.check(norm <= 1.0 + 1e-9 && lowest >= -1e-9, || format!("PPT' projection infeasible: {norm}, {lowest}"));
    }

    let mut below = 0.0f64;
    for k in 0..100 {
        let rho = random_density(&[2, 2], rng.random_range(1..=4), &mut rng);
        let exact = eof_two_qubit(&rho).unwrap().value;
        let est = eof_estimate(&rho, 4, 2, k).unwrap().value;
        below = below.max(exact - est);
        c.check(est >= exact - 1e-9, || format!("estimate {est} below exact {exact}"));
    }

    let mut lowest = f64::INFINITY;
    for _ in 0..1000 {
        let st = tmsv(TmsvParams { n_s: rng.random_range(0.0..20.0) }).unwrap();
        let ch = match rng.random_range(0..3) {
            0 => BosonicChannelParams::Thermal { eta: rng.random_range(0.0..=1.0), n_b: rng.random_range(0.0..10.0) },
            1 => BosonicChannelParams::Amplifier { g: rng.random_range(1.0..10.0), n_b: rng.random_range(0.0..10.0) },
            _ => BosonicChannelParams::Additive { xi: rng.random_range(0.0..5.0) },
        };
        let out = apply_bosonic(&ch, &st, rng.random_range(0..2)).unwrap();
        let nu = symplectic_eigenvalues(&out).unwrap()[0];
        lowest = lowest.min(nu);
        c.check(nu >= 1.0 - BONA_FIDE_TOL, || format!("{ch:?} gives nu = {nu}"));
    }
    c.note(format!("max Wootters excess {below:.1e}, lowest symplectic eigenvalue {lowest:.12}"));
    c.finish();
}
