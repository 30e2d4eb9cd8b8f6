//! Acceptance gate: one test per release criterion, each printing a single
//! `[PASS]`/`[FAIL]` line (visible with `--nocapture`; a `[FAIL]` line is
//! always embedded in the panic message as well).
//!
//! The criteria pin the toolkit against independent computations: dense
//! eigendecompositions, finite-difference Jacobians, closed-form threshold
//! values, dual-route normal-form constants, and direct simulation.

use edgeplasma::continuation::{detect_period, lab_period, sweep, PointClass, SweepProtocol};
use edgeplasma::domain::ModeIndex;
use edgeplasma::energy;
use edgeplasma::hopf::{
    bifurcation_point, coeff_a, coeff_a_direct, coeff_b, coeff_b_numeric, eigenvectors,
    predicted_cycle, Threshold,
};
use edgeplasma::integrate::{random_state, simulate, IcSpec, IntegratorConfig};
use edgeplasma::spectral::{apply_linear, full_rhs, SpectralState};
use edgeplasma::stability::{
    ell_for_degenerate_overlap, ell_star, instability_interval, mode_matrix, nu_crit,
};
use edgeplasma::Domain;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::time::Instant;

/// Reference channel: square geometry, the diffusivity and boundary drifts
/// used throughout the worked examples.
fn reference() -> Domain {
    Domain::new(2.0, 2.0, 9e-4, 0.26, 0.1).unwrap()
}

fn pass(name: &str, detail: String) {
    println!("[PASS] {name}: {detail}");
}

macro_rules! check {
    ($name:expr, $cond:expr, $($why:tt)*) => {{
        assert!($cond, "[FAIL] {}: {}", $name, format!($($why)*));
    }};
}

fn random_domain(rng: &mut ChaCha8Rng) -> Domain {
    let l1 = rng.gen_range(0.5..3.0);
    let l2 = rng.gen_range(0.5..3.0);
    let nu = 10f64.powf(rng.gen_range(-5.0..-2.0));
    let t_minus = rng.gen_range(-0.5..0.5);
    let d_t = rng.gen_range(-0.5..0.5);
    Domain::new(l1, l2, nu, t_minus + d_t, t_minus).unwrap()
}

/// 1. Closed-form eigenvalue pair vs a direct eigendecomposition of the
///    assembled 2x2 mode block (trace/determinant route), 1000 random
///    samples, 1e-12 relative, under one second.
#[test]
fn a01_eigenvalues_match_direct_decomposition() {
    let name = "closed-form eigenvalues vs direct 2x2 decomposition";
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let start = Instant::now();
    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let cfg = random_domain(&mut rng);
        let k = ModeIndex {
            k1: rng.gen_range(1..=8),
            k2: rng.gen_range(-8..=8),
        };
        let sp = mode_matrix(&cfg, k);
        let m = sp.m;
        let tr = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let sq = (tr * tr - 4.0 * det).sqrt();
        let (p, q) = ((tr + sq) / 2.0, (tr - sq) / 2.0);
        let direct = (p - sp.lambda_plus).norm() + (q - sp.lambda_minus).norm();
        let swapped = (q - sp.lambda_plus).norm() + (p - sp.lambda_minus).norm();
        let dist = direct.min(swapped);
        let scale = sp
            .lambda_plus
            .norm()
            .max(sp.lambda_minus.norm())
            .max(f64::MIN_POSITIVE);
        worst = worst.max(dist / scale);
        check!(
            name,
            dist / scale <= 1e-12,
            "mismatch {:.3e} at {cfg:?}, k = ({}, {})",
            dist / scale,
            k.k1,
            k.k2
        );
    }
    let elapsed = start.elapsed();
    check!(name, elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    pass(
        name,
        format!("1000 samples, worst relative distance {worst:.3e}, {elapsed:?}"),
    );
}

/// 2. The mode-diagonal linear operator equals a brute-force Jacobian of
///    the full right-hand side at the origin (odd finite difference kills
///    the quadratic term), truncation 6, tolerance 1e-7.
#[test]
fn a02_linear_operator_matches_dense_jacobian() {
    let name = "linear operator vs finite-difference Jacobian at the origin";
    let cfg = reference();
    let n = 6usize;
    let eps = 1e-2;
    let start = Instant::now();
    let mut worst = 0.0f64;
    for comp in 0..2 {
        for k1 in 1..=n as u32 {
            for k2 in -(n as i32)..=(n as i32) {
                let mut e = SpectralState::new(n, n);
                e.set(comp, k1, k2, Complex64::new(1.0, 0.0));
                let expected = apply_linear(&cfg, &e);

                let mut up = e.zeros_like();
                up.add_scaled(&e, Complex64::new(eps, 0.0));
                let mut dn = e.zeros_like();
                dn.add_scaled(&e, Complex64::new(-eps, 0.0));
                let f_up = full_rhs(&cfg, &up);
                let f_dn = full_rhs(&cfg, &dn);

                for c in 0..2 {
                    for q1 in 1..=n as u32 {
                        for q2 in -(n as i32)..=(n as i32) {
                            let fd = (f_up.get(c, q1, q2) - f_dn.get(c, q1, q2)) / (2.0 * eps);
                            let err = (fd - expected.get(c, q1, q2)).norm();
                            worst = worst.max(err);
                            check!(
                                name,
                                err <= 1e-7,
                                "column ({comp},{k1},{k2}) row ({c},{q1},{q2}): error {err:.3e}"
                            );
                        }
                    }
                }
            }
        }
    }
    let elapsed = start.elapsed();
    check!(name, elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    pass(
        name,
        format!("156 columns at truncation 6, max entry error {worst:.3e}, {elapsed:?}"),
    );
}

/// 3. Reference right threshold lands in the published bracket, and the
///    inviscid limit of the same geometry gives exactly 8 / (5 pi^2).
#[test]
fn a03_reference_threshold_and_inviscid_limit() {
    let name = "right threshold value and inviscid limit";
    let cfg = reference();
    let region = instability_interval(&cfg, 1).unwrap();
    let (lo, hi) = region.endpoints().expect("reference interval exists");
    check!(
        name,
        (0.1615..=0.1625).contains(&hi),
        "upper threshold {hi} outside [0.1615, 0.1625]"
    );
    check!(name, lo > 0.0 && lo < 1e-3, "lower threshold {lo}");

    let inviscid = Domain::new(2.0, 2.0, 0.0, 0.26, 0.1).unwrap();
    let region0 = instability_interval(&inviscid, 1).unwrap();
    let (lo0, hi0) = region0.endpoints().unwrap();
    let pi = std::f64::consts::PI;
    let exact = 8.0 / (5.0 * pi * pi);
    check!(
        name,
        (hi0 - exact).abs() <= 1e-12 * exact,
        "inviscid upper threshold {hi0} != 8/(5 pi^2) = {exact}"
    );
    check!(name, lo0.abs() <= 1e-15, "inviscid lower threshold {lo0} != 0");
    pass(
        name,
        format!("dT2 = {hi:.9}, inviscid dT2 = 8/(5 pi^2) to {:.1e}", (hi0 - exact).abs()),
    );
}

/// 4. Aspect-ratio landmarks: the degenerate-overlap ratios for competitor
///    wavenumbers 4 and 9, the cubic's positive root, and the exact aspect
///    ratio where the critical diffusivities of wavenumbers 1 and 4 agree.
#[test]
fn a04_aspect_ratio_landmarks() {
    let name = "aspect-ratio landmark values";
    let l4: f64 = ell_for_degenerate_overlap(4.0).unwrap();
    let l9: f64 = ell_for_degenerate_overlap(9.0).unwrap();
    let ls: f64 = ell_star();
    check!(name, (l4 - 5.37).abs() <= 0.01, "overlap ratio for 4: {l4}");
    check!(name, (l9 - 7.22).abs() <= 0.01, "overlap ratio for 9: {l9}");
    check!(name, (ls - 4.053).abs() <= 0.005, "cubic root: {ls}");

    let ell = 2.0 * (2.0 + 3.0 * std::f64::consts::SQRT_2).sqrt();
    let cfg = Domain::new(1.0, ell, 1e-3, 0.1, 0.0).unwrap();
    let n1 = nu_crit(&cfg, 1.0).unwrap();
    let n4 = nu_crit(&cfg, 4.0).unwrap();
    check!(
        name,
        (n1 - n4).abs() <= 1e-12 * n1.abs(),
        "nu_crit(1) = {n1} vs nu_crit(4) = {n4} at ell = {ell}"
    );
    pass(
        name,
        format!("l4 = {l4:.6}, l9 = {l9:.6}, l* = {ls:.9}, nu_crit match {:.1e}", (n1 - n4).abs() / n1),
    );
}

/// 5. Dual-route normal-form constants on 50 random admissible channels:
///    the Galerkin-assembled cubic coefficient agrees with the closed form
///    to 1e-8 relative, and the two linear-coefficient formulas agree to
///    1e-12, at both thresholds; under a minute.
#[test]
fn a05_normal_form_dual_routes_agree() {
    let name = "dual-route normal-form coefficients";
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let start = Instant::now();
    let mut worst_b = 0.0f64;
    let mut worst_a = 0.0f64;
    for trial in 0..50 {
        let l1 = rng.gen_range(0.8..2.5);
        let ell = rng.gen_range(0.6..2.5);
        let l2 = ell * l1;
        let t_minus = rng.gen_range(-0.3..0.3);
        let k2: u32 = rng.gen_range(1..=2);
        let base = Domain::new(l1, l2, 1e-3, t_minus + 0.1, t_minus).unwrap();
        let nu = rng.gen_range(0.1..0.7) * nu_crit(&base, (k2 * k2) as f64).unwrap();
        let cfg = Domain::new(l1, l2, nu, t_minus + 0.1, t_minus).unwrap();
        for which in [Threshold::Left, Threshold::Right] {
            let bp = bifurcation_point(&cfg, which, k2).unwrap();
            let a = coeff_a(&bp);
            let a2 = coeff_a_direct(&bp);
            let da = (a - a2).norm() / a.norm();
            let b = coeff_b(&bp).unwrap();
            let bn = coeff_b_numeric(&bp, 6).unwrap();
            let db = (bn - b).norm() / b.norm();
            worst_a = worst_a.max(da);
            worst_b = worst_b.max(db);
            check!(
                name,
                da <= 1e-12,
                "trial {trial} {which:?}: linear-coefficient routes differ by {da:.3e} ({cfg:?}, k2 = {k2})"
            );
            check!(
                name,
                db <= 1e-8,
                "trial {trial} {which:?}: cubic-coefficient routes differ by {db:.3e} ({cfg:?}, k2 = {k2})"
            );
        }
    }
    let elapsed = start.elapsed();
    check!(name, elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    pass(
        name,
        format!("50 channels x 2 thresholds: worst a {worst_a:.3e}, worst b {worst_b:.3e}, {elapsed:?}"),
    );
}

/// 6. Sign laws: the cubic coefficient has negative real part everywhere
///    sampled, and the linear coefficient's real part is positive at the
///    left threshold and negative at the right one.
#[test]
fn a06_sign_laws_hold_on_sampled_channels() {
    let name = "coefficient sign laws";
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut count = 0;
    for _ in 0..50 {
        let l1 = rng.gen_range(0.8..2.5);
        let ell = rng.gen_range(0.6..2.8);
        let l2 = ell * l1;
        let t_minus = rng.gen_range(-0.3..0.3);
        let k2: u32 = rng.gen_range(1..=2);
        let base = Domain::new(l1, l2, 1e-3, t_minus + 0.1, t_minus).unwrap();
        let nu = rng.gen_range(0.1..0.8) * nu_crit(&base, (k2 * k2) as f64).unwrap();
        let cfg = Domain::new(l1, l2, nu, t_minus + 0.1, t_minus).unwrap();
        for which in [Threshold::Left, Threshold::Right] {
            let bp = bifurcation_point(&cfg, which, k2).unwrap();
            let a = coeff_a(&bp);
            let b = coeff_b(&bp).unwrap();
            check!(name, b.re < 0.0, "Re b = {} not negative ({cfg:?})", b.re);
            match which {
                Threshold::Left => {
                    check!(name, a.re > 0.0, "Re a = {} not positive at left threshold ({cfg:?})", a.re)
                }
                Threshold::Right => {
                    check!(name, a.re < 0.0, "Re a = {} not negative at right threshold ({cfg:?})", a.re)
                }
            }
            count += 1;
        }
    }
    pass(name, format!("{count} threshold samples, zero violations"));
}

/// 7. A seeded critical-mode run inside the instability interval grows at
///    the closed-form rate of the dominant mode to 2%.
#[test]
fn a07_simulated_growth_matches_dispersion_rate() {
    let name = "simulated growth rate vs closed-form eigenvalue";
    let cfg = Domain::new(2.0, 2.0, 9e-4, 0.2, 0.1).unwrap(); // dT = 0.1
    let rate = mode_matrix(&cfg, ModeIndex { k1: 1, k2: 1 }).lambda_plus.re;
    check!(
        name,
        (rate - 0.112694873538).abs() < 1e-9,
        "dominant-mode rate {rate} drifted from its pinned value"
    );
    let start = Instant::now();
    let mut icfg = IntegratorConfig::new(30.0);
    icfg.ic = IcSpec::Eigenmode {
        k2: 1,
        amplitude: 1e-6,
    };
    icfg.record_every = 25;
    let traj = simulate(&cfg, &icfg).unwrap();
    let fitted = traj.l2_growth_rate_fit(5.0, 30.0).unwrap();
    let rel = (fitted - rate).abs() / rate;
    let elapsed = start.elapsed();
    check!(
        name,
        rel <= 0.02,
        "fitted rate {fitted} vs {rate} (relative error {rel:.3e})"
    );
    check!(name, elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    pass(
        name,
        format!("fitted {fitted:.9} vs closed form {rate:.9} ({rel:.2e} relative), {elapsed:?}"),
    );
}

/// 8. Just inside the right threshold the simulated limit cycle matches the
///    normal-form prediction: amplitude to 20% and lab-frame period to 5%
///    of twice the circumference over the summed boundary speeds.
#[test]
fn a08_limit_cycle_amplitude_and_period() {
    let name = "limit-cycle amplitude and lab period vs prediction";
    let base = reference();
    let region = instability_interval(&base, 1).unwrap();
    let (_, d_t2) = region.endpoints().unwrap();
    let mu1 = -0.01 * d_t2;
    let cfg = base.with_delta_t(d_t2 + mu1);
    let bp = bifurcation_point(&base, Threshold::Right, 1).unwrap();
    let cycle = predicted_cycle(&bp, mu1).unwrap();
    let target_period = 2.0 * cfg.l2 / (cfg.t_plus + cfg.t_minus);

    let start = Instant::now();
    // The orbit radius itself relaxes quickly, but the harmonic content the
    // cycle excites rings down only at the viscous rate of the slowest
    // slaved modes (about 90 time units per e-fold), so the settle leg must
    // be long enough for the projected amplitude to stop breathing.
    let mut settle = IntegratorConfig::new(800.0);
    settle.ic = IcSpec::Eigenmode {
        k2: 1,
        amplitude: 1e-3,
    };
    settle.record_every = usize::MAX;
    let transient = simulate(&cfg, &settle).unwrap();

    let mut probe = IntegratorConfig::new(120.0);
    probe.ic = IcSpec::State(transient.final_state);
    probe.record_every = 25;
    probe.snapshot_times = (1..=96).map(|i| 1.25 * i as f64).collect();
    let traj = simulate(&cfg, &probe).unwrap();
    let elapsed = start.elapsed();

    let sup = traj.records.iter().fold(0.0f64, |m, r| m.max(r.sup_u1));
    let series: Vec<(f64, f64)> = traj.records.iter().map(|r| (r.t, r.mid_u1)).collect();
    let (period_com, quality) = detect_period(&series).expect("periodic signal");
    let period_lab = lab_period(&cfg, period_com, 1);

    // The prediction is the radius of the critical-pair orbit, so the
    // simulated amplitude is measured in the same normalization: project
    // each snapshot onto the adjoint eigenvector of the critical mode, then
    // least-squares split the projection into co- and counter-rotating
    // components at the cycle frequency and take the dominant modulus.  The
    // full-field sup is larger by the higher-harmonic content the cycle
    // generates at second order in the radius; it is reported but not gated.
    let (_, eta, _) = eigenvectors(&bp);
    let omega = 2.0 * std::f64::consts::PI / period_com;
    let projs: Vec<(f64, Complex64)> = traj
        .snapshots
        .iter()
        .map(|(t, state)| {
            let w = [state.get(0, 1, 1), state.get(1, 1, 1)];
            let z = (cfg.l1 * cfg.l2 / 2.0) * (w[0] * eta[0].conj() + w[1] * eta[1].conj());
            (*t, z)
        })
        .collect();
    let n = projs.len() as f64;
    let e2: Complex64 = projs
        .iter()
        .map(|(t, _)| Complex64::from_polar(1.0, -2.0 * omega * t))
        .sum();
    let r1: Complex64 = projs
        .iter()
        .map(|(t, z)| z * Complex64::from_polar(1.0, -omega * t))
        .sum();
    let r2: Complex64 = projs
        .iter()
        .map(|(t, z)| z * Complex64::from_polar(1.0, omega * t))
        .sum();
    let det = n * n - (e2 * e2.conj()).re;
    let co = (n * r1 - e2 * r2) / det;
    let counter = (n * r2 - e2.conj() * r1) / det;
    let radius = co.norm().max(counter.norm());
    let amplitude = 2.0 * bp.c2 * radius;

    let amp_rel = (amplitude - cycle.amplitude_sup_u1).abs() / cycle.amplitude_sup_u1;
    let per_rel = (period_lab - target_period).abs() / target_period;
    check!(
        name,
        amp_rel <= 0.20,
        "projected amplitude {amplitude} vs predicted {} ({amp_rel:.3})",
        cycle.amplitude_sup_u1
    );
    check!(
        name,
        per_rel <= 0.05,
        "lab period {period_lab} vs {target_period} ({per_rel:.3})"
    );
    check!(name, quality >= 0.8, "period quality {quality}");
    pass(
        name,
        format!(
            "projected amplitude {amplitude:.6} vs {:.6} ({amp_rel:.2e}; counter-rotating fraction {:.2e}, full-field sup {sup:.6}), lab period {period_lab:.4} vs {target_period:.4} ({per_rel:.2e}), {elapsed:?}",
            cycle.amplitude_sup_u1,
            co.norm().min(counter.norm()) / radius,
        ),
    );
}

/// 9. The energy functional drifts at second order in the step size: max
///    drift over a fixed horizon shrinks at least 3.5x when dt halves
///    (coarse run = 1e4 steps).
#[test]
fn a09_energy_drift_is_second_order() {
    let name = "energy-functional drift order";
    let cfg = reference();
    let drift = |dt: f64| {
        let mut icfg = IntegratorConfig::new(20.0);
        icfg.dt = Some(dt);
        icfg.ic = IcSpec::Eigenmode {
            k2: 1,
            amplitude: 1e-3,
        };
        icfg.record_every = 20;
        let traj = simulate(&cfg, &icfg).unwrap();
        (traj.steps, traj.energy_drift().unwrap())
    };
    let (n_coarse, d_coarse) = drift(2e-3);
    let (_, d_fine) = drift(1e-3);
    let ratio = d_coarse / d_fine;
    check!(name, n_coarse == 10_000, "coarse run took {n_coarse} steps");
    check!(
        name,
        ratio >= 3.5,
        "drift {d_coarse:.3e} -> {d_fine:.3e}, ratio {ratio:.2} < 3.5"
    );
    pass(
        name,
        format!("drift {d_coarse:.3e} -> {d_fine:.3e} on dt halving, ratio {ratio:.2}"),
    );
}

/// 10. Global decay outside the potentially unstable band: the squared L2
///     norm sits below its initial value times exp(-2 nu pi^2 t / L1^2),
///     with 5% slack, pointwise to t = 50, for both signs.
#[test]
fn a10_global_decay_bound() {
    let name = "global exponential decay bound";
    let base = reference();
    let pi = std::f64::consts::PI;
    let d_t_star = 4.0 * base.l1 / (pi * pi);
    let gamma = 2.0 * base.nu * pi * pi / (base.l1 * base.l1);
    for d_t in [-0.1, 1.1 * d_t_star] {
        let cfg = base.with_delta_t(d_t);
        let mut icfg = IntegratorConfig::new(50.0);
        icfg.ic = IcSpec::Random {
            amplitude: 1e-2,
            seed: 1010,
        };
        icfg.k1_max = 16;
        icfg.k2_max = 16;
        icfg.record_every = 10;
        let traj = simulate(&cfg, &icfg).unwrap();
        let n0 = traj.records[0].energy.unwrap().l2_sq;
        for r in &traj.records {
            let bound = n0 * (-gamma * r.t).exp() * 1.05;
            check!(
                name,
                r.energy.unwrap().l2_sq <= bound,
                "dT = {d_t}: ||u({})||^2 = {:.6e} exceeds bound {:.6e}",
                r.t,
                r.energy.unwrap().l2_sq,
                bound
            );
        }
    }
    pass(
        name,
        format!("both channels decay under exp(-{gamma:.6} t) x 1.05 up to t = 50"),
    );
}

/// 11. Quadratic-inequality battery on 1000 random states: both sharp
///     constants hold and the cross-term identity's residual stays below
///     1e-10.
#[test]
fn a11_inequalities_and_identity_on_random_states() {
    let name = "quadratic inequalities and cross identity";
    let mut rng = ChaCha8Rng::seed_from_u64(1111);
    let pi = std::f64::consts::PI;
    let mut worst = 0.0f64;
    for trial in 0..1000 {
        let cfg = random_domain(&mut rng);
        let state = random_state(8, 8, 10f64.powf(rng.gen_range(-4.0..0.0)), trial as u64);
        let (p1, p2) = energy::poincare_ratios(&cfg, &state).unwrap();
        let cap1 = 2.0 * cfg.l1 * cfg.l1 / (pi * pi);
        let cap2 = cfg.l1 * cfg.l1 / (pi * pi);
        check!(
            name,
            p1 <= cap1 * (1.0 + 1e-10),
            "trial {trial}: field-energy ratio {p1} exceeds {cap1}"
        );
        check!(
            name,
            p2 <= cap2 * (1.0 + 1e-10),
            "trial {trial}: gradient ratio {p2} exceeds {cap2}"
        );
        let res = energy::cross_identity_residual(&cfg, &state);
        worst = worst.max(res);
        check!(name, res <= 1e-10, "trial {trial}: identity residual {res:.3e}");
    }
    pass(
        name,
        format!("1000 random states, zero violations, worst identity residual {worst:.3e}"),
    );
}

/// 12. A quasi-static sweep across the instability interval: amplitudes die
///     outside it (beyond a 1e-3 buffer), persist inside it, and the
///     squared-amplitude slope at the left threshold dwarfs the right one.
///     Points near dT = 0.0646 are only reported, never asserted periodic.
///
///     Each threshold is crossed by a monotone warm-started leg entering
///     from its quiescent side and the two legs meet mid-interval.  A single
///     pass would instead carry a large mid-interval state across the far
///     threshold, where at this truncation it can be captured by a
///     coexisting finite-amplitude attractor that masks the local branch
///     structure the diagram is probing.
#[test]
fn a12_bifurcation_diagram_structure() {
    let name = "bifurcation-diagram structure";
    let base = reference();
    let region = instability_interval(&base, 1).unwrap();
    let (d_t1, d_t2) = region.endpoints().unwrap();
    let protocol = SweepProtocol {
        transient: 400.0,
        window: 150.0,
        dt: Some(2.5e-3),
        record_every: 20,
        k1_max: 12,
        k2_max: 12,
        seed_amplitude: 1e-3,
        amp_floor: 1e-4,
    };
    let start = Instant::now();
    let up = sweep(&base, -0.01, 0.08, 0.015, &protocol).unwrap();
    let down = sweep(&base, 0.17, 0.095, -0.015, &protocol).unwrap();
    let elapsed = start.elapsed();
    let mut points = up;
    points.extend(down.into_iter().rev());
    check!(name, points.len() == 13, "expected 13 points, got {}", points.len());

    let mut inside_min = f64::INFINITY;
    for p in &points {
        check!(
            name,
            p.classification != PointClass::Blowup,
            "blow-up at dT = {}",
            p.d_t
        );
        if p.d_t < d_t1 - 1e-3 || p.d_t > d_t2 + 1e-3 {
            check!(
                name,
                p.amplitude <= 1e-3,
                "outside point dT = {} kept amplitude {:.3e}",
                p.d_t,
                p.amplitude
            );
        } else if p.d_t > d_t1 + 1e-3 && p.d_t < d_t2 - 1e-3 {
            inside_min = inside_min.min(p.amplitude);
            check!(
                name,
                p.amplitude > 1e-2,
                "inside point dT = {} stayed at amplitude {:.3e}",
                p.d_t,
                p.amplitude
            );
        }
    }

    let amp_at = |d_t: f64| {
        points
            .iter()
            .find(|p| (p.d_t - d_t).abs() < 1e-9)
            .map(|p| p.amplitude)
            .unwrap()
    };
    // Discrete slopes of amplitude^2 across each threshold: between the grid
    // points bracketing dT1 (-0.01 outside, 0.005 inside) and dT2 (0.155
    // inside, 0.17 outside).  Further inside, the attractor amplitude
    // saturates and flattens, so the threshold contrast lives in these
    // crossing steps.
    let slope_left = (amp_at(0.005).powi(2) - amp_at(-0.01).powi(2)).abs() / 0.015;
    let slope_right = (amp_at(0.155).powi(2) - amp_at(0.17).powi(2)).abs() / 0.015;
    check!(
        name,
        slope_left > slope_right,
        "squared-amplitude slopes: left {slope_left:.3} vs right {slope_right:.3}"
    );

    let near_mid: Vec<String> = points
        .iter()
        .filter(|p| (p.d_t - 0.0646).abs() < 0.02)
        .map(|p| format!("dT = {:.3}: {}", p.d_t, p.classification.label()))
        .collect();
    pass(
        name,
        format!(
            "13 points, min inside amplitude {inside_min:.3}, slopes {slope_left:.1} vs {slope_right:.3}, mid-window [{}], {elapsed:?}",
            near_mid.join("; ")
        ),
    );
}

/// 13. Escape times from the laminar state scale logarithmically in the
///     seeding amplitude: t(delta) = c1 ln(1/delta) + c2 with R^2 >= 0.99.
#[test]
fn a13_escape_time_scales_logarithmically() {
    let name = "escape-time scaling in seed amplitude";
    let cfg = Domain::new(2.0, 2.0, 9e-4, 0.2, 0.1).unwrap(); // dT = 0.1
    let eta = 0.02;
    let mut xs = Vec::new();
    let mut ts = Vec::new();
    for (i, delta) in [1e-3, 1e-4, 1e-5, 1e-6].into_iter().enumerate() {
        let mut icfg = IntegratorConfig::new(40.0 + 25.0 * i as f64);
        icfg.ic = IcSpec::Eigenmode {
            k2: 1,
            amplitude: delta,
        };
        icfg.k1_max = 16;
        icfg.k2_max = 16;
        icfg.record_every = 5;
        let traj = simulate(&cfg, &icfg).unwrap();
        let t_escape = traj.first_crossing(eta);
        check!(
            name,
            t_escape.is_some(),
            "run from delta = {delta} never reached {eta}"
        );
        xs.push((1.0 / delta).ln());
        ts.push(t_escape.unwrap());
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let mt = ts.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxt: f64 = xs.iter().zip(&ts).map(|(x, t)| (x - mx) * (t - mt)).sum();
    let stt: f64 = ts.iter().map(|t| (t - mt).powi(2)).sum();
    let slope = sxt / sxx;
    let r2 = sxt * sxt / (sxx * stt);
    check!(name, slope > 0.0, "slope {slope} not positive");
    check!(name, r2 >= 0.99, "R^2 = {r2:.6} below 0.99");
    pass(
        name,
        format!("t = {slope:.3} ln(1/delta) + {:.3}, R^2 = {r2:.8}", mt - slope * mx),
    );
}
