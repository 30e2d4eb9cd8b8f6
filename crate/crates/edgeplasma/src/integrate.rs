//! Semi-implicit time integration of the spectral system.
//!
//! The linear part (drift, exchange, viscosity) is advanced with
//! Crank-Nicolson per mode — each 2x2 block `(I - dt/2 M_k)` is inverted
//! once up front — while the quadratic advection is extrapolated with
//! Adams-Bashforth 2 (first step: explicit Euler).  Both pieces are
//! second-order accurate; reality of the fields is re-enforced every step.

use crate::domain::{DomainConfig, ModeIndex};
use crate::energy::{self, EnergyRecord};
use crate::error::{Error, Result};
use crate::spectral::{NonlinearWorkspace, SpectralEngine, SpectralState, X1Kind};
use crate::stability::mode_matrix;
use crate::tolerances::{BLOW_UP_SUP, DET_GUARD};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Time-stepping scheme for the quadratic term (the linear part is always
/// Crank-Nicolson).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scheme {
    /// Adams-Bashforth 2 extrapolation (second order; the default).
    CnAb2,
    /// Explicit Euler (first order; mostly for step-size studies).
    CnEuler,
}

/// Initial condition.
#[derive(Clone, Debug)]
pub enum IcSpec {
    Zero,
    /// Most unstable eigenvector of the `(1, k2)` linear block at the
    /// current parameters, with the given coefficient amplitude.
    Eigenmode { k2: u32, amplitude: f64 },
    /// Reproducible smooth random field: per-mode uniform complex noise
    /// damped by `exp(-(k1^2 + k2^2)/16)`, scaled so the largest
    /// coefficient modulus equals `amplitude`.
    Random { amplitude: f64, seed: u64 },
    /// One complex coefficient pair placed at `(k1, k2)` (the conjugate
    /// mode is filled in automatically).
    SingleMode { k1: u32, k2: i32, c: [Complex64; 2] },
    /// Explicit spectral state (resized onto the run truncation).
    State(SpectralState),
}

/// Integration parameters.
#[derive(Clone, Debug)]
pub struct IntegratorConfig {
    /// Step size; `None` selects `1e-3 L2 / max(|T+|, |T-|, 1)`.
    pub dt: Option<f64>,
    pub t_end: f64,
    pub scheme: Scheme,
    pub ic: IcSpec,
    /// Keep one trace record every this many steps (plus first and last).
    pub record_every: usize,
    pub k1_max: usize,
    pub k2_max: usize,
    /// Times at which to keep full spectral snapshots.
    pub snapshot_times: Vec<f64>,
}

impl IntegratorConfig {
    pub fn new(t_end: f64) -> Self {
        IntegratorConfig {
            dt: None,
            t_end,
            scheme: Scheme::CnAb2,
            ic: IcSpec::Eigenmode { k2: 1, amplitude: 1e-3 },
            record_every: 10,
            k1_max: 32,
            k2_max: 32,
            snapshot_times: Vec::new(),
        }
    }
}

/// One point of the scalar trace.
#[derive(Clone, Copy, Debug)]
pub struct TraceRecord {
    pub t: f64,
    /// Sup over the sampling grid of the first field component.
    pub sup_u1: f64,
    /// Value of the first component at the grid point nearest the channel
    /// center.
    pub mid_u1: f64,
    /// Energy functionals (absent when `dT = 0`, where they are undefined).
    pub energy: Option<EnergyRecord>,
}

/// Result of a run: scalar traces, optional snapshots, final state.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub dt: f64,
    pub steps: usize,
    pub final_t: f64,
    pub records: Vec<TraceRecord>,
    pub snapshots: Vec<(f64, SpectralState)>,
    pub final_state: SpectralState,
}

impl Trajectory {
    /// Largest excursion of the conserved energy from its initial value.
    pub fn energy_drift(&self) -> Option<f64> {
        let e0 = self.records.first()?.energy?.energy;
        self.records
            .iter()
            .filter_map(|r| r.energy.map(|e| (e.energy - e0).abs()))
            .fold(None, |m, v| Some(m.map_or(v, |m: f64| m.max(v))))
    }

    /// Least-squares slope of `ln sup_u1` over records with `t` in
    /// `[t_start, t_end]` (requires two positive samples).
    pub fn growth_rate_fit(&self, t_start: f64, t_end: f64) -> Option<f64> {
        self.fit_log_slope(t_start, t_end, |r| Some(r.sup_u1))
    }

    /// Least-squares growth rate of the field itself, from the L2 norm:
    /// half the slope of `ln ||u||^2`.  Free of grid-sampling ripple.
    pub fn l2_growth_rate_fit(&self, t_start: f64, t_end: f64) -> Option<f64> {
        self.fit_log_slope(t_start, t_end, |r| r.energy.map(|e| e.l2_sq))
            .map(|s| 0.5 * s)
    }

    fn fit_log_slope(
        &self,
        t_start: f64,
        t_end: f64,
        value: impl Fn(&TraceRecord) -> Option<f64>,
    ) -> Option<f64> {
        let pts: Vec<(f64, f64)> = self
            .records
            .iter()
            .filter(|r| r.t >= t_start && r.t <= t_end)
            .filter_map(|r| value(r).filter(|&v| v > 0.0).map(|v| (r.t, v.ln())))
            .collect();
        if pts.len() < 2 {
            return None;
        }
        let n = pts.len() as f64;
        let st: f64 = pts.iter().map(|p| p.0).sum();
        let sv: f64 = pts.iter().map(|p| p.1).sum();
        let stt: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let stv: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        let denom = n * stt - st * st;
        (denom != 0.0).then(|| (n * stv - st * sv) / denom)
    }

    /// First time `sup_u1` reaches `threshold`, log-linearly interpolated
    /// between the bracketing records.
    pub fn first_crossing(&self, threshold: f64) -> Option<f64> {
        let mut prev: Option<&TraceRecord> = None;
        for r in &self.records {
            if r.sup_u1 >= threshold {
                if let Some(p) = prev {
                    if p.sup_u1 > 0.0 && r.sup_u1 > p.sup_u1 {
                        let f = (threshold.ln() - p.sup_u1.ln())
                            / (r.sup_u1.ln() - p.sup_u1.ln());
                        return Some(p.t + f * (r.t - p.t));
                    }
                }
                return Some(r.t);
            }
            prev = Some(r);
        }
        None
    }
}

/// Most unstable eigenvector of the `(1, k2)` block at the configuration's
/// parameters, as a real spectral state with the given coefficient
/// amplitude.
pub fn eigenmode_state(
    cfg: &DomainConfig<f64>,
    k1_max: usize,
    k2_max: usize,
    k2: u32,
    amplitude: f64,
) -> Result<SpectralState> {
    if k2 == 0 || k2 as usize > k2_max {
        return Err(Error::Precondition(format!(
            "eigenmode wavenumber k2 = {k2} outside 1..={k2_max}"
        )));
    }
    let ms = mode_matrix(cfg, ModeIndex { k1: 1, k2: k2 as i32 });
    let m = ms.m;
    let lam = ms.lambda_plus;
    // Kernel of (M - lambda): rows give (m01, lam - m00) and
    // (lam - m11, m10); take the better-conditioned one.
    let va = [m[0][1], lam - m[0][0]];
    let vb = [lam - m[1][1], m[1][0]];
    let na = va[0].norm_sqr() + va[1].norm_sqr();
    let nb = vb[0].norm_sqr() + vb[1].norm_sqr();
    let v = if na >= nb { va } else { vb };
    let norm = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    if norm == 0.0 {
        return Err(Error::Singular(format!(
            "degenerate linear block at (1, {k2}): no eigenvector direction"
        )));
    }
    // Deterministic phase: make the larger entry real positive.
    let anchor = if v[0].norm() >= v[1].norm() { v[0] } else { v[1] };
    let phase = anchor.conj() / anchor.norm();
    let scale = phase * (amplitude / norm);
    let mut s = SpectralState::new(k1_max, k2_max);
    for (l, item) in v.iter().enumerate() {
        s.set(l, 1, k2 as i32, item * scale);
        s.set(l, 1, -(k2 as i32), (item * scale).conj());
    }
    Ok(s)
}

/// Reproducible smooth random state (see [`IcSpec::Random`]).
pub fn random_state(k1_max: usize, k2_max: usize, amplitude: f64, seed: u64) -> SpectralState {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = SpectralState::new(k1_max, k2_max);
    for comp in 0..2 {
        for k1 in 1..=k1_max as u32 {
            for k2 in -(k2_max as i32)..=(k2_max as i32) {
                let damp = (-((k1 as f64).powi(2) + (k2 as f64).powi(2)) / 16.0).exp();
                let z = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                s.set(comp, k1, k2, z * damp);
            }
        }
    }
    s.enforce_reality();
    let sup = s.sup_coeff();
    if sup > 0.0 {
        s.scale(Complex64::new(amplitude / sup, 0.0));
    }
    s
}

struct LinearBlocks {
    k2_max: usize,
    /// `(I - dt/2 M_k)^(-1)` per mode.
    inv_minus: Vec<[[Complex64; 2]; 2]>,
    /// `(I + dt/2 M_k)` per mode.
    plus: Vec<[[Complex64; 2]; 2]>,
}

impl LinearBlocks {
    fn build(cfg: &DomainConfig<f64>, k1_max: usize, k2_max: usize, dt: f64) -> Result<Self> {
        let cols = 2 * k2_max + 1;
        let mut inv_minus = Vec::with_capacity(k1_max * cols);
        let mut plus = Vec::with_capacity(k1_max * cols);
        let h = 0.5 * dt;
        for k1 in 1..=k1_max as u32 {
            for k2 in -(k2_max as i32)..=(k2_max as i32) {
                let m = mode_matrix(cfg, ModeIndex { k1, k2 }).m;
                let a = [
                    [Complex64::new(1.0, 0.0) - h * m[0][0], -h * m[0][1]],
                    [-h * m[1][0], Complex64::new(1.0, 0.0) - h * m[1][1]],
                ];
                let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
                if det.norm() < DET_GUARD {
                    return Err(Error::Singular(format!(
                        "Crank-Nicolson block singular at (k1, k2) = ({k1}, {k2}) for dt = {dt}"
                    )));
                }
                inv_minus.push([
                    [a[1][1] / det, -a[0][1] / det],
                    [-a[1][0] / det, a[0][0] / det],
                ]);
                plus.push([
                    [Complex64::new(1.0, 0.0) + h * m[0][0], h * m[0][1]],
                    [h * m[1][0], Complex64::new(1.0, 0.0) + h * m[1][1]],
                ]);
            }
        }
        Ok(LinearBlocks {
            k2_max,
            inv_minus,
            plus,
        })
    }

    #[inline]
    fn idx(&self, k1: u32, k2: i32) -> usize {
        (k1 as usize - 1) * (2 * self.k2_max + 1) + (k2 + self.k2_max as i32) as usize
    }
}

/// Advance the configuration from the chosen initial condition to
/// `t_end`.
///
/// Preconditions: `nu > 0` (the explicit quadratic cascade needs the
/// viscous sink), `t_end > 0`, and a positive step size.  Fails with
/// [`Error::BlowUp`] when the largest coefficient modulus exceeds the
/// blow-up guard.
pub fn simulate(cfg: &DomainConfig<f64>, icfg: &IntegratorConfig) -> Result<Trajectory> {
    if cfg.nu <= 0.0 {
        return Err(Error::Precondition(
            "time integration requires nu > 0 (inviscid runs are outside the \
             validity of the truncated cascade)"
                .into(),
        ));
    }
    if !(icfg.t_end > 0.0) {
        return Err(Error::Precondition(format!(
            "t_end must be positive, got {}",
            icfg.t_end
        )));
    }
    let dt = icfg.dt.unwrap_or_else(|| {
        1e-3 * cfg.l2 / cfg.t_plus.abs().max(cfg.t_minus.abs()).max(1.0)
    });
    if !(dt > 0.0) || !dt.is_finite() {
        return Err(Error::Precondition(format!("step size must be positive, got {dt}")));
    }
    let (k1_max, k2_max) = (icfg.k1_max, icfg.k2_max);
    if k1_max == 0 {
        return Err(Error::Precondition("truncation needs k1_max >= 1".into()));
    }
    let record_every = icfg.record_every.max(1);
    let steps = (icfg.t_end / dt - 1e-9).ceil().max(1.0) as usize;

    let mut u = match &icfg.ic {
        IcSpec::Zero => SpectralState::new(k1_max, k2_max),
        IcSpec::Eigenmode { k2, amplitude } => {
            eigenmode_state(cfg, k1_max, k2_max, *k2, *amplitude)?
        }
        IcSpec::Random { amplitude, seed } => random_state(k1_max, k2_max, *amplitude, *seed),
        IcSpec::SingleMode { k1, k2, c } => {
            if *k1 == 0 || *k1 as usize > k1_max || k2.unsigned_abs() as usize > k2_max {
                return Err(Error::Precondition(format!(
                    "single-mode index ({k1}, {k2}) outside the truncation"
                )));
            }
            let mut s = SpectralState::new(k1_max, k2_max);
            for (l, v) in c.iter().enumerate() {
                s.set(l, *k1, *k2, *v);
                s.set(l, *k1, -*k2, v.conj());
            }
            s.enforce_reality();
            s
        }
        IcSpec::State(s) => {
            let mut r = s.resized(k1_max, k2_max);
            r.enforce_reality();
            r
        }
    };

    let blocks = LinearBlocks::build(cfg, k1_max, k2_max, dt)?;
    let mut ws = NonlinearWorkspace::new(k1_max, k2_max);
    let mut engine = SpectralEngine::for_truncation(k1_max, k2_max);
    let energy_enabled = cfg.delta_t() != 0.0;

    let mut snaps: Vec<f64> = icfg.snapshot_times.clone();
    snaps.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut next_snap = 0usize;

    let mut records = Vec::new();
    let mut snapshots = Vec::new();
    let mut diss_accum = 0.0;
    let mut x_prev = if energy_enabled {
        energy::dissipation_integrand(cfg, &u)?
    } else {
        0.0
    };

    let check_blowup = |state: &SpectralState, t: f64| -> Result<()> {
        let sup = state.sup_coeff();
        if !state.is_finite() || sup > BLOW_UP_SUP {
            return Err(Error::BlowUp {
                t,
                sup,
                limit: BLOW_UP_SUP,
            });
        }
        Ok(())
    };
    check_blowup(&u, 0.0)?;

    let record = |state: &SpectralState,
                      t: f64,
                      accum: f64,
                      engine: &mut SpectralEngine|
     -> Result<TraceRecord> {
        let grid = engine.synth(state.component(0), X1Kind::Sine);
        let (rows, cols) = grid.dim();
        let mut sup = 0.0f64;
        for v in grid.iter() {
            sup = sup.max(v.re.abs());
        }
        let mid = grid[[rows / 2, cols / 2]].re;
        let energy = if energy_enabled {
            Some(energy::energy(cfg, state, t, accum)?)
        } else {
            None
        };
        Ok(TraceRecord {
            t,
            sup_u1: sup,
            mid_u1: mid,
            energy,
        })
    };
    records.push(record(&u, 0.0, 0.0, &mut engine)?);
    while next_snap < snaps.len() && snaps[next_snap] <= 0.0 {
        snapshots.push((0.0, u.clone()));
        next_snap += 1;
    }

    let mut r_prev: Option<SpectralState> = None;
    for n in 0..steps {
        let t_next = (n + 1) as f64 * dt;
        let r_now = ws.nonlinear_term(cfg, &u);
        let mut next = SpectralState::new(k1_max, k2_max);
        let use_ab2 = icfg.scheme == Scheme::CnAb2 && r_prev.is_some();
        let rp = r_prev.as_ref();
        for k1 in 1..=k1_max as u32 {
            for k2 in -(k2_max as i32)..=(k2_max as i32) {
                let idx = blocks.idx(k1, k2);
                let u0 = u.get(0, k1, k2);
                let u1 = u.get(1, k1, k2);
                let (f0, f1) = if use_ab2 {
                    let p = rp.unwrap();
                    (
                        1.5 * r_now.get(0, k1, k2) - 0.5 * p.get(0, k1, k2),
                        1.5 * r_now.get(1, k1, k2) - 0.5 * p.get(1, k1, k2),
                    )
                } else {
                    (r_now.get(0, k1, k2), r_now.get(1, k1, k2))
                };
                let ap = &blocks.plus[idx];
                let rhs0 = ap[0][0] * u0 + ap[0][1] * u1 + dt * f0;
                let rhs1 = ap[1][0] * u0 + ap[1][1] * u1 + dt * f1;
                let am = &blocks.inv_minus[idx];
                next.set(0, k1, k2, am[0][0] * rhs0 + am[0][1] * rhs1);
                next.set(1, k1, k2, am[1][0] * rhs0 + am[1][1] * rhs1);
            }
        }
        next.enforce_reality();
        check_blowup(&next, t_next)?;
        if energy_enabled {
            let x_next = energy::dissipation_integrand(cfg, &next)?;
            diss_accum += 0.5 * dt * (x_prev + x_next);
            x_prev = x_next;
        }
        u = next;
        r_prev = Some(r_now);

        while next_snap < snaps.len() && snaps[next_snap] <= t_next + 1e-12 {
            snapshots.push((t_next, u.clone()));
            next_snap += 1;
        }
        if (n + 1) % record_every == 0 || n + 1 == steps {
            records.push(record(&u, t_next, diss_accum, &mut engine)?);
        }
    }

    let final_t = steps as f64 * dt;
    Ok(Trajectory {
        dt,
        steps,
        final_t,
        records,
        snapshots,
        final_state: u,
    })
}
