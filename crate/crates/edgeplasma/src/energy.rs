//! Quadratic functionals, the conserved energy, and decay diagnostics.
//!
//! For the two-field state `u = (u1, u2)` with potential `-lap V = u1 + u2`
//! the functional
//!
//! ```text
//! E(t) = ||u||^2 - (2/(L1 dT)) ||grad V||^2
//!        + 2 nu Int_0^t [ ||grad u||^2 - (2/(L1 dT)) ||u1+u2||^2 ] ds
//! ```
//!
//! is exactly conserved along solutions.  All norms are computed spectrally
//! (Parseval): with `omega_k` the Dirichlet/periodic Laplacian eigenvalue of
//! mode `k` and the half-area factor `L1 L2 / 2`,
//!
//! * `||u||^2        = (L1 L2/2) sum |c|^2`
//! * `||grad V||^2   = (L1 L2/2) sum |c1+c2|^2 / omega_k`
//! * `||u1+u2||^2    = (L1 L2/2) sum |c1+c2|^2`
//! * `||grad u||^2   = (L1 L2/2) sum omega_k |c|^2`

use crate::domain::{DomainConfig, ModeIndex};
use crate::error::{Error, Result};
use crate::spectral::{poisson_velocity, SpectralState};

/// Snapshot of the quadratic functionals at one instant.
#[derive(Clone, Copy, Debug)]
pub struct EnergyRecord {
    pub t: f64,
    /// `||u||^2 = ||u1||^2 + ||u2||^2`.
    pub l2_sq: f64,
    /// `||grad V||^2` of the induced potential.
    pub grad_v_sq: f64,
    /// Running value of `2 nu Int [ ||grad u||^2 - (2/(L1 dT)) ||u1+u2||^2 ]`.
    pub dissipation_accum: f64,
    /// The conserved combination.
    pub energy: f64,
}

/// Result of fitting an exponential decay envelope to `||u||^2` samples.
#[derive(Clone, Copy, Debug)]
pub struct DecayCheck {
    /// Least-squares decay rate of `||u||^2` (positive means decay).
    pub gamma_fit: f64,
    /// Guaranteed rate `2 nu pi^2 / L1^2` valid outside the instability band.
    pub gamma_theory: f64,
    /// Whether every sample sits under `||u(0)||^2 exp(-gamma t)` with 5%
    /// headroom.
    pub bound_satisfied: bool,
}

fn mode_sums(cfg: &DomainConfig<f64>, state: &SpectralState) -> (f64, f64, f64, f64) {
    let mut sum_c2 = 0.0; // sum |c|^2
    let mut sum_s2 = 0.0; // sum |c1+c2|^2
    let mut sum_s2_over_omega = 0.0;
    let mut sum_omega_c2 = 0.0;
    for k1 in 1..=state.k1_max() as u32 {
        for k2 in -(state.k2_max() as i32)..=(state.k2_max() as i32) {
            let c0 = state.get(0, k1, k2);
            let c1 = state.get(1, k1, k2);
            if c0 == num_complex::Complex64::new(0.0, 0.0)
                && c1 == num_complex::Complex64::new(0.0, 0.0)
            {
                continue;
            }
            let omega = ModeIndex { k1, k2 }.laplacian_eigenvalue(cfg);
            let n2 = c0.norm_sqr() + c1.norm_sqr();
            let s2 = (c0 + c1).norm_sqr();
            sum_c2 += n2;
            sum_s2 += s2;
            sum_s2_over_omega += s2 / omega;
            sum_omega_c2 += omega * n2;
        }
    }
    let half_area = cfg.l1 * cfg.l2 / 2.0;
    (
        half_area * sum_c2,
        half_area * sum_s2,
        half_area * sum_s2_over_omega,
        half_area * sum_omega_c2,
    )
}

/// `||u||^2` by Parseval.
pub fn l2_norm_sq(cfg: &DomainConfig<f64>, state: &SpectralState) -> f64 {
    mode_sums(cfg, state).0
}

/// `||u1 + u2||^2` by Parseval.
pub fn sum_norm_sq(cfg: &DomainConfig<f64>, state: &SpectralState) -> f64 {
    mode_sums(cfg, state).1
}

/// `||grad V||^2` of the induced potential, by Parseval.
pub fn grad_v_sq(cfg: &DomainConfig<f64>, state: &SpectralState) -> f64 {
    mode_sums(cfg, state).2
}

/// `||grad u||^2 = ||grad u1||^2 + ||grad u2||^2` by Parseval.
pub fn grad_norm_sq(cfg: &DomainConfig<f64>, state: &SpectralState) -> f64 {
    mode_sums(cfg, state).3
}

/// Integrand of the dissipation history,
/// `2 nu [ ||grad u||^2 - (2/(L1 dT)) ||u1+u2||^2 ]`.
///
/// Errors when `dT = 0` (the functional is undefined there).
pub fn dissipation_integrand(cfg: &DomainConfig<f64>, state: &SpectralState) -> Result<f64> {
    let d_t = cfg.delta_t();
    if d_t == 0.0 {
        return Err(Error::Precondition(
            "energy functional undefined at dT = 0".into(),
        ));
    }
    let (_, s2, _, g2) = mode_sums(cfg, state);
    Ok(2.0 * cfg.nu * (g2 - 2.0 / (cfg.l1 * d_t) * s2))
}

/// Assemble the conserved-energy record at time `t`, given the accumulated
/// dissipation integral.
pub fn energy(
    cfg: &DomainConfig<f64>,
    state: &SpectralState,
    t: f64,
    dissipation_accum: f64,
) -> Result<EnergyRecord> {
    let d_t = cfg.delta_t();
    if d_t == 0.0 {
        return Err(Error::Precondition(
            "energy functional undefined at dT = 0".into(),
        ));
    }
    let (l2_sq, _, gv2, _) = mode_sums(cfg, state);
    Ok(EnergyRecord {
        t,
        l2_sq,
        grad_v_sq: gv2,
        dissipation_accum,
        energy: l2_sq - 2.0 / (cfg.l1 * d_t) * gv2 + dissipation_accum,
    })
}

/// The two sharp quadratic inequalities of the Dirichlet strip:
/// returns `(||grad V||^2 / ||u||^2, ||u||^2 / ||grad u||^2)`, which are
/// bounded by `2 L1^2 / pi^2` and `L1^2 / pi^2` respectively, with equality
/// approached on the gravest wall-to-wall mode.
pub fn poincare_ratios(cfg: &DomainConfig<f64>, state: &SpectralState) -> Result<(f64, f64)> {
    let (l2_sq, _, gv2, g2) = mode_sums(cfg, state);
    if l2_sq == 0.0 {
        return Err(Error::Precondition(
            "Poincare ratios undefined for the zero state".into(),
        ));
    }
    Ok((gv2 / l2_sq, l2_sq / g2))
}

/// Relative residual of the exact cross-flux identity
/// `Int E2 u1 dx = -Int E2 u2 dx` (the electric field does no net work on
/// the combined charge).  Denominator is the largest of the two fluxes and
/// the Cauchy-Schwarz scale `||E2|| (||u1|| + ||u2||)`.
pub fn cross_identity_residual(cfg: &DomainConfig<f64>, state: &SpectralState) -> f64 {
    let source = &state.component(0) + &state.component(1);
    let vel = poisson_velocity(cfg, source.view());
    let half_area = cfg.l1 * cfg.l2 / 2.0;
    let mut i1 = num_complex::Complex64::new(0.0, 0.0);
    let mut i2 = num_complex::Complex64::new(0.0, 0.0);
    let mut e2_sq = 0.0;
    let mut u1_sq = 0.0;
    let mut u2_sq = 0.0;
    let k2_max = state.k2_max() as i32;
    for k1 in 1..=state.k1_max() as u32 {
        for k2 in -k2_max..=k2_max {
            let row = (k1 - 1) as usize;
            let col = (k2 + k2_max) as usize;
            let e2 = vel.e2[[row, col]];
            let c1 = state.get(0, k1, k2);
            let c2 = state.get(1, k1, k2);
            i1 += e2 * c1.conj();
            i2 += e2 * c2.conj();
            e2_sq += e2.norm_sqr();
            u1_sq += c1.norm_sqr();
            u2_sq += c2.norm_sqr();
        }
    }
    let i1 = half_area * i1.re;
    let i2 = half_area * i2.re;
    let schwarz = half_area * e2_sq.sqrt() * (u1_sq.sqrt() + u2_sq.sqrt());
    let denom = i1
        .abs()
        .max(i2.abs())
        .max(schwarz)
        .max(f64::MIN_POSITIVE);
    (i1 + i2).abs() / denom
}

/// Fit and verify the exponential decay of `||u||^2` samples `(t, value)`
/// against the guaranteed rate `gamma = 2 nu pi^2 / L1^2`.
///
/// Preconditions: `dT` outside the band `[0, 4 L1 / pi^2]` where
/// instabilities are possible, and at least two positive samples.
pub fn decay_check(cfg: &DomainConfig<f64>, series: &[(f64, f64)]) -> Result<DecayCheck> {
    let d_t = cfg.delta_t();
    let d_t_star = cfg.d_t_star();
    if (0.0..=d_t_star).contains(&d_t) {
        return Err(Error::Precondition(format!(
            "decay is only guaranteed outside dT in [0, {d_t_star}]; got dT = {d_t}"
        )));
    }
    let pi = std::f64::consts::PI;
    let gamma = 2.0 * cfg.nu * pi * pi / (cfg.l1 * cfg.l1);
    let pts: Vec<(f64, f64)> = series
        .iter()
        .copied()
        .filter(|&(_, v)| v > 0.0)
        .map(|(t, v)| (t, v.ln()))
        .collect();
    if pts.len() < 2 {
        return Err(Error::Precondition(
            "need at least two positive samples to fit a decay rate".into(),
        ));
    }
    let n = pts.len() as f64;
    let st: f64 = pts.iter().map(|p| p.0).sum();
    let sv: f64 = pts.iter().map(|p| p.1).sum();
    let stt: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let stv: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let slope = (n * stv - st * sv) / (n * stt - st * st);
    let (t0, v0) = series[0];
    let bound_satisfied = series
        .iter()
        .all(|&(t, v)| v <= v0 * (-gamma * (t - t0)).exp() * 1.05);
    Ok(DecayCheck {
        gamma_fit: -slope,
        gamma_theory: gamma,
        bound_satisfied,
    })
}
