//! Channel Poisson solve and the induced velocity field.
//!
//! Given a scalar source `f` (the sum `u1 + u2`), the potential solves
//! `-Laplacian V = f` with Dirichlet walls and periodic `x2`.  The drift
//! velocity entering the advection term is the perpendicular field
//! `A_perp f = (E2, -E1)` built from `E = -grad V`.  Per mode
//! `(k1, k2)` with `S_k = ell k1^2 + 4 k2^2 / ell`:
//!
//! * `V_k    =  f_k L1 L2 / (pi^2 S_k)` (sine type),
//! * `E1_k   = -(L2/pi) (k1/S_k) f_k`  (cosine type),
//! * `E2_k   = -(2 L1 i/pi) (k2/S_k) f_k` (sine type).

use super::grid::VectorGridField;
use super::state::SpectralState;
use super::transform::{SpectralEngine, X1Kind};
use crate::domain::DomainConfig;
use ndarray::{Array2, ArrayView2};
use num_complex::Complex64;

/// Per-mode representation of the potential and velocity data derived from
/// a scalar source by the channel Poisson solve.
#[derive(Clone, Debug)]
pub struct VelocityModes {
    /// Sine-type coefficients of the potential `V`.
    pub v: Array2<Complex64>,
    /// Cosine-type coefficients of `E1 = -dV/dx1`.
    pub e1: Array2<Complex64>,
    /// Sine-type coefficients of `E2 = -dV/dx2`.
    pub e2: Array2<Complex64>,
}

/// Solve the channel Poisson problem for a scalar source given by sine-type
/// coefficients (layout `[k1-1][k2 + k2_max]`) and return the per-mode
/// potential and field data.
pub fn poisson_velocity(cfg: &DomainConfig<f64>, f: ArrayView2<Complex64>) -> VelocityModes {
    let pi = std::f64::consts::PI;
    let ell = cfg.ell();
    let k1_max = f.nrows();
    let cols = f.ncols();
    let k2_max = (cols - 1) / 2;
    let mut v = Array2::from_elem((k1_max, cols), Complex64::new(0.0, 0.0));
    let mut e1 = v.clone();
    let mut e2 = v.clone();
    for r in 0..k1_max {
        let k1 = (r + 1) as f64;
        for c in 0..cols {
            let k2 = (c as i64 - k2_max as i64) as f64;
            let s = ell * k1 * k1 + 4.0 * k2 * k2 / ell;
            let fk = f[[r, c]];
            v[[r, c]] = fk * (cfg.l1 * cfg.l2 / (pi * pi * s));
            e1[[r, c]] = fk * (-(cfg.l2 / pi) * (k1 / s));
            e2[[r, c]] = fk * Complex64::new(0.0, -(2.0 * cfg.l1 / pi) * (k2 / s));
        }
    }
    VelocityModes { v, e1, e2 }
}

/// Evaluate the electric field `E = (E1, E2)` of a state's combined source
/// `u1 + u2` on a real grid.
pub fn electric_field_grid(
    cfg: &DomainConfig<f64>,
    state: &SpectralState,
    engine: &mut SpectralEngine,
) -> VectorGridField {
    let f = &state.component(0) + &state.component(1);
    let vm = poisson_velocity(cfg, f.view());
    let e1 = engine.synth(vm.e1.view(), X1Kind::Cosine);
    let e2 = engine.synth(vm.e2.view(), X1Kind::Sine);
    VectorGridField {
        l1: cfg.l1,
        l2: cfg.l2,
        c1: e1.mapv(|z| z.re),
        c2: e2.mapv(|z| z.re),
    }
}
