//! Right-hand-side operators: linear per-mode action and the dealiased
//! pseudospectral quadratic (advective) term.
//!
//! The quadratic term of the model is
//! `R(u)_l = E1 d(u_l)/dx2 - E2 d(u_l)/dx1`, where `E = (E1, E2)` is the
//! electric field induced by the combined source `u1 + u2`.  Its symmetric
//! bilinear polarization `B(v, w) = (R(v + w) - R(v) - R(w)) / 2` is
//! evaluated directly as the average of the two one-sided advections, which
//! is algebraically identical and costs the same transforms.

use super::poisson::poisson_velocity;
use super::state::SpectralState;
use super::transform::{SpectralEngine, X1Kind};
use crate::domain::DomainConfig;
use crate::stability::mode_matrix;
use crate::domain::ModeIndex;
use ndarray::Array2;
use num_complex::Complex64;

/// Reusable transforms and buffers for quadratic-term evaluation on one
/// truncation.  All methods are exact (to rounding) on the retained modes:
/// the grid obeys the 3/2 dealiasing rule for the truncation.
pub struct NonlinearWorkspace {
    engine: SpectralEngine,
    k1_max: usize,
    k2_max: usize,
}

impl NonlinearWorkspace {
    pub fn new(k1_max: usize, k2_max: usize) -> Self {
        Self {
            engine: SpectralEngine::for_truncation(k1_max, k2_max),
            k1_max,
            k2_max,
        }
    }

    pub fn k1_max(&self) -> usize {
        self.k1_max
    }

    pub fn k2_max(&self) -> usize {
        self.k2_max
    }

    /// Grid sizes of the internal dealiased grid.
    pub fn grid_sizes(&self) -> (usize, usize) {
        (self.engine.n1(), self.engine.n2())
    }

    /// Evaluate the full quadratic term `R(u)` of a state.
    pub fn nonlinear_term(&mut self, cfg: &DomainConfig<f64>, state: &SpectralState) -> SpectralState {
        self.advect(cfg, state, state)
    }

    /// Symmetric bilinear form `B(v, w)` with `B(u, u) = R(u)`.
    pub fn bilinear_term(
        &mut self,
        cfg: &DomainConfig<f64>,
        v: &SpectralState,
        w: &SpectralState,
    ) -> SpectralState {
        if std::ptr::eq(v, w) {
            return self.advect(cfg, v, w);
        }
        let mut a = self.advect(cfg, v, w);
        let b = self.advect(cfg, w, v);
        a.add_scaled(&b, Complex64::new(1.0, 0.0));
        a.scale(Complex64::new(0.5, 0.0));
        a
    }

    /// One-sided advection: velocity from `vel_of`, gradients of `grad_of`.
    fn advect(
        &mut self,
        cfg: &DomainConfig<f64>,
        vel_of: &SpectralState,
        grad_of: &SpectralState,
    ) -> SpectralState {
        assert_eq!(vel_of.k1_max(), self.k1_max);
        assert_eq!(vel_of.k2_max(), self.k2_max);
        assert_eq!(grad_of.k1_max(), self.k1_max);
        assert_eq!(grad_of.k2_max(), self.k2_max);
        let pi = std::f64::consts::PI;

        let source = &vel_of.component(0) + &vel_of.component(1);
        let vm = poisson_velocity(cfg, source.view());
        let e1 = self.engine.synth(vm.e1.view(), X1Kind::Cosine);
        let e2 = self.engine.synth(vm.e2.view(), X1Kind::Sine);

        let mut out = SpectralState::new(self.k1_max, self.k2_max);
        let cols = 2 * self.k2_max + 1;
        for comp in 0..2 {
            // x1-derivative -> cosine coefficients; x2-derivative -> sine.
            let c = grad_of.component(comp);
            let mut d1 = Array2::from_elem((self.k1_max, cols), Complex64::new(0.0, 0.0));
            let mut d2 = d1.clone();
            for r in 0..self.k1_max {
                let k1 = (r + 1) as f64;
                for col in 0..cols {
                    let k2 = (col as i64 - self.k2_max as i64) as f64;
                    d1[[r, col]] = c[[r, col]] * (k1 * pi / cfg.l1);
                    d2[[r, col]] = c[[r, col]] * Complex64::new(0.0, 2.0 * pi * k2 / cfg.l2);
                }
            }
            let g1 = self.engine.synth(d1.view(), X1Kind::Cosine);
            let g2 = self.engine.synth(d2.view(), X1Kind::Sine);
            // R_l = E1 * d2(u_l) - E2 * d1(u_l), pointwise on the grid.
            let mut rl = g2;
            rl.zip_mut_with(&e1, |a, &b| *a *= b);
            let mut sub = g1;
            sub.zip_mut_with(&e2, |a, &b| *a *= b);
            rl.zip_mut_with(&sub, |a, &b| *a -= b);
            let coeffs = self.engine.analyze_sine(rl.view(), self.k1_max, self.k2_max);
            out.component_mut(comp).assign(&coeffs);
        }
        out
    }
}

/// Apply the linearization about the zero state mode-by-mode:
/// `(Lu)_k = M_k u_k` with the same 2x2 blocks as the closed-form spectrum.
pub fn apply_linear(cfg: &DomainConfig<f64>, state: &SpectralState) -> SpectralState {
    let mut out = state.zeros_like();
    for k1 in 1..=state.k1_max() as u32 {
        for k2 in -(state.k2_max() as i32)..=(state.k2_max() as i32) {
            let m = mode_matrix(cfg, ModeIndex { k1, k2 }).m;
            let a = state.get(0, k1, k2);
            let b = state.get(1, k1, k2);
            out.set(0, k1, k2, m[0][0] * a + m[0][1] * b);
            out.set(1, k1, k2, m[1][0] * a + m[1][1] * b);
        }
    }
    out
}

/// Convenience one-shot evaluation of `R(u)` (builds a workspace per call;
/// use [`NonlinearWorkspace`] in loops).
pub fn nonlinear_term(cfg: &DomainConfig<f64>, state: &SpectralState) -> SpectralState {
    NonlinearWorkspace::new(state.k1_max(), state.k2_max()).nonlinear_term(cfg, state)
}

/// Convenience one-shot evaluation of `B(v, w)`.
pub fn bilinear_term(
    cfg: &DomainConfig<f64>,
    v: &SpectralState,
    w: &SpectralState,
) -> SpectralState {
    assert_eq!(v.k1_max(), w.k1_max(), "mismatched truncations");
    assert_eq!(v.k2_max(), w.k2_max(), "mismatched truncations");
    NonlinearWorkspace::new(v.k1_max(), v.k2_max()).bilinear_term(cfg, v, w)
}

/// Full right-hand side `L u + R(u)` (used by Jacobian cross-checks).
pub fn full_rhs(cfg: &DomainConfig<f64>, state: &SpectralState) -> SpectralState {
    let mut out = apply_linear(cfg, state);
    let nl = nonlinear_term(cfg, state);
    out.add_scaled(&nl, Complex64::new(1.0, 0.0));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cfg() -> DomainConfig<f64> {
        DomainConfig::new(2.0, 2.0, 9.0e-4, 0.26, 0.1).unwrap()
    }

    fn random_state(k1_max: usize, k2_max: usize, seed: u64, real: bool) -> SpectralState {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut s = SpectralState::new(k1_max, k2_max);
        for l in 0..2 {
            for k1 in 1..=k1_max as u32 {
                for k2 in -(k2_max as i32)..=(k2_max as i32) {
                    s.set(
                        l,
                        k1,
                        k2,
                        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
                    );
                }
            }
        }
        if real {
            s.enforce_reality();
        }
        s
    }

    #[test]
    fn quadratic_term_vanishes_at_zero_and_is_quadratic() {
        let c = cfg();
        let zero = SpectralState::new(4, 4);
        assert_eq!(nonlinear_term(&c, &zero).sup_coeff(), 0.0);
        // R(alpha u) = alpha^2 R(u).
        let u = random_state(4, 4, 7, true);
        let mut u2 = u.clone();
        u2.scale(Complex64::new(3.0, 0.0));
        let r1 = nonlinear_term(&c, &u);
        let r2 = nonlinear_term(&c, &u2);
        let mut worst = 0.0f64;
        for (l, k1, k2, v) in r2.iter_modes() {
            worst = worst.max((v - 9.0 * r1.get(l, k1, k2)).norm());
        }
        assert!(worst < 1e-12 * r2.sup_coeff().max(1.0), "scaling defect {worst}");
    }

    #[test]
    fn bilinear_is_symmetric_polarization_of_quadratic() {
        let c = cfg();
        let v = random_state(4, 3, 1, true);
        let w = random_state(4, 3, 2, true);
        let ws = &mut NonlinearWorkspace::new(4, 3);
        // B(u, u) = R(u).
        let r = ws.nonlinear_term(&c, &v);
        let b = ws.bilinear_term(&c, &v, &v.clone());
        let mut worst = 0.0f64;
        for (l, k1, k2, val) in r.iter_modes() {
            worst = worst.max((val - b.get(l, k1, k2)).norm());
        }
        assert!(worst < 1e-12 * r.sup_coeff().max(1.0));
        // Symmetry.
        let bvw = ws.bilinear_term(&c, &v, &w);
        let bwv = ws.bilinear_term(&c, &w, &v);
        let mut worst = 0.0f64;
        for (l, k1, k2, val) in bvw.iter_modes() {
            worst = worst.max((val - bwv.get(l, k1, k2)).norm());
        }
        assert!(worst < 1e-13 * bvw.sup_coeff().max(1.0));
        // Polarization identity: R(v + w) = R(v) + 2 B(v, w) + R(w).
        let mut vw = v.clone();
        vw.add_scaled(&w, Complex64::new(1.0, 0.0));
        let rvw = ws.nonlinear_term(&c, &vw);
        let rv = ws.nonlinear_term(&c, &v);
        let rw = ws.nonlinear_term(&c, &w);
        let mut worst = 0.0f64;
        for (l, k1, k2, val) in rvw.iter_modes() {
            let sum = rv.get(l, k1, k2) + 2.0 * bvw.get(l, k1, k2) + rw.get(l, k1, k2);
            worst = worst.max((val - sum).norm());
        }
        assert!(worst < 1e-12 * rvw.sup_coeff().max(1.0), "polarization defect {worst}");
    }

    #[test]
    fn bilinearity_in_each_argument() {
        let c = cfg();
        let ws = &mut NonlinearWorkspace::new(3, 3);
        let v1 = random_state(3, 3, 11, false);
        let v2 = random_state(3, 3, 12, false);
        let w = random_state(3, 3, 13, false);
        let alpha = Complex64::new(0.6, -0.3);
        let mut combo = v1.clone();
        combo.scale(alpha);
        combo.add_scaled(&v2, Complex64::new(1.0, 0.0));
        let lhs = ws.bilinear_term(&c, &combo, &w);
        let b1 = ws.bilinear_term(&c, &v1, &w);
        let b2 = ws.bilinear_term(&c, &v2, &w);
        let mut worst = 0.0f64;
        for (l, k1, k2, val) in lhs.iter_modes() {
            let want = alpha * b1.get(l, k1, k2) + b2.get(l, k1, k2);
            worst = worst.max((val - want).norm());
        }
        assert!(worst < 1e-12 * lhs.sup_coeff().max(1.0), "linearity defect {worst}");
    }

    #[test]
    fn quadratic_term_is_l2_skew() {
        // <R(u), u> = 0: the drift velocity is divergence-free, so the
        // advection redistributes but never creates L2 mass.
        let c = cfg();
        let base = DomainConfig::new(1.3, 3.7, 1e-3, 0.4, 0.1).unwrap();
        for (cc, seed) in [(&c, 21u64), (&base, 22)] {
            let u = random_state(5, 5, seed, true);
            let r = nonlinear_term(cc, &u);
            // Real-field L2 pairing: (L1 L2 / 2) sum_k a_k conj(b_k).
            let mut acc = Complex64::new(0.0, 0.0);
            for (l, k1, k2, v) in r.iter_modes() {
                acc += v * u.get(l, k1, k2).conj();
            }
            let scale: f64 = u.sup_coeff().powi(2) * r.sup_coeff().max(1.0);
            assert!(
                acc.norm() < 1e-12 * scale.max(1e-6),
                "skewness defect {acc} for seed {seed}"
            );
        }
    }

    #[test]
    fn reality_is_preserved_by_the_quadratic_term() {
        let c = cfg();
        let u = random_state(4, 4, 31, true);
        let r = nonlinear_term(&c, &u);
        assert!(r.reality_defect() < 1e-13 * r.sup_coeff().max(1.0));
    }

    #[test]
    fn linear_operator_matches_mode_matrix_on_unit_modes() {
        let c = cfg();
        let mut s = SpectralState::new(3, 3);
        s.set(0, 2, -1, Complex64::new(1.0, 0.0));
        let out = apply_linear(&c, &s);
        let m = mode_matrix(&c, ModeIndex { k1: 2, k2: -1 }).m;
        assert!((out.get(0, 2, -1) - m[0][0]).norm() < 1e-15);
        assert!((out.get(1, 2, -1) - m[1][0]).norm() < 1e-15);
        assert_eq!(out.get(0, 1, 1), Complex64::new(0.0, 0.0));
    }
}
