//! Hopf normal form at the instability thresholds.
//!
//! At either endpoint of an instability interval the critical mode
//! `(1, k2)` crosses the imaginary axis with frequency `omega = c1`.  The
//! reduced dynamics on the center manifold is
//! `z' = i omega z + a mu1 z + b |z|^2 z + ...` with `mu1` the offset of
//! `dT` from the threshold.  The constants are pure numbers built from the
//! threshold data:
//!
//! * `c1 = pi k2 dT_c / L2` (also the comoving frequency),
//! * `c2 = (2/pi) k2 / S`, `S = ell + 4 k2^2 / ell`,
//! * `c3 = nu * omega_lap`, `c4 = omega_lap = pi^2 (1/L1^2 + 4 k2^2/L2^2)`,
//!
//! which satisfy `c3^2 = c1 (2 c2 - c1)` exactly at a threshold.  All
//! formulas below hold for general `k2 >= 1`; they coincide with the
//! familiar `k2 = 1` displays after the substitution `L2 -> L2 / k2`.

use crate::domain::{DomainConfig, ModeIndex};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{NonlinearWorkspace, SpectralState};
use crate::stability::{instability_interval, RegionStatus};
use crate::tolerances;
use num_complex::{Complex, Complex64};

/// Which endpoint of an instability interval.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Threshold {
    /// Smaller root (`j = 1`): instability sets in as `dT` increases.
    Left,
    /// Larger root (`j = 2`): instability ends as `dT` increases.
    Right,
}

/// All data of one Hopf point: threshold location, frequency, and the pure
/// numbers entering the normal form.
#[derive(Clone, Copy, Debug)]
pub struct BifurcationPoint<R: Real> {
    pub which: Threshold,
    pub k2: u32,
    /// Threshold value of `dT`.
    pub d_t_c: R,
    /// Comoving-frame angular frequency of the critical mode (`= c1`).
    pub omega: R,
    pub c1: R,
    pub c2: R,
    pub c3: R,
    /// Laplacian eigenvalue of the critical mode (`= c3 / nu` when
    /// `nu > 0`; still defined in the inviscid limit).
    pub c4: R,
    /// Geometry and parameters captured at construction.
    pub l1: R,
    pub l2: R,
    pub nu: R,
    pub t_minus: R,
}

/// Normal-form constants of the degenerate (merged-threshold) point, where
/// the two Hopf endpoints collide at `nu = nu_crit`.
#[derive(Clone, Copy, Debug)]
pub struct DegenerateCoeffs<R: Real> {
    /// Frequency slope `Im(a) = pi k2 / L2`.
    pub a0: R,
    /// Curvature of the growth rate through the double root:
    /// `a1 = pi^2 k2^2 / (L2^2 c3)`.
    pub a1: R,
    /// Unfolding normalization `a2 = 1 / sqrt(pi L1 L2)`.
    pub a2: R,
    /// Detuning slope `a3 = pi k2 / L2^2`.
    pub a3: R,
    /// Location of the merged threshold.
    pub d_t_c: R,
    pub c3: R,
}

impl<R: Real> DegenerateCoeffs<R> {
    /// Reduced real part of the unfolded normal form,
    /// `A(mu1, mu2) = a1 mu1 (a2 mu2 - a3 mu1)`.
    pub fn reduced_real_part(&self, mu1: R, mu2: R) -> R {
        self.a1 * mu1 * (self.a2 * mu2 - self.a3 * mu1)
    }
}

/// First-order description of the bifurcating travelling-wave cycle at
/// parameter offset `mu1 = dT - dT_c`.
#[derive(Clone, Copy, Debug)]
pub struct PredictedCycle<R: Real> {
    /// Normal-form orbit radius `|z| = sqrt(-mu1 Re a / Re b)`.
    pub radius: R,
    /// Sup-norm of the first field component of the reconstructed wave,
    /// `2 c2 * radius` to leading order.
    pub amplitude_sup_u1: R,
    /// Angular frequency in the comoving frame, including the first-order
    /// detuning `omega + mu1 Im a + Im b * radius^2`.
    pub frequency_comoving: R,
    /// Angular frequency in the lab frame (adds the frame shift
    /// `2 pi k2 T- / L2`).
    pub frequency_lab: R,
    pub period_comoving: R,
    pub period_lab: R,
    /// Propagation speed of the pattern in the comoving frame,
    /// `-omega_comoving L2 / (2 pi k2)`.
    pub speed: R,
}

/// Locate a Hopf point: the chosen endpoint of the `k2` instability
/// interval, with all threshold constants.
///
/// Errors when the interval is absent.  For a point-like (degenerate)
/// interval both endpoints coincide.
pub fn bifurcation_point<R: Real>(
    cfg: &DomainConfig<R>,
    which: Threshold,
    k2: u32,
) -> Result<BifurcationPoint<R>> {
    let region = instability_interval(cfg, k2)?;
    let (lo, hi) = region.endpoints().ok_or_else(|| {
        Error::Precondition(format!(
            "no instability interval for k2 = {k2}: nu = {} exceeds nu_crit = {}",
            cfg.nu, region.nu_crit
        ))
    })?;
    let d_t_c = match which {
        Threshold::Left => lo,
        Threshold::Right => hi,
    };
    let pi = R::PI();
    let ell = cfg.ell();
    let k2r = R::of_int(k2 as i64);
    let s = ell + R::of(4.0) * k2r * k2r / ell;
    let c1 = pi * k2r * d_t_c / cfg.l2;
    let c2 = R::of(2.0) / pi * k2r / s;
    let c4 = ModeIndex { k1: 1, k2: k2 as i32 }.laplacian_eigenvalue(cfg);
    let c3 = cfg.nu * c4;
    Ok(BifurcationPoint {
        which,
        k2,
        d_t_c,
        omega: c1,
        c1,
        c2,
        c3,
        c4,
        l1: cfg.l1,
        l2: cfg.l2,
        nu: cfg.nu,
        t_minus: cfg.t_minus,
    })
}

impl<R: Real> BifurcationPoint<R> {
    /// Residual of the exact threshold relation `c3^2 = c1 (2 c2 - c1)`,
    /// relative to the scale of its terms.
    pub fn relation_residual(&self) -> R {
        let lhs = self.c3 * self.c3;
        let rhs = self.c1 * (R::of(2.0) * self.c2 - self.c1);
        let scale = lhs.abs() + self.c1.abs() * (R::of(2.0) * self.c2.abs() + self.c1.abs());
        (lhs - rhs).abs() / scale.max(R::min_positive_value())
    }

    /// Domain configuration at the threshold (comoving-frame parameters
    /// preserved).
    pub fn config(&self) -> DomainConfig<R> {
        DomainConfig {
            l1: self.l1,
            l2: self.l2,
            nu: self.nu,
            t_plus: self.t_minus + self.d_t_c,
            t_minus: self.t_minus,
        }
    }
}

/// Critical eigenvector `xi`, normalized adjoint eigenvector `eta`, and the
/// normalization constant `delta`.
///
/// Conventions: `M xi = i c1 xi`, `M^H eta = -i c1 eta`, and the
/// normalization makes the full-domain pairing of the critical mode with
/// its adjoint equal one, i.e. `xi . conj(eta) = 2 / (L1 L2)`.
pub fn eigenvectors<R: Real>(
    bp: &BifurcationPoint<R>,
) -> ([Complex<R>; 2], [Complex<R>; 2], Complex<R>) {
    let i = Complex::<R>::i();
    let c1 = Complex::new(bp.c1, R::zero());
    let c2 = Complex::new(bp.c2, R::zero());
    let c3 = Complex::new(bp.c3, R::zero());
    let xi = [i * c2, i * c1 - i * c2 - c3];
    let denom = (i * c1 - c3) * (i * c1 - (c2 + c2) * i - c3);
    let two_over_area = Complex::new(R::of(2.0) / (bp.l1 * bp.l2), R::zero());
    let delta = two_over_area / denom;
    let eta_bar = [-i * c2 * delta, (i * c1 - i * c2 - c3) * delta];
    let eta = [eta_bar[0].conj(), eta_bar[1].conj()];
    (xi, eta, delta)
}

/// First normal-form coefficient `a` (the `mu1`-slope of the critical
/// eigenvalue), via the normalization constant:
/// `a = pi k2 L1 c2^2 delta i`.
pub fn coeff_a<R: Real>(bp: &BifurcationPoint<R>) -> Complex<R> {
    let (_, _, delta) = eigenvectors(bp);
    let pref = R::PI() * R::of_int(bp.k2 as i64) * bp.l1 * bp.c2 * bp.c2;
    Complex::new(R::zero(), pref) * delta
}

/// The same coefficient through the explicit rational form
/// `a = 2 pi k2 c2^2 / (L2 (c1 + c3 i)(c1 i - 2 c2 i - c3))`; algebraically
/// identical to [`coeff_a`].
pub fn coeff_a_direct<R: Real>(bp: &BifurcationPoint<R>) -> Complex<R> {
    let i = Complex::<R>::i();
    let c1 = Complex::new(bp.c1, R::zero());
    let c2 = Complex::new(bp.c2, R::zero());
    let c3 = Complex::new(bp.c3, R::zero());
    let num = Complex::new(
        R::of(2.0) * R::PI() * R::of_int(bp.k2 as i64) * bp.c2 * bp.c2,
        R::zero(),
    );
    num / ((c1 + c3 * i) * (c1 * i - (c2 + c2) * i - c3) * bp.l2)
}

/// Cubic normal-form coefficient, closed form:
/// `b = -2 k2^2 c1 c2 L1^2 / (nu pi^2 S^2)` with `S = ell + 4 k2^2 / ell`.
/// Real and strictly negative at any genuine threshold (supercritical
/// saturation).  Degenerates in the inviscid limit.
pub fn coeff_b<R: Real>(bp: &BifurcationPoint<R>) -> Result<Complex<R>> {
    if bp.nu <= R::zero() {
        return Err(Error::Singular(
            "cubic coefficient degenerates in the inviscid limit (nu = 0): \
             the quadratic cascade returns through undamped axisymmetric modes"
                .into(),
        ));
    }
    let pi = R::PI();
    let ell = bp.l2 / bp.l1;
    let k2r = R::of_int(bp.k2 as i64);
    let s = ell + R::of(4.0) * k2r * k2r / ell;
    let val = -R::of(2.0) * k2r * k2r * bp.c1 * bp.c2 * bp.l1 * bp.l1 / (bp.nu * pi * pi * s * s);
    Ok(Complex::new(val, R::zero()))
}

/// Cubic coefficient by explicit Galerkin assembly on a spectral truncation
/// `n >= 4`: builds the complexified critical eigenfunction, forms the
/// quadratic interactions, solves for the slaved second-order response, and
/// projects back onto the critical mode with the adjoint.
///
/// Verifies on the way that the eigenfunction's self-interaction vanishes
/// (so the `z^2` slave mode is zero) and that the quadratic term vanishes
/// at the origin (no constant forcing).
pub fn coeff_b_numeric(bp: &BifurcationPoint<f64>, n: usize) -> Result<Complex64> {
    if n < 4 {
        return Err(Error::Precondition(format!(
            "Galerkin assembly needs truncation n >= 4, got {n}"
        )));
    }
    if bp.nu <= 0.0 {
        return Err(Error::Singular(
            "Galerkin assembly of the cubic coefficient is singular at nu = 0".into(),
        ));
    }
    let cfg = bp.config();
    let k1_max = n;
    let k2_max = n.max(2 * bp.k2 as usize + 1);
    let mut ws = NonlinearWorkspace::new(k1_max, k2_max);

    let (xi, eta, _) = eigenvectors(bp);
    let k2 = bp.k2 as i32;
    let mut zeta = SpectralState::new(k1_max, k2_max);
    zeta.set(0, 1, k2, xi[0]);
    zeta.set(1, 1, k2, xi[1]);
    let zeta_bar = zeta.conjugate_field();

    // No constant forcing: the quadratic term vanishes at the origin.
    let zero = SpectralState::new(k1_max, k2_max);
    if ws.nonlinear_term(&cfg, &zero).sup_coeff() != 0.0 {
        return Err(Error::Singular(
            "quadratic term does not vanish at the origin".into(),
        ));
    }

    let scale = zeta.sup_coeff().powi(2);
    // Self-interaction must vanish identically: the slaved z^2 response is
    // zero for this model.
    let self_q = ws.bilinear_term(&cfg, &zeta, &zeta);
    if self_q.sup_coeff() > tolerances::SELF_INTERACTION_REL * scale {
        return Err(Error::Singular(format!(
            "eigenfunction self-interaction does not vanish: {} vs scale {}",
            self_q.sup_coeff(),
            scale
        )));
    }

    // Slaved |z|^2 response: solve L psi = -2 B(zeta, conj zeta) per mode.
    let mut rhs = ws.bilinear_term(&cfg, &zeta, &zeta_bar);
    rhs.scale(Complex64::new(2.0, 0.0));
    let drop = 1e-14 * rhs.sup_coeff().max(f64::MIN_POSITIVE);
    let mut psi = SpectralState::new(k1_max, k2_max);
    for k1 in 1..=k1_max as u32 {
        for kk2 in -(k2_max as i32)..=(k2_max as i32) {
            let r0 = rhs.get(0, k1, kk2);
            let r1 = rhs.get(1, k1, kk2);
            if r0.norm() <= drop && r1.norm() <= drop {
                continue;
            }
            let m = crate::stability::mode_matrix(&cfg, ModeIndex { k1, k2: kk2 }).m;
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det.norm() < tolerances::DET_GUARD {
                return Err(Error::Singular(format!(
                    "slaved-mode solve singular at (k1, k2) = ({k1}, {kk2})"
                )));
            }
            // M psi = -r  (2x2 Cramer).
            psi.set(0, k1, kk2, (-r0 * m[1][1] + r1 * m[0][1]) / det);
            psi.set(1, k1, kk2, (-r1 * m[0][0] + r0 * m[1][0]) / det);
        }
    }

    // Project 2 B(zeta, psi) back onto the critical mode with the adjoint.
    let mut cross = ws.bilinear_term(&cfg, &zeta, &psi);
    cross.scale(Complex64::new(2.0, 0.0));
    let area_half = bp.l1 * bp.l2 / 2.0;
    let b = area_half
        * (cross.get(0, 1, k2) * eta[0].conj() + cross.get(1, 1, k2) * eta[1].conj());
    Ok(b)
}

/// Normal-form constants of the degenerate point where the two thresholds
/// of the `k2 = 1` interval merge (`nu = nu_crit`).
///
/// Precondition: the interval must be point-like (endpoints equal to
/// relative tolerance `1e-8`).
pub fn degenerate_coeffs<R: Real>(cfg: &DomainConfig<R>) -> Result<DegenerateCoeffs<R>> {
    let region = instability_interval(cfg, 1)?;
    let (lo, hi) = region.endpoints().ok_or_else(|| {
        Error::Precondition(format!(
            "no instability interval for k2 = 1 (nu = {} > nu_crit = {})",
            cfg.nu, region.nu_crit
        ))
    })?;
    if region.status != RegionStatus::Point {
        let scale = cfg.d_t_star();
        return Err(Error::Precondition(format!(
            "thresholds must coincide to {:.1e} * {scale} for the degenerate normal \
             form; got dT1 = {lo}, dT2 = {hi}",
            tolerances::DEGENERATE_POINT_REL,
        )));
    }
    let bp = bifurcation_point(cfg, Threshold::Right, 1)?;
    let pi = R::PI();
    let a0 = pi / cfg.l2;
    let a1 = pi * pi / (cfg.l2 * cfg.l2 * bp.c3);
    let a2 = R::one() / (pi * cfg.l1 * cfg.l2).sqrt();
    let a3 = pi / (cfg.l2 * cfg.l2);
    Ok(DegenerateCoeffs {
        a0,
        a1,
        a2,
        a3,
        d_t_c: bp.d_t_c,
        c3: bp.c3,
    })
}

/// First-order limit cycle bifurcating at `bp` for offset `mu1 = dT - dT_c`.
///
/// Preconditions: `nu > 0` (so the cubic coefficient exists) and
/// `mu1 * Re(a) > 0` (offset on the supercritical side, i.e. into the
/// instability interval).
pub fn predicted_cycle<R: Real>(bp: &BifurcationPoint<R>, mu1: R) -> Result<PredictedCycle<R>> {
    let a = coeff_a(bp);
    let b = coeff_b(bp)?;
    let growth = mu1 * a.re;
    if !(growth > R::zero()) {
        return Err(Error::Precondition(format!(
            "mu1 = {mu1} lies on the damped side of the threshold (mu1 * Re a = {growth}); \
             no small cycle bifurcates there"
        )));
    }
    if !(b.re < R::zero()) {
        return Err(Error::Singular(
            "cubic coefficient is not damping; first-order cycle undefined".into(),
        ));
    }
    let radius = (-growth / b.re).sqrt();
    let pi = R::PI();
    let k2r = R::of_int(bp.k2 as i64);
    let omega_c = bp.omega + mu1 * a.im + b.im * radius * radius;
    let omega_lab = omega_c + R::of(2.0) * pi * k2r * bp.t_minus / bp.l2;
    let two_pi = R::of(2.0) * pi;
    Ok(PredictedCycle {
        radius,
        amplitude_sup_u1: R::of(2.0) * bp.c2 * radius,
        frequency_comoving: omega_c,
        frequency_lab: omega_lab,
        period_comoving: two_pi / omega_c.abs(),
        period_lab: two_pi / omega_lab.abs(),
        speed: -omega_c * bp.l2 / (two_pi * k2r),
    })
}
