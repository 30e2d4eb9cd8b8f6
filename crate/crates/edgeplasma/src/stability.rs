//! Closed-form linear stability of the sheared two-fluid channel model.
//!
//! In the comoving frame the linearization about the zero state decouples
//! over the mixed sine/Fourier basis; each mode `k = (k1, k2)` evolves by a
//! 2x2 complex matrix `M_k` built from three constants:
//!
//! * `C1 = 2 pi i k2 / L2` — shear advection,
//! * `C2 = (2 i / pi) k2 / S_k` — electrostatic coupling through the
//!   channel Poisson solve, with `S_k = ell k1^2 + 4 k2^2 / ell`,
//! * `C3 = nu omega_k` — diffusive damping.
//!
//! The eigenvalues admit a closed form with a *real* discriminant, so the
//! growth rate of every mode reduces to a scalar quadratic-over-linear
//! indicator in the imposed difference `dT`.  All routines here are pure
//! formula evaluation, generic over the scalar type.

use crate::domain::{DomainConfig, ModeIndex};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::tolerances;
use num_complex::Complex;

/// Spectral data of a single mode: the 2x2 block, both eigenvalues, and the
/// constants they are built from.
#[derive(Clone, Debug)]
pub struct ModeSpectrum<R: Real> {
    pub k: ModeIndex,
    /// Row-major 2x2 complex block `M_k` acting on `(u1_k, u2_k)`.
    pub m: [[Complex<R>; 2]; 2],
    /// Eigenvalue branch with the principal square root added; for real
    /// positive discriminant this is the destabilizing branch.
    pub lambda_plus: Complex<R>,
    pub lambda_minus: Complex<R>,
    /// Discriminant of the eigenvalue pair; real for this model (stored with
    /// an explicit zero imaginary part as a structural check).
    pub d: Complex<R>,
    /// Shear constant `2 pi i k2 / L2` times nothing (pure imaginary).
    pub c1: Complex<R>,
    /// Coupling constant `(2 i / pi) k2 / S_k` (pure imaginary).
    pub c2: Complex<R>,
    /// Damping `nu * omega_k` (real, non-negative).
    pub c3: R,
}

/// Existence status of an instability interval for one wavenumber.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RegionStatus {
    /// No unstable `dT` exists (`nu > nu_crit`).
    Absent,
    /// The interval degenerates to a single point (`nu = nu_crit`).
    Point,
    /// A genuine open interval of unstable `dT`.
    Interval,
}

/// Outcome of comparing one wavenumber's instability interval against all
/// competing wavenumbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    /// At both of its own thresholds every competing mode is strictly
    /// damped, and every competing instability interval is strictly
    /// contained in this one: the mode is the first to destabilize for
    /// every path of `dT`.
    Primary,
    /// Strictly first at its own thresholds, but some competing interval
    /// extends outside this one.
    LocallyPrimary,
    /// Some competing mode is undamped at (or arbitrarily near) one of this
    /// mode's thresholds.
    NotPrimary,
    /// A comparison landed within the tie tolerance and cannot be resolved
    /// in floating point.
    Unknown,
}

/// Instability interval of one integer wavenumber `k2`, i.e. the set of
/// `dT` for which the `(1, k2)` mode grows.
#[derive(Clone, Copy, Debug)]
pub struct InstabilityRegion<R: Real> {
    pub k2: u32,
    /// Left threshold (smaller root of the growth indicator), when any
    /// unstable `dT` exists.
    pub d_t_lower: Option<R>,
    /// Right threshold.
    pub d_t_upper: Option<R>,
    /// Critical diffusivity above which this region disappears.
    pub nu_crit: R,
    /// Location of the maximum of the growth indicator (vertex of the
    /// parabola); useful for ordering regions across `k2`.
    pub d_t_peak: R,
    pub status: RegionStatus,
    /// Set by [`classify_primary`]; `None` when not evaluated.
    pub classification: Option<Classification>,
}

impl<R: Real> InstabilityRegion<R> {
    /// Both endpoints when the region is non-empty.
    pub fn endpoints(&self) -> Option<(R, R)> {
        match (self.d_t_lower, self.d_t_upper) {
            (Some(a), Some(b)) => Some((a, b)),
            _ => None,
        }
    }
}

/// One row of a parameter sweep of the mode spectrum.
#[derive(Clone, Copy, Debug)]
pub struct SweepRow<R: Real> {
    pub d_t: R,
    pub k: ModeIndex,
    pub lambda_plus: Complex<R>,
    pub lambda_minus: Complex<R>,
}

/// One row of the continuous-wavenumber dispersion relation of the
/// uniform-shear strip problem.
#[derive(Clone, Copy, Debug)]
pub struct StripRow<R: Real> {
    /// Continuous along-channel wavenumber (cycles per unit length); the
    /// mode evaluated is `(1, L2 * w)` with `L2 * w` real.
    pub w: R,
    pub lambda_plus: Complex<R>,
}

/// Per-wavenumber certificate data produced by [`classify_primary_report`].
#[derive(Clone, Copy, Debug)]
pub struct MarginRow<R: Real> {
    pub k2: u32,
    /// Growth indicator of this wavenumber at the reference region's lower
    /// and upper thresholds (negative = damped = good for primality).
    pub d_at_lower: R,
    pub d_at_upper: R,
    /// Indicator just outside the reference region (catches intervals that
    /// touch a threshold from outside).
    pub probe_below: R,
    pub probe_above: R,
    /// This wavenumber's own instability interval, if it exists.
    pub region: Option<(R, R)>,
    /// Whether that interval is strictly contained in the reference one.
    pub contained: Option<bool>,
}

/// Full output of the primality classification: the classified region plus
/// the per-wavenumber margins that certify the verdict.
#[derive(Clone, Debug)]
pub struct ClassificationReport<R: Real> {
    pub region: InstabilityRegion<R>,
    /// True when the aspect ratio satisfies `ell <= 2 sqrt(2)`, in which
    /// case containment holds for every competitor by a closed-form
    /// comparison of the indicators.
    pub fast_path_aspect: bool,
    /// Largest competitor wavenumber whose margins were checked; beyond it
    /// the discriminant is negative at every probed `dT`, so no competitor
    /// can grow there.
    pub k2_cutoff: u32,
    /// Certificate rows (capped; see `worst_margin`).
    pub margins: Vec<MarginRow<R>>,
    /// Largest endpoint margin over all checked competitors and the
    /// wavenumber attaining it (positive would mean "not primary").
    pub worst_margin: (u32, R),
}

struct ModeConstants<R: Real> {
    c1: Complex<R>,
    c2: Complex<R>,
    c3: R,
}

fn constants_real_k<R: Real>(cfg: &DomainConfig<R>, k1: R, k2: R) -> ModeConstants<R> {
    let pi = R::PI();
    let ell = cfg.ell();
    let s = ell * k1 * k1 + R::of(4.0) * k2 * k2 / ell;
    let om = pi * pi * s / (cfg.l1 * cfg.l2);
    ModeConstants {
        c1: Complex::new(R::zero(), R::of(2.0) * pi * k2 / cfg.l2),
        c2: Complex::new(R::zero(), R::of(2.0) / pi * k2 / s),
        c3: cfg.nu * om,
    }
}

/// Closed-form eigenvalue pair for a (possibly non-integer) wavenumber.
/// Returns `(lambda_plus, lambda_minus, discriminant)`.
fn rates_real_k<R: Real>(cfg: &DomainConfig<R>, k1: R, k2: R) -> (Complex<R>, Complex<R>, R) {
    let pi = R::PI();
    let d_t = cfg.delta_t();
    let c = constants_real_k(cfg, k1, k2);
    let ell = cfg.ell();
    let s = ell * k1 * k1 + R::of(4.0) * k2 * k2 / ell;
    // Discriminant: D = 4 k2^2 dT / (L2 S) - pi^2 k2^2 dT^2 / L2^2  (real).
    let disc = R::of(4.0) * k2 * k2 * d_t / (cfg.l2 * s) - pi * pi * k2 * k2 * d_t * d_t / (cfg.l2 * cfg.l2);
    // Midpoint: mu = i pi k2 dT / L2 - C3.
    let mu = Complex::new(-c.c3, pi * k2 * d_t / cfg.l2);
    let sq = if disc >= R::zero() {
        Complex::new(disc.sqrt(), R::zero())
    } else {
        Complex::new(R::zero(), (-disc).sqrt())
    };
    (mu + sq, mu - sq, disc)
}

/// Assemble the 2x2 block and closed-form eigenvalues of one mode.
pub fn mode_matrix<R: Real>(cfg: &DomainConfig<R>, k: ModeIndex) -> ModeSpectrum<R> {
    let d_t = cfg.delta_t();
    let k1r = R::of_int(k.k1 as i64);
    let k2r = R::of_int(k.k2 as i64);
    let c = constants_real_k(cfg, k1r, k2r);
    let c3c = Complex::new(c.c3, R::zero());
    let m = [
        [c.c1 * d_t - c.c2 - c3c, -c.c2],
        [c.c2, c.c2 - c3c],
    ];
    let (lp, lm, disc) = rates_real_k(cfg, k1r, k2r);
    ModeSpectrum {
        k,
        m,
        lambda_plus: lp,
        lambda_minus: lm,
        d: Complex::new(disc, R::zero()),
        c1: c.c1,
        c2: c.c2,
        c3: c.c3,
    }
}

/// Quadratic coefficients of the growth indicator
/// `d(dT, kappa2) = A dT - B dT^2 - C` for the `(1, sqrt(kappa2))` mode.
fn indicator_coefficients<R: Real>(cfg: &DomainConfig<R>, kappa2: R) -> (R, R, R) {
    let pi = R::PI();
    let ell = cfg.ell();
    let l1 = cfg.l1;
    let ell2 = ell * ell;
    let w = R::of(4.0) * kappa2 + ell2;
    let a = R::of(4.0) * l1 * l1 * l1 / w;
    let b = l1 * l1 * pi * pi / ell2;
    let c = cfg.nu * cfg.nu * pi.powi(4) * w * w / (kappa2 * ell2 * ell2);
    (a, b, c)
}

/// Scalar growth indicator whose sign equals the sign of the leading growth
/// rate of the `(1, sqrt(kappa2))` mode: positive iff the mode grows.
///
/// `kappa2` is the squared along-channel wavenumber and may be any positive
/// real (integer modes use `kappa2 = k2^2`).
pub fn growth_indicator<R: Real>(cfg: &DomainConfig<R>, d_t: R, kappa2: R) -> Result<R> {
    if !(kappa2 > R::zero()) {
        return Err(Error::Domain(format!(
            "growth indicator needs kappa2 > 0, got {kappa2}"
        )));
    }
    let (a, b, c) = indicator_coefficients(cfg, kappa2);
    Ok(a * d_t - b * d_t * d_t - c)
}

/// Magnitude scale of the growth indicator at a given point: the sum of the
/// absolute values of its three terms.  Used to turn absolute indicator
/// values into relative margins.
pub fn growth_indicator_scale<R: Real>(cfg: &DomainConfig<R>, d_t: R, kappa2: R) -> R {
    let (a, b, c) = indicator_coefficients(cfg, kappa2);
    a * d_t.abs() + b * d_t * d_t + c
}

/// Critical diffusivity above which the `(1, sqrt(kappa2))` mode is damped
/// for every `dT`:
/// `nu_crit = 2 L1^2 sqrt(kappa2) ell^3 / (pi^3 (4 kappa2 + ell^2)^2)`.
pub fn nu_crit<R: Real>(cfg: &DomainConfig<R>, kappa2: R) -> Result<R> {
    if !(kappa2 > R::zero()) {
        return Err(Error::Domain(format!(
            "nu_crit needs kappa2 > 0, got {kappa2}"
        )));
    }
    let pi = R::PI();
    let ell = cfg.ell();
    let w = R::of(4.0) * kappa2 + ell * ell;
    Ok(R::of(2.0) * cfg.l1 * cfg.l1 * kappa2.sqrt() * ell.powi(3) / (pi.powi(3) * w * w))
}

/// Location of the maximum of `d(., kappa2)` over `dT`:
/// `dT_peak = 2 L1 ell^2 / ((4 kappa2 + ell^2) pi^2)`; strictly decreasing
/// in `kappa2`.
pub fn d_t_peak<R: Real>(cfg: &DomainConfig<R>, kappa2: R) -> R {
    let pi = R::PI();
    let ell = cfg.ell();
    R::of(2.0) * cfg.l1 * ell * ell / ((R::of(4.0) * kappa2 + ell * ell) * pi * pi)
}

/// Roots of the growth indicator for a real squared wavenumber, if any.
/// Returns `(lower, upper)` clamped to the degenerate point when the
/// discriminant underflows.
fn indicator_roots<R: Real>(cfg: &DomainConfig<R>, kappa2: R) -> Option<(R, R)> {
    let (a, b, c) = indicator_coefficients(cfg, kappa2);
    let disc = a * a - R::of(4.0) * b * c;
    if disc < R::zero() {
        return None;
    }
    // Stable quadratic: q = (A + sqrt(disc)) / 2, roots C/q and q/B.
    let q = (a + disc.sqrt()) / R::of(2.0);
    Some((c / q, q / b))
}

/// Instability interval of the integer wavenumber `k2 >= 1`: the maximal
/// interval of `dT` on which the `(1, k2)` mode grows.
pub fn instability_interval<R: Real>(cfg: &DomainConfig<R>, k2: u32) -> Result<InstabilityRegion<R>> {
    if k2 == 0 {
        return Err(Error::Domain("instability interval needs k2 >= 1".into()));
    }
    let kappa2 = R::of_int((k2 as i64) * (k2 as i64));
    let nu_c = nu_crit(cfg, kappa2)?;
    let peak = d_t_peak(cfg, kappa2);
    let rel_above = (cfg.nu - nu_c) / nu_c;
    if rel_above > R::of(1e-12) {
        return Ok(InstabilityRegion {
            k2,
            d_t_lower: None,
            d_t_upper: None,
            nu_crit: nu_c,
            d_t_peak: peak,
            status: RegionStatus::Absent,
            classification: None,
        });
    }
    // Numerically at the critical diffusivity: the interval is a point at
    // the indicator's vertex.  (The quadratic's roots cannot resolve widths
    // below sqrt(machine epsilon) anyway.)
    if rel_above.abs() <= R::of(1e-12) {
        return Ok(InstabilityRegion {
            k2,
            d_t_lower: Some(peak),
            d_t_upper: Some(peak),
            nu_crit: nu_c,
            d_t_peak: peak,
            status: RegionStatus::Point,
            classification: None,
        });
    }
    let (lo, hi) = indicator_roots(cfg, kappa2).unwrap_or((peak, peak));
    let scale = cfg.d_t_star();
    let status = if hi - lo <= R::of(tolerances::DEGENERATE_POINT_REL) * scale {
        RegionStatus::Point
    } else {
        RegionStatus::Interval
    };
    let (lo, hi) = if status == RegionStatus::Point {
        (peak, peak)
    } else {
        (lo, hi)
    };
    Ok(InstabilityRegion {
        k2,
        d_t_lower: Some(lo),
        d_t_upper: Some(hi),
        nu_crit: nu_c,
        d_t_peak: peak,
        status,
        classification: None,
    })
}

/// Classify the `k2 = 1` instability interval against every competing
/// integer wavenumber, returning the region with its classification set.
///
/// Fails with a precondition error when no `k2 = 1` region exists.
pub fn classify_primary<R: Real>(cfg: &DomainConfig<R>) -> Result<InstabilityRegion<R>> {
    classify_primary_report(cfg).map(|r| r.region)
}

/// Hard cap on the competitor enumeration (never reached for physical
/// parameters; the cutoff grows like `1/sqrt(dT_lower)`).
const CLASSIFY_K2_CAP: u32 = 1_000_000;

/// How many certificate rows are retained verbatim in the report.
const REPORT_ROW_CAP: u32 = 64;

/// Like [`classify_primary`] but returning the full certificate: endpoint
/// margins and probes for every competitor wavenumber up to the cutoff
/// beyond which competitors cannot grow at the probed `dT` values.
pub fn classify_primary_report<R: Real>(cfg: &DomainConfig<R>) -> Result<ClassificationReport<R>> {
    let mut region = instability_interval(cfg, 1)?;
    let (j_lo, j_hi) = region.endpoints().ok_or_else(|| {
        Error::Precondition(format!(
            "no instability region for k2 = 1: nu = {} exceeds nu_crit = {}",
            cfg.nu, region.nu_crit
        ))
    })?;

    let scale_dt = cfg.d_t_star();
    let eps = R::of(tolerances::CLASSIFY_PROBE_REL) * scale_dt;
    let tie_rel = R::of(tolerances::TIE_REL);
    let ell = cfg.ell();
    let fast_path_aspect = ell <= R::of(2.0) * R::of(2.0).sqrt() * (R::one() + R::of(1e-14));

    // Cutoff: beyond kappa2* = (ell^2/4)(4 L1/(pi^2 dT) - 1) the discriminant
    // is negative at dT, so no mode with larger kappa2 can grow there.
    // Evaluate at the smallest positive dT we probe.
    let probe_lo = j_lo - eps;
    let dt_min_pos = if probe_lo > R::zero() { probe_lo } else { j_lo };
    let pi = R::PI();
    let kappa_star = (ell * ell / R::of(4.0))
        * (R::of(4.0) * cfg.l1 / (pi * pi * dt_min_pos) - R::one());
    let k2_cutoff = if kappa_star <= R::zero() {
        2
    } else {
        let raw = kappa_star.sqrt().ceil();
        let raw = num_traits::ToPrimitive::to_u64(&raw).unwrap_or(u64::from(CLASSIFY_K2_CAP));
        (raw.min(u64::from(CLASSIFY_K2_CAP)) as u32).saturating_add(2).max(2)
    };

    let kappa_peak_of_nu_crit = ell * ell / R::of(12.0);
    let mut margins = Vec::new();
    let mut any_fail = false;
    let mut any_tie = false;
    let mut all_contained = true;
    let mut worst: (u32, R) = (0, R::neg_infinity());

    let mut k2 = 2u32;
    loop {
        let kappa2 = R::of_int((k2 as i64) * (k2 as i64));
        let nu_c = nu_crit(cfg, kappa2)?;
        let may_have_region = cfg.nu <= nu_c * (R::one() + R::of(1e-12));
        if k2 > k2_cutoff && !may_have_region && kappa2 > kappa_peak_of_nu_crit {
            break;
        }
        if k2 > CLASSIFY_K2_CAP {
            // Give up honestly rather than silently truncating.
            any_tie = true;
            break;
        }

        let d_at = |d_t: R| -> R {
            let (a, b, c) = indicator_coefficients(cfg, kappa2);
            a * d_t - b * d_t * d_t - c
        };
        let tie_at = |d_t: R| -> R { tie_rel * growth_indicator_scale(cfg, d_t, kappa2) };

        let d_lo = d_at(j_lo);
        let d_hi = d_at(j_hi);
        let p_lo = d_at(j_lo - eps);
        let p_hi = d_at(j_hi + eps);

        for (v, t) in [
            (d_lo, tie_at(j_lo)),
            (d_hi, tie_at(j_hi)),
            (p_lo, tie_at(j_lo - eps)),
            (p_hi, tie_at(j_hi + eps)),
        ] {
            if v > t {
                any_fail = true;
            } else if v.abs() <= t {
                any_tie = true;
            }
        }
        let endpoint_worst = if d_lo > d_hi { d_lo } else { d_hi };
        if endpoint_worst > worst.1 {
            worst = (k2, endpoint_worst);
        }

        let own = if may_have_region {
            indicator_roots(cfg, kappa2)
        } else {
            None
        };
        let contained = own.map(|(lo, hi)| {
            let strict = tie_rel * scale_dt;
            lo > j_lo + strict && hi < j_hi - strict
        });
        if contained == Some(false) {
            all_contained = false;
        }

        if k2 <= REPORT_ROW_CAP {
            margins.push(MarginRow {
                k2,
                d_at_lower: d_lo,
                d_at_upper: d_hi,
                probe_below: p_lo,
                probe_above: p_hi,
                region: own,
                contained,
            });
        }
        k2 += 1;
    }

    let classification = if fast_path_aspect {
        Classification::Primary
    } else if any_fail {
        Classification::NotPrimary
    } else if any_tie {
        Classification::Unknown
    } else if all_contained {
        Classification::Primary
    } else {
        Classification::LocallyPrimary
    };
    region.classification = Some(classification);

    Ok(ClassificationReport {
        region,
        fast_path_aspect,
        k2_cutoff,
        margins,
        worst_margin: worst,
    })
}

/// Aspect ratio at which the `k2 = 1` point-region (at `nu = nu_crit(1)`)
/// collides with the right threshold of the `sqrt(kappa2)` region: the
/// positive root in `y = ell^2` of
/// `y^3 - 4 kappa2 y^2 - 80 kappa2 y - 64 kappa2 (2 + kappa2) = 0`.
///
/// Defined for `kappa2 > 1`.
pub fn ell_for_degenerate_overlap<R: Real>(kappa2: R) -> Result<R> {
    if !(kappa2 > R::one()) {
        return Err(Error::Domain(format!(
            "degenerate-overlap aspect ratio needs kappa2 > 1, got {kappa2}"
        )));
    }
    let p = |y: R| {
        ((y - R::of(4.0) * kappa2) * y - R::of(80.0) * kappa2) * y
            - R::of(64.0) * kappa2 * (R::of(2.0) + kappa2)
    };
    let dp = |y: R| (R::of(3.0) * y - R::of(8.0) * kappa2) * y - R::of(80.0) * kappa2;
    let y = newton_bracketed(p, dp, R::zero(), None)?;
    Ok(y.sqrt())
}

/// Sign-definite polynomial whose unique positive root (in `ell`) separates
/// aspect ratios by whether the critical diffusivities of the `k2 = 1` and
/// `k2 = 2` modes can coincide: `16 (y + 4)^2 - (y - 8)(y + 8)(y + 16)`
/// with `y = ell^2`.  Positive at `ell = 1`, negative at `ell = 10`.
pub fn ell_star_polynomial<R: Real>(ell: R) -> R {
    let y = ell * ell;
    let s = y + R::of(4.0);
    R::of(16.0) * s * s - (y - R::of(8.0)) * (y + R::of(8.0)) * (y + R::of(16.0))
}

/// The unique positive root of [`ell_star_polynomial`]; equivalently the
/// positive root in `y = ell^2` of `y^3 - 192 y - 1280`.
pub fn ell_star<R: Real>() -> R {
    let p = |y: R| (y * y - R::of(192.0)) * y - R::of(1280.0);
    let dp = |y: R| R::of(3.0) * y * y - R::of(192.0);
    // p(8) < 0 and p grows; bracketed Newton cannot fail here.
    let y = newton_bracketed(p, dp, R::of(8.0), None)
        .expect("fixed cubic has a bracketable positive root");
    y.sqrt()
}

/// Safeguarded Newton on an increasing-through-root scalar function:
/// expands an upper bracket from `lo` until the sign flips, then iterates
/// Newton clipped to the bracket, bisecting when the step escapes.
fn newton_bracketed<R: Real>(
    p: impl Fn(R) -> R,
    dp: impl Fn(R) -> R,
    lo: R,
    hi: Option<R>,
) -> Result<R> {
    let mut lo = lo;
    if !(p(lo) <= R::zero()) {
        return Err(Error::RootFinding("lower bracket not below root".into()));
    }
    let mut hi = match hi {
        Some(h) => h,
        None => {
            let mut h = lo.max(R::one()) * R::of(2.0);
            let mut tries = 0;
            while p(h) < R::zero() {
                h = h * R::of(2.0);
                tries += 1;
                if tries > 2000 {
                    return Err(Error::RootFinding("failed to bracket root".into()));
                }
            }
            h
        }
    };
    let mut y = (lo + hi) / R::of(2.0);
    let rel = R::of(crate::tolerances::ROOT_REL);
    for _ in 0..200 {
        let f = p(y);
        if f > R::zero() {
            hi = y;
        } else {
            lo = y;
        }
        let g = dp(y);
        let newton = if g != R::zero() { y - f / g } else { y };
        let next = if newton > lo && newton < hi {
            newton
        } else {
            (lo + hi) / R::of(2.0)
        };
        let done = (next - y).abs() <= rel * y.abs().max(R::one()) || f == R::zero();
        y = next;
        if done {
            return Ok(y);
        }
    }
    Err(Error::RootFinding("Newton iteration did not converge".into()))
}

/// Tabulate closed-form eigenvalues over a grid of `dT` values and integer
/// modes `k1 = 1..=k1_max`, `k2 = -k2_max..=k2_max`.
pub fn spectrum_sweep<R: Real>(
    cfg: &DomainConfig<R>,
    d_ts: &[R],
    k1_max: u32,
    k2_max: u32,
) -> Result<Vec<SweepRow<R>>> {
    if k1_max == 0 {
        return Err(Error::Domain("spectrum sweep needs k1_max >= 1".into()));
    }
    let mut rows = Vec::with_capacity(d_ts.len() * k1_max as usize * (2 * k2_max as usize + 1));
    for &d_t in d_ts {
        let c = cfg.with_delta_t(d_t);
        for k1 in 1..=k1_max {
            for k2 in -(k2_max as i32)..=(k2_max as i32) {
                let spec = mode_matrix(&c, ModeIndex { k1, k2 });
                rows.push(SweepRow {
                    d_t,
                    k: spec.k,
                    lambda_plus: spec.lambda_plus,
                    lambda_minus: spec.lambda_minus,
                });
            }
        }
    }
    Ok(rows)
}

/// Dispersion relation of the `k1 = 1` branch over a continuous
/// along-channel wavenumber `w` (cycles per unit length): evaluates the
/// closed form at the real mode index `k2 = L2 * w`.
pub fn strip_dispersion<R: Real>(
    cfg: &DomainConfig<R>,
    d_t: R,
    ws: &[R],
) -> Vec<StripRow<R>> {
    let c = cfg.with_delta_t(d_t);
    ws.iter()
        .map(|&w| {
            let (lp, _, _) = rates_real_k(&c, R::one(), cfg.l2 * w);
            StripRow { w, lambda_plus: lp }
        })
        .collect()
}
