//! Central registry of numerical tolerances.
//!
//! Every tolerance used by the library or its test-suite lives here with a
//! one-line rationale, so thresholds are auditable and consistent between
//! runtime guards and tests.

/// Closed-form eigenvalues vs. a direct 2x2 eigensolve (relative).
/// Both routes are exact algebra; the gap is pure rounding.
pub const EIG_REL: f64 = 1e-12;

/// `analyze(synthesize(state))` round trip (relative).  The transforms are
/// exact on resolvable modes up to FFT rounding.
pub const ROUND_TRIP_REL: f64 = 1e-12;

/// Spectral linear operator vs. a dense finite-difference Jacobian of the
/// full right-hand side at the origin (absolute, per coefficient).  The
/// right-hand side is exactly quadratic, so a centered two-point difference
/// cancels the quadratic term identically; the tolerance absorbs rounding.
pub const JACOBIAN_ABS: f64 = 1e-7;

/// Agreement between the two closed forms of the first Hopf coefficient
/// (relative).  They are algebraically identical.
pub const COEFF_A_DUAL_REL: f64 = 1e-12;

/// Closed-form cubic Hopf coefficient vs. spectral Galerkin assembly
/// (relative).  The assembly is exact on the handful of active modes; the
/// budget covers transform rounding across two quadratic evaluations.
pub const COEFF_B_CROSS_REL: f64 = 1e-8;

/// Quadratic-interaction identities (Poincare ratios, opposite-sign cross
/// integrals): violation beyond this is a bug, not rounding (relative).
pub const IDENTITY_REL: f64 = 1e-10;

/// Classification margins closer to zero than this (relative to the scale
/// of the growth indicator) are reported as `Unknown` rather than resolved.
pub const TIE_REL: f64 = 1e-10;

/// Offset, relative to the natural threshold scale `4*L1/pi^2`, used to
/// probe the growth indicator just outside an instability interval when
/// classifying; resolves point-contact cases without resolving ties.
pub const CLASSIFY_PROBE_REL: f64 = 1e-6;

/// Two interval endpoints closer than this (relative) count as a degenerate
/// (point) instability region.
pub const DEGENERATE_POINT_REL: f64 = 1e-8;

/// Relative convergence tolerance for safeguarded-Newton polynomial roots.
pub const ROOT_REL: f64 = 1e-12;

/// Determinant guard for the per-mode 2x2 implicit solve in the time
/// stepper; smaller determinants abort instead of amplifying noise.
pub const DET_GUARD: f64 = 1e-14;

/// Sup-norm of spectral coefficients beyond which a simulation is declared
/// blown up and aborted with a diagnostic.
pub const BLOW_UP_SUP: f64 = 1e6;

/// Amplitude below which a parameter-sweep point is classified as a decayed
/// steady state.
pub const AMP_FLOOR: f64 = 1e-4;

/// If a warm-start state entering a sweep point has sup-norm below this, a
/// fresh eigenfunction seed of this amplitude is injected so the point is
/// genuinely probed for instability.
pub const RESEED_NORM: f64 = 1e-3;

/// Residual budget for the exact relation `c3^2 = c1*(2*c2 - c1)` that the
/// bifurcation-point constants must satisfy (relative).
pub const C_RELATION_REL: f64 = 1e-10;

/// Support check in the Galerkin assembly of the cubic coefficient: the
/// quadratic self-interaction of the critical eigenfunction must vanish on
/// all modes (relative to the eigenfunction scale).
pub const SELF_INTERACTION_REL: f64 = 1e-12;
