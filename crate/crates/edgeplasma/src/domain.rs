//! Domain geometry, physical parameters, and mode bookkeeping.
//!
//! The model lives on the channel `[0, L1] x (R / L2 Z)`: Dirichlet walls in
//! `x1`, periodic in `x2`.  Two scalar fields `u1, u2` (the two fluid
//! components) are driven by the imposed boundary values `T+` (at `x1 = 0`)
//! and `T-` (at `x1 = L1`); only their difference `dT = T+ - T-` enters the
//! linearized dynamics, while `T-` fixes the speed of the comoving frame in
//! which the equations are posed.

use crate::error::{Error, Result};
use crate::scalar::Real;
use serde::{Deserialize, Serialize};

/// Channel geometry and physical parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "R: Serialize",
    deserialize = "R: serde::de::DeserializeOwned"
))]
pub struct DomainConfig<R: Real> {
    /// Channel width (Dirichlet direction), `L1 > 0`.
    pub l1: R,
    /// Channel period (periodic direction), `L2 > 0`.
    pub l2: R,
    /// Diffusivity `nu >= 0`.
    pub nu: R,
    /// Imposed value at `x1 = 0`.
    pub t_plus: R,
    /// Imposed value at `x1 = L1`.
    pub t_minus: R,
}

impl<R: Real> DomainConfig<R> {
    /// Validated constructor.
    pub fn new(l1: R, l2: R, nu: R, t_plus: R, t_minus: R) -> Result<Self> {
        let cfg = Self {
            l1,
            l2,
            nu,
            t_plus,
            t_minus,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Check the parameter domain: positive finite geometry, `nu >= 0`,
    /// finite imposed values.
    pub fn validate(&self) -> Result<()> {
        let fin = |x: R| x.is_finite();
        if !(self.l1 > R::zero() && fin(self.l1)) {
            return Err(Error::Domain(format!("L1 must be positive, got {}", self.l1)));
        }
        if !(self.l2 > R::zero() && fin(self.l2)) {
            return Err(Error::Domain(format!("L2 must be positive, got {}", self.l2)));
        }
        if !(self.nu >= R::zero() && fin(self.nu)) {
            return Err(Error::Domain(format!(
                "nu must be non-negative, got {}",
                self.nu
            )));
        }
        if !(fin(self.t_plus) && fin(self.t_minus)) {
            return Err(Error::Domain("T+ and T- must be finite".into()));
        }
        Ok(())
    }

    /// Aspect ratio `ell = L2 / L1`.
    #[inline]
    pub fn ell(&self) -> R {
        self.l2 / self.l1
    }

    /// Imposed difference `dT = T+ - T-`.
    #[inline]
    pub fn delta_t(&self) -> R {
        self.t_plus - self.t_minus
    }

    /// Same geometry with `T+` adjusted so that `dT` takes the given value
    /// (`T-`, and hence the comoving-frame speed, unchanged).
    #[inline]
    pub fn with_delta_t(&self, d_t: R) -> Self {
        Self {
            t_plus: self.t_minus + d_t,
            ..*self
        }
    }

    /// Upper bound `dT* = 4 L1 / pi^2` below which every instability
    /// interval is confined, for any wavenumber and any diffusivity.
    #[inline]
    pub fn d_t_star(&self) -> R {
        R::of(4.0) * self.l1 / (R::PI() * R::PI())
    }
}

/// Index of one basis mode: `k1 >= 1` half-waves across the channel,
/// signed integer wavenumber `k2` along it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ModeIndex {
    pub k1: u32,
    pub k2: i32,
}

impl ModeIndex {
    /// Validated constructor (`k1 >= 1`).
    pub fn new(k1: u32, k2: i32) -> Result<Self> {
        if k1 == 0 {
            return Err(Error::Domain(
                "mode index k1 must be >= 1 (Dirichlet sine basis)".into(),
            ));
        }
        Ok(Self { k1, k2 })
    }

    /// Anisotropic mode weight `S_k = ell k1^2 + 4 k2^2 / ell`.
    #[inline]
    pub fn s<R: Real>(&self, ell: R) -> R {
        let k1 = R::of_int(self.k1 as i64);
        let k2 = R::of_int(self.k2 as i64);
        ell * k1 * k1 + R::of(4.0) * k2 * k2 / ell
    }

    /// Eigenvalue of `-Laplacian` on this mode:
    /// `omega_k = pi^2 (k1^2 / L1^2 + 4 k2^2 / L2^2) = pi^2 S_k / (L1 L2)`.
    #[inline]
    pub fn laplacian_eigenvalue<R: Real>(&self, cfg: &DomainConfig<R>) -> R {
        let pi = R::PI();
        pi * pi * self.s(cfg.ell()) / (cfg.l1 * cfg.l2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> DomainConfig<f64> {
        DomainConfig::new(2.0, 2.0, 9.0e-4, 0.26, 0.1).unwrap()
    }

    #[test]
    fn accessors() {
        let c = cfg();
        assert!((c.ell() - 1.0).abs() < 1e-15);
        assert!((c.delta_t() - 0.16).abs() < 1e-15);
        let c2 = c.with_delta_t(0.05);
        assert!((c2.delta_t() - 0.05).abs() < 1e-15);
        assert_eq!(c2.t_minus, c.t_minus);
        assert!((c.d_t_star() - 8.0 / (std::f64::consts::PI.powi(2))).abs() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_parameters() {
        assert!(DomainConfig::<f64>::new(0.0, 1.0, 0.0, 0.0, 0.0).is_err());
        assert!(DomainConfig::<f64>::new(1.0, -1.0, 0.0, 0.0, 0.0).is_err());
        assert!(DomainConfig::<f64>::new(1.0, 1.0, -1e-9, 0.0, 0.0).is_err());
        assert!(DomainConfig::<f64>::new(1.0, 1.0, 0.0, f64::NAN, 0.0).is_err());
        assert!(ModeIndex::new(0, 3).is_err());
    }

    #[test]
    fn mode_weights() {
        let c = cfg();
        let k = ModeIndex::new(1, 1).unwrap();
        assert!((k.s(c.ell()) - 5.0).abs() < 1e-15);
        // omega_k = pi^2 (1/4 + 4/4) at L1 = L2 = 2.
        let expect = std::f64::consts::PI.powi(2) * 1.25;
        assert!((k.laplacian_eigenvalue(&c) - expect).abs() < 1e-12);
        // S_k and omega_k agree through the two routes.
        let k = ModeIndex::new(3, -2).unwrap();
        let direct = std::f64::consts::PI.powi(2) * (9.0 / 4.0 + 16.0 / 4.0);
        assert!((k.laplacian_eigenvalue(&c) - direct).abs() < 1e-12);
    }
}
