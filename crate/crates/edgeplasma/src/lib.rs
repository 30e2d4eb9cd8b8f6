//! Spectral-Galerkin simulator and stability/bifurcation toolkit for a
//! two-field drift model of a plasma edge channel.
//!
//! The model couples two scalar fields `u1, u2` on the periodic channel
//! `[0, L1] x (R / L2 Z)` through the electric field of their combined
//! charge (`-lap V = u1 + u2`, `E = -grad V`), a cross-field drift of
//! strength `dT = T+ - T-`, an exchange term, and viscosity `nu`:
//!
//! ```text
//! dt u1 = dT d2 u1 + E2 / L1 - Eperp . grad u1 + nu lap u1
//! dt u2 =          - E2 / L1 - Eperp . grad u2 + nu lap u2
//! ```
//!
//! written in the frame comoving with the lower boundary (`Eperp =
//! (E2, -E1)`).  The crate provides, layer by layer:
//!
//! * [`spectral`]: coefficient states, dealiased FFT transforms, the
//!   Poisson solve, and the quadratic advection operator;
//! * [`stability`]: per-mode `2x2` spectra, closed-form growth indicator,
//!   instability intervals in `dT` per wavenumber, and the classification
//!   of which wavenumber destabilizes first;
//! * [`hopf`]: normal-form data at the thresholds — eigenvectors, the
//!   linear coefficient `a` (two independent routes), the cubic
//!   coefficient `b` (closed form and direct Galerkin assembly), the
//!   degenerate merged-threshold constants, and first-order cycle
//!   predictions;
//! * [`integrate`]: semi-implicit Crank-Nicolson / Adams-Bashforth 2 time
//!   stepping with trace records and snapshots;
//! * [`energy`]: the exactly conserved energy functional, Parseval norms,
//!   sharp quadratic inequalities, and decay diagnostics;
//! * [`continuation`]: quasi-static `dT` sweeps producing bifurcation
//!   diagrams;
//! * [`io`]: JSON/CSV formats and the hashing run manifest.
//!
//! Analysis layers ([`domain`], [`stability`], [`hopf`]) are generic over
//! the scalar type through [`scalar::Real`]; the transform, integration,
//! and I/O layers are `f64`.  The aliases below fix `f64` for everyday
//! use.

pub mod continuation;
pub mod domain;
pub mod energy;
pub mod error;
pub mod hopf;
pub mod integrate;
pub mod io;
pub mod scalar;
pub mod spectral;
pub mod stability;
pub mod tolerances;

pub use error::{Error, Result};

/// Channel geometry and drift parameters over `f64`.
pub type Domain = domain::DomainConfig<f64>;
/// Per-mode spectrum data over `f64`.
pub type Spectrum = stability::ModeSpectrum<f64>;
/// Instability interval data over `f64`.
pub type Region = stability::InstabilityRegion<f64>;
/// Hopf point over `f64`.
pub type Bifurcation = hopf::BifurcationPoint<f64>;
/// Degenerate merged-threshold constants over `f64`.
pub type Degenerate = hopf::DegenerateCoeffs<f64>;
/// First-order cycle prediction over `f64`.
pub type Cycle = hopf::PredictedCycle<f64>;
