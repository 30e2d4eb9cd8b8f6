//! Spectral representation and transforms.
//!
//! Fields live on `[0, L1] x (R / L2 Z)` with homogeneous Dirichlet walls
//! in `x1`: the basis is `sin(k1 pi x1 / L1) exp(2 pi i k2 x2 / L2)` with
//! `k1 >= 1` and signed `k2`.  This module owns the coefficient container,
//! the sampling grid, dealiased FFT transforms, the Poisson/velocity
//! solve, and the quadratic advection operator.

pub mod grid;
pub mod operators;
pub mod poisson;
pub mod state;
pub mod transform;

pub use grid::{GridField, VectorGridField};
pub use operators::{
    apply_linear, bilinear_term, full_rhs, nonlinear_term, NonlinearWorkspace,
};
pub use poisson::{electric_field_grid, poisson_velocity, VelocityModes};
pub use state::SpectralState;
pub use transform::{analyze, dealiased_sizes, synthesize, SpectralEngine, X1Kind};
