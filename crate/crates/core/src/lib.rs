//! Stationary outflow profiles for the isentropic compressible
//! Navier-Stokes equations outside the unit ball, together with the
//! operator, energy and stability checks built around them.

pub mod compat;
pub mod criteria;
pub mod decay;
pub mod discrete;
pub mod energy;
pub mod evolution;
pub mod error;
pub mod fd;
pub mod grid;
pub mod model;
pub mod quad;
pub mod sph;
pub mod stationary;

pub use error::{Error, Result};
pub use grid::{AngularGrid, RadialGrid};
pub use model::{validate_params, AxiState, FluidParams, SymState, ValidationReport};
pub use stationary::{solve_steady, SteadyProfile};
pub use decay::{div_u_tilde, grad_u_tilde_split, verify_decay, viscous_lu_tilde, RateReport};
pub use compat::compatibility_residual;
