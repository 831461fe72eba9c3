//! Spherical-coordinate toolkit: charts and cut-offs, spherical operators,
//! commutator and cancellation identities, and the exterior Hardy inequality.

pub mod cancel;
pub mod chart;
pub mod commutator;
pub mod corpus;
pub mod cutoff;
pub mod hardy;
pub mod jet;
pub mod ops;
pub mod suite;

pub use chart::{Chart, Dir, Vec3};
pub use cutoff::{build_cutoffs, xi_tilde_eval, CutoffFamily};
