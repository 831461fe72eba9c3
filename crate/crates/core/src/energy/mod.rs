//! Relative energy, potential energy density, norms, the perturbation
//! reformulation and dissipation monitors.

pub mod potential;
pub mod reform;
pub mod report;
pub mod suite;

pub use potential::{equivalence_constants, h_identities, h_quadrature, potential_energy_h, HIdentities};
pub use suite::{verify_energy, H_IDENTITY_TOL, H_QUAD_TOL};
pub use reform::{reformulation_residual, reformulation_residual_sym, ReformResidual, REFORM_TOL};
pub use report::{
    density_corridor, derivative_sq, energy_norm_n, max_order, norm_pieces, relative_energy, relative_energy_axi,
    relative_energy_sym, sobolev_norm, CompositeMonitor, EnergyReport, FieldRef, NormGroup, NormPiece,
};
