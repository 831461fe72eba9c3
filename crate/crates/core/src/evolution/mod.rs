//! Time integration of the full equations around the steady profile.

pub mod mms;
pub mod modes;
pub mod run;
pub mod scheme;

pub use mms::{mms_convergence_axi, mms_convergence_sym, mms_error, time_refinement, ConvergenceStudy, Manufactured};
pub use modes::{legendre, mode_amplitudes, probe_rows, project_row};
pub use run::{run_stability, Check, Decay, Perturbation, RunLog, RunSettings, Shape, Target, L_MAX, MONITOR_C_MAX};
pub use scheme::{Scheme, DEFAULT_SAFETY};
