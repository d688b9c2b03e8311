//! Collocation matrices of the linearized operator, linear flows, the spectral
//! projection onto the gauge mode and resolvent scans.

mod evolve;
mod expm;
mod fit;
mod operators;
mod projection;
mod resolvent;

pub use evolve::{evolve_linear, sample_linear, Propagator};
pub use expm::expm;
pub use fit::{envelope_constant, fit_line, fit_semigroup_bound, LineFit, SemigroupBound};
pub use operators::{build_operators, OperatorMatrices};
pub use projection::{spectral_projection, ProjectionDiagnostics, ProjectionMatrix};
pub use resolvent::{resolvent_norm_scan, ResolventSample};
