//! Nonlinear dynamics in similarity coordinates: direct time stepping, the
//! Lyapunov–Perron fixed point, blow-up time selection and the decay estimate
//! of the physical field.

mod lyapunov_perron;
mod main_estimate;
mod modulation;
mod system;

pub use lyapunov_perron::{FixedPoint, LpImage, LpOptions, LpSolver};
pub use main_estimate::{
    verify_main_estimate, weighted_energy_series, EstimateSample, MainEstimateOptions, MainEstimateReport,
};
pub use modulation::{Correction, ModulationOptions, ModulationResult, Modulator, ShootingResult};
pub use system::{
    evolve_nonlinear, nonlinear_rhs, EvolveOptions, NonlinearRun, NonlinearSystem, RunStatus, CONTOUR_NODES,
};
