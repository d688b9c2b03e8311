use nalgebra::DVector;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linop::{build_operators, spectral_projection, OperatorMatrices, ProjectionMatrix};
use crate::nonlin::Nonlinearity;
use crate::params::PhysParams;
use crate::state::{StateVector, Trajectory};

/// Quadrature nodes on the projection contour.
pub const CONTOUR_NODES: usize = 32;

/// The similarity-coordinate system `Φ′ = LΦ + N(Φ)` on one grid, together
/// with the projection onto the gauge mode.
#[derive(Debug, Clone)]
pub struct NonlinearSystem {
    pub params: PhysParams,
    pub grid: Grid,
    pub ops: OperatorMatrices,
    pub nonlin: Nonlinearity,
    pub projection: ProjectionMatrix,
}

impl NonlinearSystem {
    pub fn new(grid: &Grid, params: &PhysParams) -> Result<Self> {
        let ops = build_operators(grid, params);
        let projection = spectral_projection(&ops, CONTOUR_NODES)?;
        Ok(Self {
            params: *params,
            grid: grid.clone(),
            ops,
            nonlin: Nonlinearity::new(params),
            projection,
        })
    }

    pub fn n(&self) -> usize {
        self.grid.n()
    }

    pub fn norm(&self, u: &StateVector) -> f64 {
        self.ops.norm(u.as_vector())
    }

    pub fn nonlinear_term(&self, u: &StateVector) -> StateVector {
        self.nonlin.vector(u, &self.grid)
    }

    pub(crate) fn nonlinear_vec(&self, u: &DVector<f64>) -> DVector<f64> {
        let state = StateVector::from_stacked(u.clone()).expect("even length");
        self.nonlinear_term(&state).into_vector()
    }

    pub(crate) fn rhs_vec(&self, u: &DVector<f64>) -> DVector<f64> {
        &self.ops.l * u + self.nonlinear_vec(u)
    }

    /// `LΦ + N(Φ)`.
    pub fn rhs(&self, phi: &StateVector) -> StateVector {
        StateVector::from_stacked(self.rhs_vec(phi.as_vector())).expect("even length")
    }

    pub fn gauge_coefficient(&self, u: &StateVector) -> f64 {
        self.projection.gauge_coefficient(u)
    }
}

pub fn nonlinear_rhs(phi: &StateVector, system: &NonlinearSystem) -> StateVector {
    system.rhs(phi)
}

/// Settings of a direct method-of-lines run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvolveOptions {
    pub dt: f64,
    pub tau_end: f64,
    /// Steps between stored samples.
    pub stride: usize,
    /// Norm at which the solution counts as escaped.
    pub escape_norm: f64,
    /// Optional early stop once `|ℓ(Φ)|` exceeds this value.
    pub gauge_threshold: Option<f64>,
    /// Largest accepted initial norm.
    pub guard: f64,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            dt: 1e-3,
            tau_end: 8.0,
            stride: 10,
            escape_norm: 1e6,
            gauge_threshold: None,
            guard: 1.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RunStatus {
    Completed,
    /// Stopped at `tau` with the given norm and gauge coefficient `ℓ(Φ)`.
    Escaped { tau: f64, norm: f64, gauge_coefficient: f64 },
}

impl RunStatus {
    /// Sign of the unstable coordinate at escape, if the run escaped.
    pub fn escape_sign(&self) -> Option<f64> {
        match self {
            RunStatus::Completed => None,
            RunStatus::Escaped { gauge_coefficient, .. } => Some(gauge_coefficient.signum()),
        }
    }
}

#[derive(Debug, Clone)]
pub struct NonlinearRun {
    pub trajectory: Trajectory,
    /// `ℓ(Φ(τ))` at every stored sample.
    pub gauge: alloc::vec::Vec<f64>,
    pub status: RunStatus,
}

impl NonlinearRun {
    pub fn final_gauge_coefficient(&self) -> f64 {
        match self.status {
            RunStatus::Escaped { gauge_coefficient, .. } => gauge_coefficient,
            RunStatus::Completed => self.gauge.last().copied().unwrap_or(0.0),
        }
    }
}

/// Fourth-order Runge–Kutta integration of `Φ′ = LΦ + N(Φ)`.
pub fn evolve_nonlinear(system: &NonlinearSystem, phi0: &StateVector, options: &EvolveOptions) -> Result<NonlinearRun> {
    phi0.check_grid(&system.grid)?;
    if !(options.dt > 0.0) || !(options.tau_end >= 0.0) || options.stride == 0 {
        return Err(Error::InvalidArgument("evolution needs dt > 0, tau_end >= 0 and stride >= 1"));
    }
    let norm0 = system.norm(phi0);
    if !(norm0 <= options.guard) {
        return Err(Error::InitialDataTooLarge { norm: norm0, guard: options.guard });
    }
    let steps = if options.tau_end == 0.0 {
        0
    } else {
        (options.tau_end / options.dt - 1e-9).ceil().max(1.0) as usize
    };
    let h = if steps == 0 { options.dt } else { options.tau_end / steps as f64 };

    let mut trajectory = Trajectory::with_capacity(steps / options.stride + 2);
    let mut gauge = alloc::vec::Vec::with_capacity(steps / options.stride + 2);
    let mut v = phi0.as_vector().clone();
    trajectory.push(0.0, phi0.clone(), norm0);
    gauge.push(system.projection.gauge_coefficient_vec(&v));

    for k in 1..=steps {
        let k1 = system.rhs_vec(&v);
        let k2 = system.rhs_vec(&(&v + &k1 * (0.5 * h)));
        let k3 = system.rhs_vec(&(&v + &k2 * (0.5 * h)));
        let k4 = system.rhs_vec(&(&v + &k3 * h));
        v += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (h / 6.0);
        let tau = k as f64 * h;

        let finite = v.iter().all(|x| x.is_finite());
        let norm = if finite { system.ops.norm(&v) } else { f64::INFINITY };
        let coefficient = if finite {
            system.projection.gauge_coefficient_vec(&v)
        } else {
            gauge.last().copied().unwrap_or(0.0)
        };
        let over_threshold = options.gauge_threshold.is_some_and(|t| coefficient.abs() >= t);
        if !(norm <= options.escape_norm) || over_threshold {
            if finite {
                trajectory.push(tau, StateVector::from_stacked(v)?, norm);
                gauge.push(coefficient);
            }
            let status = RunStatus::Escaped { tau, norm, gauge_coefficient: coefficient };
            return Ok(NonlinearRun { trajectory, gauge, status });
        }
        if k % options.stride == 0 || k == steps {
            trajectory.push(tau, StateVector::from_stacked(v.clone())?, norm);
            gauge.push(coefficient);
        }
    }
    Ok(NonlinearRun { trajectory, gauge, status: RunStatus::Completed })
}
