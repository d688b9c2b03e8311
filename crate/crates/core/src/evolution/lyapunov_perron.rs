//! The corrected Duhamel map
//! `K(Ψ, u)(τ) = S(τ)(1−P)u − ∫₀^∞ e^{τ−τ′}PN(Ψ(τ′))dτ′ + ∫₀^τ S(τ−τ′)N(Ψ(τ′))dτ′`
//! on a uniform τ-grid and its Banach fixed point.
//!
//! Splitting `N = (1−P)N + ℓ(N)g` turns the map into a stable part, advanced
//! forward with the exact propagator `e^{hL}` and trapezoidal quadrature, and
//! `−g ∫_τ^∞ e^{τ−τ′} ℓ(N(Ψ(τ′))) dτ′`, accumulated backward from a tail
//! estimate at `τ_max`.

use alloc::vec::Vec;

use nalgebra::DVector;
#[allow(unused_imports)]
use num_traits::Float;

use super::system::NonlinearSystem;
use crate::error::{Error, Result};
use crate::linop::Propagator;
use crate::state::{StateVector, Trajectory};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LpOptions {
    /// τ-grid spacing.
    pub step: f64,
    /// Truncation of the infinite integrals.
    pub tau_max: f64,
    /// Largest accepted estimate of the truncated tail.
    pub tail_tolerance: f64,
    /// τ_max is raised up to this value when the tail is too large.
    pub tau_max_limit: f64,
    /// Stop once successive iterates differ by less than this in X.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Radius of the ball in X the fixed point must lie in.
    pub delta: f64,
}

impl Default for LpOptions {
    fn default() -> Self {
        Self {
            step: 0.01,
            tau_max: 12.0,
            tail_tolerance: 1e-10,
            tau_max_limit: 36.0,
            tolerance: 1e-10,
            max_iterations: 200,
            delta: 0.1,
        }
    }
}

/// Image of one application of the map.
#[derive(Debug, Clone)]
pub struct LpImage {
    pub trajectory: Trajectory,
    /// `∫₀^∞ e^{−τ′} ℓ(N(Ψ(τ′))) dτ′`.
    pub unstable_integral: f64,
    /// Contribution of `[τ_max, ∞)` to that integral.
    pub tail: f64,
}

/// Converged fixed point `Ψ_u = K(Ψ_u, u)`.
#[derive(Debug, Clone)]
pub struct FixedPoint {
    pub trajectory: Trajectory,
    pub iterations: usize,
    /// X-distance between successive iterates.
    pub differences: Vec<f64>,
    /// Ratios of successive differences.
    pub ratios: Vec<f64>,
    /// `ℓ(u)`.
    pub data_coefficient: f64,
    /// `∫₀^∞ e^{−τ′} ℓ(N(Ψ_u(τ′))) dτ′`.
    pub unstable_integral: f64,
    pub tail: f64,
    pub tau_max: f64,
    pub x_norm: f64,
}

impl FixedPoint {
    /// Gauge coordinate `f = ℓ(u) + ∫₀^∞ e^{−τ′}ℓ(N(Ψ_u))dτ′` of the
    /// correction.
    pub fn correction(&self) -> f64 {
        self.data_coefficient + self.unstable_integral
    }

    /// Largest observed contraction ratio, ignoring differences at rounding
    /// level.
    pub fn max_ratio(&self) -> f64 {
        self.differences
            .windows(2)
            .filter(|w| w[0] > 1e-13)
            .map(|w| w[1] / w[0])
            .fold(0.0, f64::max)
    }
}

/// Evaluates the corrected map for one system and τ-grid.
#[derive(Debug, Clone)]
pub struct LpSolver {
    pub system: NonlinearSystem,
    pub options: LpOptions,
    propagator: Propagator,
}

impl LpSolver {
    pub fn new(system: NonlinearSystem, options: LpOptions) -> Result<Self> {
        if !(options.step > 0.0) || !(options.tau_max > options.step) {
            return Err(Error::InvalidArgument("LP grid needs 0 < step < tau_max"));
        }
        let propagator = Propagator::new(&system.ops.l, options.step);
        Ok(Self { system, options, propagator })
    }

    pub fn steps(&self) -> usize {
        (self.options.tau_max / self.options.step).round() as usize
    }

    pub fn taus(&self) -> Vec<f64> {
        (0..=self.steps()).map(|k| k as f64 * self.options.step).collect()
    }

    pub fn zero_trajectory(&self) -> Trajectory {
        let n = self.system.n();
        let mut tr = Trajectory::with_capacity(self.steps() + 1);
        for tau in self.taus() {
            tr.push(tau, StateVector::zeros(n), 0.0);
        }
        tr
    }

    /// Builds a trajectory on this solver's τ-grid from a closure.
    pub fn trajectory_from(&self, f: impl Fn(f64) -> StateVector) -> Trajectory {
        let mut tr = Trajectory::with_capacity(self.steps() + 1);
        for tau in self.taus() {
            let s = f(tau);
            let norm = self.system.norm(&s);
            tr.push(tau, s, norm);
        }
        tr
    }

    /// `sup_τ e^{μτ}‖Φ(τ) − Ψ(τ)‖`.
    pub fn x_distance(&self, a: &Trajectory, b: &Trajectory) -> f64 {
        let mu = self.system.params.mu_p;
        a.taus
            .iter()
            .zip(a.states.iter().zip(&b.states))
            .map(|(&t, (x, y))| (mu * t).exp() * self.system.ops.norm(&(x.as_vector() - y.as_vector())))
            .fold(0.0, f64::max)
    }

    pub fn lp_map(&self, psi: &Trajectory, u: &StateVector) -> Result<LpImage> {
        u.check_grid(&self.system.grid)?;
        let steps = self.steps();
        if psi.len() != steps + 1 {
            return Err(Error::GridMismatch { expected: steps + 1, found: psi.len() });
        }
        let h = self.options.step;
        let mu = self.system.params.mu_p;
        let proj = &self.system.projection;

        let mut gauge_part = Vec::with_capacity(steps + 1);
        let mut stable_part: Vec<DVector<f64>> = Vec::with_capacity(steps + 1);
        for state in &psi.states {
            let n = self.system.nonlinear_vec(state.as_vector());
            gauge_part.push(proj.gauge_coefficient_vec(&n));
            stable_part.push(proj.complement_vec(&n));
        }

        // Q_k = ∫_{τ_k}^∞ e^{τ_k−τ′} n(τ′) dτ′ with n decaying like e^{−2μτ}
        // beyond τ_max.
        let tail = gauge_part[steps] / (1.0 + 2.0 * mu);
        if !(tail.abs() <= self.options.tail_tolerance) {
            return Err(Error::NotDecaying { tail: tail.abs() });
        }
        let decay = (-h).exp();
        let mut q = alloc::vec![0.0; steps + 1];
        q[steps] = tail;
        for k in (0..steps).rev() {
            q[k] = decay * q[k + 1] + 0.5 * h * (gauge_part[k] + decay * gauge_part[k + 1]);
        }

        let g = &proj.gauge;
        let mut trajectory = Trajectory::with_capacity(steps + 1);
        let mut y = proj.complement_vec(u.as_vector());
        for k in 0..=steps {
            if k > 0 {
                let advanced = self.propagator.apply(&(&y + &stable_part[k - 1] * (0.5 * h)));
                y = proj.complement_vec(&(advanced + &stable_part[k] * (0.5 * h)));
            }
            let state = &y - g * q[k];
            let norm = self.system.ops.norm(&state);
            trajectory.push(k as f64 * h, StateVector::from_stacked(state)?, norm);
        }
        Ok(LpImage { trajectory, unstable_integral: q[0], tail })
    }

    fn iterate(&self, u: &StateVector) -> Result<FixedPoint> {
        let mu = self.system.params.mu_p;
        let mut psi = self.zero_trajectory();
        let mut differences = Vec::new();
        let mut ratios = Vec::new();
        let mut growing = 0;
        for iteration in 1..=self.options.max_iterations {
            let image = self.lp_map(&psi, u)?;
            let diff = self.x_distance(&image.trajectory, &psi);
            if let Some(&prev) = differences.last() {
                if prev > 1e-13 {
                    let ratio = diff / prev;
                    ratios.push(ratio);
                    growing = if ratio > 1.0 { growing + 1 } else { 0 };
                    if growing >= 2 {
                        return Err(Error::DataTooLarge { ratio, iteration });
                    }
                }
            }
            differences.push(diff);
            psi = image.trajectory;
            if diff <= self.options.tolerance {
                let x_norm = psi.x_norm(mu);
                return Ok(FixedPoint {
                    trajectory: psi,
                    iterations: iteration,
                    differences,
                    ratios,
                    data_coefficient: self.system.projection.gauge_coefficient(u),
                    unstable_integral: image.unstable_integral,
                    tail: image.tail,
                    tau_max: self.options.tau_max,
                    x_norm,
                });
            }
        }
        Err(Error::NoConvergence { iterations: self.options.max_iterations })
    }

    /// Banach iteration from `Ψ = 0`. When the Duhamel tail is too large the
    /// horizon is extended by half up to `tau_max_limit`.
    pub fn solve_fixed_point(&self, u: &StateVector) -> Result<FixedPoint> {
        let mut solver = self.clone();
        let fixed = loop {
            match solver.iterate(u) {
                Err(Error::NotDecaying { tail }) => {
                    if solver.options.tau_max >= self.options.tau_max_limit {
                        return Err(Error::NotDecaying { tail });
                    }
                    solver.options.tau_max = (solver.options.tau_max * 1.5).min(self.options.tau_max_limit);
                }
                other => break other?,
            }
        };
        if !(fixed.x_norm <= self.options.delta) {
            return Err(Error::OutsideBall { x_norm: fixed.x_norm, delta: self.options.delta });
        }
        Ok(fixed)
    }
}
