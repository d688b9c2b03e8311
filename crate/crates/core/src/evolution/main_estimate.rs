//! Decay of the physical perturbation in the local higher energy norm.

use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use super::modulation::{ModulationResult, Modulator};
use crate::data::{reconstruct_field, RadialDataPair};
use crate::error::{Error, Result};
use crate::linop::fit_line;
use crate::norms::{data_space_norm, higher_energy_norm};
use crate::state::Trajectory;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MainEstimateOptions {
    /// Similarity-time window, measured from the initial time, of the fit.
    pub window: (f64, f64),
    /// Largest accepted norm of the relative data.
    pub data_guard: f64,
    /// Use every `stride`-th sample of the trajectory.
    pub stride: usize,
    /// Weighted norms below this are treated as exactly zero.
    pub zero_level: f64,
}

impl Default for MainEstimateOptions {
    fn default() -> Self {
        Self { window: (1.0, 6.0), data_guard: 0.1, stride: 10, zero_level: 1e-12 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateSample {
    /// Similarity time counted from `t = 0`.
    pub tau: f64,
    /// `T* − t`.
    pub remaining: f64,
    /// `‖Ψ(τ)‖` in the state space.
    pub norm: f64,
    /// Coordinate of `Ψ(τ)` along the gauge mode.
    pub gauge_coefficient: f64,
    /// `(T−t)^{(p+3)/(2(p−1))} ‖(ψ, ψ_t) − (ψ^T, ψ^T_t)‖_{E^h(T−t)}`.
    pub weighted_norm: f64,
}

#[derive(Debug, Clone)]
pub struct MainEstimateReport {
    pub t_star: f64,
    pub data_norm: f64,
    pub modulation: ModulationResult,
    pub samples: Vec<EstimateSample>,
    /// Slope of `log(weighted norm)` against `log(T−t)` on the window; `None`
    /// when the perturbation vanishes there.
    pub slope: Option<f64>,
    pub intercept: Option<f64>,
    pub r_squared: Option<f64>,
    /// `max (weighted norm)/(T−t)^{μ_p}` on the window.
    pub c_eps: f64,
    pub max_weighted_norm: f64,
}

/// Samples the weighted higher energy norm along a similarity trajectory
/// relative to `ψ^T`.
pub fn weighted_energy_series(
    modulator: &Modulator,
    trajectory: &Trajectory,
    blowup_time: f64,
    stride: usize,
) -> Result<Vec<EstimateSample>> {
    let sys = modulator.system();
    let params = sys.params;
    let weight_exponent = (params.p + 3.0) / (2.0 * (params.p - 1.0));
    let offset = -blowup_time.ln();
    let mut out = Vec::new();
    for (k, (tau, state)) in trajectory.taus.iter().zip(&trajectory.states).enumerate() {
        if k % stride.max(1) != 0 {
            continue;
        }
        let snap = reconstruct_field(state, tau + offset, blowup_time, &params, &sys.grid)?;
        let remaining = snap.radius();
        let eh = higher_energy_norm(&snap.perturbation, remaining)?;
        out.push(EstimateSample {
            tau: *tau,
            remaining,
            norm: trajectory.norms[k],
            gauge_coefficient: sys.projection.gauge_coefficient(state),
            weighted_norm: remaining.powf(weight_exponent) * eh,
        });
    }
    Ok(out)
}

/// Builds relative data from free data `(f, g)`, selects `T*`, and measures
/// the decay of the weighted higher energy norm of the perturbation as
/// `t → T*`.
pub fn verify_main_estimate(
    free: &RadialDataPair,
    modulator: &Modulator,
    options: &MainEstimateOptions,
) -> Result<MainEstimateReport> {
    let params = modulator.system().params;
    let v = RadialDataPair::relative_from_free(free, &params);
    let data_norm = data_space_norm(&v);
    if !(data_norm <= options.data_guard) {
        return Err(Error::InitialDataTooLarge { norm: data_norm, guard: options.data_guard });
    }
    let modulation = modulator.find_blowup_time(&v)?;
    let t_star = modulation.t_star;
    let trajectory = &modulation.correction.fixed_point.trajectory;
    let samples = weighted_energy_series(modulator, trajectory, t_star, options.stride)?;

    let (lo, hi) = options.window;
    let window: Vec<&EstimateSample> = samples
        .iter()
        .filter(|s| s.tau >= lo - 1e-9 && s.tau <= hi + 1e-9)
        .collect();
    if window.len() < 2 {
        return Err(Error::TooFewSamples { got: window.len(), need: 2 });
    }
    let max_weighted_norm = window.iter().map(|s| s.weighted_norm).fold(0.0, f64::max);
    let c_eps = window
        .iter()
        .map(|s| s.weighted_norm / s.remaining.powf(params.mu_p))
        .fold(0.0, f64::max);
    let (slope, intercept, r_squared) = if max_weighted_norm <= options.zero_level
        || window.iter().any(|s| !(s.weighted_norm > 0.0))
    {
        (None, None, None)
    } else {
        let x: Vec<f64> = window.iter().map(|s| s.remaining.ln()).collect();
        let y: Vec<f64> = window.iter().map(|s| s.weighted_norm.ln()).collect();
        let fit = fit_line(&x, &y)?;
        (Some(fit.slope), Some(fit.intercept), Some(fit.r_squared))
    };
    Ok(MainEstimateReport {
        t_star,
        data_norm,
        modulation,
        samples,
        slope,
        intercept,
        r_squared,
        c_eps,
        max_weighted_norm,
    })
}
