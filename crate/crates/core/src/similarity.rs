//! The ODE blow-up family `ψ^T` and the similarity coordinates of its
//! backward lightcone.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::params::PhysParams;

/// `κ_p^{1/(p−1)} (T−t)^{−2/(p−1)}`; spatially constant.
pub fn fundamental_solution(t: f64, _r: f64, blowup_time: f64, params: &PhysParams) -> Result<f64> {
    let remaining = time_to_blowup(t, blowup_time)?;
    Ok(params.amplitude() * remaining.powf(-params.free_decay()))
}

/// Time derivative of [`fundamental_solution`].
pub fn fundamental_solution_dt(
    t: f64,
    _r: f64,
    blowup_time: f64,
    params: &PhysParams,
) -> Result<f64> {
    let remaining = time_to_blowup(t, blowup_time)?;
    let a = params.free_decay();
    Ok(a * params.amplitude() * remaining.powf(-a - 1.0))
}

fn time_to_blowup(t: f64, blowup_time: f64) -> Result<f64> {
    if !(t < blowup_time) {
        return Err(Error::PastBlowup { t, blowup_time });
    }
    Ok(blowup_time - t)
}

/// A point of the backward lightcone in similarity coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimilarityPoint {
    pub tau: f64,
    pub rho: f64,
    pub blowup_time: f64,
}

impl SimilarityPoint {
    pub fn from_physical(t: f64, r: f64, blowup_time: f64) -> Result<Self> {
        to_similarity(t, r, blowup_time)
    }

    /// Inverse map back to `(t, r)`.
    pub fn to_physical(&self) -> (f64, f64) {
        from_similarity(self)
    }
}

pub fn to_similarity(t: f64, r: f64, blowup_time: f64) -> Result<SimilarityPoint> {
    let remaining = time_to_blowup(t, blowup_time)?;
    if !(r >= 0.0 && r <= remaining) {
        return Err(Error::OutsideLightcone { t, r, blowup_time });
    }
    Ok(SimilarityPoint {
        tau: -remaining.ln(),
        // r = T − t on the cone boundary; clamp the rounding of the division.
        rho: (r / remaining).min(1.0),
        blowup_time,
    })
}

pub fn from_similarity(point: &SimilarityPoint) -> (f64, f64) {
    let remaining = (-point.tau).exp();
    (point.blowup_time - remaining, point.rho * remaining)
}
