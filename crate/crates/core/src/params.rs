//! The exponent `p` and the constants derived from it.

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Exponent of the nonlinearity together with its derived constants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysParams {
    pub p: f64,
    /// `2(p+1)/(p−1)²`, so that `κ_p^{1/(p−1)}(T−t)^{−2/(p−1)}` solves the ODE.
    pub kappa_p: f64,
    /// Slack lost in the decay rate.
    pub eps: f64,
    /// Guaranteed decay rate on the stable subspace, `2/(p−1) − eps`.
    pub mu_p: f64,
}

impl PhysParams {
    pub fn new(p: f64, eps: f64) -> Result<Self> {
        derive_params(p, eps)
    }

    /// `2/(p−1)`, the free decay rate and the self-similar exponent.
    pub fn free_decay(&self) -> f64 {
        2.0 / (self.p - 1.0)
    }

    /// `κ_p^{1/(p−1)}`, the amplitude of the ODE blow-up solution.
    pub fn amplitude(&self) -> f64 {
        self.kappa_p.powf(1.0 / (self.p - 1.0))
    }
}

pub fn derive_params(p: f64, eps: f64) -> Result<PhysParams> {
    if !(p > 3.0) || !p.is_finite() {
        return Err(Error::InvalidExponent { p });
    }
    let free = 2.0 / (p - 1.0);
    if !(eps > 0.0 && eps < free) {
        return Err(Error::InvalidSlack { eps, max: free });
    }
    Ok(PhysParams {
        p,
        kappa_p: 2.0 * (p + 1.0) / ((p - 1.0) * (p - 1.0)),
        eps,
        mu_p: free - eps,
    })
}
