#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

/// Least-squares line `y ≈ slope·x + intercept`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() {
        return Err(Error::InvalidArgument("fit_line needs equally long inputs"));
    }
    if x.len() < 2 {
        return Err(Error::TooFewSamples { got: x.len(), need: 2 });
    }
    let m = x.len() as f64;
    let mx = x.iter().sum::<f64>() / m;
    let my = y.iter().sum::<f64>() / m;
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InvalidArgument("fit_line needs at least two distinct abscissae"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = x.iter().zip(y).map(|(a, b)| (b - slope * a - intercept).powi(2)).sum();
    // A constant series is fitted exactly; rounding in the mean must not turn
    // it into 0/0.
    let level = 1e-24 * m * (1.0 + my * my);
    let r_squared = if syy > level { 1.0 - sse / syy } else { 1.0 };
    Ok(LineFit { slope, intercept, r_squared })
}

/// Measured bound `‖S(τ)u‖ ≤ M e^{ωτ}‖u‖`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SemigroupBound {
    pub m: f64,
    pub omega: f64,
    /// `log` of the fitted prefactor of the window fit.
    pub intercept: f64,
    pub r_squared: f64,
    pub window: (f64, f64),
}

/// Smallest `M` with `norms[k] ≤ M e^{ω τ_k} norms[0]` on all samples.
pub fn envelope_constant(taus: &[f64], norms: &[f64], omega: f64) -> f64 {
    let base = norms[0];
    taus.iter()
        .zip(norms)
        .map(|(&t, &n)| n / (base * (omega * t).exp()))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Fits `log‖Φ(τ)‖` against `τ` on `window`; `ω` is the slope and `M` the
/// envelope constant of the fitted rate over every sample.
pub fn fit_semigroup_bound(taus: &[f64], norms: &[f64], window: (f64, f64)) -> Result<SemigroupBound> {
    if taus.len() != norms.len() {
        return Err(Error::InvalidArgument("taus and norms differ in length"));
    }
    if let Some(index) = norms.iter().position(|&n| !(n > 0.0)) {
        return Err(Error::NonPositiveNorm { index });
    }
    let (x, y): (alloc::vec::Vec<f64>, alloc::vec::Vec<f64>) = taus
        .iter()
        .zip(norms)
        .filter(|(&t, _)| t >= window.0 - 1e-12 && t <= window.1 + 1e-12)
        .map(|(&t, &n)| (t, n.ln()))
        .unzip();
    if x.len() < 10 {
        return Err(Error::TooFewSamples { got: x.len(), need: 10 });
    }
    let line = fit_line(&x, &y)?;
    Ok(SemigroupBound {
        m: envelope_constant(taus, norms, line.slope),
        omega: line.slope,
        intercept: line.intercept,
        r_squared: line.r_squared,
        window,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn samples(f: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
        let taus: Vec<f64> = (0..=60).map(|k| 0.1 * k as f64).collect();
        let norms = taus.iter().map(|&t| f(t)).collect();
        (taus, norms)
    }

    #[test]
    fn exact_exponential() {
        let (t, n) = samples(|t| (-0.4 * t).exp());
        let b = fit_semigroup_bound(&t, &n, (1.0, 5.0)).unwrap();
        assert!((b.omega + 0.4).abs() < 1e-10);
        assert!((b.m - 1.0).abs() < 1e-10);
        assert!(b.intercept.abs() < 1e-10);
    }

    #[test]
    fn constant_series() {
        let (t, n) = samples(|_| 2.0);
        let b = fit_semigroup_bound(&t, &n, (1.0, 5.0)).unwrap();
        assert!(b.omega.abs() < 1e-14);
        assert_eq!(b.r_squared, 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        let (t, mut n) = samples(|t| (-t).exp());
        n[3] = 0.0;
        assert!(matches!(
            fit_semigroup_bound(&t, &n, (1.0, 5.0)),
            Err(Error::NonPositiveNorm { index: 3 })
        ));
        let (t, n) = samples(|t| (-t).exp());
        assert!(matches!(
            fit_semigroup_bound(&t, &n, (1.0, 1.5)),
            Err(Error::TooFewSamples { .. })
        ));
    }
}
