//! Gauss hypergeometric function `₂F₁(a, b; c; z)` for `|z| ≤ 1`.
//!
//! Power series near the origin, the Pfaff transformation where
//! `|z/(z−1)|` is small, and the `z ↦ 1−z` connection formula near `z = 1`.

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::gamma::{gamma, recip_gamma};
use crate::error::{Error, Result};

const SERIES_RADIUS: f64 = 0.7;
const MAX_TERMS: usize = 20_000;

fn is_non_positive_integer(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor()
}

fn is_integer(z: Complex64, tol: f64) -> bool {
    z.im.abs() <= tol && (z.re - z.re.round()).abs() <= tol
}

/// Direct summation of `Σ (a)_k (b)_k / ((c)_k k!) z^k`.
fn series(a: Complex64, b: Complex64, c: Complex64, z: Complex64, max_terms: usize) -> Result<Complex64> {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut small = 0;
    for k in 0..max_terms {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * z;
        sum += term;
        if term.norm() <= 1e-17 * sum.norm() {
            small += 1;
            // Two consecutive negligible terms guard against accidental
            // near-cancellation in one coefficient.
            if small >= 2 || term.norm() == 0.0 {
                return Ok(sum);
            }
        } else {
            small = 0;
        }
    }
    Err(Error::SeriesDivergence { terms: max_terms, re: sum.re, im: sum.im })
}

pub fn hyp2f1(a: Complex64, b: Complex64, c: Complex64, z: Complex64) -> Result<Complex64> {
    if is_non_positive_integer(c) {
        return Err(Error::Pole { re: c.re, im: c.im });
    }
    let abs_z = z.norm();
    if abs_z > 1.0 + 1e-15 {
        return Err(Error::HypergeometricDomain { abs_z });
    }
    if abs_z <= SERIES_RADIUS {
        return series(a, b, c, z, MAX_TERMS);
    }
    let one_minus = 1.0 - z;
    if one_minus.norm() == 0.0 {
        // Gauss summation.
        let excess = c - a - b;
        if excess.re <= 0.0 {
            return Err(Error::SeriesDivergence { terms: 0, re: f64::INFINITY, im: 0.0 });
        }
        return Ok(gamma(c)? * gamma(excess)? * recip_gamma(c - a) * recip_gamma(c - b));
    }
    let pfaff_arg = z / (z - 1.0);
    if pfaff_arg.norm() <= SERIES_RADIUS {
        let factor = one_minus.powc(-a);
        return Ok(factor * series(a, c - b, c, pfaff_arg, MAX_TERMS)?);
    }
    let excess = c - a - b;
    if one_minus.norm() <= SERIES_RADIUS && !is_integer(excess, 1e-12) {
        let w = one_minus;
        let first = gamma(c)? * gamma(excess)? * recip_gamma(c - a) * recip_gamma(c - b);
        let second = gamma(c)? * gamma(-excess)? * recip_gamma(a) * recip_gamma(b);
        let mut total = Complex64::new(0.0, 0.0);
        if first.norm() != 0.0 {
            total += first * series(a, b, 1.0 - excess, w, MAX_TERMS)?;
        }
        if second.norm() != 0.0 {
            total += second * w.powc(excess) * series(c - a, c - b, excess + 1.0, w, MAX_TERMS)?;
        }
        return Ok(total);
    }
    series(a, b, c, z, MAX_TERMS)
}
