//! Complex Γ by the Lanczos approximation (g = 7, nine terms) with
//! reflection for `Re z < 1/2`.

use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln(2π)/2`.
const HALF_LN_TWO_PI: f64 = 0.918_938_533_204_672_8;

/// `sin(πx)`, exactly zero at integers.
fn sin_pi_real(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r == 0.0 || r.abs() == 1.0 {
        return 0.0;
    }
    // sin(πr) = sin(π(1 − r)) folds r into [−1/2, 1/2].
    let folded = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    (PI * folded).sin()
}

fn cos_pi_real(x: f64) -> f64 {
    let r = x - 2.0 * (x / 2.0).round();
    if r.abs() == 0.5 {
        return 0.0;
    }
    (PI * r).cos()
}

/// `sin(πz)` with argument reduction in the real part.
pub fn sin_pi(z: Complex64) -> Complex64 {
    let (y_cosh, y_sinh) = ((PI * z.im).cosh(), (PI * z.im).sinh());
    Complex64::new(sin_pi_real(z.re) * y_cosh, cos_pi_real(z.re) * y_sinh)
}

fn is_pole(z: Complex64) -> bool {
    z.im == 0.0 && z.re <= 0.0 && z.re == z.re.floor()
}

/// `ln Γ(z)` for `Re z ≥ 1/2` by Lanczos.
fn ln_gamma_right(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut series = Complex64::new(LANCZOS[0], 0.0);
    for (k, &c) in LANCZOS.iter().enumerate().skip(1) {
        series += c / (z + k as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    HALF_LN_TWO_PI + (z + 0.5) * t.ln() - t + series.ln()
}

/// A logarithm of Γ(z). For `Re z ≥ 1/2` this is the principal branch; to the
/// left the reflection formula is used and the imaginary part is only defined
/// modulo 2π.
pub fn ln_gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z))
    } else {
        Ok(Complex64::new(PI.ln(), 0.0) - sin_pi(z).ln() - ln_gamma_right(1.0 - z))
    }
}

pub fn gamma(z: Complex64) -> Result<Complex64> {
    if is_pole(z) {
        return Err(Error::Pole { re: z.re, im: z.im });
    }
    if z.re >= 0.5 {
        Ok(ln_gamma_right(z).exp())
    } else {
        Ok(PI / (sin_pi(z) * ln_gamma_right(1.0 - z).exp()))
    }
}

/// `1/Γ(z)`, entire; exactly zero at the poles of Γ.
pub fn recip_gamma(z: Complex64) -> Complex64 {
    if is_pole(z) {
        return Complex64::new(0.0, 0.0);
    }
    if z.re >= 0.5 {
        (-ln_gamma_right(z)).exp()
    } else {
        sin_pi(z) * ln_gamma_right(1.0 - z).exp() / PI
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1e-300)
    }

    #[test]
    fn classical_values() {
        let sqrt_pi = PI.sqrt();
        assert!(close(gamma(c(0.5, 0.0)).unwrap(), c(sqrt_pi, 0.0), 1e-14));
        assert!(close(gamma(c(1.0, 0.0)).unwrap(), c(1.0, 0.0), 1e-14));
        assert!(close(gamma(c(5.0, 0.0)).unwrap(), c(24.0, 0.0), 1e-14));
        assert!(close(gamma(c(-0.5, 0.0)).unwrap(), c(-2.0 * sqrt_pi, 0.0), 1e-14));
        // Γ(i): |Γ(i)|² = π / sinh π.
        let gi = gamma(c(0.0, 1.0)).unwrap();
        assert!((gi.norm_sqr() - PI / PI.sinh()).abs() < 1e-14);
    }

    #[test]
    fn factorials_up_to_twenty() {
        let mut fact = 1.0f64;
        for k in 1..=20 {
            let value = gamma(c(k as f64 + 1.0, 0.0)).unwrap();
            fact *= k as f64;
            assert!(close(value, c(fact, 0.0), 1e-13), "k = {k}");
        }
    }

    #[test]
    fn poles() {
        for k in 0..6 {
            let z = c(-(k as f64), 0.0);
            assert!(matches!(gamma(z), Err(Error::Pole { .. })));
            assert_eq!(recip_gamma(z), c(0.0, 0.0));
        }
        // Near a pole 1/Γ(−k + h) ≈ (−1)^k k! h.
        let h = 1e-8;
        let r = recip_gamma(c(-3.0 + h, 0.0));
        assert!((r.re - (-6.0 * h)).abs() < 1e-14);
    }

    #[test]
    fn ln_gamma_matches_gamma() {
        for z in [c(3.3, 1.2), c(0.7, -4.0), c(12.0, 0.5)] {
            assert!(close(ln_gamma(z).unwrap().exp(), gamma(z).unwrap(), 1e-13));
        }
        let left = c(-2.5, 0.3);
        assert!(close(ln_gamma(left).unwrap().exp(), gamma(left).unwrap(), 1e-13));
    }
}
