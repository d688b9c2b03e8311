use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::gamma::{gamma, recip_gamma};
use crate::error::Result;

/// Parameters of the hypergeometric equation attached to a spectral value
/// `λ`: `a = (λ−2)/2`, `b = (λ + (p+3)/(p−1))/2`, `c = 1/2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HypGeomParams {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub lambda: Complex64,
    pub p: f64,
}

impl HypGeomParams {
    pub fn new(lambda: Complex64, p: f64) -> Self {
        Self {
            a: (lambda - 2.0) * 0.5,
            b: (lambda + (p + 3.0) / (p - 1.0)) * 0.5,
            c: Complex64::new(0.5, 0.0),
            lambda,
            p,
        }
    }

    /// Exponents `{0, c − a − b}` of the indicial equation at `z = 1`.
    pub fn indicial_exponents(&self) -> [Complex64; 2] {
        [Complex64::new(0.0, 0.0), self.c - self.a - self.b]
    }

    /// `c − a − b = 0`: the second solution at `z = 1` is logarithmic.
    pub fn is_logarithmic(&self) -> bool {
        (self.c - self.a - self.b).norm() <= 1e-12
    }
}

/// Value of a connection coefficient together with the logarithmic-case flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConnectionValue {
    pub value: Complex64,
    pub logarithmic: bool,
}

/// `c₀ = Γ(a+b+1−c)Γ(1−c) / (Γ(a+1−c)Γ(b+1−c))`, the weight of the solution
/// regular at `z = 0` in the solution analytic at `z = 1`.
pub fn connection_c0(lambda: Complex64, p: f64) -> Result<ConnectionValue> {
    let h = HypGeomParams::new(lambda, p);
    let one_minus_c = 1.0 - h.c;
    let value = gamma(h.a + h.b + one_minus_c)?
        * gamma(one_minus_c)?
        * recip_gamma(h.a + one_minus_c)
        * recip_gamma(h.b + one_minus_c);
    Ok(ConnectionValue { value, logarithmic: h.is_logarithmic() })
}

/// `c₁ = Γ(a+b+1−c)Γ(c−1) / (Γ(a)Γ(b))`, the weight of `z^{1−c}` times the
/// second solution at `z = 0`.
pub fn connection_c1(lambda: Complex64, p: f64) -> Result<ConnectionValue> {
    let h = HypGeomParams::new(lambda, p);
    let value = gamma(h.a + h.b + 1.0 - h.c)?
        * gamma(h.c - 1.0)?
        * recip_gamma(h.a)
        * recip_gamma(h.b);
    Ok(ConnectionValue { value, logarithmic: h.is_logarithmic() })
}

/// The entire function `1/(Γ(a+1−c)Γ(b+1−c))` whose zeros are the zeros of
/// `c₀` in the region where the numerator of `c₀` is finite.
pub fn pole_factor(lambda: Complex64, p: f64) -> Complex64 {
    let h = HypGeomParams::new(lambda, p);
    recip_gamma(h.a + 1.0 - h.c) * recip_gamma(h.b + 1.0 - h.c)
}
