//! The scalar nonlinearity `N(x, ρ)` around the ODE blow-up profile and its
//! vector lift `N(u) = (N(Ku₂(ρ), ρ), 0)`.

use nalgebra::DVector;
#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::Grid;
use crate::norms::k_op;
use crate::params::PhysParams;
use crate::state::StateVector;

/// Below this `|x|/c` the remainder is summed as a binomial series, which
/// avoids the cancellation between `|c+x|^p`, `c^p` and `pκx`.
const SERIES_RADIUS: f64 = 0.25;

/// `sign(y)·|y|^q`, zero at the origin.
pub fn signed_power(y: f64, q: f64) -> f64 {
    if y == 0.0 {
        0.0
    } else {
        y.signum() * y.abs().powf(q)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Nonlinearity {
    params: PhysParams,
    amplitude: f64,
}

impl Nonlinearity {
    pub fn new(params: &PhysParams) -> Self {
        Self { params: *params, amplitude: params.amplitude() }
    }

    pub fn params(&self) -> &PhysParams {
        &self.params
    }

    /// `(1+y)|1+y|^{p−1} − 1 − p y`.
    fn remainder(&self, y: f64) -> f64 {
        let p = self.params.p;
        if y.abs() <= SERIES_RADIUS {
            let mut coeff = p * (p - 1.0) / 2.0;
            let mut power = y * y;
            let mut sum = 0.0;
            for k in 2..200 {
                let term = coeff * power;
                sum += term;
                if term.abs() <= 1e-17 * sum.abs() || term == 0.0 {
                    break;
                }
                coeff *= (p - k as f64) / (k as f64 + 1.0);
                power *= y;
            }
            sum
        } else {
            signed_power(1.0 + y, p) - 1.0 - p * y
        }
    }

    /// `N(x, ρ) = ρ[|c+x|^{p−1}(c+x) − pκ_p x − c^p]` with `c = κ_p^{1/(p−1)}`.
    pub fn scalar(&self, x: f64, rho: f64) -> f64 {
        let c = self.amplitude;
        rho * c.powf(self.params.p) * self.remainder(x / c)
    }

    /// `∂_x N(x, ρ) = ρ p (|c+x|^{p−1} − κ_p)`.
    pub fn d1(&self, x: f64, rho: f64) -> f64 {
        let p = self.params.p;
        let c = self.amplitude;
        let y = x / c;
        let bracket = if y.abs() <= SERIES_RADIUS {
            ((p - 1.0) * y.ln_1p()).exp_m1()
        } else {
            (1.0 + y).abs().powf(p - 1.0) - 1.0
        };
        rho * p * self.params.kappa_p * bracket
    }

    /// `∂²_x N(x, ρ) = ρ p (p−1) sign(c+x)|c+x|^{p−2}`.
    pub fn d2(&self, x: f64, rho: f64) -> f64 {
        let p = self.params.p;
        rho * p * (p - 1.0) * signed_power(self.amplitude + x, p - 2.0)
    }

    /// `∂_ρ N(x, ρ) = N(x, 1)`.
    pub fn d_rho(&self, x: f64, _rho: f64) -> f64 {
        self.scalar(x, 1.0)
    }

    /// `N(u) = (N(Ku₂(ρ), ρ), 0)` on the grid.
    pub fn vector(&self, u: &StateVector, grid: &Grid) -> StateVector {
        let averaged = k_op(&u.u2_owned(), grid);
        let rho = grid.nodes();
        let first = DVector::from_fn(grid.n(), |i, _| self.scalar(averaged[i], rho[i]));
        StateVector::new(first, DVector::zeros(grid.n())).expect("same grid")
    }
}

pub fn n_scalar(x: f64, rho: f64, params: &PhysParams) -> f64 {
    Nonlinearity::new(params).scalar(x, rho)
}

pub fn n_scalar_d1(x: f64, rho: f64, params: &PhysParams) -> f64 {
    Nonlinearity::new(params).d1(x, rho)
}

pub fn n_scalar_d2(x: f64, rho: f64, params: &PhysParams) -> f64 {
    Nonlinearity::new(params).d2(x, rho)
}

pub fn n_vector(u: &StateVector, grid: &Grid, params: &PhysParams) -> StateVector {
    Nonlinearity::new(params).vector(u, grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_params;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Direct evaluation of the defining formula, no cancellation control.
    fn naive(x: f64, rho: f64, params: &PhysParams) -> f64 {
        let p = params.p;
        let c = params.amplitude();
        rho * (signed_power(c + x, p) - p * params.kappa_p * x - c.powf(p))
    }

    #[test]
    fn quintic_values() {
        let params = derive_params(5.0, 0.1).unwrap();
        let c = 0.75f64.powf(0.25);
        let expected = (c + 1.0).powi(5) - 3.75 - c.powi(5);
        assert_relative_eq!(expected, 22.3725, epsilon = 1e-4);
        assert_relative_eq!(n_scalar(1.0, 1.0, &params), expected, max_relative = 1e-14);
        let expected = 5.0 * (c + 1.0).powi(4) - 3.75;
        assert_relative_eq!(expected, 65.7114, epsilon = 1e-4);
        assert_relative_eq!(n_scalar_d1(1.0, 1.0, &params), expected, max_relative = 1e-14);
    }

    #[test]
    fn vanishes_to_second_order_at_zero() {
        let params = derive_params(4.0, 0.1).unwrap();
        for rho in [0.0, 0.3, 1.0] {
            assert_eq!(n_scalar(0.0, rho, &params), 0.0);
            assert_eq!(n_scalar_d1(0.0, rho, &params), 0.0);
        }
        // Leading term p(p−1)/2 · c^{p−2} x².
        let c = params.amplitude();
        let x = 1e-6;
        assert_relative_eq!(
            n_scalar(x, 1.0, &params),
            6.0 * c.powf(2.0) * x * x,
            max_relative = 1e-5
        );
    }

    #[test]
    fn series_branch_agrees_with_direct_formula() {
        for p in [3.5, 4.0, 5.0, 7.0] {
            let params = derive_params(p, 0.05).unwrap();
            let c = params.amplitude();
            for y in [-0.25, -0.2, -0.05, 0.1, 0.249] {
                let x = y * c;
                assert_relative_eq!(
                    n_scalar(x, 0.7, &params),
                    naive(x, 0.7, &params),
                    max_relative = 1e-11
                );
            }
        }
    }

    #[test]
    fn linear_in_rho() {
        let params = derive_params(7.0, 0.05).unwrap();
        for x in [-3.0, -0.1, 0.4, 8.0] {
            for rho in [0.0, 0.25, 0.9] {
                assert_relative_eq!(
                    n_scalar(x, rho, &params),
                    rho * n_scalar(x, 1.0, &params),
                    max_relative = 1e-14
                );
                let nl = Nonlinearity::new(&params);
                assert_eq!(nl.d_rho(x, rho), n_scalar(x, 1.0, &params));
            }
        }
    }

    #[test]
    fn derivatives_match_difference_quotients() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for p in [3.5, 5.0] {
            let params = derive_params(p, 0.05).unwrap();
            let nl = Nonlinearity::new(&params);
            for _ in 0..20 {
                // Stay clear of x = −c, where |c + x|^{p−2} spoils the
                // second difference quotient.
                let x: f64 = rng.gen_range(-0.5 * params.amplitude()..4.0);
                let rho: f64 = rng.gen_range(0.05..1.0);
                let h = 1e-5 * (1.0 + x.abs());
                let fd1 = (nl.scalar(x + h, rho) - nl.scalar(x - h, rho)) / (2.0 * h);
                let fd2 = (nl.d1(x + h, rho) - nl.d1(x - h, rho)) / (2.0 * h);
                let scale1 = nl.d1(x, rho).abs().max(rho * 1e-2);
                assert!((fd1 - nl.d1(x, rho)).abs() <= 1e-6 * scale1, "p={p} x={x}");
                assert_relative_eq!(fd2, nl.d2(x, rho), max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn vector_lift() {
        let params = derive_params(5.0, 0.1).unwrap();
        let grid = Grid::unit(24).unwrap();
        let zero = n_vector(&StateVector::zeros(24), &grid, &params);
        assert_eq!(zero.max_abs(), 0.0);
        let u = StateVector::from_fn(&grid, |_| 0.0, |_| 0.3);
        let nu = n_vector(&u, &grid, &params);
        let at_one = n_scalar(0.3, 1.0, &params);
        for (i, &rho) in grid.nodes().iter().enumerate() {
            assert_relative_eq!(nu.u1()[i], rho * at_one, max_relative = 1e-13, epsilon = 1e-16);
            assert_eq!(nu.u2()[i], 0.0);
        }
        assert_eq!(nu.u1()[0], 0.0);
    }
}
