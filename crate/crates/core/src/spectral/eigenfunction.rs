use nalgebra::DVector;
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::connection::{connection_c0, connection_c1, HypGeomParams};
use super::hyp2f1::hyp2f1;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::linop::build_operators;
use crate::params::derive_params;
use crate::state::StateVector;

/// Largest admissible relative residual `‖(L − λ)u‖/‖u‖`.
pub const EIGEN_RESIDUAL_TOLERANCE: f64 = 1e-6;

/// `v₁(z) = ₂F₁(a, b; a+b+1/2; 1−z)`, the solution analytic at `z = 1`. Near
/// `z = 0` it is expanded in the basis regular at the origin.
fn analytic_at_one(h: &HypGeomParams, c0: Complex64, c1: Complex64, z: f64) -> Result<Complex64> {
    let zc = Complex64::new(z, 0.0);
    if z >= 0.5 {
        return hyp2f1(h.a, h.b, h.a + h.b + 0.5, 1.0 - zc);
    }
    let half = Complex64::new(0.5, 0.0);
    let regular = hyp2f1(h.a, h.b, half, zc)?;
    let odd = hyp2f1(h.a + 0.5, h.b + 0.5, Complex64::new(1.5, 0.0), zc)?;
    Ok(c0 * regular + c1 * zc.sqrt() * odd)
}

/// Eigenfunction `(u₁, u₂)` of `L` for a real eigenvalue `λ`, built from
/// `u(ρ) = v₁(ρ²)` as `u₂ = u′` and `u₁ = ρu₂ + (λ + (3−p)/(p−1))∫₀^ρ u₂`,
/// normalized by `u₂(1) = 1` and checked against the collocation matrix.
pub fn eigenfunction_profile(lambda: Complex64, p: f64, grid: &Grid) -> Result<StateVector> {
    if lambda.im != 0.0 {
        return Err(Error::InvalidArgument("eigenfunction profiles are built for real lambda only"));
    }
    let h = HypGeomParams::new(lambda, p);
    let c0 = connection_c0(lambda, p)?.value;
    let c1 = connection_c1(lambda, p)?.value;
    let n = grid.n();
    let mut u = DVector::zeros(n);
    for (i, &rho) in grid.nodes().iter().enumerate() {
        u[i] = analytic_at_one(&h, c0, c1, rho * rho)?.re;
    }
    let u2 = grid.derivative(&u);
    let shift = lambda.re + (3.0 - p) / (p - 1.0);
    let integral = grid.antiderivative(&u2);
    let u1 = DVector::from_fn(n, |i, _| grid.nodes()[i] * u2[i] + shift * integral[i]);
    let scale = u2[n - 1];
    if scale == 0.0 || !scale.is_finite() {
        return Err(Error::NotAnEigenvalue { re: lambda.re, im: lambda.im, residual: f64::INFINITY });
    }
    let profile = StateVector::new(u1 / scale, u2 / scale)?;
    let residual = eigen_residual(&profile, lambda.re, p, grid)?;
    if !(residual <= EIGEN_RESIDUAL_TOLERANCE) {
        return Err(Error::NotAnEigenvalue { re: lambda.re, im: lambda.im, residual });
    }
    Ok(profile)
}

/// `‖(L − λ)u‖/‖u‖` in the H¹×H¹ norm.
pub fn eigen_residual(u: &StateVector, lambda: f64, p: f64, grid: &Grid) -> Result<f64> {
    let params = derive_params(p, 0.5 / (p - 1.0))?;
    let ops = build_operators(grid, &params);
    let r = &ops.l * u.as_vector() - u.as_vector() * lambda;
    Ok(ops.norm(&r) / ops.norm(u.as_vector()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::gauge_mode;

    #[test]
    fn gauge_eigenvalue_gives_the_gauge_mode() {
        for p in [3.5, 5.0, 7.0] {
            let grid = Grid::unit(32).unwrap();
            let u = eigenfunction_profile(Complex64::new(1.0, 0.0), p, &grid).unwrap();
            let params = derive_params(p, 0.1).unwrap();
            let g = gauge_mode(&params, &grid);
            assert!((&u - &g).max_abs() < 1e-10, "p = {p}");
        }
    }

    #[test]
    fn non_eigenvalue_is_rejected() {
        let grid = Grid::unit(32).unwrap();
        assert!(matches!(
            eigenfunction_profile(Complex64::new(0.3, 0.0), 5.0, &grid),
            Err(Error::NotAnEigenvalue { .. })
        ));
        assert!(eigenfunction_profile(Complex64::new(1.0, 0.5), 5.0, &grid).is_err());
    }
}
