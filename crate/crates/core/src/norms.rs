//! Function-space norms on grid functions and the averaging operator `K`.

use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

use crate::data::RadialDataPair;
use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::state::StateVector;

/// Squared H¹(a, b) norm of a scalar grid function.
pub fn h1_norm_sq(u: &DVector<f64>, grid: &Grid) -> f64 {
    let du = grid.derivative(u);
    grid.integrate(&u.component_mul(u)) + grid.integrate(&du.component_mul(&du))
}

/// `‖u‖² = ‖u₁‖²_{H¹} + ‖u₂‖²_{H¹}`, the norm of the state space.
pub fn h_norm(u: &StateVector, grid: &Grid) -> f64 {
    (h1_norm_sq(&u.u1_owned(), grid) + h1_norm_sq(&u.u2_owned(), grid)).sqrt()
}

pub fn h_inner(u: &StateVector, v: &StateVector, grid: &Grid) -> f64 {
    let part = |a: DVector<f64>, b: DVector<f64>| {
        let da = grid.derivative(&a);
        let db = grid.derivative(&b);
        grid.integrate(&a.component_mul(&b)) + grid.integrate(&da.component_mul(&db))
    };
    part(u.u1_owned(), v.u1_owned()) + part(u.u2_owned(), v.u2_owned())
}

/// `(u, v)₁ = (u₁(1)+u₂(1))(v₁(1)+v₂(1)) + ∫u₁′v₁′ + ∫u₂′v₂′`.
pub fn triple_inner(u: &StateVector, v: &StateVector, grid: &Grid) -> f64 {
    let last = grid.n() - 1;
    let boundary = (u.u1()[last] + u.u2()[last]) * (v.u1()[last] + v.u2()[last]);
    let du1 = grid.derivative(&u.u1_owned());
    let du2 = grid.derivative(&u.u2_owned());
    let dv1 = grid.derivative(&v.u1_owned());
    let dv2 = grid.derivative(&v.u2_owned());
    boundary + grid.integrate(&du1.component_mul(&dv1)) + grid.integrate(&du2.component_mul(&dv2))
}

/// `‖u‖₁`, equivalent to [`h_norm`] on functions with `u₁(0) = 0`.
pub fn triple_norm(u: &StateVector, grid: &Grid) -> f64 {
    triple_inner(u, u, grid).max(0.0).sqrt()
}

/// Gram matrix `W` of the H¹×H¹ inner product on stacked grid vectors,
/// `‖u‖² = uᵀ W u`.
pub fn h_gram(grid: &Grid) -> DMatrix<f64> {
    let n = grid.n();
    let w = DMatrix::from_diagonal(grid.weights());
    let d = grid.diff();
    let block = &w + d.transpose() * &w * d;
    let mut gram = DMatrix::zeros(2 * n, 2 * n);
    gram.view_mut((0, 0), (n, n)).copy_from(&block);
    gram.view_mut((n, n), (n, n)).copy_from(&block);
    gram
}

/// `Ku(ρ) = ρ^{−1} ∫₀^ρ u`, with the continuous limit `u(0)` at the origin.
/// The grid must start at 0.
pub fn k_op(u: &DVector<f64>, grid: &Grid) -> DVector<f64> {
    let integral = grid.antiderivative(u);
    let nodes = grid.nodes();
    DVector::from_fn(u.len(), |i, _| if i == 0 { u[0] } else { integral[i] / nodes[i] })
}

/// Local higher energy norm on `[0, R]`:
/// `∫|rf′+f|² + ∫|rf″+2f′|² + ∫r²g² + ∫|rg′+g|²`, square-rooted.
pub fn higher_energy_norm(pair: &RadialDataPair, radius: f64) -> Result<f64> {
    if !(radius > 0.0) {
        return Err(Error::InvalidArgument("higher energy norm needs a positive radius"));
    }
    if radius > pair.length() * (1.0 + 1e-12) {
        return Err(Error::OutOfDataDomain { requested: radius, available: pair.length() });
    }
    let restricted;
    let pair = if (radius - pair.length()).abs() <= 1e-14 * pair.length() {
        pair
    } else {
        restricted = pair.restrict(radius, pair.grid().n())?;
        &restricted
    };
    let grid = pair.grid();
    let r = grid.nodes();
    let f = pair.first();
    let g = pair.second();
    let df = grid.derivative(f);
    let ddf = grid.derivative(&df);
    let dg = grid.derivative(g);
    let n = grid.n();
    let a = DVector::from_fn(n, |i, _| (r[i] * df[i] + f[i]).powi(2));
    let b = DVector::from_fn(n, |i, _| (r[i] * ddf[i] + 2.0 * df[i]).powi(2));
    let c = DVector::from_fn(n, |i, _| (r[i] * g[i]).powi(2));
    let d = DVector::from_fn(n, |i, _| (r[i] * dg[i] + g[i]).powi(2));
    let total = grid.integrate(&a) + grid.integrate(&b) + grid.integrate(&c) + grid.integrate(&d);
    Ok(total.max(0.0).sqrt())
}

/// Norm of relative data in `H¹(0, L) × H¹(0, L)`.
pub fn data_space_norm(v: &RadialDataPair) -> f64 {
    (h1_norm_sq(v.first(), v.grid()) + h1_norm_sq(v.second(), v.grid())).sqrt()
}
