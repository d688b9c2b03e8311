use core::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::operators::OperatorMatrices;
use crate::data::gauge_mode;
use crate::error::{Error, Result};
use crate::state::StateVector;

/// Resolvent solves with a larger 1-norm condition number count as hitting
/// the spectrum.
const COLLISION_CONDITION: f64 = 1e12;

/// Riesz projection onto the eigenspace of `L` at 1.
#[derive(Debug, Clone)]
pub struct ProjectionMatrix {
    pub p: DMatrix<f64>,
    /// `ℓ` with `Pu ≈ ℓ(u) g` and `ℓ(g) = 1`.
    pub functional: DVector<f64>,
    pub gauge: DVector<f64>,
    pub center: f64,
    pub radius: f64,
    pub nodes: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionDiagnostics {
    /// `‖P² − P‖_F`.
    pub idempotency: f64,
    /// `max |Pg − g|`.
    pub gauge_residual: f64,
    /// `max |(1−P)g|`.
    pub complement_on_gauge: f64,
    pub largest_singular_value: f64,
    pub second_singular_value: f64,
}

fn one_norm_c(a: &DMatrix<Complex64>) -> f64 {
    a.column_iter().map(|c| c.iter().map(|x| x.norm()).sum::<f64>()).fold(0.0, f64::max)
}

/// `P = (1/2πi)∮ (λ − L)^{−1} dλ` over `|λ − 1| = 1/2`, trapezoidal rule with
/// `nodes` points. With `λ_k = 1 + r e^{iθ_k}` the rule reads
/// `P = (1/M) Σ (λ_k − 1)(λ_k − L)^{−1}`.
pub fn spectral_projection(ops: &OperatorMatrices, nodes: usize) -> Result<ProjectionMatrix> {
    if nodes < 4 {
        return Err(Error::InvalidArgument("contour quadrature needs at least 4 nodes"));
    }
    let center = 1.0;
    let radius = 0.5;
    let dim = ops.l.nrows();
    let l_c: DMatrix<Complex64> = ops.l.map(|x| Complex64::new(x, 0.0));
    let mut acc = DMatrix::<Complex64>::zeros(dim, dim);
    for k in 0..nodes {
        let theta = 2.0 * PI * k as f64 / nodes as f64;
        let offset = Complex64::from_polar(radius, theta);
        let lambda = offset + center;
        let mut shifted = -&l_c;
        for i in 0..dim {
            shifted[(i, i)] += lambda;
        }
        let inv = shifted.clone().lu().try_inverse().ok_or(Error::ContourCollision {
            re: lambda.re,
            im: lambda.im,
            condition: f64::INFINITY,
        })?;
        let condition = one_norm_c(&shifted) * one_norm_c(&inv);
        if !(condition <= COLLISION_CONDITION) {
            return Err(Error::ContourCollision { re: lambda.re, im: lambda.im, condition });
        }
        acc += inv * offset;
    }
    let mut p = acc.map(|z| z.re / nodes as f64);
    // Row 0 of L vanishes, so the exact row 0 of P is ∮ dλ/λ = 0; the rule
    // leaves a (1/2)^M residue there, which is removed.
    p.row_mut(0).fill(0.0);
    let gauge = gauge_mode(&ops.params, &ops.grid).into_vector();
    let functional = p.tr_mul(&gauge) / gauge.norm_squared();
    Ok(ProjectionMatrix { p, functional, gauge, center, radius, nodes })
}

impl ProjectionMatrix {
    pub fn apply(&self, u: &StateVector) -> StateVector {
        StateVector::from_stacked(&self.p * u.as_vector()).expect("even length")
    }

    /// `(1 − P)u`.
    pub fn complement(&self, u: &StateVector) -> StateVector {
        StateVector::from_stacked(self.complement_vec(u.as_vector())).expect("even length")
    }

    pub fn complement_vec(&self, u: &DVector<f64>) -> DVector<f64> {
        u - &self.p * u
    }

    /// Coordinate `c` of `Pu = c g`.
    pub fn gauge_coefficient(&self, u: &StateVector) -> f64 {
        self.functional.dot(u.as_vector())
    }

    pub fn gauge_coefficient_vec(&self, u: &DVector<f64>) -> f64 {
        self.functional.dot(u)
    }

    pub fn diagnostics(&self) -> ProjectionDiagnostics {
        let idempotency = (&self.p * &self.p - &self.p).norm();
        let pg = &self.p * &self.gauge;
        let gauge_residual = (&pg - &self.gauge).amax();
        let complement_on_gauge = (&self.gauge - &pg).amax();
        let sv = self.p.clone().singular_values();
        let mut values: alloc::vec::Vec<f64> = sv.iter().copied().collect();
        values.sort_by(|a, b| b.total_cmp(a));
        ProjectionDiagnostics {
            idempotency,
            gauge_residual,
            complement_on_gauge,
            largest_singular_value: values[0],
            second_singular_value: values.get(1).copied().unwrap_or(0.0),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::linop::build_operators;
    use crate::params::derive_params;

    #[test]
    fn rank_one_projection_onto_gauge_mode() {
        let params = derive_params(5.0, 0.1).unwrap();
        let grid = Grid::unit(32).unwrap();
        let ops = build_operators(&grid, &params);
        let proj = spectral_projection(&ops, 32).unwrap();
        let d = proj.diagnostics();
        assert!(d.idempotency < 1e-8, "{d:?}");
        assert!(d.gauge_residual < 1e-8, "{d:?}");
        assert!(d.second_singular_value < 1e-6, "{d:?}");
        assert!(d.largest_singular_value > 1.0);
        assert!((proj.functional.dot(&proj.gauge) - 1.0).abs() < 1e-8);
        // Row of u₁(0) stays zero, so P maps into the space with u₁(0) = 0.
        let row = proj.p.row(0).amax();
        assert!(row < 1e-12, "{row:e}");
    }

    #[test]
    fn contour_through_eigenvalue_is_rejected() {
        let params = derive_params(5.0, 0.1).unwrap();
        let grid = Grid::unit(16).unwrap();
        let mut ops = build_operators(&grid, &params);
        // Shifting L by −1/2 moves the gauge eigenvalue onto the node λ = 1/2.
        for i in 0..ops.l.nrows() {
            ops.l[(i, i)] -= 0.5;
        }
        assert!(matches!(
            spectral_projection(&ops, 32),
            Err(Error::ContourCollision { .. })
        ));
    }
}
