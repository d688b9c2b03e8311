use alloc::vec::Vec;

use nalgebra::DMatrix;
use num_complex::Complex64;

use super::operators::OperatorMatrices;

/// One point of a resolvent scan; `norm` is `None` when the solve failed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResolventSample {
    pub lambda: Complex64,
    pub norm: Option<f64>,
}

/// `‖(λ − L)^{−1}‖` in the H¹×H¹ operator norm on `u₁(0) = 0`.
///
/// With the Cholesky factor `W = CCᵀ` of the Gram matrix the weighted norm of
/// a matrix `A` equals the spectral norm of `Cᵀ A C^{−ᵀ}`.
pub fn resolvent_norm_scan(ops: &OperatorMatrices, lambdas: &[Complex64]) -> Vec<ResolventSample> {
    let l = OperatorMatrices::restrict(&ops.l);
    let w = OperatorMatrices::restrict(&ops.gram);
    let dim = l.nrows();
    let chol = w.cholesky().expect("Gram matrix is positive definite");
    let c = chol.l();
    let c_t_inv = c
        .transpose()
        .try_inverse()
        .expect("Cholesky factor is invertible");
    let to_c = |m: &DMatrix<f64>| m.map(|x| Complex64::new(x, 0.0));
    let c_t = to_c(&c.transpose());
    let c_t_inv = to_c(&c_t_inv);
    let l_c = to_c(&l);

    lambdas
        .iter()
        .map(|&lambda| {
            let mut shifted = -&l_c;
            for i in 0..dim {
                shifted[(i, i)] += lambda;
            }
            let norm = shifted.lu().try_inverse().and_then(|r| {
                let weighted = &c_t * r * &c_t_inv;
                let sv = weighted.singular_values();
                let top = sv.iter().copied().fold(0.0, f64::max);
                top.is_finite().then_some(top)
            });
            ResolventSample { lambda, norm }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::linop::build_operators;
    use crate::params::derive_params;

    #[test]
    fn norm_is_large_near_gauge_eigenvalue_and_decays_to_the_right() {
        let params = derive_params(5.0, 0.1).unwrap();
        let grid = Grid::unit(24).unwrap();
        let ops = build_operators(&grid, &params);
        let lambdas = [
            Complex64::new(1.0 + 1e-6, 0.0),
            Complex64::new(5.0, 0.0),
            Complex64::new(10.0, 0.0),
            Complex64::new(20.0, 0.0),
        ];
        let scan = resolvent_norm_scan(&ops, &lambdas);
        let norms: alloc::vec::Vec<f64> = scan.iter().map(|s| s.norm.unwrap()).collect();
        assert!(norms[0] > 1e5, "{norms:?}");
        assert!(norms[1] > norms[2] && norms[2] > norms[3], "{norms:?}");
    }
}
