use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::grid::Grid;
use crate::norms::h_gram;
use crate::params::PhysParams;
use crate::state::StateVector;

/// Dense collocation matrices acting on stacked `[u₁; u₂]` vectors.
///
/// The row of the `u₁` equation at `ρ = 0` is zeroed, which freezes
/// `u₁(0) = 0` along every flow; all other rows, including both rows at the
/// characteristic boundary `ρ = 1`, carry the equations themselves.
#[derive(Debug, Clone)]
pub struct OperatorMatrices {
    pub n: usize,
    /// `L₀u = (u₂′ − ρu₁′, u₁′ − ρu₂′) − (2/(p−1))u`.
    pub l0: DMatrix<f64>,
    /// `L′u = (pκ_p ∫₀^ρ u₂, 0)`.
    pub lp: DMatrix<f64>,
    pub l: DMatrix<f64>,
    /// Gram matrix of the H¹×H¹ inner product.
    pub gram: DMatrix<f64>,
    pub params: PhysParams,
    pub grid: Grid,
}

pub fn build_operators(grid: &Grid, params: &PhysParams) -> OperatorMatrices {
    let n = grid.n();
    let d = grid.diff();
    let a = params.free_decay();
    let mut transport = -DMatrix::from_diagonal(grid.nodes()) * d;
    for i in 0..n {
        transport[(i, i)] -= a;
    }
    let mut l0 = DMatrix::zeros(2 * n, 2 * n);
    l0.view_mut((0, 0), (n, n)).copy_from(&transport);
    l0.view_mut((0, n), (n, n)).copy_from(d);
    l0.view_mut((n, 0), (n, n)).copy_from(d);
    l0.view_mut((n, n), (n, n)).copy_from(&transport);

    let mut lp = DMatrix::zeros(2 * n, 2 * n);
    let coupling = grid.antiderivative_matrix() * (params.p * params.kappa_p);
    lp.view_mut((0, n), (n, n)).copy_from(&coupling);

    l0.row_mut(0).fill(0.0);
    lp.row_mut(0).fill(0.0);
    let l = &l0 + &lp;
    OperatorMatrices {
        n,
        l0,
        lp,
        l,
        gram: h_gram(grid),
        params: *params,
        grid: grid.clone(),
    }
}

impl OperatorMatrices {
    pub fn apply_l(&self, u: &StateVector) -> StateVector {
        StateVector::from_stacked(&self.l * u.as_vector()).expect("even length")
    }

    pub fn apply_l0(&self, u: &StateVector) -> StateVector {
        StateVector::from_stacked(&self.l0 * u.as_vector()).expect("even length")
    }

    pub fn apply_lp(&self, u: &StateVector) -> StateVector {
        StateVector::from_stacked(&self.lp * u.as_vector()).expect("even length")
    }

    /// H¹×H¹ norm through the Gram matrix.
    pub fn norm(&self, u: &DVector<f64>) -> f64 {
        u.dot(&(&self.gram * u)).max(0.0).sqrt()
    }

    /// Drops the `u₁(0)` row and column, leaving the operator on the subspace
    /// `u₁(0) = 0`.
    pub fn restrict(m: &DMatrix<f64>) -> DMatrix<f64> {
        m.clone().remove_row(0).remove_column(0)
    }

    /// Eigenvalues of a matrix restricted to `u₁(0) = 0`.
    pub fn eigenvalues_of(m: &DMatrix<f64>) -> Vec<Complex64> {
        Self::restrict(m).complex_eigenvalues().iter().copied().collect()
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        Self::eigenvalues_of(&self.l)
    }

    /// Eigenvalues of `L` with real part strictly above `threshold`, sorted by
    /// decreasing real part.
    pub fn eigenvalues_right_of(&self, threshold: f64) -> Vec<Complex64> {
        let mut ev: Vec<Complex64> = self.eigenvalues().into_iter().filter(|z| z.re > threshold).collect();
        ev.sort_by(|a, b| b.re.total_cmp(&a.re));
        ev
    }
}
