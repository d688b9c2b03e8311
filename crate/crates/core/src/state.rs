//! Grid functions `u = (u₁, u₂)` on `[0, 1]` and sampled trajectories.

use alloc::vec::Vec;
use core::f64::consts::PI;
use core::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DVector, DVectorView};
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::Grid;

/// A pair of grid functions stacked as one vector of length `2n`: the first
/// `n` entries are `u₁`, the last `n` are `u₂`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    data: DVector<f64>,
}

impl StateVector {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: DVector::zeros(2 * n) }
    }

    pub fn new(u1: DVector<f64>, u2: DVector<f64>) -> Result<Self> {
        if u1.len() != u2.len() {
            return Err(Error::GridMismatch { expected: u1.len(), found: u2.len() });
        }
        let n = u1.len();
        let mut data = DVector::zeros(2 * n);
        data.rows_mut(0, n).copy_from(&u1);
        data.rows_mut(n, n).copy_from(&u2);
        Ok(Self { n, data })
    }

    pub fn from_fn(grid: &Grid, f1: impl Fn(f64) -> f64, f2: impl Fn(f64) -> f64) -> Self {
        Self::new(grid.sample(f1), grid.sample(f2)).expect("same grid")
    }

    /// Wraps a stacked vector; the length must be even.
    pub fn from_stacked(data: DVector<f64>) -> Result<Self> {
        if !data.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument("stacked state vector must have even length"));
        }
        Ok(Self { n: data.len() / 2, data })
    }

    /// Smooth sample built from cosine series, with `u₁(0) = 0` enforced by
    /// subtracting the value at the origin.
    pub fn from_cosine_series(grid: &Grid, c1: &[f64], c2: &[f64]) -> Self {
        let series = |c: &[f64], x: f64| -> f64 {
            c.iter()
                .enumerate()
                .map(|(k, &ck)| ck * (PI * k as f64 * x).cos())
                .sum::<f64>()
        };
        let at_zero: f64 = c1.iter().sum();
        Self::from_fn(grid, |x| series(c1, x) - at_zero, |x| series(c2, x))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn u1(&self) -> DVectorView<'_, f64> {
        self.data.rows(0, self.n)
    }

    pub fn u2(&self) -> DVectorView<'_, f64> {
        self.data.rows(self.n, self.n)
    }

    pub fn u1_owned(&self) -> DVector<f64> {
        self.u1().into_owned()
    }

    pub fn u2_owned(&self) -> DVector<f64> {
        self.u2().into_owned()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.data
    }

    pub fn into_vector(self) -> DVector<f64> {
        self.data
    }

    pub fn check_grid(&self, grid: &Grid) -> Result<()> {
        if self.n != grid.n() {
            return Err(Error::GridMismatch { expected: grid.n(), found: self.n });
        }
        Ok(())
    }

    /// Largest absolute nodal value.
    pub fn max_abs(&self) -> f64 {
        self.data.amax()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self { n: self.n, data: &self.data * factor }
    }

    pub fn axpy(&mut self, a: f64, other: &StateVector) {
        self.data.axpy(a, &other.data, 1.0);
    }
}

impl Add for &StateVector {
    type Output = StateVector;
    fn add(self, rhs: &StateVector) -> StateVector {
        StateVector { n: self.n, data: &self.data + &rhs.data }
    }
}

impl Sub for &StateVector {
    type Output = StateVector;
    fn sub(self, rhs: &StateVector) -> StateVector {
        StateVector { n: self.n, data: &self.data - &rhs.data }
    }
}

impl Mul<f64> for &StateVector {
    type Output = StateVector;
    fn mul(self, rhs: f64) -> StateVector {
        self.scale(rhs)
    }
}

impl Neg for &StateVector {
    type Output = StateVector;
    fn neg(self) -> StateVector {
        self.scale(-1.0)
    }
}

/// A τ-sampled sequence of states on one shared grid, starting at τ = 0.
#[derive(Debug, Clone, Default)]
pub struct Trajectory {
    pub taus: Vec<f64>,
    pub states: Vec<StateVector>,
    /// `‖Ψ(τ)‖` in the H¹×H¹ norm of the grid the states live on.
    pub norms: Vec<f64>,
}

impl Trajectory {
    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            taus: Vec::with_capacity(capacity),
            states: Vec::with_capacity(capacity),
            norms: Vec::with_capacity(capacity),
        }
    }

    pub fn push(&mut self, tau: f64, state: StateVector, norm: f64) {
        self.taus.push(tau);
        self.states.push(state);
        self.norms.push(norm);
    }

    pub fn len(&self) -> usize {
        self.taus.len()
    }

    pub fn is_empty(&self) -> bool {
        self.taus.is_empty()
    }

    pub fn last(&self) -> Option<&StateVector> {
        self.states.last()
    }

    /// `sup_τ e^{μτ} ‖Ψ(τ)‖`, the norm of the space X.
    pub fn x_norm(&self, mu: f64) -> f64 {
        self.taus
            .iter()
            .zip(&self.norms)
            .map(|(&t, &n)| (mu * t).exp() * n)
            .fold(0.0, f64::max)
    }

    pub fn in_ball(&self, mu: f64, delta: f64) -> bool {
        self.x_norm(mu) <= delta
    }

    /// Index of the sample closest to `tau`.
    pub fn index_near(&self, tau: f64) -> Option<usize> {
        self.taus
            .iter()
            .enumerate()
            .min_by(|a, b| (a.1 - tau).abs().total_cmp(&(b.1 - tau).abs()))
            .map(|(i, _)| i)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layout_and_arithmetic() {
        let g = Grid::unit(5).unwrap();
        let u = StateVector::from_fn(&g, |x| x, |_| 1.0);
        assert_eq!(u.n(), 5);
        assert_eq!(u.u1()[4], 1.0);
        assert_eq!(u.u2()[0], 1.0);
        let w = &(&u + &u) - &u.scale(0.5);
        assert_eq!(w.u1()[4], 1.5);
        assert_eq!((-&u).u2()[2], -1.0);
    }

    #[test]
    fn cosine_series_vanishes_at_origin() {
        let g = Grid::unit(16).unwrap();
        let u = StateVector::from_cosine_series(&g, &[0.3, -1.0, 2.0], &[1.0, 0.5]);
        assert!(u.u1()[0].abs() < 1e-15);
        assert!((u.u2()[0] - 1.5).abs() < 1e-15);
    }

    #[test]
    fn mismatched_components_rejected() {
        assert!(StateVector::new(DVector::zeros(3), DVector::zeros(4)).is_err());
        assert!(StateVector::from_stacked(DVector::zeros(5)).is_err());
    }

    #[test]
    fn x_norm_weights_by_decay() {
        let mut tr = Trajectory::default();
        for k in 0..5 {
            let t = k as f64;
            tr.push(t, StateVector::zeros(3), 0.1 * (-0.5 * t).exp());
        }
        assert!((tr.x_norm(0.5) - 0.1).abs() < 1e-15);
        assert!(tr.x_norm(1.0) > 0.1);
        assert!(tr.in_ball(0.4, 0.1));
        assert_eq!(tr.index_near(2.2), Some(2));
    }
}
