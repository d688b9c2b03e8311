use nalgebra::{DMatrix, DVector};
#[allow(unused_imports)]
use num_traits::Float;

use super::expm::expm;
use crate::error::{Error, Result};
use crate::state::{StateVector, Trajectory};

/// Discrete solutions above this size are treated as numerically unstable.
const BLOWUP_LIMIT: f64 = 1e12;

/// Number of uniform steps covering `[0, tau]` with step at most `dt`.
fn step_count(tau: f64, dt: f64) -> usize {
    if tau == 0.0 {
        return 0;
    }
    (tau / dt - 1e-9).ceil().max(1.0) as usize
}

/// One classical Runge–Kutta step for `Ψ′ = AΨ` is multiplication by
/// `I + hA + (hA)²/2 + (hA)³/6 + (hA)⁴/24`.
fn rk4_step_matrix(a: &DMatrix<f64>, h: f64) -> DMatrix<f64> {
    let n = a.nrows();
    let ha = a * h;
    let id = DMatrix::<f64>::identity(n, n);
    let mut m = &id + &ha * 0.25;
    m = &id + &ha * &m * (1.0 / 3.0);
    m = &id + &ha * &m * 0.5;
    &id + &ha * &m
}

fn check_size(v: &DVector<f64>, tau: f64) -> Result<()> {
    let size = v.amax();
    if !(size <= BLOWUP_LIMIT) {
        return Err(Error::Unstable { tau, norm: size });
    }
    Ok(())
}

/// Approximates `e^{τA}u₀` by fourth-order Runge–Kutta with step at most `dt`.
pub fn evolve_linear(a: &DMatrix<f64>, u0: &StateVector, tau: f64, dt: f64) -> Result<StateVector> {
    if !(dt > 0.0) || !(tau >= 0.0) {
        return Err(Error::InvalidArgument("evolve_linear needs dt > 0 and tau >= 0"));
    }
    let steps = step_count(tau, dt);
    if steps == 0 {
        return Ok(u0.clone());
    }
    let h = tau / steps as f64;
    let step = rk4_step_matrix(a, h);
    let mut v = u0.as_vector().clone();
    for k in 1..=steps {
        v = &step * v;
        check_size(&v, k as f64 * h)?;
    }
    StateVector::from_stacked(v)
}

/// Runge–Kutta flow sampled every `stride` steps; norms use `gram`.
pub fn sample_linear(
    a: &DMatrix<f64>,
    u0: &StateVector,
    tau_end: f64,
    dt: f64,
    stride: usize,
    gram: &DMatrix<f64>,
) -> Result<Trajectory> {
    if !(dt > 0.0) || !(tau_end >= 0.0) || stride == 0 {
        return Err(Error::InvalidArgument("sample_linear needs dt > 0, tau_end >= 0, stride >= 1"));
    }
    let steps = step_count(tau_end, dt);
    let h = if steps == 0 { dt } else { tau_end / steps as f64 };
    let step = rk4_step_matrix(a, h);
    let norm = |v: &DVector<f64>| v.dot(&(gram * v)).max(0.0).sqrt();
    let mut tr = Trajectory::with_capacity(steps / stride + 2);
    let mut v = u0.as_vector().clone();
    tr.push(0.0, u0.clone(), norm(&v));
    for k in 1..=steps {
        v = &step * v;
        check_size(&v, k as f64 * h)?;
        if k % stride == 0 || k == steps {
            tr.push(k as f64 * h, StateVector::from_stacked(v.clone())?, norm(&v));
        }
    }
    Ok(tr)
}

/// Exact one-step propagator `e^{hA}` of a linear flow.
#[derive(Debug, Clone)]
pub struct Propagator {
    pub step: f64,
    pub matrix: DMatrix<f64>,
}

impl Propagator {
    pub fn new(a: &DMatrix<f64>, step: f64) -> Self {
        Self { step, matrix: expm(&(a * step)) }
    }

    pub fn apply(&self, u: &DVector<f64>) -> DVector<f64> {
        &self.matrix * u
    }

    /// Columnwise action on a batch of states.
    pub fn apply_batch(&self, u: &DMatrix<f64>) -> DMatrix<f64> {
        &self.matrix * u
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::Grid;
    use crate::linop::build_operators;
    use crate::params::derive_params;

    #[test]
    fn zero_time_is_identity() {
        let a = DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0]);
        let u = StateVector::from_stacked(DVector::from_vec(alloc::vec![0.3, -1.0])).unwrap();
        assert_eq!(evolve_linear(&a, &u, 0.0, 1e-3).unwrap(), u);
    }

    #[test]
    fn runge_kutta_matches_exponential() {
        let params = derive_params(5.0, 0.1).unwrap();
        let grid = Grid::unit(24).unwrap();
        let ops = build_operators(&grid, &params);
        let u = StateVector::from_cosine_series(&grid, &[0.1, 0.3, -0.2], &[1.0, 0.5, 0.1]);
        let prop = Propagator::new(&ops.l, 0.5);
        let ex = prop.apply(u.as_vector());
        let err = |dt: f64| (evolve_linear(&ops.l, &u, 0.5, dt).unwrap().as_vector() - &ex).amax();
        let (coarse, fine) = (err(5e-4), err(2.5e-4));
        // Fourth order: halving the step divides the error by about 16.
        let order = (coarse / fine).log2();
        assert!((order - 4.0).abs() < 0.3, "{coarse:e} {fine:e}");
        assert!(err(1e-4) < 1e-10);
    }

    #[test]
    fn unstable_step_is_detected() {
        let a = DMatrix::from_row_slice(1, 1, &[-1000.0]);
        let mut a2 = DMatrix::zeros(2, 2);
        a2.view_mut((0, 0), (1, 1)).copy_from(&a);
        let u = StateVector::from_stacked(DVector::from_vec(alloc::vec![1.0, 0.0])).unwrap();
        assert!(matches!(
            evolve_linear(&a2, &u, 1.0, 0.01),
            Err(Error::Unstable { .. })
        ));
    }
}
