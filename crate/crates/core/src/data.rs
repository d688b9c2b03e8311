//! Radial data profiles, the initial-data operator `U(v, T)`, the gauge mode
//! and reconstruction of the physical field from a similarity-coordinate state.

use nalgebra::DVector;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::grid::Grid;
use crate::norms::k_op;
use crate::params::PhysParams;
use crate::similarity::{fundamental_solution, fundamental_solution_dt};
use crate::state::StateVector;

/// Length of the interval carrying initial data, so that every blow-up time in
/// `(1/2, 3/2)` can be used.
pub const DATA_LENGTH: f64 = 1.5;

/// Admissible blow-up times, open interval.
pub const BLOWUP_TIME_RANGE: (f64, f64) = (0.5, 1.5);

/// A pair of radial profiles sampled on a Chebyshev grid over `[0, L]`.
///
/// Depending on context this is free data `(f, g)`, the relative data
/// `v = (v₁, v₂)` with `v₁(0) = 0`, or a field perturbation at fixed time.
#[derive(Debug, Clone)]
pub struct RadialDataPair {
    grid: Grid,
    first: DVector<f64>,
    second: DVector<f64>,
}

impl RadialDataPair {
    pub fn from_values(grid: Grid, first: DVector<f64>, second: DVector<f64>) -> Result<Self> {
        if first.len() != grid.n() {
            return Err(Error::GridMismatch { expected: grid.n(), found: first.len() });
        }
        if second.len() != grid.n() {
            return Err(Error::GridMismatch { expected: grid.n(), found: second.len() });
        }
        Ok(Self { grid, first, second })
    }

    pub fn from_fn(
        n: usize,
        length: f64,
        first: impl Fn(f64) -> f64,
        second: impl Fn(f64) -> f64,
    ) -> Result<Self> {
        let grid = Grid::chebyshev(n, 0.0, length)?;
        let f = grid.sample(first);
        let g = grid.sample(second);
        Ok(Self { grid, first: f, second: g })
    }

    pub fn zero(n: usize, length: f64) -> Result<Self> {
        Self::from_fn(n, length, |_| 0.0, |_| 0.0)
    }

    /// Free data `(ψ^T(0, ·), ψ^T_t(0, ·))` of the ODE blow-up solution.
    pub fn ode_family(params: &PhysParams, blowup_time: f64, n: usize, length: f64) -> Result<Self> {
        let f = fundamental_solution(0.0, 0.0, blowup_time, params)?;
        let g = fundamental_solution_dt(0.0, 0.0, blowup_time, params)?;
        Self::from_fn(n, length, |_| f, |_| g)
    }

    /// Free data `(ψ¹(0, ·), ψ¹_t(0, ·))` plus `amplitude` times the Gaussian
    /// bump `e^{−(r−1/2)²/0.08}` in both components.
    pub fn bump_perturbation(params: &PhysParams, amplitude: f64, n: usize, length: f64) -> Result<Self> {
        let f = fundamental_solution(0.0, 0.0, 1.0, params)?;
        let g = fundamental_solution_dt(0.0, 0.0, 1.0, params)?;
        let bump = |r: f64| amplitude * (-(r - 0.5) * (r - 0.5) / 0.08).exp();
        Self::from_fn(n, length, |r| f + bump(r), |r| g + bump(r))
    }

    /// Relative data `v₁ = r g − (2r/(p−1)) κ^{1/(p−1)}`,
    /// `v₂ = f + r f′ − κ^{1/(p−1)}` built from free data `(f, g)`.
    pub fn relative_from_free(free: &RadialDataPair, params: &PhysParams) -> Self {
        let c = params.amplitude();
        let a = params.free_decay();
        let r = free.grid.nodes();
        let df = free.grid.derivative(&free.first);
        let v1 = DVector::from_fn(r.len(), |i, _| r[i] * free.second[i] - a * r[i] * c);
        let v2 = DVector::from_fn(r.len(), |i, _| free.first[i] + r[i] * df[i] - c);
        Self { grid: free.grid.clone(), first: v1, second: v2 }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn length(&self) -> f64 {
        self.grid.hi()
    }

    pub fn first(&self) -> &DVector<f64> {
        &self.first
    }

    pub fn second(&self) -> &DVector<f64> {
        &self.second
    }

    pub fn eval_first(&self, r: f64) -> f64 {
        self.grid.interpolate(&self.first, r)
    }

    pub fn eval_second(&self, r: f64) -> f64 {
        self.grid.interpolate(&self.second, r)
    }

    /// Componentwise difference on the same grid.
    pub fn difference(&self, other: &RadialDataPair) -> Result<Self> {
        if other.grid.n() != self.grid.n() || other.grid.hi() != self.grid.hi() {
            return Err(Error::GridMismatch { expected: self.grid.n(), found: other.grid.n() });
        }
        Ok(Self {
            grid: self.grid.clone(),
            first: &self.first - &other.first,
            second: &self.second - &other.second,
        })
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            grid: self.grid.clone(),
            first: &self.first * factor,
            second: &self.second * factor,
        }
    }

    /// Resamples onto `n` Chebyshev nodes over `[0, radius]`.
    pub fn restrict(&self, radius: f64, n: usize) -> Result<Self> {
        if radius > self.length() * (1.0 + 1e-12) {
            return Err(Error::OutOfDataDomain { requested: radius, available: self.length() });
        }
        let grid = Grid::chebyshev(n, 0.0, radius)?;
        let m = self.grid.interpolation_matrix(grid.nodes().as_slice());
        Ok(Self { first: &m * &self.first, second: &m * &self.second, grid })
    }
}

/// `κ(ρ) = κ_p^{1/(p−1)} (2ρ/(p−1), 1)`, the similarity representation of `ψ¹`.
fn kappa_vec(params: &PhysParams, rho: f64) -> (f64, f64) {
    let c = params.amplitude();
    (c * params.free_decay() * rho, c)
}

fn check_blowup_time(blowup_time: f64) -> Result<()> {
    let (lo, hi) = BLOWUP_TIME_RANGE;
    if !(blowup_time > lo && blowup_time < hi) {
        return Err(Error::BlowupTimeOutOfRange { blowup_time });
    }
    Ok(())
}

/// `U(v, T)(ρ) = T^{2/(p−1)}[v(Tρ) + κ(Tρ)] − κ(ρ)` sampled on `grid`.
pub fn initial_data(
    v: &RadialDataPair,
    blowup_time: f64,
    params: &PhysParams,
    grid: &Grid,
) -> Result<StateVector> {
    check_blowup_time(blowup_time)?;
    if blowup_time > v.length() * (1.0 + 1e-12) {
        return Err(Error::OutOfDataDomain { requested: blowup_time, available: v.length() });
    }
    let scale = v.first.amax().max(v.second.amax()).max(1.0);
    if v.first[0].abs() > 1e-12 * scale {
        return Err(Error::NotInDataSpace { value: v.first[0] });
    }
    let factor = blowup_time.powf(params.free_decay());
    let targets: alloc::vec::Vec<f64> = grid.nodes().iter().map(|&rho| blowup_time * rho).collect();
    let m = v.grid.interpolation_matrix(&targets);
    let v1 = &m * &v.first;
    let v2 = &m * &v.second;
    let mut u1 = DVector::zeros(grid.n());
    let mut u2 = DVector::zeros(grid.n());
    for (i, &rho) in grid.nodes().iter().enumerate() {
        let (k1s, k2s) = kappa_vec(params, blowup_time * rho);
        let (k1, k2) = kappa_vec(params, rho);
        u1[i] = factor * (v1[i] + k1s) - k1;
        u2[i] = factor * (v2[i] + k2s) - k2;
    }
    u1[0] = 0.0;
    StateVector::new(u1, u2)
}

/// The symmetry mode `g(ρ) = ((p+1)/(p−1) ρ, 1)`, eigenfunction of `L` with
/// eigenvalue 1 generated by shifts of the blow-up time.
pub fn gauge_mode(params: &PhysParams, grid: &Grid) -> StateVector {
    let slope = (params.p + 1.0) / (params.p - 1.0);
    StateVector::from_fn(grid, |rho| slope * rho, |_| 1.0)
}

/// Physical field `(ψ, ψ_t)` on the radial slice `[0, T−t]` at one instant.
#[derive(Debug, Clone)]
pub struct FieldSnapshot {
    pub t: f64,
    pub blowup_time: f64,
    /// Field and its time derivative, on `grid` over `[0, T−t]`.
    pub field: RadialDataPair,
    /// `(ψ^T, ψ^T_t)` on the same grid.
    pub background: RadialDataPair,
    /// `(ψ − ψ^T, ψ_t − ψ^T_t)`, evaluated directly rather than by subtraction.
    pub perturbation: RadialDataPair,
}

impl FieldSnapshot {
    pub fn radius(&self) -> f64 {
        self.field.length()
    }

    pub fn perturbation(&self) -> RadialDataPair {
        self.perturbation.clone()
    }
}

/// Reconstructs `(ψ, ψ_t)` at physical time `t = T − e^{−τ}` from
/// `φ = (φ₁, φ₂)(τ, ·)`. The radial slice uses the collocation nodes scaled to
/// `[0, T−t]`; at `r = 0` the removable singularities are resolved by the
/// averaged limit `φ₂(0)` and by `∂_ρφ₁(0)`.
pub fn reconstruct_field(
    phi: &StateVector,
    tau: f64,
    blowup_time: f64,
    params: &PhysParams,
    grid: &Grid,
) -> Result<FieldSnapshot> {
    phi.check_grid(grid)?;
    let radius = (-tau).exp();
    let t = blowup_time - radius;
    if t < -1e-12 * blowup_time {
        return Err(Error::InvalidArgument("reconstruction requires tau >= -log T"));
    }
    let a = params.free_decay();
    let scale = radius.powf(-a);
    let psi_bg = fundamental_solution(t, 0.0, blowup_time, params)?;
    let psi_t_bg = fundamental_solution_dt(t, 0.0, blowup_time, params)?;

    let averaged = k_op(&phi.u2_owned(), grid);
    let phi1 = phi.u1_owned();
    let dphi1 = grid.derivative(&phi1);
    let rho = grid.nodes();
    let n = grid.n();
    let delta = DVector::from_fn(n, |i, _| scale * averaged[i]);
    let delta_t = DVector::from_fn(n, |i, _| {
        let ratio = if i == 0 { dphi1[0] } else { phi1[i] / rho[i] };
        scale * ratio / radius
    });
    let psi = delta.add_scalar(psi_bg);
    let psi_t = delta_t.add_scalar(psi_t_bg);

    let r_grid = Grid::chebyshev(n, 0.0, radius)?;
    let field = RadialDataPair::from_values(r_grid.clone(), psi, psi_t)?;
    let background = RadialDataPair::from_values(
        r_grid.clone(),
        DVector::from_element(n, psi_bg),
        DVector::from_element(n, psi_t_bg),
    )?;
    let perturbation = RadialDataPair::from_values(r_grid, delta, delta_t)?;
    Ok(FieldSnapshot { t, blowup_time, field, background, perturbation })
}

/// Exact similarity-coordinate representation at time `τ` (relative to `T`)
/// of the ODE blow-up solution with blow-up time `other`.
pub fn ode_family_state(
    params: &PhysParams,
    blowup_time: f64,
    other: f64,
    tau: f64,
    grid: &Grid,
) -> StateVector {
    let remaining = (-tau).exp();
    let ratio = remaining / (other - blowup_time + remaining);
    let c = params.amplitude();
    let a = params.free_decay();
    let s1 = ratio.powf(a + 1.0) - 1.0;
    let s2 = ratio.powf(a) - 1.0;
    StateVector::from_fn(grid, |rho| c * a * rho * s1, |_| c * s2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::derive_params;
    use approx::assert_abs_diff_eq;

    fn setup() -> (PhysParams, Grid) {
        (derive_params(5.0, 0.1).unwrap(), Grid::unit(32).unwrap())
    }

    #[test]
    fn zero_data_at_unit_time_is_zero() {
        let (params, grid) = setup();
        let v = RadialDataPair::zero(32, DATA_LENGTH).unwrap();
        let u = initial_data(&v, 1.0, &params, &grid).unwrap();
        assert!(u.max_abs() < 1e-15);
    }

    #[test]
    fn zero_data_closed_form() {
        let (params, grid) = setup();
        let v = RadialDataPair::zero(32, DATA_LENGTH).unwrap();
        let c = params.amplitude();
        let p = params.p;
        for t in [0.6, 0.95, 1.3] {
            let u = initial_data(&v, t, &params, &grid).unwrap();
            for (i, &rho) in grid.nodes().iter().enumerate() {
                let e1 = c * 2.0 * rho / (p - 1.0) * (t.powf((p + 1.0) / (p - 1.0)) - 1.0);
                let e2 = c * (t.powf(2.0 / (p - 1.0)) - 1.0);
                assert_abs_diff_eq!(u.u1()[i], e1, epsilon = 1e-14);
                assert_abs_diff_eq!(u.u2()[i], e2, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn time_derivative_points_along_gauge_mode() {
        let (params, grid) = setup();
        let v = RadialDataPair::zero(32, DATA_LENGTH).unwrap();
        let h = 1e-5;
        let up = initial_data(&v, 1.0 + h, &params, &grid).unwrap();
        let um = initial_data(&v, 1.0 - h, &params, &grid).unwrap();
        let fd = (&up - &um).scale(0.5 / h);
        let expected = gauge_mode(&params, &grid).scale(params.free_decay() * params.amplitude());
        assert!((&fd - &expected).max_abs() < 1e-9);
    }

    #[test]
    fn blowup_time_outside_interval_rejected() {
        let (params, grid) = setup();
        let v = RadialDataPair::zero(32, DATA_LENGTH).unwrap();
        for t in [0.5, 1.5, 0.2, 2.0] {
            assert!(matches!(
                initial_data(&v, t, &params, &grid),
                Err(Error::BlowupTimeOutOfRange { .. })
            ));
        }
    }

    #[test]
    fn first_component_must_vanish_at_origin() {
        let (params, grid) = setup();
        let v = RadialDataPair::from_fn(16, DATA_LENGTH, |_| 1.0, |_| 0.0).unwrap();
        assert!(matches!(
            initial_data(&v, 1.0, &params, &grid),
            Err(Error::NotInDataSpace { .. })
        ));
    }

    #[test]
    fn gauge_mode_values() {
        let (params, grid) = setup();
        let g = gauge_mode(&params, &grid);
        assert_eq!(g.u1()[0], 0.0);
        for (i, &rho) in grid.nodes().iter().enumerate() {
            assert_abs_diff_eq!(g.u1()[i], 1.5 * rho, epsilon = 1e-15);
            assert_eq!(g.u2()[i], 1.0);
        }
    }

    #[test]
    fn ode_family_data_maps_to_exact_state() {
        let (params, grid) = setup();
        let free = RadialDataPair::ode_family(&params, 1.02, 24, DATA_LENGTH).unwrap();
        let v = RadialDataPair::relative_from_free(&free, &params);
        // At T = 1 the initial state is the family member seen from ψ¹ at τ = 0.
        let u = initial_data(&v, 1.0, &params, &grid).unwrap();
        let exact = ode_family_state(&params, 1.0, 1.02, 0.0, &grid);
        assert!((&u - &exact).max_abs() < 1e-13);
        // At T = T′ it vanishes.
        let u = initial_data(&v, 1.02, &params, &grid).unwrap();
        assert!(u.max_abs() < 1e-13);
    }

    #[test]
    fn zero_perturbation_reconstructs_background() {
        let (params, grid) = setup();
        let snap = reconstruct_field(&StateVector::zeros(32), 1.0, 1.0, &params, &grid).unwrap();
        let t = 1.0 - (-1.0f64).exp();
        let psi = fundamental_solution(t, 0.0, 1.0, &params).unwrap();
        let psi_t = fundamental_solution_dt(t, 0.0, 1.0, &params).unwrap();
        assert!(snap.field.first().iter().all(|&x| x == psi));
        assert!(snap.field.second().iter().all(|&x| x == psi_t));
        assert!((snap.radius() - (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn reconstruction_is_affine() {
        let (params, grid) = setup();
        let phi = StateVector::from_cosine_series(&grid, &[0.2, -0.1, 0.05], &[0.1, 0.3]);
        let alpha = -2.5;
        let a = reconstruct_field(&phi, 0.7, 1.1, &params, &grid).unwrap().perturbation();
        let b = reconstruct_field(&phi.scale(alpha), 0.7, 1.1, &params, &grid)
            .unwrap()
            .perturbation();
        for i in 0..32 {
            assert_abs_diff_eq!(b.first()[i], alpha * a.first()[i], epsilon = 1e-12);
            assert_abs_diff_eq!(b.second()[i], alpha * a.second()[i], epsilon = 1e-12);
        }
    }

    #[test]
    fn family_member_reconstructs_closed_form() {
        let (params, grid) = setup();
        for tau in [0.0, 0.5, 2.0] {
            let phi = ode_family_state(&params, 1.0, 1.02, tau, &grid);
            let snap = reconstruct_field(&phi, tau, 1.0, &params, &grid).unwrap();
            let psi = fundamental_solution(snap.t, 0.0, 1.02, &params).unwrap();
            let psi_t = fundamental_solution_dt(snap.t, 0.0, 1.02, &params).unwrap();
            for i in 0..32 {
                assert_abs_diff_eq!(snap.field.first()[i], psi, epsilon = 1e-12 * psi);
                assert_abs_diff_eq!(snap.field.second()[i], psi_t, epsilon = 1e-12 * psi_t);
            }
        }
    }

    #[test]
    fn reconstruction_before_initial_time_rejected() {
        let (params, grid) = setup();
        assert!(reconstruct_field(&StateVector::zeros(32), -0.5, 1.0, &params, &grid).is_err());
    }
}
