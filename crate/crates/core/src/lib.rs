//! Numerical machinery for the stable self-similar blow-up of the radial
//! focusing wave equation `ψ_tt − Δψ = |ψ|^{p−1}ψ` in three dimensions.
//!
//! Everything is expressed in similarity coordinates `τ = −log(T−t)`,
//! `ρ = r/(T−t)` inside the backward lightcone of the blow-up point, where the
//! perturbation of the ODE blow-up solution `ψ^T` becomes a first-order system
//! on `ρ ∈ [0, 1]`:
//!
//! * [`params`], [`similarity`], [`data`]: physical constants, the exact
//!   solution family, coordinate maps, the initial-data operator `U(v, T)` and
//!   reconstruction of the physical field.
//! * [`grid`], [`state`], [`norms`]: Chebyshev–Lobatto collocation on `[0, 1]`,
//!   grid functions and the function-space norms.
//! * [`nonlin`]: the scalar and vector nonlinearities.
//! * [`linop`]: discretized linear operators, semigroups, the spectral
//!   projection onto the gauge mode and resolvent scans.
//! * [`spectral`]: complex Γ, ₂F₁, the connection coefficient and the
//!   closed-form eigenvalue search.
//! * [`evolution`]: nonlinear time stepping, the Lyapunov–Perron fixed point,
//!   blow-up time selection and the decay estimate for the physical field.
//!
//! The crate is `no_std` and only needs an allocator.
#![no_std]
// `!(x > 0.0)` style guards are meant to reject NaN as well.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod data;
pub mod error;
pub mod evolution;
pub mod grid;
pub mod linop;
pub mod nonlin;
pub mod norms;
pub mod params;
pub mod similarity;
pub mod spectral;
pub mod state;

pub use data::{gauge_mode, initial_data, FieldSnapshot, RadialDataPair};
pub use error::{Error, Result};
pub use grid::Grid;
pub use params::PhysParams;
pub use similarity::SimilarityPoint;
pub use state::{StateVector, Trajectory};

pub use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64;
