//! Closed-form spectral analysis: the eigenvalue problem of `L` reduces to the
//! hypergeometric equation in `z = ρ²`, and eigenvalues are the zeros of the
//! connection coefficient `c₀(λ)`.

mod connection;
mod eigenfunction;
mod gamma;
mod hyp2f1;
mod roots;

pub use connection::{connection_c0, connection_c1, pole_factor, ConnectionValue, HypGeomParams};
pub use eigenfunction::{eigen_residual, eigenfunction_profile, EIGEN_RESIDUAL_TOLERANCE};
pub use gamma::{gamma, ln_gamma, recip_gamma, sin_pi};
pub use hyp2f1::hyp2f1;
pub use roots::{
    find_connection_zeros, find_eigenvalues, sample_c0, winding_number, C0Sample, RootSearch,
    SearchRegion, SpectralReport,
};
