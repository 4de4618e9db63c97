//! Fractional-calculus kernels: the diffusive weight and normalization,
//! radial quadrature in the diffusive variable, channel evolution, and
//! the direct convolution operators used as cross-checks.

mod caputo;
mod channels;
mod grid;
mod kernels;

pub use caputo::{caputo_direct, diffusive_vs_direct, frac_integral_direct};
pub use channels::{evolve_channels, DiffusiveChannels};
pub use grid::DiffusiveGrid;
pub use kernels::{
    moment_constants, closed_form_moment_integrals, closed_form_lambda_integrals, closed_form_static_impedance,
    kappa, mu, surface_factor,
};
