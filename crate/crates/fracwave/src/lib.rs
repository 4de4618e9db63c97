//! Numerical laboratory for coupled wave equations with fractional
//! boundary damping.
//!
//! The nonlocal fractional boundary condition is realized through a
//! continuum of first-order channels in an auxiliary variable xi (the
//! diffusive representation), discretized by a geometric radial
//! quadrature. On top of that sit:
//!
//! * [`frac_kernel`] — kernel weights, the radial grid, channel
//!   evolution, direct convolution operators and the closed forms that
//!   validate the quadrature;
//! * [`wave_sim`] — a 1D coupled wave solver with an implicit-midpoint
//!   stepper whose discrete energy balance is exact, plus energy-decay
//!   fitting and geometry admissibility checks;
//! * [`spectral_probe`] — the semi-discrete generator as a matrix,
//!   resolvent-norm scans along the imaginary axis, shift-invert
//!   eigenvalue computation and the closed-form eigenvalue asymptotics;
//! * [`cli`] — configuration parsing, experiment drivers and CSV/JSON
//!   emission used by the `fracwave` binary.
//!
//! The runnable examples under `examples/` demonstrate one capability
//! each; `cargo run --example <name>` prints a short report.

// validations use the !(x > 0.0) form on purpose: unlike the negated
// rewrite, it also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod frac_kernel;
pub mod linalg;
pub mod params;
pub mod spectral_probe;
pub mod wave_sim;

pub use error::{Error, Result};
pub use params::FracParams;
