//! Frequency-domain analysis of the discretized generator: resolvent
//! norms along the imaginary axis, eigenvalues near the cluster points,
//! and comparison against the closed-form high-frequency expansions.

mod eigen;
mod generator;
mod resolvent;
mod shifted;

pub use eigen::{
    asymptotic_eigenvalue, cascade_initial_state, characteristic_det, characteristic_root_near,
    classify_case, eigen_near, eigen_pair_near, spectrum_scan, AsymptoticCase, Branch, ScanEntry,
    SpectrumReport, EIGEN_TOL,
};
pub use generator::{build_generator, EnergyFactor, Generator, StateLayout};
pub use resolvent::{
    log_log_slope, resolvent_norm, resolvent_residual, resolvent_sweep, SamplePlacement,
    RESOLVENT_MAX_ITERS, RESOLVENT_TOL,
};

use crate::wave_sim::Simulator;

impl Generator {
    /// Alias for [`build_generator`].
    pub fn from_sim(sim: &Simulator) -> Self {
        build_generator(sim)
    }
}
