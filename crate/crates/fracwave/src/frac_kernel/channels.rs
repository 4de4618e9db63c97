//! The auxiliary diffusive state: one scalar ODE per xi-node,
//! `omega_j' = -(xi_j^2 + eta) omega_j + mu(xi_j) * drive(t)`,
//! advanced with the trapezoidal rule. The rule is A-stable, which
//! matters because xi_j^2 spans many decades on the grid.

use crate::error::{Error, Result};
use crate::frac_kernel::grid::DiffusiveGrid;
use crate::frac_kernel::kernels::kappa;
use crate::params::FracParams;

/// Channel values at one damped boundary point, sized to a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct DiffusiveChannels {
    pub omega: Vec<f64>,
}

impl DiffusiveChannels {
    pub fn zeros(grid: &DiffusiveGrid) -> Self {
        DiffusiveChannels { omega: vec![0.0; grid.len()] }
    }

    pub fn len(&self) -> usize {
        self.omega.len()
    }

    pub fn is_empty(&self) -> bool {
        self.omega.is_empty()
    }

    /// Weighted l2 norm squared, the discrete analogue of the
    /// L2(Gamma_1 x R^d) norm: sum w_j omega_j^2.
    pub fn weighted_norm_sq(&self, grid: &DiffusiveGrid) -> f64 {
        self.omega
            .iter()
            .zip(grid.weights())
            .map(|(&o, &w)| w * o * o)
            .sum()
    }

    /// sum w_j (xi_j^2 + eta) omega_j^2; scaled by gamma kappa this is
    /// the instantaneous energy dissipation rate.
    pub fn weighted_dissipation(&self, grid: &DiffusiveGrid, params: &FracParams) -> f64 {
        self.omega
            .iter()
            .zip(grid.weights())
            .zip(grid.nodes())
            .map(|((&o, &w), &x)| w * (x * x + params.eta) * o * o)
            .sum()
    }

    /// Diffusive output kappa sum w_j mu_j omega_j, the discrete
    /// realization of the fractional integral of the drive.
    pub fn output(&self, grid: &DiffusiveGrid, params: &FracParams) -> f64 {
        let s: f64 = self
            .omega
            .iter()
            .zip(grid.weights())
            .zip(grid.mu_vals())
            .map(|((&o, &w), &m)| w * m * o)
            .sum();
        kappa(params) * s
    }
}

/// One trapezoidal step of every channel ODE. `drive` is the average of
/// the driving signal over the step (for the coupled system, the
/// midpoint boundary velocity).
pub fn evolve_channels(
    channels: &mut DiffusiveChannels,
    drive: f64,
    dt: f64,
    params: &FracParams,
    grid: &DiffusiveGrid,
) -> Result<()> {
    if channels.len() != grid.len() {
        return Err(Error::Structural(format!(
            "channels sized {} but grid has {} nodes",
            channels.len(),
            grid.len()
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
    }
    let s = 0.5 * dt;
    for j in 0..channels.omega.len() {
        let decay = grid.nodes()[j] * grid.nodes()[j] + params.eta;
        channels.omega[j] = ((1.0 - s * decay) * channels.omega[j]
            + dt * grid.mu_vals()[j] * drive)
            / (1.0 + s * decay);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn setup(alpha: f64, eta: f64) -> (FracParams, DiffusiveGrid) {
        let p = FracParams { alpha, eta, gamma: 1.0, a: 1.0, b: 0.1, d: 1 };
        let g = DiffusiveGrid::for_tolerance(&p, 1e-7, 200).unwrap();
        (p, g)
    }

    #[test]
    fn zero_drive_decays_like_exponential() {
        // moderate decay rates so the trapezoidal rule tracks exp well
        let p = FracParams { alpha: 0.5, eta: 0.5, gamma: 1.0, a: 1.0, b: 0.0, d: 1 };
        let g = DiffusiveGrid::with_bounds(&p, 0.5, 2.0, 8, 1.0).unwrap();
        let mut ch = DiffusiveChannels { omega: vec![1.0; g.len()] };
        let dt = 1e-4;
        for _ in 0..10_000 {
            evolve_channels(&mut ch, 0.0, dt, &p, &g).unwrap();
        }
        for j in 0..g.len() {
            let rate = g.nodes()[j] * g.nodes()[j] + p.eta;
            let exact = (-rate * 1.0f64).exp();
            assert!(
                (ch.omega[j] - exact).abs() < 1e-6 * exact,
                "node {j}: {} vs {exact}",
                ch.omega[j]
            );
        }
    }

    #[test]
    fn constant_drive_reaches_steady_state() {
        // moderate rates: the trapezoidal update contracts quickly and
        // its fixed point is the exact steady state
        let p = FracParams { alpha: 0.5, eta: 1.0, gamma: 1.0, a: 1.0, b: 0.0, d: 1 };
        let g = DiffusiveGrid::with_bounds(&p, 1e-2, 20.0, 64, 1.0).unwrap();
        let mut ch = DiffusiveChannels::zeros(&g);
        let drive = 0.7;
        let dt = 0.05;
        for _ in 0..20_000 {
            evolve_channels(&mut ch, drive, dt, &p, &g).unwrap();
        }
        for j in 0..g.len() {
            let decay = g.nodes()[j] * g.nodes()[j] + p.eta;
            let exact = g.mu_vals()[j] * drive / decay;
            assert!(
                (ch.omega[j] - exact).abs() <= 1e-9 * exact.abs().max(1e-12),
                "node {j}: {} vs {exact}",
                ch.omega[j]
            );
        }
    }

    #[test]
    fn size_mismatch_is_structural_error() {
        let (p, g) = setup(0.5, 1.0);
        let mut ch = DiffusiveChannels { omega: vec![0.0; g.len() + 1] };
        assert!(matches!(
            evolve_channels(&mut ch, 0.0, 1e-3, &p, &g),
            Err(Error::Structural(_))
        ));
    }

    proptest! {
        // With zero drive the weighted "dissipation" seminorm never grows.
        #[test]
        fn zero_drive_never_increases_weighted_energy(
            seed_vals in prop::collection::vec(-1.0..1.0f64, 50),
            dt in 1e-4..0.5f64,
        ) {
            let (p, g) = setup(0.4, 0.3);
            let mut ch = DiffusiveChannels::zeros(&g);
            let len = ch.len();
            for (j, v) in seed_vals.iter().enumerate() {
                ch.omega[j % len] += v;
            }
            let mut prev = ch.weighted_dissipation(&g, &p);
            for _ in 0..25 {
                evolve_channels(&mut ch, 0.0, dt, &p, &g).unwrap();
                let cur = ch.weighted_dissipation(&g, &p);
                prop_assert!(cur <= prev * (1.0 + 1e-13));
                prev = cur;
            }
        }
    }
}
