//! Radial quadrature grid for the diffusive variable xi.
//!
//! The integrands of interest are algebraically singular at 0 and
//! algebraically decaying at infinity, so the nodes are geometric:
//! uniform in s = ln(rho). In log space every integrand we evaluate is
//! analytic in a strip and decays exponentially in both directions,
//! where the trapezoidal rule converges faster than any power of the
//! spacing; the dominant error is the truncation of the two tails.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frac_kernel::kernels::{kappa, mu, surface_factor};
use crate::params::FracParams;

/// Discretization of the radial xi axis with quadrature weights that
/// fold in the solid-angle factor and the Jacobian rho^(d-1), so that
/// `sum(w_j g(xi_j))` approximates the integral of `g(|xi|)` over R^d
/// for radial `g`.
#[derive(Debug, Clone)]
pub struct DiffusiveGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    mu_vals: Vec<f64>,
    surface_factor: f64,
    xi_min: f64,
    xi_max: f64,
    tail_tol: f64,
}

/// Truncation bounds for the reference integrand
/// rho^(2 alpha - 1) / (1 + eta + rho^2) (the radial form of the
/// squared-kernel integral, which has the slowest tails of every
/// integrand evaluated on the grid):
///
///   upper tail:  pref * X^(2a-2) / (2-2a) <= tol/2,
///   lower tail:  pref * x^(2a)   / (2a)   <= tol/2,
///
/// with pref = kappa * surface = 2 sin(a pi) / pi.
fn tail_bounds(alpha: f64, tol: f64) -> (f64, f64) {
    let pref = 2.0 * (alpha * std::f64::consts::PI).sin() / std::f64::consts::PI;
    let hi = (2.0 * pref / ((2.0 - 2.0 * alpha) * tol)).powf(1.0 / (2.0 - 2.0 * alpha));
    let lo = ((2.0 * alpha) * tol / (2.0 * pref)).powf(1.0 / (2.0 * alpha));
    (lo, hi)
}

impl DiffusiveGrid {
    /// Grid on [xi_min, xi_max] chosen so both truncation tails of the
    /// reference integrand stay below `tail_tol`.
    pub fn for_tolerance(params: &FracParams, tail_tol: f64, n_nodes: usize) -> Result<Self> {
        if !(tail_tol > 0.0) {
            return Err(Error::Config(format!("tail_tol must be > 0, got {tail_tol}")));
        }
        let (lo, hi) = tail_bounds(params.alpha, tail_tol);
        Self::with_bounds(params, lo, hi, n_nodes, tail_tol)
    }

    /// Grid with a caller-chosen upper cutoff; the lower cutoff comes
    /// from the tail bound at the default tolerance 1e-8.
    pub fn build(params: &FracParams, xi_max: f64, n_nodes: usize) -> Result<Self> {
        let tol = 1e-8;
        let (lo, _) = tail_bounds(params.alpha, tol);
        Self::with_bounds(params, lo.min(xi_max / 1e4), xi_max, n_nodes, tol)
    }

    /// The simulation default: [1e-4, 1e4] with 400 nodes.
    pub fn default_for(params: &FracParams) -> Result<Self> {
        Self::with_bounds(params, 1e-4, 1e4, 400, 1e-4)
    }

    pub fn with_bounds(
        params: &FracParams,
        xi_min: f64,
        xi_max: f64,
        n_nodes: usize,
        tail_tol: f64,
    ) -> Result<Self> {
        if n_nodes < 2 {
            return Err(Error::Config(format!("need at least 2 nodes, got {n_nodes}")));
        }
        if !(xi_max > 0.0) || !(xi_min > 0.0) || xi_min >= xi_max {
            return Err(Error::Config(format!(
                "need 0 < xi_min < xi_max, got [{xi_min}, {xi_max}]"
            )));
        }
        let d = params.d as f64;
        let sf = surface_factor(params.d);
        let s0 = xi_min.ln();
        let ds = (xi_max.ln() - s0) / (n_nodes - 1) as f64;
        let mut nodes = Vec::with_capacity(n_nodes);
        let mut weights = Vec::with_capacity(n_nodes);
        let mut mu_vals = Vec::with_capacity(n_nodes);
        for j in 0..n_nodes {
            let rho = (s0 + ds * j as f64).exp();
            let trap = if j == 0 || j == n_nodes - 1 { 0.5 } else { 1.0 };
            nodes.push(rho);
            // dxi over R^d for radial g: S_d rho^(d-1) drho = S_d rho^d ds
            weights.push(sf * rho.powf(d) * ds * trap);
            mu_vals.push(mu(rho, params)?);
        }
        Ok(DiffusiveGrid {
            nodes,
            weights,
            mu_vals,
            surface_factor: sf,
            xi_min,
            xi_max,
            tail_tol,
        })
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn mu_vals(&self) -> &[f64] {
        &self.mu_vals
    }

    pub fn surface_factor(&self) -> f64 {
        self.surface_factor
    }

    pub fn xi_min(&self) -> f64 {
        self.xi_min
    }

    pub fn xi_max(&self) -> f64 {
        self.xi_max
    }

    pub fn tail_tol(&self) -> f64 {
        self.tail_tol
    }

    /// Quadrature of a radial function over R^d.
    pub fn integrate_radial(&self, g: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * g(x))
            .sum()
    }

    pub fn integrate_radial_complex(&self, g: impl Fn(f64) -> Complex64) -> Complex64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| g(x) * w)
            .sum()
    }

    /// Grid approximation of gamma kappa int mu^2 / (1 + eta + |xi|^2) dxi;
    /// its closed form is gamma (1 + eta)^(alpha - 1).
    pub fn static_impedance_quadrature(&self, params: &FracParams) -> f64 {
        let k = kappa(params);
        let s: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.mu_vals)
            .map(|((&x, &w), &m)| w * m * m / (1.0 + params.eta + x * x))
            .sum();
        params.gamma * k * s
    }

    /// Grid approximation of the pair (I1, I2) at frequency lambda.
    pub fn lambda_integrals_quadrature(
        &self,
        lambda: f64,
        params: &FracParams,
    ) -> (Complex64, Complex64) {
        let k = kappa(params);
        let s: Complex64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.mu_vals)
            .map(|((&x, &w), &m)| w * m * m / Complex64::new(params.eta + x * x, lambda))
            .sum();
        let i2 = params.gamma * k * s;
        (Complex64::new(0.0, lambda) * i2, i2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frac_kernel::kernels::{closed_form_moment_integrals, closed_form_static_impedance};
    use approx::assert_relative_eq;

    fn params(alpha: f64, eta: f64, d: u32) -> FracParams {
        FracParams { alpha, eta, gamma: 1.0, a: 1.0, b: 0.1, d }
    }

    #[test]
    fn minimal_two_node_grid_is_valid() {
        let g = DiffusiveGrid::with_bounds(&params(0.5, 0.0, 1), 0.1, 10.0, 2, 1.0).unwrap();
        assert_eq!(g.len(), 2);
        assert!(g.weights().iter().all(|&w| w > 0.0));
        assert!(g.nodes()[0] < g.nodes()[1]);
    }

    #[test]
    fn rejects_bad_configuration() {
        assert!(DiffusiveGrid::with_bounds(&params(0.5, 0.0, 1), 1e-4, 1e4, 1, 1e-6).is_err());
        assert!(DiffusiveGrid::build(&params(0.5, 0.0, 1), -1.0, 10).is_err());
    }

    #[test]
    fn nodes_increasing_weights_positive_mu_recomputable() {
        let p = params(0.75, 1.0, 3);
        let g = DiffusiveGrid::for_tolerance(&p, 1e-7, 300).unwrap();
        for j in 0..g.len() {
            assert!(g.nodes()[j] > 0.0);
            if j > 0 {
                assert!(g.nodes()[j] > g.nodes()[j - 1]);
            }
            assert!(g.weights()[j] > 0.0);
            let m = mu(g.nodes()[j], &p).unwrap();
            assert_relative_eq!(g.mu_vals()[j], m, max_relative = 1e-15);
        }
    }

    #[test]
    fn static_impedance_matches_closed_form_on_lattice() {
        for &alpha in &[0.25, 0.5, 0.75] {
            for &eta in &[0.0, 1.0] {
                for d in 1..=3u32 {
                    let p = FracParams { alpha, eta, gamma: 1.0, a: 1.0, b: 0.0, d };
                    let g = DiffusiveGrid::for_tolerance(&p, 1e-8, 400).unwrap();
                    let q = g.static_impedance_quadrature(&p);
                    let e = closed_form_static_impedance(&p);
                    assert!(
                        ((q - e) / e).abs() < 1e-6,
                        "alpha={alpha} eta={eta} d={d}: {q} vs {e}"
                    );
                }
            }
        }
    }

    #[test]
    fn default_example_grid_hits_unit_impedance() {
        // gamma = 1, eta = 0, alpha = 1/2, d = 1: closed form is exactly 1
        let p = params(0.5, 0.0, 1);
        let g = DiffusiveGrid::for_tolerance(&p, 1e-8, 400).unwrap();
        assert_relative_eq!(g.static_impedance_quadrature(&p), 1.0, max_relative = 1e-6);
    }

    #[test]
    fn doubling_nodes_reduces_impedance_error() {
        // fixed bracket, increasing node count: error decreases monotonically
        let p = params(0.5, 0.0, 1);
        let exact = closed_form_static_impedance(&p);
        let mut last = f64::INFINITY;
        for &n in &[25usize, 50, 100, 200] {
            let g = DiffusiveGrid::with_bounds(&p, 1e-6, 1e6, n, 1e-6).unwrap();
            let err = (g.static_impedance_quadrature(&p) - exact).abs();
            assert!(err < last, "n={n}: err {err} >= previous {last}");
            last = err;
        }
    }

    #[test]
    fn lambda_integrals_match_closed_form() {
        use crate::frac_kernel::kernels::closed_form_lambda_integrals;
        for &lambda in &[0.5, 5.0, 50.0] {
            let p = params(0.5, 1.0, 1);
            let g = DiffusiveGrid::for_tolerance(&p, 1e-7, 400).unwrap();
            let (q1, q2) = g.lambda_integrals_quadrature(lambda, &p);
            let (e1, e2) = closed_form_lambda_integrals(lambda, &p).unwrap();
            assert!((q1 - e1).norm() / e1.norm() < 1e-5, "I1 at lambda={lambda}");
            assert!((q2 - e2).norm() / e2.norm() < 1e-5, "I2 at lambda={lambda}");
        }
    }

    #[test]
    fn moment_integrals_match_closed_form() {
        for d in 2..=3u32 {
            for &alpha in &[0.25, 0.5, 0.75] {
                let p = params(alpha, 1.0, d);
                let g = DiffusiveGrid::for_tolerance(&p, 1e-8, 400).unwrap();
                let lam: f64 = 10.0;
                let base = lam + p.eta;
                let df = d as f64;
                let b1q = g.integrate_radial(|x| x.powf(alpha + df / 2.0) / (base + x * x).powf(df + 1.0));
                let a2q = g.integrate_radial(|x| x.powf(2.0 * df - 2.0) / (base + x * x).powf(2.0 * df));
                let a3q = g.integrate_radial(|x| x.powf(2.0 * df) / (base + x * x).powf(2.0 * df + 2.0));
                let (b1, a2, a3) = closed_form_moment_integrals(lam, &p).unwrap();
                assert!(((b1q - b1) / b1).abs() < 1e-5, "B1 d={d} alpha={alpha}");
                assert!(((a2q - a2) / a2).abs() < 1e-5, "A2 d={d} alpha={alpha}");
                assert!(((a3q - a3) / a3).abs() < 1e-5, "A3 d={d} alpha={alpha}");
            }
        }
    }

    #[test]
    fn finiteness_guard_sums_converge_under_refinement() {
        // grid sums of |xi|^2 mu^2 / (1 + eta + xi^2)^2 stabilize as the
        // grid refines (the continuum integral is finite)
        let p = params(0.5, 1.0, 2);
        let mut prev = None;
        for &n in &[100usize, 200, 400, 800] {
            let g = DiffusiveGrid::for_tolerance(&p, 1e-9, n).unwrap();
            let s = g.integrate_radial(|x| {
                let m = x.powf((2.0 * p.alpha - p.d as f64) / 2.0);
                x * x * m * m / (1.0 + p.eta + x * x).powi(2)
            });
            if let Some(q) = prev {
                assert!((s - q as f64).abs() / s < 1e-4, "n={n}: {s} vs {q}");
            }
            prev = Some(s);
        }
    }
}
