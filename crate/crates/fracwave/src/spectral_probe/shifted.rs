//! Factored solver for (sigma I - A) at a complex shift.
//!
//! The channel block of the generator is diagonal, so the channels are
//! eliminated exactly: the wave block picks up one rational correction
//! on the damped-velocity diagonal (the grid realization of the
//! boundary impedance at that frequency) and stays banded. One complex
//! band factorization then serves both the solve and the adjoint solve.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frac_kernel::kappa;
use crate::linalg::{Banded, BandedLu};
use crate::spectral_probe::generator::{Generator, StateLayout};

pub struct ShiftedSolver {
    layout: StateLayout,
    lu: BandedLu<Complex64>,
    /// sigma + xi_j^2 + eta per channel
    den: Vec<Complex64>,
    /// damped-row coupling (2/h) gamma kappa w_j mu_j per channel
    bw: Vec<f64>,
    mu: Vec<f64>,
}

impl ShiftedSolver {
    pub fn new(gen: &Generator, sigma: Complex64) -> Result<Self> {
        let l = gen.layout();
        let n = l.n;
        let sim = gen.sim();
        let h = sim.domain().h();
        let p = sim.params();
        let g = sim.grid();
        let kap = kappa(p);

        let den: Vec<Complex64> = g
            .nodes()
            .iter()
            .map(|&x| sigma + Complex64::new(x * x + p.eta, 0.0))
            .collect();
        if let Some(j) = den.iter().position(|d| d.norm_sqr() == 0.0) {
            return Err(Error::NearSpectrum {
                lambda: sigma.im,
                detail: format!("shift coincides with channel pole {j}"),
            });
        }
        let bw: Vec<f64> = g
            .weights()
            .iter()
            .zip(g.mu_vals())
            .map(|(&w, &m)| 2.0 / h * p.gamma * kap * w * m)
            .collect();
        // boundary impedance produced by the eliminated channels
        let mut q = Complex64::new(0.0, 0.0);
        for j in 0..l.n_xi {
            q += bw[j] * g.mu_vals()[j] / den[j];
        }

        let size = l.wave_size();
        let mut mat = Banded::<Complex64>::zeros(size, 5, 5);
        let one = Complex64::new(1.0, 0.0);
        let h2 = h * h;
        for i in 1..=n {
            mat.set(l.u(i), l.u(i), sigma);
            mat.set(l.u(i), l.v(i), -one);
            if i < n {
                mat.set(l.v(i), l.v(i), sigma);
                if i > 1 {
                    mat.set(l.v(i), l.u(i - 1), Complex64::new(-1.0 / h2, 0.0));
                }
                mat.set(l.v(i), l.u(i), Complex64::new(2.0 / h2, 0.0));
                mat.set(l.v(i), l.u(i + 1), Complex64::new(-1.0 / h2, 0.0));
                mat.set(l.v(i), l.z(i), Complex64::new(p.b, 0.0));
                mat.set(l.y(i), l.y(i), sigma);
                mat.set(l.y(i), l.z(i), -one);
                mat.set(l.z(i), l.z(i), sigma);
                if i > 1 {
                    mat.set(l.z(i), l.y(i - 1), Complex64::new(-p.a / h2, 0.0));
                }
                mat.set(l.z(i), l.y(i), Complex64::new(2.0 * p.a / h2, 0.0));
                if i < n - 1 {
                    mat.set(l.z(i), l.y(i + 1), Complex64::new(-p.a / h2, 0.0));
                }
                mat.set(l.z(i), l.v(i), Complex64::new(-p.b, 0.0));
            } else {
                mat.set(l.v(n), l.v(n), sigma + q);
                mat.set(l.v(n), l.u(n - 1), Complex64::new(-2.0 / h2, 0.0));
                mat.set(l.v(n), l.u(n), Complex64::new(2.0 / h2, 0.0));
            }
        }
        let lu = mat.factor().map_err(|e| Error::NearSpectrum {
            lambda: sigma.im,
            detail: format!("band factorization failed: {e}"),
        })?;
        Ok(ShiftedSolver { layout: l, lu, den, bw, mu: g.mu_vals().to_vec() })
    }

    /// x = (sigma I - A)^(-1) f, full layout.
    pub fn solve(&self, f: &[Complex64]) -> Vec<Complex64> {
        let l = self.layout;
        assert_eq!(f.len(), l.size());
        let mut xw: Vec<Complex64> = f[..l.wave_size()].to_vec();
        // fold the channel part of the right-hand side into the damped row
        let vb = l.v(l.n);
        for j in 0..l.n_xi {
            xw[vb] -= self.bw[j] * f[l.omega(j)] / self.den[j];
        }
        self.lu.solve_in_place(&mut xw);
        let mut x = vec![Complex64::new(0.0, 0.0); l.size()];
        x[..l.wave_size()].copy_from_slice(&xw);
        let vbv = x[vb];
        for j in 0..l.n_xi {
            x[l.omega(j)] = (f[l.omega(j)] + self.mu[j] * vbv) / self.den[j];
        }
        x
    }

    /// x = (sigma I - A)^(-H) f (adjoint solve), via the transpose
    /// factorization and conjugation.
    pub fn solve_adjoint(&self, f: &[Complex64]) -> Vec<Complex64> {
        let l = self.layout;
        assert_eq!(f.len(), l.size());
        // solve M^T y = conj(f), return conj(y); Schur structure of M^T
        // mirrors the forward one with the roles of the two coupling
        // blocks exchanged.
        let g: Vec<Complex64> = f.iter().map(|v| v.conj()).collect();
        let vb = l.v(l.n);
        let mut yw: Vec<Complex64> = g[..l.wave_size()].to_vec();
        for j in 0..l.n_xi {
            // C^T D^{-1} g_c lands on the damped-velocity row with the
            // channel-equation coupling -mu_j
            yw[vb] += self.mu[j] * g[l.omega(j)] / self.den[j];
        }
        self.lu.solve_transpose_in_place(&mut yw);
        let mut y = vec![Complex64::new(0.0, 0.0); l.size()];
        y[..l.wave_size()].copy_from_slice(&yw);
        let ybv = y[vb];
        for j in 0..l.n_xi {
            // channel rows of M^T: den_j omega_j + (B^T y_w)_j = g_c
            y[l.omega(j)] = (g[l.omega(j)] - self.bw[j] * ybv) / self.den[j];
        }
        for v in &mut y {
            *v = v.conj();
        }
        y
    }
}
