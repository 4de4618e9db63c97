//! The semi-discrete generator as an explicit operator.
//!
//! Flat state layout (size 4n - 2 + n_xi): the wave unknowns are
//! interleaved per node, (u_i, v_i, y_i, z_i) for i = 1..n-1 followed
//! by (u_n, v_n), so that shifted systems are narrow-banded; the
//! channel values follow as a tail block. The interleaving is an
//! implementation detail of the solvers — use [`StateLayout`] to
//! address components.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::frac_kernel::kappa;
use crate::wave_sim::{CoupledState, Simulator};

/// Index map between physical components and the flat layout.
#[derive(Debug, Clone, Copy)]
pub struct StateLayout {
    pub n: usize,
    pub n_xi: usize,
}

impl StateLayout {
    pub fn size(&self) -> usize {
        4 * self.n - 2 + self.n_xi
    }

    pub fn wave_size(&self) -> usize {
        4 * self.n - 2
    }

    /// u at node i (1-based, i = 1..=n)
    pub fn u(&self, i: usize) -> usize {
        debug_assert!((1..=self.n).contains(&i));
        4 * (i - 1)
    }

    /// v at node i (1-based)
    pub fn v(&self, i: usize) -> usize {
        4 * (i - 1) + 1
    }

    /// y at interior node i (1-based, i = 1..n)
    pub fn y(&self, i: usize) -> usize {
        debug_assert!((1..self.n).contains(&i));
        4 * (i - 1) + 2
    }

    /// z at interior node i (1-based)
    pub fn z(&self, i: usize) -> usize {
        4 * (i - 1) + 3
    }

    /// channel j (0-based)
    pub fn omega(&self, j: usize) -> usize {
        debug_assert!(j < self.n_xi);
        4 * self.n - 2 + j
    }
}

/// Explicit form of the assembled generator. Immutable and shareable;
/// every solver owns its own factorizations.
#[derive(Debug, Clone)]
pub struct Generator {
    sim: Simulator,
    layout: StateLayout,
    kappa: f64,
}

pub fn build_generator(sim: &Simulator) -> Generator {
    let layout = StateLayout { n: sim.n_nodes(), n_xi: sim.grid().len() };
    Generator { sim: sim.clone(), kappa: kappa(sim.params()), layout }
}

impl Generator {
    pub fn layout(&self) -> StateLayout {
        self.layout
    }

    pub fn size(&self) -> usize {
        self.layout.size()
    }

    pub fn sim(&self) -> &Simulator {
        &self.sim
    }

    pub fn state_to_flat(&self, state: &CoupledState) -> Vec<f64> {
        let l = self.layout;
        let mut x = vec![0.0; l.size()];
        for i in 1..=l.n {
            x[l.u(i)] = state.u[i - 1];
            x[l.v(i)] = state.v[i - 1];
            if i < l.n {
                x[l.y(i)] = state.y[i - 1];
                x[l.z(i)] = state.z[i - 1];
            }
        }
        for j in 0..l.n_xi {
            x[l.omega(j)] = state.channels.omega[j];
        }
        x
    }

    pub fn flat_to_state(&self, x: &[f64], t: f64) -> CoupledState {
        let l = self.layout;
        let mut st = self.sim.zero_state();
        for i in 1..=l.n {
            st.u[i - 1] = x[l.u(i)];
            st.v[i - 1] = x[l.v(i)];
            if i < l.n {
                st.y[i - 1] = x[l.y(i)];
                st.z[i - 1] = x[l.z(i)];
            }
        }
        for j in 0..l.n_xi {
            st.channels.omega[j] = x[l.omega(j)];
        }
        st.t = t;
        st
    }

    /// out = A x on the flat layout.
    pub fn matvec(&self, x: &[f64], out: &mut [f64]) {
        let l = self.layout;
        assert_eq!(x.len(), l.size());
        assert_eq!(out.len(), l.size());
        let n = l.n;
        let h = self.sim.domain().h();
        let p = self.sim.params();
        let g = self.sim.grid();
        for i in 1..=n {
            out[l.u(i)] = x[l.v(i)];
            if i < n {
                let um = if i == 1 { 0.0 } else { x[l.u(i - 1)] };
                out[l.v(i)] =
                    (um - 2.0 * x[l.u(i)] + x[l.u(i + 1)]) / (h * h) - p.b * x[l.z(i)];
                let ym = if i == 1 { 0.0 } else { x[l.y(i - 1)] };
                let yp = if i == n - 1 { 0.0 } else { x[l.y(i + 1)] };
                out[l.y(i)] = x[l.z(i)];
                out[l.z(i)] =
                    p.a * (ym - 2.0 * x[l.y(i)] + yp) / (h * h) + p.b * x[l.v(i)];
            } else {
                let mut flux = 0.0;
                for j in 0..l.n_xi {
                    flux += g.weights()[j] * g.mu_vals()[j] * x[l.omega(j)];
                }
                flux *= -p.gamma * self.kappa;
                out[l.v(n)] =
                    2.0 * (x[l.u(n - 1)] - x[l.u(n)]) / (h * h) + 2.0 / h * flux;
            }
        }
        let vb = x[l.v(n)];
        for j in 0..l.n_xi {
            let xi = g.nodes()[j];
            out[l.omega(j)] = -(xi * xi + p.eta) * x[l.omega(j)] + g.mu_vals()[j] * vb;
        }
    }

    /// Complex matvec through the real matrix.
    pub fn matvec_complex(&self, x: &[Complex64], out: &mut [Complex64]) {
        let m = self.size();
        let mut re = vec![0.0; m];
        let mut im = vec![0.0; m];
        for (k, &v) in x.iter().enumerate() {
            re[k] = v.re;
            im[k] = v.im;
        }
        let mut ore = vec![0.0; m];
        let mut oim = vec![0.0; m];
        self.matvec(&re, &mut ore);
        self.matvec(&im, &mut oim);
        for k in 0..m {
            out[k] = Complex64::new(ore[k], oim[k]);
        }
    }

    /// The nonzero entries as (row, col, value); intended for small
    /// cross-validation problems, not production solves.
    pub fn triplets(&self) -> Vec<(usize, usize, f64)> {
        let l = self.layout;
        let n = l.n;
        let h = self.sim.domain().h();
        let p = self.sim.params();
        let g = self.sim.grid();
        let mut t = Vec::new();
        for i in 1..=n {
            t.push((l.u(i), l.v(i), 1.0));
            if i < n {
                if i > 1 {
                    t.push((l.v(i), l.u(i - 1), 1.0 / (h * h)));
                }
                t.push((l.v(i), l.u(i), -2.0 / (h * h)));
                t.push((l.v(i), l.u(i + 1), 1.0 / (h * h)));
                t.push((l.v(i), l.z(i), -p.b));
                t.push((l.y(i), l.z(i), 1.0));
                if i > 1 {
                    t.push((l.z(i), l.y(i - 1), p.a / (h * h)));
                }
                t.push((l.z(i), l.y(i), -2.0 * p.a / (h * h)));
                if i < n - 1 {
                    t.push((l.z(i), l.y(i + 1), p.a / (h * h)));
                }
                t.push((l.z(i), l.v(i), p.b));
            } else {
                t.push((l.v(n), l.u(n - 1), 2.0 / (h * h)));
                t.push((l.v(n), l.u(n), -2.0 / (h * h)));
                for j in 0..l.n_xi {
                    let c = -2.0 / h * p.gamma * self.kappa * g.weights()[j] * g.mu_vals()[j];
                    t.push((l.v(n), l.omega(j), c));
                }
            }
        }
        for j in 0..l.n_xi {
            let xi = g.nodes()[j];
            t.push((l.omega(j), l.omega(j), -(xi * xi + p.eta)));
            t.push((l.omega(j), l.v(n), g.mu_vals()[j]));
        }
        t
    }

    /// Energy inner product <x, y> on the flat layout (the quadratic
    /// form whose value at (x, x) is twice the discrete energy).
    pub fn energy_inner(&self, x: &[f64], y: &[f64]) -> f64 {
        let l = self.layout;
        let n = l.n;
        let h = self.sim.domain().h();
        let p = self.sim.params();
        let g = self.sim.grid();
        let mut acc = 0.0;
        for i in 1..=n {
            let m = if i == n { 0.5 * h } else { h };
            acc += m * x[l.v(i)] * y[l.v(i)];
            let (xm, ym) = if i == 1 {
                (0.0, 0.0)
            } else {
                (x[l.u(i - 1)], y[l.u(i - 1)])
            };
            acc += h * ((x[l.u(i)] - xm) / h) * ((y[l.u(i)] - ym) / h);
        }
        for i in 1..=n {
            let (xm, ym) = if i == 1 {
                (0.0, 0.0)
            } else {
                (x[l.y(i - 1)], y[l.y(i - 1)])
            };
            let (xc, yc) = if i == n { (0.0, 0.0) } else { (x[l.y(i)], y[l.y(i)]) };
            acc += p.a * h * ((xc - xm) / h) * ((yc - ym) / h);
            if i < n {
                acc += h * x[l.z(i)] * y[l.z(i)];
            }
        }
        for j in 0..l.n_xi {
            acc += p.gamma * self.kappa * g.weights()[j] * x[l.omega(j)] * y[l.omega(j)];
        }
        acc
    }

    /// Exact dissipation value -gamma kappa sum w (xi^2 + eta) omega^2
    /// of a flat state; Re<Ax, x> in the energy inner product equals
    /// this identically.
    pub fn dissipation_form(&self, x: &[f64]) -> f64 {
        let l = self.layout;
        let p = self.sim.params();
        let g = self.sim.grid();
        let mut acc = 0.0;
        for j in 0..l.n_xi {
            let xi = g.nodes()[j];
            let o = x[l.omega(j)];
            acc += g.weights()[j] * (xi * xi + p.eta) * o * o;
        }
        -p.gamma * self.kappa * acc
    }
}

/// Factored square root of the energy Gram matrix: block-bidiagonal
/// B with energy(x) = |B x|^2 / 2. Applying or inverting B costs O(N),
/// which lets the resolvent norm be estimated in the energy norm rather
/// than the raw coefficient norm. Requires gamma > 0 (otherwise the
/// channel block of the energy degenerates to a seminorm).
#[derive(Debug, Clone)]
pub struct EnergyFactor {
    layout: StateLayout,
    sqrt_h: f64,
    /// lumped-mass square roots for v (plain h, half cell at the end)
    mv: Vec<f64>,
    /// Cholesky of the y-stiffness: diagonal and subdiagonal
    ly_diag: Vec<f64>,
    ly_sub: Vec<f64>,
    sqrt_hz: f64,
    /// per-channel sqrt(gamma kappa w_j)
    womega: Vec<f64>,
}

impl EnergyFactor {
    pub fn new(gen: &Generator) -> Result<Self> {
        let l = gen.layout;
        let n = l.n;
        let h = gen.sim.domain().h();
        let p = gen.sim.params();
        if !(p.gamma > 0.0) {
            return Err(Error::Hypothesis(
                "energy factor needs gamma > 0 (channel weight degenerates otherwise)".into(),
            ));
        }
        let mut mv = vec![h.sqrt(); n];
        mv[n - 1] = (0.5 * h).sqrt();
        // Cholesky of a * K_y, K_y = tridiag(-1/h, 2/h, -1/h), size n-1
        let mut ly_diag = vec![0.0; n - 1];
        let mut ly_sub = vec![0.0; n - 1]; // ly_sub[i] couples row i to i-1
        let diag = 2.0 * p.a / h;
        let off = -p.a / h;
        for i in 0..n - 1 {
            let mut d = diag;
            if i > 0 {
                ly_sub[i] = off / ly_diag[i - 1];
                d -= ly_sub[i] * ly_sub[i];
            }
            ly_diag[i] = d.sqrt();
        }
        let womega = gen
            .sim
            .grid()
            .weights()
            .iter()
            .map(|&w| (p.gamma * gen.kappa * w).sqrt())
            .collect();
        Ok(EnergyFactor {
            layout: l,
            sqrt_h: h.sqrt(),
            mv,
            ly_diag,
            ly_sub,
            sqrt_hz: h.sqrt(),
            womega,
        })
    }

    /// y = B x
    pub fn apply(&self, x: &[Complex64], out: &mut [Complex64]) {
        let l = self.layout;
        let n = l.n;
        let inv_sh = 1.0 / self.sqrt_h;
        for i in 1..=n {
            let um = if i == 1 {
                Complex64::new(0.0, 0.0)
            } else {
                x[l.u(i - 1)]
            };
            out[l.u(i)] = (x[l.u(i)] - um) * inv_sh;
            out[l.v(i)] = x[l.v(i)] * self.mv[i - 1];
        }
        // y-block: L^T x (upper bidiagonal) so that |L^T x|^2 = x^T (aK) x
        for i in 1..n {
            let xi = x[l.y(i)];
            let xnext = if i < n - 1 {
                x[l.y(i + 1)]
            } else {
                Complex64::new(0.0, 0.0)
            };
            out[l.y(i)] = xi * self.ly_diag[i - 1]
                + if i < n - 1 {
                    xnext * self.ly_sub[i]
                } else {
                    Complex64::new(0.0, 0.0)
                };
            out[l.z(i)] = x[l.z(i)] * self.sqrt_hz;
        }
        for j in 0..l.n_xi {
            out[l.omega(j)] = x[l.omega(j)] * self.womega[j];
        }
    }

    /// solves B x = y in place
    pub fn solve(&self, x: &mut [Complex64]) {
        let l = self.layout;
        let n = l.n;
        // u: forward substitution of the scaled difference
        let mut prev = Complex64::new(0.0, 0.0);
        for i in 1..=n {
            let val = x[l.u(i)] * self.sqrt_h + prev;
            x[l.u(i)] = val;
            prev = val;
        }
        for i in 1..=n {
            x[l.v(i)] /= self.mv[i - 1];
        }
        // y: back substitution of L^T
        for i in (1..n).rev() {
            let next = if i < n - 1 {
                x[l.y(i + 1)] * self.ly_sub[i]
            } else {
                Complex64::new(0.0, 0.0)
            };
            x[l.y(i)] = (x[l.y(i)] - next) / self.ly_diag[i - 1];
        }
        for i in 1..n {
            x[l.z(i)] /= self.sqrt_hz;
        }
        for j in 0..l.n_xi {
            x[l.omega(j)] /= self.womega[j];
        }
    }

    /// y = B^T x
    pub fn apply_transpose(&self, x: &[Complex64], out: &mut [Complex64]) {
        let l = self.layout;
        let n = l.n;
        let inv_sh = 1.0 / self.sqrt_h;
        for i in 1..=n {
            let next = if i < n { x[l.u(i + 1)] } else { Complex64::new(0.0, 0.0) };
            out[l.u(i)] = (x[l.u(i)] - next) * inv_sh;
            out[l.v(i)] = x[l.v(i)] * self.mv[i - 1];
        }
        for i in 1..n {
            let prev = if i > 1 {
                x[l.y(i - 1)] * self.ly_sub[i - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            // transpose of the upper-bidiagonal apply
            out[l.y(i)] = x[l.y(i)] * self.ly_diag[i - 1]
                + if i > 1 { prev } else { Complex64::new(0.0, 0.0) };
            out[l.z(i)] = x[l.z(i)] * self.sqrt_hz;
        }
        for j in 0..l.n_xi {
            out[l.omega(j)] = x[l.omega(j)] * self.womega[j];
        }
    }

    /// solves B^T x = y in place
    pub fn solve_transpose(&self, x: &mut [Complex64]) {
        let l = self.layout;
        let n = l.n;
        // u-block transpose: (B^T x)_i = (x_i - x_{i+1}) / sqrt_h with
        // x_{n+1} = 0, so u_i = sqrt_h * b_i + u_{i+1} from the top
        let mut next = Complex64::new(0.0, 0.0);
        for i in (1..=n).rev() {
            let val = x[l.u(i)] * self.sqrt_h + next;
            x[l.u(i)] = val;
            next = val;
        }
        for i in 1..=n {
            x[l.v(i)] /= self.mv[i - 1];
        }
        // y-block transpose is lower bidiagonal: forward substitution
        for i in 1..n {
            let prev = if i > 1 {
                x[l.y(i - 1)] * self.ly_sub[i - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            x[l.y(i)] = (x[l.y(i)] - prev) / self.ly_diag[i - 1];
        }
        for i in 1..n {
            x[l.z(i)] /= self.sqrt_hz;
        }
        for j in 0..l.n_xi {
            x[l.omega(j)] /= self.womega[j];
        }
    }
}
