//! Direct (convolution) realizations of the shifted fractional
//! operators, used as the reference against which the diffusive
//! realization is checked.
//!
//! Both operators share the kernel t^(p-1) e^(-eta t). The quadrature
//! is product integration: the data is interpolated per step (constant
//! derivative for the derivative operator, linear values for the
//! integral operator) and the kernel is integrated exactly over each
//! step through incomplete-gamma moments, so the singularity at t = 0
//! is never sampled.

use statrs::function::gamma::{gamma, gamma_li};

use crate::error::{Error, Result};
use crate::frac_kernel::channels::{evolve_channels, DiffusiveChannels};
use crate::frac_kernel::grid::DiffusiveGrid;
use crate::params::FracParams;

/// Lower incomplete gamma, defined at x = 0 as well.
fn lower_inc(p: f64, x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        gamma_li(p, x)
    }
}

/// int_lo^hi tau^(p-1) e^(-eta tau) dtau for p > 0, 0 <= lo < hi.
fn kernel_moment(p: f64, eta: f64, lo: f64, hi: f64) -> f64 {
    debug_assert!(p > 0.0 && lo >= 0.0 && hi >= lo);
    if eta == 0.0 {
        (hi.powf(p) - lo.powf(p)) / p
    } else {
        (lower_inc(p, eta * hi) - lower_inc(p, eta * lo)) / eta.powf(p)
    }
}

/// Shifted Caputo derivative of order alpha on a uniform time grid
/// (L1 product integration: piecewise-constant derivative, exact
/// kernel moments). Returns one value per sample; the value at t = 0
/// is 0 by definition.
pub fn caputo_direct(samples: &[f64], dt: f64, params: &FracParams) -> Result<Vec<f64>> {
    if samples.len() < 2 {
        return Err(Error::Input(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
    }
    let n = samples.len();
    let p = 1.0 - params.alpha;
    let norm = gamma(p);
    // m0[k] = int over lag window [k dt, (k+1) dt) of tau^(-alpha) e^(-eta tau)
    let m0: Vec<f64> = (0..n - 1)
        .map(|k| kernel_moment(p, params.eta, k as f64 * dt, (k + 1) as f64 * dt))
        .collect();
    let mut out = vec![0.0; n];
    for i in 1..n {
        let mut acc = 0.0;
        for j in 0..i {
            // s in [t_j, t_{j+1}) maps to lag tau = t_i - s in [(i-j-1) dt, (i-j) dt)
            let df = (samples[j + 1] - samples[j]) / dt;
            acc += df * m0[i - j - 1];
        }
        out[i] = acc / norm;
    }
    Ok(out)
}

/// Shifted fractional integral of order beta = 1 - alpha on a uniform
/// grid (piecewise-linear data, exact kernel moments).
pub fn frac_integral_direct(samples: &[f64], dt: f64, params: &FracParams) -> Result<Vec<f64>> {
    if samples.len() < 2 {
        return Err(Error::Input(format!(
            "need at least 2 samples, got {}",
            samples.len()
        )));
    }
    if !(dt > 0.0) {
        return Err(Error::Domain(format!("dt must be > 0, got {dt}")));
    }
    let n = samples.len();
    let beta = 1.0 - params.alpha;
    let norm = gamma(beta);
    let m0: Vec<f64> = (0..n - 1)
        .map(|k| kernel_moment(beta, params.eta, k as f64 * dt, (k + 1) as f64 * dt))
        .collect();
    let m1: Vec<f64> = (0..n - 1)
        .map(|k| kernel_moment(beta + 1.0, params.eta, k as f64 * dt, (k + 1) as f64 * dt))
        .collect();
    let mut out = vec![0.0; n];
    for i in 1..n {
        let mut acc = 0.0;
        for k in 1..=i {
            // tau in [(k-1) dt, k dt); data is linear in tau between
            // samples[i-k+1] (at the left edge) and samples[i-k]
            let a = (k - 1) as f64 * dt;
            let near = samples[i - k + 1];
            let far = samples[i - k];
            acc += near * m0[k - 1] + (far - near) * (m1[k - 1] - a * m0[k - 1]) / dt;
        }
        out[i] = acc / norm;
    }
    Ok(out)
}

/// Drives the diffusive channels with `signal`, forms the quadrature
/// output, and compares it against the direct product-integration
/// fractional integral of the same signal. Returns the maximum
/// deviation over the window relative to the peak reference value
/// (0.0 for the all-zero signal).
pub fn diffusive_vs_direct(
    signal: &[f64],
    dt: f64,
    params: &FracParams,
    grid: &DiffusiveGrid,
) -> Result<f64> {
    if signal.len() < 2 {
        return Err(Error::Input(format!(
            "need at least 2 samples, got {}",
            signal.len()
        )));
    }
    let reference = frac_integral_direct(signal, dt, params)?;
    let mut channels = DiffusiveChannels::zeros(grid);
    let mut max_dev: f64 = 0.0;
    let mut max_ref: f64 = 0.0;
    for i in 1..signal.len() {
        let drive = 0.5 * (signal[i - 1] + signal[i]);
        evolve_channels(&mut channels, drive, dt, params, grid)?;
        let o = channels.output(grid, params);
        max_dev = max_dev.max((o - reference[i]).abs());
        max_ref = max_ref.max(reference[i].abs());
    }
    if max_ref == 0.0 {
        return Ok(if max_dev == 0.0 { 0.0 } else { f64::INFINITY });
    }
    Ok(max_dev / max_ref)
}
