//! Energy bookkeeping along a run and the log-log decay-rate fit.

use crate::error::{Error, Result};

/// Time series of the discrete energy, the midpoint dissipation rate,
/// and the per-step balance residual, plus run-wide summaries
/// (monotonicity and worst residual) observed at every step even
/// between recorded samples.
#[derive(Debug, Clone, Default)]
pub struct EnergyTrace {
    times: Vec<f64>,
    energy: Vec<f64>,
    dissipation: Vec<f64>,
    residual: Vec<f64>,
    max_residual: f64,
    monotone: bool,
}

impl EnergyTrace {
    pub fn new() -> Self {
        EnergyTrace { monotone: true, ..Default::default() }
    }

    pub(crate) fn push(&mut self, t: f64, e: f64, d: f64, r: f64) {
        self.times.push(t);
        self.energy.push(e);
        self.dissipation.push(d);
        self.residual.push(r);
    }

    pub(crate) fn observe_step(&mut self, e_prev: f64, e_next: f64, residual: f64) {
        if e_next > e_prev {
            self.monotone = false;
        }
        if residual > self.max_residual {
            self.max_residual = residual;
        }
    }

    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn energy(&self) -> &[f64] {
        &self.energy
    }

    pub fn dissipation(&self) -> &[f64] {
        &self.dissipation
    }

    pub fn residual(&self) -> &[f64] {
        &self.residual
    }

    /// Worst per-step balance residual seen during the run.
    pub fn max_residual(&self) -> f64 {
        self.max_residual
    }

    /// True when the energy never increased between consecutive steps.
    pub fn monotone(&self) -> bool {
        self.monotone
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Running maximum of t^p E(t) restricted to t >= t_start.
    pub fn running_max_weighted(&self, p: f64, t_start: f64) -> Vec<(f64, f64)> {
        let mut out = Vec::new();
        let mut m = f64::NEG_INFINITY;
        for (&t, &e) in self.times.iter().zip(&self.energy) {
            if t < t_start {
                continue;
            }
            m = m.max(t.powf(p) * e);
            out.push((t, m));
        }
        out
    }
}

/// Normalized per-step balance defect
/// |E_next - E_prev + dt * D_mid| / E_ref. For the midpoint stepper
/// this is a discrete identity, so the value is pure roundoff.
pub fn dissipation_residual(e_prev: f64, e_next: f64, dt: f64, d_mid: f64, e_ref: f64) -> f64 {
    (e_next - e_prev + dt * d_mid).abs() / e_ref.max(f64::MIN_POSITIVE)
}

/// Reference energy decay exponent -2/(1 - alpha).
pub fn reference_decay_exponent(alpha: f64) -> f64 {
    -2.0 / (1.0 - alpha)
}

/// Least-squares slope of log E against log t over the window
/// [t1, t2]. Requires t1 > 0, at least three samples in the window and
/// strictly positive energies there.
pub fn decay_exponent(trace: &EnergyTrace, window: (f64, f64)) -> Result<f64> {
    let (t1, t2) = window;
    if !(t1 > 0.0 && t2 > t1) {
        return Err(Error::Fit(format!("invalid window [{t1}, {t2}]")));
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for (&t, &e) in trace.times().iter().zip(trace.energy()) {
        if t < t1 || t > t2 {
            continue;
        }
        if !(e > 0.0) {
            return Err(Error::Fit(format!("nonpositive energy {e} at t = {t}")));
        }
        xs.push(t.ln());
        ys.push(e.ln());
    }
    if xs.len() < 3 {
        return Err(Error::Fit(format!(
            "only {} samples in window [{t1}, {t2}]",
            xs.len()
        )));
    }
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    if sxx == 0.0 {
        return Err(Error::Fit("window too narrow for a slope".into()));
    }
    Ok(sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn synthetic(power: f64) -> EnergyTrace {
        let mut tr = EnergyTrace::new();
        for i in 1..=400 {
            let t = i as f64 * 0.5;
            tr.push(t, t.powf(power), 0.0, 0.0);
        }
        tr
    }

    #[test]
    fn exact_power_law_recovered() {
        let tr = synthetic(-4.0);
        let s = decay_exponent(&tr, (10.0, 150.0)).unwrap();
        assert_relative_eq!(s, -4.0, max_relative = 1e-12);
    }

    #[test]
    fn reference_exponents() {
        assert_relative_eq!(reference_decay_exponent(0.5), -4.0, max_relative = 1e-15);
        assert_relative_eq!(
            reference_decay_exponent(0.3),
            -2.0 / 0.7,
            max_relative = 1e-15
        );
    }

    #[test]
    fn rejects_bad_windows_and_energies() {
        let tr = synthetic(-2.0);
        assert!(decay_exponent(&tr, (0.0, 10.0)).is_err());
        assert!(decay_exponent(&tr, (5.0, 5.0)).is_err());
        assert!(decay_exponent(&tr, (199.6, 200.0)).is_err());
        let mut bad = EnergyTrace::new();
        bad.push(1.0, 1.0, 0.0, 0.0);
        bad.push(2.0, 0.0, 0.0, 0.0);
        bad.push(3.0, 1.0, 0.0, 0.0);
        assert!(decay_exponent(&bad, (0.5, 3.5)).is_err());
    }

    #[test]
    fn residual_is_balance_defect() {
        assert!(dissipation_residual(1.0, 0.9, 0.1, 1.0, 1.0) < 1e-15);
        assert_relative_eq!(
            dissipation_residual(1.0, 0.95, 0.1, 1.0, 2.0),
            0.025,
            max_relative = 1e-14
        );
    }
}
