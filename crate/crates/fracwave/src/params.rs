use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical and fractional constants of the coupled system.
///
/// `alpha` is the order of the fractional time derivative, `eta` the
/// exponential shift in its kernel, `gamma` the boundary control gain,
/// `a` the squared propagation speed of the second wave, `b` the
/// velocity-coupling constant and `d` the spatial dimension used by the
/// kernel layer (the time-domain solver is one-dimensional).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FracParams {
    pub alpha: f64,
    pub eta: f64,
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub d: u32,
}

impl FracParams {
    pub fn new(alpha: f64, eta: f64, gamma: f64, a: f64, b: f64, d: u32) -> Result<Self> {
        let p = FracParams { alpha, eta, gamma, a, b, d };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::Domain(format!(
                "alpha must lie in (0, 1), got {}",
                self.alpha
            )));
        }
        if !(self.eta >= 0.0) {
            return Err(Error::Domain(format!("eta must be >= 0, got {}", self.eta)));
        }
        // gamma = 0 is the conservative limit used by the energy
        // cross-checks; damping statements assume gamma > 0.
        if !(self.gamma >= 0.0) {
            return Err(Error::Domain(format!("gamma must be >= 0, got {}", self.gamma)));
        }
        if !(self.a > 0.0) {
            return Err(Error::Domain(format!("a must be > 0, got {}", self.a)));
        }
        if !self.b.is_finite() {
            return Err(Error::Domain(format!("b must be finite, got {}", self.b)));
        }
        if self.d < 1 {
            return Err(Error::Domain(format!("d must be >= 1, got {}", self.d)));
        }
        Ok(())
    }
}

impl Default for FracParams {
    /// Defaults used throughout the experiments: equal wave speeds,
    /// unit gain, shifted kernel, weak coupling.
    fn default() -> Self {
        FracParams {
            alpha: 0.5,
            eta: 1.0,
            gamma: 1.0,
            a: 1.0,
            b: 0.1,
            d: 1,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_alpha_outside_unit_interval() {
        assert!(FracParams::new(0.0, 1.0, 1.0, 1.0, 0.1, 1).is_err());
        assert!(FracParams::new(1.0, 1.0, 1.0, 1.0, 0.1, 1).is_err());
        assert!(FracParams::new(0.5, 1.0, 1.0, 1.0, 0.1, 1).is_ok());
    }

    #[test]
    fn rejects_bad_signs() {
        assert!(FracParams::new(0.5, -0.1, 1.0, 1.0, 0.1, 1).is_err());
        assert!(FracParams::new(0.5, 0.0, -1.0, 1.0, 0.1, 1).is_err());
        assert!(FracParams::new(0.5, 0.0, 1.0, -1.0, 0.1, 1).is_err());
        assert!(FracParams::new(0.5, 0.0, 1.0, 1.0, 0.1, 0).is_err());
    }

    #[test]
    fn conservative_limit_is_allowed() {
        assert!(FracParams::new(0.5, 1.0, 0.0, 1.0, 0.1, 1).is_ok());
    }
}
