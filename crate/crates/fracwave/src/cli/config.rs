//! Flat key = value run configuration.
//!
//! The format is plain text: one `key = value` pair per line, `#`
//! starts a comment. Unknown keys are rejected so that typos fail fast
//! instead of silently running defaults.
//!
//! ```text
//! # physics
//! alpha = 0.5        # fractional order in (0,1)
//! eta = 1.0          # kernel shift >= 0
//! gamma = 1.0        # boundary gain >= 0
//! a = 1.0            # second wave speed squared
//! b = 0.1            # velocity coupling
//! d = 1              # kernel dimension >= 1
//! # discretization
//! length = 1.0
//! n_cells = 200
//! xi_min = 1e-4
//! xi_max = 1e4
//! n_xi = 400
//! # grid_tol = 1e-8  # when set, overrides xi_min/xi_max by tail bounds
//! dt = 1e-3
//! t_final = 200.0
//! cadence = 100      # record every k-th step
//! # experiment
//! init = sine        # sine | zero | cascade
//! cascade_modes = 300
//! # fit_t1 = 50.0    # defaults to t_final / 4
//! # fit_t2 = 200.0   # defaults to t_final
//! seed = 0
//! # spectral
//! n0 = 10
//! scan_n_min = 10
//! scan_n_max = 40
//! branches = 1       # 1 | 2 | both
//! resolvent_n_min = 10
//! resolvent_n_max = 60
//! resolvent_placement = discrete   # discrete | pi
//! ```

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frac_kernel::DiffusiveGrid;
use crate::params::FracParams;
use crate::spectral_probe::SamplePlacement;
use crate::wave_sim::Domain1D;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum InitialData {
    Sine,
    Zero,
    Cascade,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub alpha: f64,
    pub eta: f64,
    pub gamma: f64,
    pub a: f64,
    pub b: f64,
    pub d: u32,
    pub length: f64,
    pub n_cells: usize,
    pub xi_min: f64,
    pub xi_max: f64,
    pub n_xi: usize,
    pub grid_tol: Option<f64>,
    pub dt: f64,
    pub t_final: f64,
    pub cadence: usize,
    pub init: InitialData,
    pub cascade_modes: usize,
    pub fit_t1: Option<f64>,
    pub fit_t2: Option<f64>,
    pub seed: u64,
    pub n0: u64,
    pub scan_n_min: i64,
    pub scan_n_max: i64,
    pub branches: String,
    pub resolvent_n_min: usize,
    pub resolvent_n_max: usize,
    pub resolvent_placement: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            alpha: 0.5,
            eta: 1.0,
            gamma: 1.0,
            a: 1.0,
            b: 0.1,
            d: 1,
            length: 1.0,
            n_cells: 200,
            xi_min: 1e-4,
            xi_max: 1e4,
            n_xi: 400,
            grid_tol: None,
            dt: 1e-3,
            t_final: 200.0,
            cadence: 100,
            init: InitialData::Sine,
            cascade_modes: 100,
            fit_t1: None,
            fit_t2: None,
            seed: 0,
            n0: 10,
            scan_n_min: 10,
            scan_n_max: 40,
            branches: "1".into(),
            resolvent_n_min: 10,
            resolvent_n_max: 60,
            resolvent_placement: "discrete".into(),
        }
    }
}

fn parse_num<T: std::str::FromStr>(key: &str, val: &str) -> Result<T> {
    val.parse()
        .map_err(|_| Error::Config(format!("cannot parse {key} = {val:?}")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = RunConfig::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, val) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value", lineno + 1))
            })?;
            let (key, val) = (key.trim(), val.trim());
            match key {
                "alpha" => cfg.alpha = parse_num(key, val)?,
                "eta" => cfg.eta = parse_num(key, val)?,
                "gamma" => cfg.gamma = parse_num(key, val)?,
                "a" => cfg.a = parse_num(key, val)?,
                "b" => cfg.b = parse_num(key, val)?,
                "d" => cfg.d = parse_num(key, val)?,
                "length" => cfg.length = parse_num(key, val)?,
                "n_cells" => cfg.n_cells = parse_num(key, val)?,
                "xi_min" => cfg.xi_min = parse_num(key, val)?,
                "xi_max" => cfg.xi_max = parse_num(key, val)?,
                "n_xi" => cfg.n_xi = parse_num(key, val)?,
                "grid_tol" => cfg.grid_tol = Some(parse_num(key, val)?),
                "dt" => cfg.dt = parse_num(key, val)?,
                "t_final" => cfg.t_final = parse_num(key, val)?,
                "cadence" => cfg.cadence = parse_num(key, val)?,
                "init" => {
                    cfg.init = match val {
                        "sine" => InitialData::Sine,
                        "zero" => InitialData::Zero,
                        "cascade" => InitialData::Cascade,
                        _ => {
                            return Err(Error::Config(format!(
                                "init must be sine | zero | cascade, got {val:?}"
                            )))
                        }
                    }
                }
                "cascade_modes" => cfg.cascade_modes = parse_num(key, val)?,
                "fit_t1" => cfg.fit_t1 = Some(parse_num(key, val)?),
                "fit_t2" => cfg.fit_t2 = Some(parse_num(key, val)?),
                "seed" => cfg.seed = parse_num(key, val)?,
                "n0" => cfg.n0 = parse_num(key, val)?,
                "scan_n_min" => cfg.scan_n_min = parse_num(key, val)?,
                "scan_n_max" => cfg.scan_n_max = parse_num(key, val)?,
                "branches" => cfg.branches = val.to_string(),
                "resolvent_n_min" => cfg.resolvent_n_min = parse_num(key, val)?,
                "resolvent_n_max" => cfg.resolvent_n_max = parse_num(key, val)?,
                "resolvent_placement" => cfg.resolvent_placement = val.to_string(),
                _ => return Err(Error::Config(format!("unknown key {key:?}"))),
            }
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn params(&self) -> FracParams {
        FracParams {
            alpha: self.alpha,
            eta: self.eta,
            gamma: self.gamma,
            a: self.a,
            b: self.b,
            d: self.d,
        }
    }

    pub fn domain(&self) -> Result<Domain1D> {
        Domain1D::new(self.length, self.n_cells)
    }

    pub fn grid(&self) -> Result<DiffusiveGrid> {
        let p = self.params();
        match self.grid_tol {
            Some(tol) => DiffusiveGrid::for_tolerance(&p, tol, self.n_xi),
            None => DiffusiveGrid::with_bounds(&p, self.xi_min, self.xi_max, self.n_xi, 1e-4),
        }
    }

    pub fn fit_window(&self) -> (f64, f64) {
        (
            self.fit_t1.unwrap_or(self.t_final / 4.0),
            self.fit_t2.unwrap_or(self.t_final),
        )
    }

    pub fn placement(&self) -> Result<SamplePlacement> {
        match self.resolvent_placement.as_str() {
            "discrete" => Ok(SamplePlacement::DiscreteFrequency),
            "pi" => Ok(SamplePlacement::MultiplesOfPi),
            other => Err(Error::Config(format!(
                "resolvent_placement must be discrete | pi, got {other:?}"
            ))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.params().validate()?;
        self.domain()?;
        if !(self.dt > 0.0) {
            return Err(Error::Config(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.t_final >= 0.0) {
            return Err(Error::Config(format!(
                "t_final must be >= 0, got {}",
                self.t_final
            )));
        }
        if self.n_xi < 2 {
            return Err(Error::Config(format!("n_xi must be >= 2, got {}", self.n_xi)));
        }
        if self.scan_n_max < self.scan_n_min {
            return Err(Error::Config("scan_n_max < scan_n_min".into()));
        }
        if self.resolvent_n_min == 0 || self.resolvent_n_max < self.resolvent_n_min {
            return Err(Error::Config("bad resolvent sweep range".into()));
        }
        if !matches!(self.branches.as_str(), "1" | "2" | "both") {
            return Err(Error::Config(format!(
                "branches must be 1 | 2 | both, got {:?}",
                self.branches
            )));
        }
        self.placement()?;
        // a resolvent sample at lambda = 0 only exists for eta > 0
        if self.eta == 0.0 && self.resolvent_n_min == 0 {
            return Err(Error::Config(
                "eta = 0 with a lambda = 0 resolvent request is singular".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_known_keys_and_comments() {
        let cfg = RunConfig::parse("alpha = 0.3 # order\n\n# comment\nn_cells = 64\n").unwrap();
        assert_eq!(cfg.alpha, 0.3);
        assert_eq!(cfg.n_cells, 64);
        assert_eq!(cfg.eta, 1.0);
    }

    #[test]
    fn unknown_key_is_an_error() {
        assert!(matches!(
            RunConfig::parse("alpa = 0.3\n"),
            Err(Error::Config(_))
        ));
    }

    #[test]
    fn malformed_line_is_an_error() {
        assert!(RunConfig::parse("alpha 0.3\n").is_err());
        assert!(RunConfig::parse("alpha = zebra\n").is_err());
    }

    #[test]
    fn validation_rejects_bad_physics() {
        assert!(RunConfig::parse("alpha = 1.5\n").is_err());
        assert!(RunConfig::parse("dt = 0\n").is_err());
        assert!(RunConfig::parse("branches = 3\n").is_err());
    }
}
