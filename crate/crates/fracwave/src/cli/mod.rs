//! Command-line driver: configuration, experiment orchestration, and
//! CSV/manifest emission. Identical configuration and seed produce
//! byte-identical outputs.

mod commands;
mod config;
mod output;

pub use commands::{cmd_quadcheck, cmd_simulate, cmd_spectrum};
pub use config::{InitialData, RunConfig};
pub use output::{
    ensure_dir, write_channels_csv, write_eigs_csv, write_manifest, write_resolvent_csv,
    write_state_csv, write_trace_csv, GridMeta, Manifest,
};

use std::path::Path;

use crate::error::Error;

/// Exit code contract: 0 success, 1 invalid configuration or IO,
/// 2 numerical failure.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::Domain(_)
        | Error::Input(_)
        | Error::Geometry(_)
        | Error::Hypothesis(_)
        | Error::Structural(_)
        | Error::SingularCase(_) => 1,
        Error::Numerical(_) | Error::NearSpectrum { .. } | Error::Fit(_) => 2,
    }
}

/// Loads a config file, or defaults when no path is given.
pub fn load_config(path: Option<&Path>) -> crate::error::Result<RunConfig> {
    match path {
        None => Ok(RunConfig::default()),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", p.display())))?;
            RunConfig::parse(&text)
        }
    }
}
