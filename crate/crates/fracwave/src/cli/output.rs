//! CSV and manifest emission. Floating-point values print through the
//! shortest round-trip formatter, so re-parsing a file reproduces the
//! exact bits and identical runs produce identical bytes.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frac_kernel::{DiffusiveChannels, DiffusiveGrid};
use crate::spectral_probe::ScanEntry;
use crate::wave_sim::{CoupledState, EnergyTrace, Simulator};

fn io_err(e: std::io::Error) -> Error {
    Error::Config(format!("io: {e}"))
}

pub fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(io_err)
}

pub fn write_trace_csv(path: &Path, trace: &EnergyTrace) -> Result<()> {
    let mut out = String::from("t,energy,dissipation,residual\n");
    for i in 0..trace.len() {
        out.push_str(&format!(
            "{},{},{},{}\n",
            trace.times()[i],
            trace.energy()[i],
            trace.dissipation()[i],
            trace.residual()[i]
        ));
    }
    fs::write(path, out).map_err(io_err)
}

/// Nodal snapshot including the structurally-zero boundary values.
pub fn write_state_csv(path: &Path, sim: &Simulator, state: &CoupledState) -> Result<()> {
    let n = sim.n_nodes();
    let h = sim.domain().h();
    let mut out = String::from("x,u,v,y,z\n");
    out.push_str("0,0,0,0,0\n");
    for i in 1..=n {
        let x = i as f64 * h;
        let (y, z) = if i < n {
            (state.y[i - 1], state.z[i - 1])
        } else {
            (0.0, 0.0)
        };
        out.push_str(&format!(
            "{},{},{},{},{}\n",
            x,
            state.u[i - 1],
            state.v[i - 1],
            y,
            z
        ));
    }
    fs::write(path, out).map_err(io_err)
}

pub fn write_channels_csv(
    path: &Path,
    grid: &DiffusiveGrid,
    channels: &DiffusiveChannels,
) -> Result<()> {
    let mut out = String::from("xi,omega\n");
    for (x, o) in grid.nodes().iter().zip(&channels.omega) {
        out.push_str(&format!("{x},{o}\n"));
    }
    fs::write(path, out).map_err(io_err)
}

pub fn write_eigs_csv(path: &Path, entries: &[ScanEntry]) -> Result<()> {
    let mut out = String::from("n,branch,re_num,im_num,re_asym,im_asym,gap\n");
    for e in entries {
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            e.n,
            e.branch,
            e.lambda_num.re,
            e.lambda_num.im,
            e.lambda_asym.re,
            e.lambda_asym.im,
            e.gap
        ));
    }
    fs::write(path, out).map_err(io_err)
}

pub fn write_resolvent_csv(path: &Path, samples: &[(f64, f64)]) -> Result<()> {
    let mut out = String::from("lambda,resolvent_norm\n");
    for (l, r) in samples {
        out.push_str(&format!("{l},{r}\n"));
    }
    fs::write(path, out).map_err(io_err)
}

/// Everything needed to rerun the experiment.
#[derive(Serialize)]
pub struct Manifest<'a, C: Serialize> {
    pub command: &'a str,
    pub seed: u64,
    pub config: &'a C,
    pub grid: GridMeta,
}

#[derive(Serialize)]
pub struct GridMeta {
    pub xi_min: f64,
    pub xi_max: f64,
    pub n_nodes: usize,
    pub tail_tol: f64,
    pub surface_factor: f64,
}

impl GridMeta {
    pub fn of(grid: &DiffusiveGrid) -> Self {
        GridMeta {
            xi_min: grid.xi_min(),
            xi_max: grid.xi_max(),
            n_nodes: grid.len(),
            tail_tol: grid.tail_tol(),
            surface_factor: grid.surface_factor(),
        }
    }
}

pub fn write_manifest<C: Serialize>(path: &Path, manifest: &Manifest<'_, C>) -> Result<()> {
    let text = serde_json::to_string_pretty(manifest)
        .map_err(|e| Error::Config(format!("manifest serialization: {e}")))?;
    let mut f = fs::File::create(path).map_err(io_err)?;
    f.write_all(text.as_bytes()).map_err(io_err)?;
    f.write_all(b"\n").map_err(io_err)
}
