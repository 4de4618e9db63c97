//! Resolvent-norm growth along the imaginary axis.
//!
//! Samples |(i lambda - A)^(-1)| in the energy norm at the discrete
//! counterparts of lambda = n pi and fits the log-log slope, which
//! tracks 1 - alpha for the fractional boundary damping.
//!
//!     cargo run --release --example resolvent_growth -- [alpha] [n_cells]

use fracwave::frac_kernel::DiffusiveGrid;
use fracwave::spectral_probe::{build_generator, resolvent_sweep, SamplePlacement};
use fracwave::wave_sim::{assemble, Domain1D};
use fracwave::FracParams;

fn main() -> fracwave::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let get = |i: usize, d: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let alpha = get(1, 0.5);
    let n_cells = get(2, 600.0) as usize;

    let params = FracParams { alpha, ..FracParams::default() };
    let grid = DiffusiveGrid::for_tolerance(&params, 1e-8, 300)?;
    let sim = assemble(Domain1D::new(1.0, n_cells)?, params, grid)?;
    let gen = build_generator(&sim);

    let t0 = std::time::Instant::now();
    let (samples, slope) = resolvent_sweep(
        &gen,
        10,
        60,
        SamplePlacement::DiscreteFrequency,
        0,
    )?;
    println!("swept {} samples in {:.1?}", samples.len(), t0.elapsed());
    for (lam, norm) in samples.iter().step_by(10) {
        println!("  lambda = {lam:9.3}: |R| = {norm:12.3}");
    }
    println!(
        "fitted growth slope = {slope:.4}, target 1 - alpha = {:.4}",
        1.0 - alpha
    );
    Ok(())
}
