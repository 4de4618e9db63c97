//! Polynomial energy decay of the coupled system.
//!
//! Prepares initial data on the heavily damped eigenvalue branch with
//! the borderline k^(-3) modal-energy cascade, runs the midpoint
//! stepper, and fits the log-log decay slope against the reference
//! exponent -2/(1 - alpha).
//!
//!     cargo run --release --example energy_decay -- [alpha] [n_cells] [n_modes] [dt] [t_final]
//!
//! Defaults are a quick small-scale run; the acceptance-sized runs are
//! alpha = 0.3 with 1200 cells / 300 modes and alpha = 0.5 with 6000
//! cells / 2000 modes.

use fracwave::frac_kernel::DiffusiveGrid;
use fracwave::spectral_probe::cascade_initial_state;
use fracwave::wave_sim::{assemble, decay_exponent, reference_decay_exponent, Domain1D};
use fracwave::FracParams;

fn main() -> fracwave::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let get = |i: usize, d: f64| args.get(i).and_then(|s| s.parse().ok()).unwrap_or(d);
    let alpha = get(1, 0.3);
    let n_cells = get(2, 600.0) as usize;
    let n_modes = get(3, 150.0) as usize;
    let dt = get(4, 5e-4);
    let t_final = get(5, 200.0);

    let params = FracParams { alpha, ..FracParams::default() };
    let grid = DiffusiveGrid::for_tolerance(&params, 1e-8, 400)?;
    let sim = assemble(Domain1D::new(1.0, n_cells)?, params, grid)?;

    let t0 = std::time::Instant::now();
    let state = cascade_initial_state(&sim, n_modes, 0)?;
    println!(
        "prepared {n_modes} branch-two modes on {n_cells} cells in {:.1?}; E(0) = {}",
        t0.elapsed(),
        sim.energy(&state)
    );

    let cadence = ((0.4 / dt) as usize).max(1);
    let t1 = std::time::Instant::now();
    let (final_state, trace) = sim.run(state, dt, t_final, cadence)?;
    println!(
        "ran to t = {} in {:.1?}; E(T) = {}, max residual = {:.2e}, monotone = {}",
        final_state.t,
        t1.elapsed(),
        sim.energy(&final_state),
        trace.max_residual(),
        trace.monotone()
    );

    let window = (t_final / 4.0, t_final);
    let slope = decay_exponent(&trace, window)?;
    let reference = reference_decay_exponent(alpha);
    println!(
        "fitted slope over [{}, {}] = {slope:.3} (reference {reference:.3}, deviation {:.1}%)",
        window.0,
        window.1,
        100.0 * (slope - reference).abs() / reference.abs()
    );

    // envelope check: running max of t^(2/(1-alpha)) E(t) after t = 10
    let pow = 2.0 / (1.0 - alpha);
    let weighted = trace.running_max_weighted(pow, 10.0);
    if let (Some(&(_, at50)), Some(&(_, last))) = (
        weighted.iter().find(|(t, _)| *t >= 50.0),
        weighted.last(),
    ) {
        println!(
            "running max of t^{pow:.2} E(t): growth after t = 50 is {:.2}%",
            100.0 * (last / at50 - 1.0)
        );
    }
    Ok(())
}
