//! High-frequency eigenvalues of the damped generator versus their
//! closed-form expansions, cross-checked against the roots of the
//! transcendental characteristic function.
//!
//!     cargo run --release --example eigenvalue_asymptotics -- [n_cells]

use fracwave::frac_kernel::DiffusiveGrid;
use fracwave::spectral_probe::{
    build_generator, characteristic_root_near, classify_case, spectrum_scan, Branch,
};
use fracwave::wave_sim::{assemble, Domain1D};
use fracwave::FracParams;

fn main() -> fracwave::Result<()> {
    let args: Vec<String> = std::env::args().collect();
    let n_cells = args
        .get(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(2000usize);

    // strong coupling so the slow-branch damping is clearly visible
    let params = FracParams { b: 1.0, ..FracParams::default() };
    let grid = DiffusiveGrid::for_tolerance(&params, 1e-8, 200)?;
    let sim = assemble(Domain1D::new(1.0, n_cells)?, params, grid)?;
    let gen = build_generator(&sim);

    let ns: Vec<i64> = (2..=8).map(|k| 5 * k).collect();
    let t0 = std::time::Instant::now();
    let report = spectrum_scan(&gen, &params, &ns, &[Branch::One], 10, 0)?;
    println!(
        "scanned {} eigenvalues on {} cells in {:.1?}",
        report.entries.len(),
        n_cells,
        t0.elapsed()
    );
    println!(
        "{:>4} {:>13} {:>13} {:>13} {:>10} {:>10}",
        "n", "Re(num)", "Re(asym)", "ratio", "gap", "root gap"
    );
    for e in &report.entries {
        // independent: refine the characteristic root from the same seed
        let root = characteristic_root_near(e.lambda_asym, &params, 1e-13)?;
        println!(
            "{:>4} {:>13.6e} {:>13.6e} {:>13.4} {:>10.2e} {:>10.2e}",
            e.n,
            e.lambda_num.re,
            e.lambda_asym.re,
            e.lambda_num.re / e.lambda_asym.re,
            e.gap,
            (e.lambda_num - root).norm()
        );
    }
    println!(
        "max Re(lambda) = {} (strongly stable: {:?})",
        report.max_real_part,
        report.strongly_stable()
    );
    let case = classify_case(&params);
    println!("asymptotic case: {case:?}");
    Ok(())
}
