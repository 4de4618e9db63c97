//! Multiplier geometric control checks and the coupling smallness bound.
//!
//!     cargo run --release --example mgc_geometry

use fracwave::wave_sim::{check_mgc, check_mgc_interval, coupling_bound, EdgeLabel, PolygonGeometry};

fn main() -> fracwave::Result<()> {
    // the interval with clamped left end and damped right end
    let r = check_mgc_interval(1.0, 0.0)?;
    println!("interval (0,1), x0 = 0: satisfied = {}, m0 = {}", r.satisfied, r.m0);

    use EdgeLabel::*;
    // unit square, left edge clamped, rest damped
    let square = PolygonGeometry {
        vertices: vec![(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)],
        labels: vec![Gamma1, Gamma1, Gamma1, Gamma0],
        x0: (-0.1, 0.5),
    };
    let r = check_mgc(&square)?;
    println!(
        "unit square, left clamped, x0 = (-0.1, 0.5): satisfied = {}, m0 = {}, closures disjoint = {}",
        r.satisfied, r.m0, r.closures_disjoint
    );

    // clamping the top as well breaks the condition
    let bad = PolygonGeometry {
        labels: vec![Gamma1, Gamma1, Gamma0, Gamma0],
        ..square.clone()
    };
    let r = check_mgc(&bad)?;
    println!("left and top clamped: satisfied = {}", r.satisfied);

    // an L-shaped domain with the re-entrant edges clamped
    let ell = PolygonGeometry {
        vertices: vec![
            (0.0, 0.0),
            (2.0, 0.0),
            (2.0, 1.0),
            (1.0, 1.0),
            (1.0, 2.0),
            (0.0, 2.0),
        ],
        labels: vec![Gamma1, Gamma1, Gamma0, Gamma0, Gamma1, Gamma0],
        x0: (0.2, 0.2),
    };
    let r = check_mgc(&ell)?;
    println!(
        "L-shape, x0 = (0.2, 0.2): satisfied = {}, m0 = {:.3}, closures disjoint = {}",
        r.satisfied, r.m0, r.closures_disjoint
    );

    // smallness bound on the coupling for the interval with x0 = 0:
    // |m|_inf = 1, smallest Dirichlet eigenvalue pi^2
    let b = coupling_bound(1.0, std::f64::consts::PI * std::f64::consts::PI, 1)?;
    println!("admissible coupling bound on the interval: |b| <= {b:.10}");
    println!("(the default run uses b = 0.1, comfortably below)");
    Ok(())
}
