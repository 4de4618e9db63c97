//! The closed-form validation targets of the radial quadrature.
//!
//!     cargo run --release --example quadrature_closed_forms

use fracwave::frac_kernel::{
    moment_constants, closed_form_moment_integrals, closed_form_lambda_integrals, closed_form_static_impedance,
    DiffusiveGrid,
};
use fracwave::FracParams;

fn main() -> fracwave::Result<()> {
    println!("squared-kernel integral vs gamma (1 + eta)^(alpha - 1):");
    for &alpha in &[0.25, 0.5, 0.75] {
        for &eta in &[0.0, 1.0] {
            for d in 1..=3u32 {
                let p = FracParams { alpha, eta, gamma: 1.0, a: 1.0, b: 0.0, d };
                let g = DiffusiveGrid::for_tolerance(&p, 1e-8, 400)?;
                let q = g.static_impedance_quadrature(&p);
                let c = closed_form_static_impedance(&p);
                println!(
                    "  alpha={alpha:4} eta={eta} d={d}: quad={q:.10}  closed={c:.10}  rel={:.1e}",
                    ((q - c) / c).abs()
                );
            }
        }
    }

    println!("\nfrequency-shifted integral I2 on the principal branch:");
    let p = FracParams { alpha: 0.5, eta: 1.0, gamma: 1.0, a: 1.0, b: 0.0, d: 1 };
    let g = DiffusiveGrid::for_tolerance(&p, 1e-8, 400)?;
    for &lambda in &[0.5, 5.0, 50.0] {
        let (q1, q2) = g.lambda_integrals_quadrature(lambda, &p);
        let (e1, e2) = closed_form_lambda_integrals(lambda, &p)?;
        println!(
            "  lambda={lambda:4}: I2 rel={:.1e}  I1 rel={:.1e}  Re(I1)={:.4} > 0",
            (q2 - e2).norm() / e2.norm(),
            (q1 - e1).norm() / e1.norm(),
            e1.re
        );
    }

    println!("\nhigh-frequency moments at |lambda| = 10, eta = 1:");
    for d in 2..=3u32 {
        let p = FracParams { alpha: 0.5, eta: 1.0, gamma: 1.0, a: 1.0, b: 0.0, d };
        let g = DiffusiveGrid::for_tolerance(&p, 1e-8, 400)?;
        let (b1, a2, a3) = closed_form_moment_integrals(10.0, &p)?;
        let base = 11.0;
        let df = d as f64;
        let b1q = g.integrate_radial(|x| x.powf(0.5 + df / 2.0) / (base + x * x).powf(df + 1.0));
        let a2q = g.integrate_radial(|x| x.powf(2.0 * df - 2.0) / (base + x * x).powf(2.0 * df));
        let a3q = g.integrate_radial(|x| x.powf(2.0 * df) / (base + x * x).powf(2.0 * df + 2.0));
        println!(
            "  d={d}: B1 rel={:.1e}  A2 rel={:.1e}  A3 rel={:.1e}",
            ((b1q - b1) / b1).abs(),
            ((a2q - a2) / a2).abs(),
            ((a3q - a3) / a3).abs()
        );
        let (c1, c2, c3) = moment_constants(0.5, d);
        println!("     quoted constants: c1={c1:.6} c2={c2:.6} c3={c3:.6}");
        println!(
            "     note: the quoted c2 is (3d-2)/d = {} times the value of its integral",
            (3.0 * df - 2.0) / df
        );
    }
    Ok(())
}
