//! The direct convolution operators on their own: the shifted Caputo
//! derivative by L1 product integration and the shifted fractional
//! integral, with their analytic values on simple data.
//!
//!     cargo run --release --example caputo_convolution

use statrs::function::gamma::gamma;

use fracwave::frac_kernel::{caputo_direct, frac_integral_direct};
use fracwave::FracParams;

fn main() -> fracwave::Result<()> {
    let dt = 1e-3;
    let n = 1000;
    let t_grid: Vec<f64> = (0..=n).map(|i| i as f64 * dt).collect();

    println!("f(t) = t, unshifted kernel: D f = t^(1-alpha)/Gamma(2-alpha)");
    for &alpha in &[0.25, 0.5, 0.75] {
        let p = FracParams { alpha, eta: 0.0, ..FracParams::default() };
        let d = caputo_direct(&t_grid, dt, &p)?;
        let exact = 1.0 / gamma(2.0 - alpha);
        println!(
            "  alpha = {alpha}: D f(1) = {:.12}  exact = {exact:.12}  (scheme exact for linear f)",
            d[n]
        );
    }

    println!("\nf(t) = t, shifted kernel eta = 1, alpha = 1/2: D f(1) = erf(1)");
    let p = FracParams { alpha: 0.5, eta: 1.0, ..FracParams::default() };
    let d = caputo_direct(&t_grid, dt, &p)?;
    println!("  D f(1) = {:.12}  erf(1) = 0.842700792950", d[n]);

    println!("\nconstant data has zero fractional derivative:");
    let c = vec![2.5; n + 1];
    let d = caputo_direct(&c, dt, &p)?;
    println!(
        "  max |D const| over the window = {:.1e}",
        d.iter().fold(0.0f64, |m, &v| m.max(v.abs()))
    );

    println!("\nfractional integral of f(t) = t (eta = 0): t^(2-alpha)/Gamma(3-alpha)");
    for &alpha in &[0.25, 0.75] {
        let p = FracParams { alpha, eta: 0.0, ..FracParams::default() };
        let v = frac_integral_direct(&t_grid, dt, &p)?;
        let beta = 1.0 - alpha;
        let exact = 1.0 / gamma(beta + 2.0);
        println!("  alpha = {alpha}: I f(1) = {:.12}  exact = {exact:.12}", v[n]);
    }
    Ok(())
}
