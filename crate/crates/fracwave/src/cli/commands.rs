//! Experiment drivers behind the three subcommands.

use std::path::Path;

use statrs::function::gamma::gamma;

use crate::cli::config::{InitialData, RunConfig};
use crate::cli::output::{
    ensure_dir, write_channels_csv, write_eigs_csv, write_manifest, write_resolvent_csv,
    write_state_csv, write_trace_csv, GridMeta, Manifest,
};
use crate::error::{Error, Result};
use crate::frac_kernel::{
    caputo_direct, closed_form_moment_integrals, closed_form_lambda_integrals, closed_form_static_impedance,
    diffusive_vs_direct, DiffusiveGrid,
};
use crate::params::FracParams;
use crate::spectral_probe::{build_generator, resolvent_sweep, spectrum_scan, Branch};
use crate::wave_sim::{
    assemble, coupling_bound, decay_exponent, reference_decay_exponent, Simulator,
};

fn build_sim(cfg: &RunConfig) -> Result<Simulator> {
    assemble(cfg.domain()?, cfg.params(), cfg.grid()?)
}

pub fn cmd_simulate(cfg: &RunConfig, out: &Path, seed: u64) -> Result<()> {
    ensure_dir(out)?;
    let sim = build_sim(cfg)?;
    let p = *sim.params();

    // smallness warning: 1D multiplier data with x0 = 0
    let lambda1 = (std::f64::consts::PI / cfg.length).powi(2);
    let bound = coupling_bound(cfg.length, lambda1, 1)?;
    if p.b.abs() > bound {
        eprintln!(
            "warning: |b| = {} exceeds the admissible coupling bound {bound}; \
             the decay theory does not cover this run",
            p.b.abs()
        );
    }
    if (p.a - 1.0).abs() > 1e-12 {
        eprintln!(
            "note: a = {} differs from 1; the polynomial decay rate is only \
             established for equal speeds",
            p.a
        );
    }

    let state = match cfg.init {
        InitialData::Sine => sim.state_from_fields(
            |x| (std::f64::consts::PI * x / cfg.length).sin(),
            |_| 0.0,
            |_| 0.0,
            |_| 0.0,
        ),
        InitialData::Zero => sim.zero_state(),
        InitialData::Cascade => {
            crate::spectral_probe::cascade_initial_state(&sim, cfg.cascade_modes, seed)?
        }
    };
    write_state_csv(&out.join("state_initial.csv"), &sim, &state)?;
    let e0 = sim.energy(&state);
    println!(
        "simulate: alpha = {}, eta = {}, gamma = {}, a = {}, b = {}, reference exponent -2/(1-alpha) = {}",
        p.alpha,
        p.eta,
        p.gamma,
        p.a,
        p.b,
        reference_decay_exponent(p.alpha)
    );
    println!("E(0) = {e0}");

    let (final_state, trace) = sim.run(state, cfg.dt, cfg.t_final, cfg.cadence)?;
    write_trace_csv(&out.join("trace.csv"), &trace)?;
    write_state_csv(&out.join("state_final.csv"), &sim, &final_state)?;
    write_channels_csv(&out.join("channels_final.csv"), sim.grid(), &final_state.channels)?;
    write_manifest(
        &out.join("manifest.json"),
        &Manifest { command: "simulate", seed, config: cfg, grid: GridMeta::of(sim.grid()) },
    )?;

    println!(
        "E({}) = {}, max balance residual = {:.2e}, monotone = {}",
        final_state.t,
        sim.energy(&final_state),
        trace.max_residual(),
        trace.monotone()
    );
    match decay_exponent(&trace, cfg.fit_window()) {
        Ok(slope) => println!(
            "fitted log-log decay exponent over [{}, {}]: {slope} (reference {})",
            cfg.fit_window().0,
            cfg.fit_window().1,
            reference_decay_exponent(p.alpha)
        ),
        Err(e) => println!("decay fit unavailable: {e}"),
    }
    if cfg.init != InitialData::Cascade {
        println!(
            "note: the reference exponent is the asymptotic envelope; generic initial              data reaches it only far beyond desk-scale horizons (init = cascade prepares              data on the damped branch that exhibits it inside the window)"
        );
    }
    Ok(())
}

pub fn cmd_spectrum(cfg: &RunConfig, out: &Path, seed: u64) -> Result<()> {
    ensure_dir(out)?;
    let sim = build_sim(cfg)?;
    let p = *sim.params();
    let gen = build_generator(&sim);

    let branches: Vec<Branch> = match cfg.branches.as_str() {
        "1" => vec![Branch::One],
        "2" => vec![Branch::Two],
        _ => vec![Branch::One, Branch::Two],
    };
    let ns: Vec<i64> = (cfg.scan_n_min..=cfg.scan_n_max).collect();
    let mut report = spectrum_scan(&gen, &p, &ns, &branches, cfg.n0, seed)?;
    let (samples, slope) = resolvent_sweep(
        &gen,
        cfg.resolvent_n_min,
        cfg.resolvent_n_max,
        cfg.placement()?,
        seed,
    )?;
    report.resolvent = samples;
    report.resolvent_slope = Some(slope);

    write_eigs_csv(&out.join("eigs.csv"), &report.entries)?;
    write_resolvent_csv(&out.join("resolvent.csv"), &report.resolvent)?;
    write_manifest(
        &out.join("manifest.json"),
        &Manifest { command: "spectrum", seed, config: cfg, grid: GridMeta::of(sim.grid()) },
    )?;

    println!(
        "spectrum: scanned n in [{}, {}], branches {:?}",
        cfg.scan_n_min, cfg.scan_n_max, cfg.branches
    );
    println!(
        "max Re lambda = {} (max Re lambda < 0: {})",
        report.max_real_part,
        report.strongly_stable()
    );
    println!(
        "resolvent growth slope = {slope} (target 1 - alpha = {})",
        1.0 - p.alpha
    );
    for e in report.entries.iter().take(5) {
        println!(
            "  n = {}, branch {}: lambda = {} {:+}i, asymptotic gap = {}",
            e.n, e.branch, e.lambda_num.re, e.lambda_num.im, e.gap
        );
    }
    Ok(())
}

/// Adaptive Simpson on a smooth integrand.
fn simpson(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn adaptive_simpson_rec(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(a, m, fa, flm, fm);
    let right = simpson(m, b, fm, frm, fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1)
        + adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

fn adaptive_simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let fa = f(a);
    let m = 0.5 * (a + b);
    let fm = f(m);
    let fb = f(b);
    let whole = simpson(a, b, fa, fm, fb);
    adaptive_simpson_rec(&f, a, b, fa, fm, fb, whole, tol, 40)
}

struct Check {
    name: String,
    value: f64,
    reference: f64,
    tol: f64,
}

impl Check {
    fn rel_err(&self) -> f64 {
        (self.value - self.reference).abs() / self.reference.abs().max(f64::MIN_POSITIVE)
    }

    fn pass(&self) -> bool {
        self.rel_err() < self.tol
    }
}

pub fn cmd_quadcheck(cfg: &RunConfig, out: &Path, seed: u64) -> Result<()> {
    ensure_dir(out)?;
    let n_xi = cfg.n_xi;
    let tol_grid = cfg.grid_tol.unwrap_or(1e-8);
    let mut checks: Vec<Check> = Vec::new();

    let alphas = [0.25, 0.5, 0.75];
    let etas = [0.0, 1.0];

    // static impedance against gamma (1 + eta)^(alpha - 1)
    for &alpha in &alphas {
        for &eta in &etas {
            for d in 1..=3u32 {
                let p = FracParams { alpha, eta, gamma: 1.0, a: 1.0, b: 0.0, d };
                let grid = DiffusiveGrid::for_tolerance(&p, tol_grid, n_xi)?;
                checks.push(Check {
                    name: format!("static impedance alpha={alpha} eta={eta} d={d}"),
                    value: grid.static_impedance_quadrature(&p),
                    reference: closed_form_static_impedance(&p),
                    tol: 1e-6,
                });
            }
        }
    }

    // frequency-shifted integrals against gamma (i lambda + eta)^(alpha-1)
    for &alpha in &alphas {
        for &eta in &etas {
            let p = FracParams { alpha, eta, gamma: 1.0, a: 1.0, b: 0.0, d: 1 };
            let grid = DiffusiveGrid::for_tolerance(&p, tol_grid, n_xi)?;
            for &lambda in &[0.5, 5.0, 50.0] {
                let (q1, q2) = grid.lambda_integrals_quadrature(lambda, &p);
                let (e1, e2) = closed_form_lambda_integrals(lambda, &p)?;
                checks.push(Check {
                    name: format!("I1 alpha={alpha} eta={eta} lambda={lambda}"),
                    value: (q1 - e1).norm(),
                    reference: e1.norm(),
                    tol: 1e-5,
                });
                checks.push(Check {
                    name: format!("I2 alpha={alpha} eta={eta} lambda={lambda}"),
                    value: (q2 - e2).norm(),
                    reference: e2.norm(),
                    tol: 1e-5,
                });
            }
        }
    }

    // high-frequency moment integrals (requires eta > 0, d >= 2)
    for &alpha in &alphas {
        for d in 2..=3u32 {
            let p = FracParams { alpha, eta: 1.0, gamma: 1.0, a: 1.0, b: 0.0, d };
            let grid = DiffusiveGrid::for_tolerance(&p, tol_grid, n_xi)?;
            let lam = 10.0f64;
            let base = lam + p.eta;
            let df = d as f64;
            let (b1, a2, a3) = closed_form_moment_integrals(lam, &p)?;
            let b1q =
                grid.integrate_radial(|x| x.powf(alpha + df / 2.0) / (base + x * x).powf(df + 1.0));
            let a2q =
                grid.integrate_radial(|x| x.powf(2.0 * df - 2.0) / (base + x * x).powf(2.0 * df));
            let a3q =
                grid.integrate_radial(|x| x.powf(2.0 * df) / (base + x * x).powf(2.0 * df + 2.0));
            checks.push(Check {
                name: format!("B1 alpha={alpha} d={d}"),
                value: b1q,
                reference: b1,
                tol: 1e-5,
            });
            checks.push(Check {
                name: format!("A2 alpha={alpha} d={d}"),
                value: a2q,
                reference: a2,
                tol: 1e-5,
            });
            checks.push(Check {
                name: format!("A3 alpha={alpha} d={d}"),
                value: a3q,
                reference: a3,
                tol: 1e-5,
            });
        }
    }

    // Caputo scheme on f(t) = t at t = 1 against adaptive quadrature of
    // the defining integral (substituted tau = u^(1/(1-alpha)) so the
    // integrand is smooth at the origin)
    for &alpha in &alphas {
        for &eta in &etas {
            let p = FracParams { alpha, eta, gamma: 1.0, a: 1.0, b: 0.0, d: 1 };
            let dt = 1e-3;
            let samples: Vec<f64> = (0..=1000).map(|i| i as f64 * dt).collect();
            let scheme = caputo_direct(&samples, dt, &p)?[1000];
            let beta = 1.0 - alpha;
            let oracle = adaptive_simpson(
                |u| (-eta * u.powf(1.0 / beta)).exp() / beta,
                0.0,
                1.0,
                1e-12,
            ) / gamma(beta);
            checks.push(Check {
                name: format!("caputo f=t alpha={alpha} eta={eta}"),
                value: scheme,
                reference: oracle,
                tol: 1e-8,
            });
        }
    }

    // diffusive realization against the direct convolution
    {
        let p = FracParams { alpha: 0.5, eta: 0.5, gamma: 1.0, a: 1.0, b: 0.0, d: 1 };
        let grid = DiffusiveGrid::for_tolerance(&p, tol_grid, n_xi)?;
        let dt = 1e-3;
        let u: Vec<f64> = (0..=10_000).map(|i| (2.0 * i as f64 * dt).sin()).collect();
        let err = diffusive_vs_direct(&u, dt, &p, &grid)?;
        checks.push(Check {
            name: "diffusive vs direct, U = sin(2t)".into(),
            value: err,
            reference: 0.0,
            tol: 1e-3,
        });
    }

    let mut failures = 0;
    let mut table = String::from("name,value,reference,rel_err,tol,pass\n");
    println!("{:<38} {:>14} {:>10} {:>6}", "check", "rel. error", "tol", "");
    for c in &checks {
        // the two diagnostics that are already error magnitudes compare
        // absolutely against their tolerance
        let (err, ok) = if c.reference == 0.0 {
            (c.value, c.value < c.tol)
        } else if c.name.starts_with("I1") || c.name.starts_with("I2") {
            let e = c.value / c.reference;
            (e, e < c.tol)
        } else {
            (c.rel_err(), c.pass())
        };
        if !ok {
            failures += 1;
        }
        println!(
            "{:<38} {:>14.3e} {:>10.1e} {:>6}",
            c.name,
            err,
            c.tol,
            if ok { "pass" } else { "FAIL" }
        );
        table.push_str(&format!(
            "{},{},{},{},{},{}\n",
            c.name, c.value, c.reference, err, c.tol, ok
        ));
    }
    std::fs::write(out.join("quadcheck.csv"), table)
        .map_err(|e| Error::Config(format!("io: {e}")))?;
    write_manifest(
        &out.join("manifest.json"),
        &Manifest { command: "quadcheck", seed, config: cfg, grid: GridMeta::of(&cfg.grid()?) },
    )?;
    if failures > 0 {
        return Err(Error::Numerical(format!(
            "{failures} of {} quadrature checks beyond tolerance",
            checks.len()
        )));
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}
