//! Closed-form kernel quantities: the diffusive weight mu, the
//! normalization kappa, and the explicit values of the auxiliary
//! integrals used to validate the radial quadrature.

use num_complex::Complex64;
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::params::FracParams;

/// Diffusive kernel weight mu(xi) = xi^((2 alpha - d) / 2), xi > 0.
pub fn mu(xi: f64, params: &FracParams) -> Result<f64> {
    if !(xi > 0.0) {
        return Err(Error::Domain(format!("mu requires xi > 0, got {xi}")));
    }
    let expo = (2.0 * params.alpha - params.d as f64) / 2.0;
    Ok(xi.powf(expo))
}

/// Normalization constant kappa(alpha, d) = 2 sin(alpha pi) Gamma(d/2 + 1) / (d pi^(d/2 + 1)).
///
/// It makes the diffusive output reproduce the shifted fractional
/// integral of the input exactly.
pub fn kappa(params: &FracParams) -> f64 {
    let d = params.d as f64;
    2.0 * (params.alpha * std::f64::consts::PI).sin() * gamma(d / 2.0 + 1.0)
        / (d * std::f64::consts::PI.powf(d / 2.0 + 1.0))
}

/// Total solid angle of the unit sphere in dimension d:
/// d pi^(d/2) / Gamma(d/2 + 1). Folds the angular part of radial
/// integrals over R^d.
pub fn surface_factor(d: u32) -> f64 {
    let d = d as f64;
    d * std::f64::consts::PI.powf(d / 2.0) / gamma(d / 2.0 + 1.0)
}

/// gamma * kappa * int mu^2 / (1 + eta + |xi|^2) dxi over R^d,
/// in closed form: gamma (1 + eta)^(alpha - 1).
pub fn closed_form_static_impedance(params: &FracParams) -> f64 {
    params.gamma * (1.0 + params.eta).powf(params.alpha - 1.0)
}

/// Closed forms of the two lambda-dependent boundary integrals on the
/// principal branch:
///
///   I1 = i lambda gamma (i lambda + eta)^(alpha - 1),
///   I2 =          gamma (i lambda + eta)^(alpha - 1).
///
/// Re(I1) > 0 whenever lambda != 0, which is what makes the
/// frequency-domain boundary form coercive.
pub fn closed_form_lambda_integrals(
    lambda: f64,
    params: &FracParams,
) -> Result<(Complex64, Complex64)> {
    if params.eta == 0.0 && lambda == 0.0 {
        return Err(Error::SingularCase(
            "eta = 0 and lambda = 0: the generator is not invertible there".into(),
        ));
    }
    let z = Complex64::new(params.eta, lambda);
    let i2 = params.gamma * z.powf(params.alpha - 1.0);
    let i1 = Complex64::new(0.0, lambda) * i2;
    Ok((i1, i2))
}

/// Constants of the high-frequency moment integrals in their
/// conventionally quoted form:
///
///   c1(alpha,d) = d pi^(d/2) Gamma(d/4 - alpha/2 + 1) Gamma(alpha/2 + 3d/4) / (2 Gamma(d/2+1) Gamma(d+1))
///   c2(d)       = d pi^(d/2) Gamma(d/2) Gamma(3d/2) / (2 Gamma(d/2+1) Gamma(2d))
///   c3(d)       = d pi^(d/2) Gamma(2 + d/2) Gamma(3d/2) / (2 Gamma(d/2+1) Gamma(2 + 2d))
///
/// Note: the quoted c2 does not match the integral it is attached
/// to; see [`closed_form_moment_integrals`] for the constant the
/// beta-function evaluation actually produces.
pub fn moment_constants(alpha: f64, d: u32) -> (f64, f64, f64) {
    let df = d as f64;
    let pref = df * std::f64::consts::PI.powf(df / 2.0) / (2.0 * gamma(df / 2.0 + 1.0));
    let c1 = pref * gamma(df / 4.0 - alpha / 2.0 + 1.0) * gamma(alpha / 2.0 + 3.0 * df / 4.0)
        / gamma(df + 1.0);
    let c2 = pref * gamma(df / 2.0) * gamma(3.0 * df / 2.0) / gamma(2.0 * df);
    let c3 = pref * gamma(2.0 + df / 2.0) * gamma(3.0 * df / 2.0) / gamma(2.0 + 2.0 * df);
    (c1, c2, c3)
}

/// Values of the three moment integrals (B = |lambda| + eta):
///
///   B1 = int |xi|^(alpha + d/2) / (B + |xi|^2)^(d + 1)  dxi = c1 B^(alpha/2 - d/4 - 1)
///   A2 = int |xi|^(2d - 2)      / (B + |xi|^2)^(2d)     dxi = c2* B^(-1 - d/2)
///   A3 = int |xi|^(2d)          / (B + |xi|^2)^(2d + 2) dxi = c3 B^(-d/2 - 2)
///
/// Each reduces to a beta function after the radial substitution
/// x = rho^2. For A2 that evaluation yields the constant
/// c2* = d pi^(d/2) Gamma(3d/2 - 1) / (2 Gamma(2d)), which is
/// d / (3d - 2) times the quoted c2; the exponent -1 - d/2 is
/// unaffected. B1 and A3 match their quoted constants exactly.
/// Requires eta > 0 and d >= 2.
pub fn closed_form_moment_integrals(lambda_abs: f64, params: &FracParams) -> Result<(f64, f64, f64)> {
    if params.eta <= 0.0 || params.d < 2 {
        return Err(Error::Hypothesis(format!(
            "requires eta > 0 and d >= 2, got eta = {}, d = {}",
            params.eta, params.d
        )));
    }
    if !(lambda_abs >= 0.0) {
        return Err(Error::Domain(format!(
            "lambda_abs must be >= 0, got {lambda_abs}"
        )));
    }
    let d = params.d as f64;
    let base = lambda_abs + params.eta;
    let (c1, _, c3) = moment_constants(params.alpha, params.d);
    let c2_eff = d * std::f64::consts::PI.powf(d / 2.0) * gamma(3.0 * d / 2.0 - 1.0)
        / (2.0 * gamma(2.0 * d));
    let b1 = c1 * base.powf(params.alpha / 2.0 - d / 4.0 - 1.0);
    let a2 = c2_eff * base.powf(-1.0 - d / 2.0);
    let a3 = c3 * base.powf(-d / 2.0 - 2.0);
    Ok((b1, a2, a3))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn params(alpha: f64, eta: f64, gamma: f64, d: u32) -> FracParams {
        FracParams { alpha, eta, gamma, a: 1.0, b: 0.1, d }
    }

    #[test]
    fn mu_at_one_is_one() {
        for &(alpha, d) in &[(0.25, 1), (0.5, 2), (0.9, 3)] {
            assert_eq!(mu(1.0, &params(alpha, 0.0, 1.0, d)).unwrap(), 1.0);
        }
    }

    #[test]
    fn mu_exponent_zero_case() {
        // alpha = 0.5, d = 1 makes the exponent vanish
        assert_eq!(mu(4.0, &params(0.5, 0.0, 1.0, 1)).unwrap(), 1.0);
    }

    #[test]
    fn mu_fractional_value() {
        // 2^(-1/4), exponent (2*0.75 - 2)/2 = -1/4
        let v = mu(2.0, &params(0.75, 0.0, 1.0, 2)).unwrap();
        assert_relative_eq!(v, 0.840_896_415_253_714_5, max_relative = 1e-14);
    }

    #[test]
    fn mu_rejects_nonpositive() {
        assert!(mu(0.0, &params(0.5, 0.0, 1.0, 1)).is_err());
        assert!(mu(-1.0, &params(0.5, 0.0, 1.0, 1)).is_err());
    }

    #[test]
    fn kappa_reference_values() {
        // kappa(1/2, 1) = 1/pi, kappa(1/2, 2) = 1/pi^2
        assert_relative_eq!(
            kappa(&params(0.5, 0.0, 1.0, 1)),
            1.0 / std::f64::consts::PI,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            kappa(&params(0.5, 0.0, 1.0, 2)),
            1.0 / (std::f64::consts::PI * std::f64::consts::PI),
            max_relative = 1e-14
        );
    }

    #[test]
    fn kappa_vanishes_at_order_endpoints() {
        assert!(kappa(&params(1e-9, 0.0, 1.0, 1)).abs() < 1e-8);
        assert!(kappa(&params(1.0 - 1e-9, 0.0, 1.0, 1)).abs() < 1e-8);
    }

    #[test]
    fn static_impedance_closed_form_values() {
        assert_eq!(closed_form_static_impedance(&params(0.3, 0.0, 1.0, 1)), 1.0);
        assert_relative_eq!(
            closed_form_static_impedance(&params(0.5, 1.0, 2.0, 1)),
            std::f64::consts::SQRT_2,
            max_relative = 1e-14
        );
    }

    #[test]
    fn lambda_integrals_zero_frequency() {
        let (i1, i2) = closed_form_lambda_integrals(0.0, &params(0.7, 1.0, 1.0, 1)).unwrap();
        assert_eq!(i1, Complex64::new(0.0, 0.0));
        assert_relative_eq!(i2.re, 1.0, max_relative = 1e-14);
        assert_relative_eq!(i2.im, 0.0, max_relative = 1e-14);
    }

    #[test]
    fn lambda_integrals_principal_branch() {
        // I2(lambda=1, eta=0, alpha=1/2) = i^(-1/2) = exp(-i pi/4)
        let (_, i2) = closed_form_lambda_integrals(1.0, &params(0.5, 0.0, 1.0, 1)).unwrap();
        let expect = std::f64::consts::FRAC_1_SQRT_2;
        assert_relative_eq!(i2.re, expect, max_relative = 1e-14);
        assert_relative_eq!(i2.im, -expect, max_relative = 1e-14);
    }

    #[test]
    fn lambda_integrals_singular_case_refused() {
        match closed_form_lambda_integrals(0.0, &params(0.5, 0.0, 1.0, 1)) {
            Err(Error::SingularCase(_)) => {}
            other => panic!("expected singular-case error, got {other:?}"),
        }
    }

    proptest! {
        // Coercivity of the boundary form: Re(I1) > 0 away from lambda = 0.
        #[test]
        fn i1_real_part_positive(
            lambda in prop_oneof![-1e4..-1e-6f64, 1e-6..1e4f64],
            alpha in 0.05..0.95f64,
            eta in 0.0..10.0f64,
            gamma in 0.1..10.0f64,
            d in 1u32..4,
        ) {
            let p = params(alpha, eta, gamma, d);
            let (i1, _) = closed_form_lambda_integrals(lambda, &p).unwrap();
            prop_assert!(i1.re > 0.0, "Re(I1) = {} at lambda = {lambda}", i1.re);
        }
    }

    #[test]
    fn quoted_c2_gamma_arithmetic() {
        // c2(2) = 2 pi Gamma(1) Gamma(3) / (2 Gamma(2) Gamma(4)) = pi/3
        let (_, c2, _) = moment_constants(0.5, 2);
        assert_relative_eq!(c2, std::f64::consts::PI / 3.0, max_relative = 1e-14);
    }

    #[test]
    fn moment_b1_power_factor_is_one_at_base_one() {
        // |lambda| = 0, eta = 1 makes the power factor 1, so B1 = c1
        let p = params(0.5, 1.0, 1.0, 2);
        let (b1, _, _) = closed_form_moment_integrals(0.0, &p).unwrap();
        let (c1, _, _) = moment_constants(0.5, 2);
        assert_relative_eq!(b1, c1, max_relative = 1e-14);
    }

    #[test]
    fn moment_a2_constant_is_corrected() {
        // at d = 2 the integral evaluates with constant pi/6, not pi/3
        let p = params(0.5, 1.0, 1.0, 2);
        let (_, a2, _) = closed_form_moment_integrals(0.0, &p).unwrap();
        assert_relative_eq!(a2, std::f64::consts::PI / 6.0, max_relative = 1e-14);
    }

    #[test]
    fn moment_hypothesis_errors() {
        assert!(closed_form_moment_integrals(1.0, &params(0.5, 0.0, 1.0, 2)).is_err());
        assert!(closed_form_moment_integrals(1.0, &params(0.5, 1.0, 1.0, 1)).is_err());
    }
}
