//! Moment generating function of the instantaneous SNR, `M(s) = E[e^{sγ}]`.
//!
//! With `y = γ₀s/(1+K-γ₀s)`, `a = K/(1+Γ²)` and `b = Γ²`:
//!
//! - series: `M(s) = (1+K)/(1+K-γ₀s) · Σ_m (ay)^m/m! ₂F₁(-m,-m;1;b)`
//! - closed form: `M(s) = (1+K)/(1+K-γ₀s) · exp(Ky) · I₀(2Γ K y/(1+Γ²))`.
//!
//! Only `s ≤ 0` is accepted.

use crate::dist::SnrContext;
use crate::error::{Result, TwdpError};
use crate::params::TwdpParams;
use crate::specfun::{bessel_i_scaled, power_coefficients, sum_batched, SeriesControl, SeriesResult};

fn check_s(s: f64) -> Result<()> {
    if s <= 0.0 && s.is_finite() {
        Ok(())
    } else {
        Err(TwdpError::InvalidArgument(format!("MGF argument must be finite and <= 0, got {s}")))
    }
}

/// `(1+K)/(1+K-γ₀s)` and `y = γ₀s/(1+K-γ₀s)`.
fn split(p: &TwdpParams, ctx: &SnrContext, s: f64) -> (f64, f64) {
    let k1 = 1.0 + p.k();
    let g0s = ctx.gamma0() * s;
    let den = k1 - g0s;
    (k1 / den, g0s / den)
}

/// MGF from the power series in `y`.
pub fn mgf_series(p: &TwdpParams, ctx: &SnrContext, s: f64, ctl: &SeriesControl) -> Result<SeriesResult> {
    check_s(s)?;
    ctl.validate()?;
    let (pre, y) = split(p, ctx, s);
    let (g, k) = (p.gamma(), p.k());
    let a = k / (1.0 + g * g) * (-y);
    let b = g * g;
    let sum = sum_batched(ctl, 32, |n| {
        Ok(power_coefficients(a, b, n)
            .into_iter()
            .enumerate()
            .map(|(m, d)| if m % 2 == 1 { -d } else { d })
            .collect())
    })?;
    Ok(sum.scaled(pre))
}

/// MGF in closed form with a single exponentiation.
pub fn mgf_closed(p: &TwdpParams, ctx: &SnrContext, s: f64) -> Result<f64> {
    check_s(s)?;
    let (pre, y) = split(p, ctx, s);
    let (g, k) = (p.gamma(), p.k());
    let e = k * y;
    let z = 2.0 * g * k * (-y) / (1.0 + g * g);
    Ok(pre * (e + z).exp() * bessel_i_scaled(0, z))
}

/// Rician MGF `(1+K)/(1+K-γ₀s) · exp(Kγ₀s/(1+K-γ₀s))`.
pub fn mgf_rician(k: f64, gamma0: f64, s: f64) -> Result<f64> {
    check_s(s)?;
    if !(k >= 0.0 && gamma0 > 0.0 && k.is_finite() && gamma0.is_finite()) {
        return Err(TwdpError::InvalidParameter(format!("need K >= 0 and gamma0 > 0, got K={k}, gamma0={gamma0}")));
    }
    let den = 1.0 + k - gamma0 * s;
    Ok((1.0 + k) / den * (k * gamma0 * s / den).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::cdf_snr;
    use crate::quad::{integrate, QuadTol};
    use crate::specfun::exp_i0_identity_rhs;
    use proptest::prelude::*;

    fn setup(k: f64, g: f64, gamma0: f64) -> (TwdpParams, SnrContext) {
        let p = TwdpParams::normalized(k, g).unwrap();
        let ctx = SnrContext::from_gamma0(&p, gamma0).unwrap();
        (p, ctx)
    }

    #[test]
    fn unit_at_origin() {
        let ctl = SeriesControl::default();
        for &(k, g) in &[(0.0, 0.0), (8.0, 0.5), (14.0, 1.0)] {
            let (p, ctx) = setup(k, g, 10.0);
            assert_eq!(mgf_series(&p, &ctx, 0.0, &ctl).unwrap().value, 1.0);
            assert_eq!(mgf_closed(&p, &ctx, 0.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn rayleigh() {
        let (p, ctx) = setup(0.0, 0.3, 7.0);
        for &s in &[-0.01, -1.0, -50.0] {
            let want = 1.0 / (1.0 - 7.0 * s);
            assert!((mgf_series(&p, &ctx, s, &SeriesControl::default()).unwrap().value / want - 1.0).abs() < 1e-15);
            assert!((mgf_closed(&p, &ctx, s).unwrap() / want - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn series_matches_closed_form_example() {
        let (p, ctx) = setup(8.0, 0.5, 10.0);
        let a = mgf_series(&p, &ctx, -1.0, &SeriesControl::default()).unwrap().value;
        let b = mgf_closed(&p, &ctx, -1.0).unwrap();
        assert!((a / b - 1.0).abs() < 1e-11, "{a} vs {b}");
    }

    #[test]
    fn rician_reduction() {
        for &k in &[1.0, 8.0, 14.0] {
            let (p, ctx) = setup(k, 0.0, 20.0);
            for &s in &[-0.05, -0.5, -3.0] {
                let want = mgf_rician(k, 20.0, s).unwrap();
                assert!((mgf_closed(&p, &ctx, s).unwrap() / want - 1.0).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn laplace_stieltjes_of_cdf() {
        // ∫ e^{sγ} dF(γ) = -s ∫₀^∞ e^{sγ} F(γ) dγ after integrating by parts.
        let (p, ctx) = setup(14.0, 1.0, 100.0);
        let s = -2.0;
        let ctl = SeriesControl::default();
        let f = |t: f64| (s * t).exp() * cdf_snr(&p, &ctx, t, &ctl).unwrap().value;
        let v = -s * integrate(f, 0.0, 25.0, QuadTol::both(1e-14, 1e-12)).unwrap().value;
        let want = mgf_closed(&p, &ctx, s).unwrap();
        assert!((v / want - 1.0).abs() < 1e-8, "{v} vs {want}");
    }

    proptest! {
        #[test]
        fn increasing_in_s(k in 0.0f64..16.0, g in 0.0f64..=1.0, g0 in 0.5f64..200.0, s in -20.0f64..-0.01, ds in 1e-3f64..1.0) {
            let (p, ctx) = setup(k, g, g0);
            let lo = mgf_closed(&p, &ctx, s).unwrap();
            let hi = mgf_closed(&p, &ctx, (s + ds).min(0.0)).unwrap();
            prop_assert!(hi > lo);
            prop_assert!(lo > 0.0 && hi <= 1.0);
        }

        #[test]
        fn closed_form_is_exp_i0_identity(k in 0.0f64..14.0, g in 0.0f64..=1.0, g0 in 0.5f64..100.0, s in -10.0f64..0.0) {
            // With a = K|y|/(1+Γ²): M/pre = exp(-2a(1+Γ²)) · exp(a(1+Γ²)) I₀(2aΓ).
            let (p, ctx) = setup(k, g, g0);
            let (pre, y) = split(&p, &ctx, s);
            let a = k * (-y) / (1.0 + g * g);
            let rhs = exp_i0_identity_rhs(a, g * g).unwrap() * (-2.0 * a * (1.0 + g * g)).exp();
            let m = mgf_closed(&p, &ctx, s).unwrap() / pre;
            prop_assert!((m / rhs - 1.0).abs() < 1e-12);
        }
    }
}
