//! Average symbol error probability of coherent M-ary PSK.
//!
//! With `g = sin²(π/M)`, `A = (1+K)/γ₀`, `c = A/g`, `a = K/(1+Γ²)`, `b = Γ²`
//! and `d_m = a^m/m! ₂F₁(-m,-m;1;b)`, the exact value is
//!
//! `P = (√g A/(3π)) Σ_m (-1)^m d_m [ (3π/(2g^{3/2})) ₂F₁(3/2, 1+m; 2; -c)
//!      - F1(3/2; 1/2, 1+m; 5/2; g, -A) ]`.
//!
//! The bracket is the angular integral over `[0, π/2]` plus the one over
//! `[π/M, π/2]`, so it is positive and decreasing in `m`.

use serde::Serialize;

use crate::dist::SnrContext;
use crate::error::{invalid_param, Result};
use crate::mgf::mgf_closed;
use crate::params::TwdpParams;
use crate::quad::{integrate_breaks, QuadTol};
use crate::specfun::{
    appell_f1_seq, bessel_i_scaled, dd, hyp2f1_3half_seq, power_coefficients, sum_batched, SeriesControl,
    SeriesResult,
};

use std::f64::consts::PI;

/// PSK constellation size together with `sin²(π/M)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ModulationSpec {
    m_order: u32,
    sin2_pim: f64,
}

impl ModulationSpec {
    pub fn new(m_order: u32) -> Result<Self> {
        if m_order < 2 {
            return Err(invalid_param(format!("modulation order must be >= 2, got {m_order}")));
        }
        let s = (PI / m_order as f64).sin();
        Ok(Self {
            m_order,
            sin2_pim: s * s,
        })
    }

    pub fn m_order(&self) -> u32 {
        self.m_order
    }

    pub fn sin2_pim(&self) -> f64 {
        self.sin2_pim
    }
}

/// Average SNR `γ₀`, constructed from decibels or linear scale.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct AvgSnr(f64);

impl AvgSnr {
    pub fn from_db(db: f64) -> Result<Self> {
        if !db.is_finite() {
            return Err(invalid_param(format!("SNR in dB must be finite, got {db}")));
        }
        Self::linear(10f64.powf(db / 10.0))
    }

    pub fn linear(gamma0: f64) -> Result<Self> {
        if gamma0 > 0.0 && gamma0.is_finite() {
            Ok(Self(gamma0))
        } else {
            Err(invalid_param(format!("average SNR must be positive, got {gamma0}")))
        }
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn db(&self) -> f64 {
        10.0 * self.0.log10()
    }
}

/// Exact ASEP from the alternating series.
pub fn asep_exact(p: &TwdpParams, m: &ModulationSpec, gamma0: AvgSnr, ctl: &SeriesControl) -> Result<SeriesResult> {
    ctl.validate()?;
    let g = m.sin2_pim;
    let big_a = (1.0 + p.k()) / gamma0.value();
    let c = big_a / g;
    let gam = p.gamma();
    let a = p.k() / (1.0 + gam * gam);
    let b = gam * gam;
    let weight = dd(3.0 * PI / 2.0) / (dd(g) * dd(g).sqrt());

    let sum = sum_batched(ctl, 48, |n| {
        let d = power_coefficients(a, b, n);
        let h = hyp2f1_3half_seq(n, c);
        let f = appell_f1_seq(n, g, big_a)?;
        Ok((0..n)
            .map(|i| {
                let t = d[i] * (weight * h[i] - f[i]);
                if i % 2 == 1 {
                    -t
                } else {
                    t
                }
            })
            .collect())
    })?;
    Ok(sum.scaled(g.sqrt() * big_a / (3.0 * PI)))
}

/// High-SNR asymptote
/// `(1+K)/(2πγ₀) · (π - π/M + sin(2π/M)/2)/sin²(π/M) · e^{-K} I₀(2ΓK/(1+Γ²))`.
pub fn asep_asymptotic(p: &TwdpParams, m: &ModulationSpec, gamma0: AvgSnr) -> f64 {
    let (k, g) = (p.k(), p.gamma());
    let mf = m.m_order as f64;
    let angle = (PI - PI / mf + 0.5 * (2.0 * PI / mf).sin()) / m.sin2_pim;
    let x = 2.0 * g * k / (1.0 + g * g);
    (1.0 + k) / (2.0 * PI * gamma0.value()) * angle * (x - k).exp() * bessel_i_scaled(0, x)
}

/// `(1/π) ∫₀^{π-π/M} M(-sin²(π/M)/sin²θ) dθ` by adaptive quadrature of the
/// closed-form MGF.
pub fn asep_quadrature(p: &TwdpParams, m: &ModulationSpec, gamma0: AvgSnr) -> Result<f64> {
    let ctx = SnrContext::from_gamma0(p, gamma0.value())?;
    let g = m.sin2_pim;
    let f = |th: f64| {
        let s2 = th.sin().powi(2);
        if s2 == 0.0 {
            return 0.0;
        }
        mgf_closed(p, &ctx, -g / s2).unwrap_or(f64::NAN)
    };
    let upper = PI - PI / m.m_order as f64;
    let points: Vec<f64> = if upper > PI / 2.0 {
        vec![0.0, PI / 2.0, upper]
    } else {
        vec![0.0, upper]
    };
    Ok(integrate_breaks(f, &points, QuadTol::both(1e-13, 1e-10))?.value / PI)
}
