//! Envelope and SNR distributions.
//!
//! The envelope PDF is the Bessel-product series
//! `f(r) = (r/σ²) e^{-r²/2σ² - K} Σ_m ε_m (-1)^m I_m(x₁) I_m(x₂) I_m(x₃)`
//! with `x₁ = 2r sqrt(K / (2σ²(1+Γ²)))`, `x₂ = Γx₁`, `x₃ = 2KΓ/(1+Γ²)`.
//! The CDF is
//! `F(r) = x e^{-x} Σ_m (-a)^m/m! ₁F₁(1-m; 2; x) ₂F₁(-m,-m; 1; b)` with
//! `x = r²/2σ²`, `a = K/(1+Γ²)`, `b = Γ²`.

use serde::Serialize;

use crate::error::{invalid_param, Result, TwdpError};
use crate::params::TwdpParams;
use crate::specfun::{
    bessel_i_scaled, bessel_i_scaled_seq, hyp1f1_seq_scaled, marcum_p1, power_coefficients, sum_batched,
    sum_batched_bounded, Dd,
    SeriesControl, SeriesResult,
};

/// An envelope amplitude `r ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct EnvelopePoint(f64);

impl EnvelopePoint {
    pub fn new(r: f64) -> Result<Self> {
        if r >= 0.0 && r.is_finite() {
            Ok(Self(r))
        } else {
            Err(TwdpError::InvalidArgument(format!("envelope r must be finite and >= 0, got {r}")))
        }
    }

    pub fn r(&self) -> f64 {
        self.0
    }
}

/// Average SNR `γ₀` together with the `E_s/N₀` that maps `γ = r² E_s/N₀`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SnrContext {
    gamma0: f64,
    es_n0: f64,
}

impl SnrContext {
    /// `γ₀ = Ω · E_s/N₀`.
    pub fn from_es_n0(p: &TwdpParams, es_n0: f64) -> Result<Self> {
        if !(es_n0 > 0.0 && es_n0.is_finite()) {
            return Err(invalid_param(format!("Es/N0 must be positive, got {es_n0}")));
        }
        Ok(Self {
            gamma0: p.omega() * es_n0,
            es_n0,
        })
    }

    pub fn from_gamma0(p: &TwdpParams, gamma0: f64) -> Result<Self> {
        if !(gamma0 > 0.0 && gamma0.is_finite()) {
            return Err(invalid_param(format!("average SNR must be positive, got {gamma0}")));
        }
        Ok(Self {
            gamma0,
            es_n0: gamma0 / p.omega(),
        })
    }

    pub fn gamma0(&self) -> f64 {
        self.gamma0
    }

    pub fn es_n0(&self) -> f64 {
        self.es_n0
    }
}

const FIRST_BATCH: usize = 48;

/// Envelope PDF from the Bessel-product series.
pub fn pdf(p: &TwdpParams, r: EnvelopePoint, ctl: &SeriesControl) -> Result<SeriesResult> {
    ctl.validate()?;
    let r = r.r();
    if r == 0.0 {
        return Ok(SeriesResult {
            value: 0.0,
            terms_used: 0,
            trunc_estimate: 0.0,
        });
    }
    let (k, g, s2) = (p.k(), p.gamma(), p.sigma2());
    let x1 = 2.0 * r * (k / (2.0 * s2 * (1.0 + g * g))).sqrt();
    let x2 = g * x1;
    let x3 = 2.0 * k * g / (1.0 + g * g);
    let exponent = -r * r / (2.0 * s2) - k + x1 + x2 + x3;

    let sum = sum_batched(ctl, FIRST_BATCH, |n| {
        let i1 = bessel_i_scaled_seq(n, x1);
        let i2 = bessel_i_scaled_seq(n, x2);
        let i3 = bessel_i_scaled_seq(n, x3);
        Ok((0..n)
            .map(|m| {
                let t = i1[m] * i2[m] * i3[m];
                match m {
                    0 => t,
                    _ if m % 2 == 1 => t * -2.0,
                    _ => t * 2.0,
                }
            })
            .collect())
    })?;
    let prefactor = r / s2 * exponent.exp();
    let mut out = sum.scaled(prefactor);
    out.value = out.value.max(0.0);
    Ok(out)
}

/// Shared CDF kernel in the variable `x = r²/2σ² = (γ/γ₀)(1+K)`.
fn cdf_kernel(p: &TwdpParams, x: f64, ctl: &SeriesControl) -> Result<SeriesResult> {
    ctl.validate()?;
    if x == 0.0 {
        return Ok(SeriesResult {
            value: 0.0,
            terms_used: 0,
            trunc_estimate: 0.0,
        });
    }
    let (k, g) = (p.k(), p.gamma());
    if x > 1200.0 {
        // P(R > r) ≤ exp(-(r - V₁ - V₂)²/2σ²) once r exceeds V₁ + V₂.
        let reach = ((k / (1.0 + g * g)).sqrt() * (1.0 + g)).powi(2);
        let gap = x.sqrt() - reach.sqrt();
        if gap > 0.0 && gap * gap > 745.0 {
            return Ok(SeriesResult {
                value: 1.0,
                terms_used: 0,
                trunc_estimate: 0.0,
            });
        }
        return Err(TwdpError::Range(format!("CDF argument x = {x} beyond the scaled series range")));
    }
    let a = k / (1.0 + g * g);
    let b = g * g;
    let half = (-0.5 * x).exp();
    // |₁F₁(1-m; 2; x)| = |L^{(1)}_{m-1}(x)|/m ≤ e^{x/2}, so after scaling by
    // e^{-x/2} each term with m ≥ 1 is bounded by its coefficient alone.
    let sum = sum_batched_bounded(ctl, FIRST_BATCH, |n| {
        let d = power_coefficients(a, b, n);
        let h = hyp1f1_seq_scaled(n, x, half);
        Ok((0..n)
            .map(|m| {
                let t: Dd = d[m] * h[m];
                let bound = if m == 0 { 0.0 } else { d[m].hi() };
                (if m % 2 == 1 { -t } else { t }, bound)
            })
            .collect())
    })?;
    let mut out = sum.scaled(x * half);
    if !(-1e-9..=1.0 + 1e-9).contains(&out.value) {
        return Err(TwdpError::CancellationLoss {
            ratio: out.value.abs(),
            terms_used: out.terms_used,
        });
    }
    out.value = out.value.clamp(0.0, 1.0);
    Ok(out)
}

/// Envelope CDF.
pub fn cdf(p: &TwdpParams, r: EnvelopePoint, ctl: &SeriesControl) -> Result<SeriesResult> {
    let r = r.r();
    cdf_kernel(p, r * r / (2.0 * p.sigma2()), ctl)
}

/// CDF of the instantaneous SNR `γ = r² E_s/N₀`.
pub fn cdf_snr(p: &TwdpParams, ctx: &SnrContext, gamma: f64, ctl: &SeriesControl) -> Result<SeriesResult> {
    if !(gamma >= 0.0 && gamma.is_finite()) {
        return Err(TwdpError::InvalidArgument(format!("SNR must be finite and >= 0, got {gamma}")));
    }
    cdf_kernel(p, gamma / ctx.gamma0() * (1.0 + p.k()), ctl)
}

/// PDF of the instantaneous SNR, `f_R(sqrt(γ/E)) / (2 sqrt(γ E))`.
pub fn pdf_snr(p: &TwdpParams, ctx: &SnrContext, gamma: f64, ctl: &SeriesControl) -> Result<SeriesResult> {
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(TwdpError::InvalidArgument(format!("SNR must be finite and > 0, got {gamma}")));
    }
    let e = ctx.es_n0();
    let r = (gamma / e).sqrt();
    let mut out = pdf(p, EnvelopePoint::new(r)?, ctl)?;
    out.value /= 2.0 * (gamma * e).sqrt();
    Ok(out)
}

fn check_ref(k: f64, sigma2: f64, r: f64) -> Result<()> {
    if k >= 0.0 && sigma2 > 0.0 && r >= 0.0 && k.is_finite() && sigma2.is_finite() && r.is_finite() {
        Ok(())
    } else {
        Err(invalid_param(format!("need K >= 0, sigma2 > 0, r >= 0 (K={k}, sigma2={sigma2}, r={r})")))
    }
}

/// Rayleigh PDF `(r/σ²) e^{-r²/2σ²}`.
pub fn pdf_rayleigh(sigma2: f64, r: f64) -> Result<f64> {
    check_ref(0.0, sigma2, r)?;
    Ok(r / sigma2 * (-r * r / (2.0 * sigma2)).exp())
}

/// Rayleigh CDF `1 - e^{-r²/2σ²}`.
pub fn cdf_rayleigh(sigma2: f64, r: f64) -> Result<f64> {
    check_ref(0.0, sigma2, r)?;
    Ok(-(-r * r / (2.0 * sigma2)).exp_m1())
}

/// Rician PDF with `V² = 2σ²K`:
/// `(r/σ²) e^{-(r²+V²)/2σ²} I₀(rV/σ²)`.
pub fn pdf_rician(k: f64, sigma2: f64, r: f64) -> Result<f64> {
    check_ref(k, sigma2, r)?;
    let v = (2.0 * sigma2 * k).sqrt();
    let z = r * v / sigma2;
    Ok(r / sigma2 * (-(r - v) * (r - v) / (2.0 * sigma2)).exp() * bessel_i_scaled(0, z))
}

/// Rician CDF `1 - Q₁(sqrt(2K), r/σ)`.
pub fn cdf_rician(k: f64, sigma2: f64, r: f64) -> Result<f64> {
    check_ref(k, sigma2, r)?;
    marcum_p1((2.0 * k).sqrt(), r / sigma2.sqrt())
}

/// Tabulated envelope CDF with cubic Hermite interpolation between nodes,
/// for evaluating the CDF at very many sample points.
#[derive(Debug, Clone)]
pub struct EnvelopeCdfTable {
    step: f64,
    cdf: Vec<f64>,
    pdf: Vec<f64>,
}

impl EnvelopeCdfTable {
    pub fn new(p: &TwdpParams, r_max: f64, intervals: usize, ctl: &SeriesControl) -> Result<Self> {
        if !(r_max > 0.0) || intervals == 0 {
            return Err(TwdpError::InvalidArgument("table needs r_max > 0 and at least one interval".into()));
        }
        let step = r_max / intervals as f64;
        let mut cdf_v = Vec::with_capacity(intervals + 1);
        let mut pdf_v = Vec::with_capacity(intervals + 1);
        for i in 0..=intervals {
            let r = EnvelopePoint::new(step * i as f64)?;
            cdf_v.push(cdf(p, r, ctl)?.value);
            pdf_v.push(pdf(p, r, ctl)?.value);
        }
        Ok(Self {
            step,
            cdf: cdf_v,
            pdf: pdf_v,
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        if r <= 0.0 {
            return 0.0;
        }
        let pos = r / self.step;
        let i = pos.floor() as usize;
        if i + 1 >= self.cdf.len() {
            return *self.cdf.last().expect("table is nonempty");
        }
        let t = pos - i as f64;
        let (y0, y1) = (self.cdf[i], self.cdf[i + 1]);
        let (d0, d1) = (self.pdf[i] * self.step, self.pdf[i + 1] * self.step);
        let t2 = t * t;
        let t3 = t2 * t;
        let v = (2.0 * t3 - 3.0 * t2 + 1.0) * y0
            + (t3 - 2.0 * t2 + t) * d0
            + (-2.0 * t3 + 3.0 * t2) * y1
            + (t3 - t2) * d1;
        v.clamp(0.0, 1.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::{integrate, integrate_breaks, QuadTol};
    use proptest::prelude::*;

    fn ctl() -> SeriesControl {
        SeriesControl::default()
    }

    fn at(r: f64) -> EnvelopePoint {
        EnvelopePoint::new(r).unwrap()
    }

    fn figure_sets() -> Vec<TwdpParams> {
        [(0.0, 0.0), (8.0, 0.0), (8.0, 0.5), (14.0, 1.0)]
            .iter()
            .map(|&(k, g)| TwdpParams::normalized(k, g).unwrap())
            .collect()
    }

    #[test]
    fn rayleigh_example() {
        let p = TwdpParams::new(0.0, 0.0, 0.5).unwrap();
        let v = pdf(&p, at(1.0), &ctl()).unwrap().value;
        assert!((v - 2.0 * (-1.0f64).exp()).abs() < 1e-15);
    }

    #[test]
    fn rician_example() {
        let p = TwdpParams::new(8.0, 0.0, 1.0).unwrap();
        let v = pdf(&p, at(4.0), &ctl()).unwrap().value;
        // (r/σ²) exp(-(r² + 2σ²K)/2σ²) I₀(r sqrt(2K)/σ) with I₀ from its power series.
        let z: f64 = 4.0 * 4.0;
        let mut i0 = 0.0;
        let mut t = 1.0;
        for j in 0..200 {
            if j > 0 {
                t *= (z / 2.0) * (z / 2.0) / (j * j) as f64;
            }
            i0 += t;
        }
        let want = 4.0 * (-(16.0 + 16.0) / 2.0f64).exp() * i0;
        assert!((v / want - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_envelope() {
        for p in figure_sets() {
            assert_eq!(pdf(&p, at(0.0), &ctl()).unwrap().value, 0.0);
            assert_eq!(cdf(&p, at(0.0), &ctl()).unwrap().value, 0.0);
        }
    }

    #[test]
    fn pdf_normalisation() {
        for p in figure_sets().into_iter().chain([TwdpParams::new(8.0, 0.5, 2.7).unwrap()]) {
            let top = 8.0 * p.omega().sqrt();
            let f = |r: f64| pdf(&p, at(r), &ctl()).unwrap().value;
            let pts: Vec<f64> = (0..=16).map(|i| top * i as f64 / 16.0).collect();
            let total = integrate_breaks(f, &pts, QuadTol::both(1e-12, 1e-12)).unwrap().value;
            assert!((total - 1.0).abs() < 1e-8, "{p:?}: {total}");
        }
    }

    #[test]
    fn reductions() {
        let s2 = 0.37;
        for &r in &[0.05, 0.4, 1.0, 1.9, 3.3] {
            let p0 = TwdpParams::new(0.0, 0.6, s2).unwrap();
            let want = pdf_rayleigh(s2, r).unwrap();
            assert!((pdf(&p0, at(r), &ctl()).unwrap().value - want).abs() <= 1e-14 * want.max(1.0));
            let want = cdf_rayleigh(s2, r).unwrap();
            assert!((cdf(&p0, at(r), &ctl()).unwrap().value - want).abs() <= 1e-12);

            let p8 = TwdpParams::new(8.0, 0.0, s2).unwrap();
            let want = pdf_rician(8.0, s2, r).unwrap();
            assert!((pdf(&p8, at(r), &ctl()).unwrap().value - want).abs() <= 1e-12 * want.max(1.0));
            let want = cdf_rician(8.0, s2, r).unwrap();
            assert!((cdf(&p8, at(r), &ctl()).unwrap().value - want).abs() <= 1e-10);
        }
    }

    #[test]
    fn cdf_examples() {
        let p = TwdpParams::new(8.0, 0.0, 1.0).unwrap();
        let v = cdf(&p, at(3.0), &ctl()).unwrap().value;
        let want = 1.0 - crate::specfun::marcum_q1(16f64.sqrt(), 3.0).unwrap();
        assert!((v - want).abs() < 1e-12);

        let p = TwdpParams::normalized(14.0, 1.0).unwrap();
        assert!((cdf(&p, at(6.0), &ctl()).unwrap().value - 1.0).abs() < 1e-8);
        assert_eq!(cdf(&p, at(1e3), &ctl()).unwrap().value, 1.0);
    }

    #[test]
    fn derivative_of_cdf_is_pdf() {
        for p in figure_sets() {
            let w = p.omega().sqrt();
            let h = 1e-5 * w;
            for i in 1..=50 {
                let r = 3.0 * w * i as f64 / 50.0;
                let d = (cdf(&p, at(r + h), &ctl()).unwrap().value - cdf(&p, at(r - h), &ctl()).unwrap().value)
                    / (2.0 * h);
                let f = pdf(&p, at(r), &ctl()).unwrap().value;
                assert!((d - f).abs() < 1e-6, "{p:?} r={r}: {d} vs {f}");
            }
        }
    }

    #[test]
    fn cdf_matches_integrated_pdf() {
        let p = TwdpParams::normalized(14.0, 1.0).unwrap();
        for &r in &[0.1, 0.5, 1.0, 1.6] {
            let f = |t: f64| pdf(&p, at(t), &ctl()).unwrap().value;
            let want = integrate(f, 0.0, r, QuadTol::both(1e-15, 1e-13)).unwrap().value;
            let got = cdf(&p, at(r), &ctl()).unwrap().value;
            assert!((got / want - 1.0).abs() < 1e-11, "r={r}: {got} vs {want}");
        }
    }

    #[test]
    fn snr_cdf_consistency() {
        let p = TwdpParams::new(8.0, 0.5, 0.3).unwrap();
        let ctx = SnrContext::from_es_n0(&p, 4.0).unwrap();
        assert!((ctx.gamma0() - 2.0 * 0.3 * 9.0 * 4.0).abs() < 1e-12);
        assert_eq!(cdf_snr(&p, &ctx, 0.0, &ctl()).unwrap().value, 0.0);
        for &g in &[0.1, 1.0, 5.0, 21.6, 60.0] {
            let a = cdf_snr(&p, &ctx, g, &ctl()).unwrap().value;
            let b = cdf(&p, at((g / ctx.es_n0()).sqrt()), &ctl()).unwrap().value;
            assert!((a - b).abs() < 1e-12);
        }
        // Rayleigh SNR CDF.
        let p0 = TwdpParams::normalized(0.0, 0.0).unwrap();
        let ctx0 = SnrContext::from_gamma0(&p0, 10.0).unwrap();
        for &g in &[0.5, 10.0, 40.0] {
            let v = cdf_snr(&p0, &ctx0, g, &ctl()).unwrap().value;
            assert!((v - (1.0 - (-g / 10.0f64).exp())).abs() < 1e-14);
        }
    }

    #[test]
    fn snr_cdf_at_average_matches_quadrature() {
        let p = TwdpParams::normalized(8.0, 0.5).unwrap();
        let ctx = SnrContext::from_gamma0(&p, 10.0).unwrap();
        let f = |g: f64| if g <= 0.0 { 0.0 } else { pdf_snr(&p, &ctx, g, &ctl()).unwrap().value };
        let want = integrate_breaks(f, &[0.0, 1.0, 5.0, 10.0], QuadTol::both(1e-14, 1e-12)).unwrap().value;
        let got = cdf_snr(&p, &ctx, 10.0, &ctl()).unwrap().value;
        assert!((got - want).abs() < 1e-10, "{got} vs {want}");
    }

    #[test]
    fn table_tracks_cdf() {
        let p = TwdpParams::normalized(14.0, 1.0).unwrap();
        let t = EnvelopeCdfTable::new(&p, 4.0, 800, &ctl()).unwrap();
        for i in 0..97 {
            let r = 0.0413 * i as f64;
            let want = cdf(&p, at(r), &ctl()).unwrap().value;
            assert!((t.eval(r) - want).abs() < 1e-9, "r={r}");
        }
    }

    #[test]
    fn pdf_truncation_within_35_terms() {
        let tight = SeriesControl::new(1e-6, 35, 1).unwrap();
        for p in figure_sets() {
            for i in 1..=40 {
                let r = 0.075 * i as f64;
                let res = pdf(&p, at(r), &tight).unwrap();
                assert!(res.terms_used <= 35 && res.trunc_estimate < 1e-6);
            }
        }
    }

    proptest! {
        #[test]
        fn cdf_is_monotone(k in 0.0f64..16.0, g in 0.0f64..=1.0, r in 0.0f64..3.0, dr in 1e-3f64..0.5) {
            let p = TwdpParams::normalized(k, g).unwrap();
            let lo = cdf(&p, at(r), &ctl()).unwrap().value;
            let hi = cdf(&p, at(r + dr), &ctl()).unwrap().value;
            prop_assert!(hi >= lo - 1e-13);
            prop_assert!((0.0..=1.0).contains(&lo));
        }

        #[test]
        fn pdf_nonnegative(k in 0.0f64..16.0, g in 0.0f64..=1.0, r in 0.0f64..4.0) {
            let p = TwdpParams::normalized(k, g).unwrap();
            prop_assert!(pdf(&p, at(r), &ctl()).unwrap().value >= 0.0);
        }
    }
}
