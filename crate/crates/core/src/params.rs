//! TWDP parameter set and conversions between parameterisations.
//!
//! The model is `r = V₁e^{jΦ₁} + V₂e^{jΦ₂} + n` with `n` complex Gaussian of
//! total power `2σ²`. It is described here by
//!
//! - `K = (V₁² + V₂²) / 2σ²`, the specular-to-diffuse power ratio,
//! - `Γ = V₂ / V₁ ∈ [0, 1]`, the linear magnitude ratio of the two rays,
//!
//! with the legacy `Δ = 2V₁V₂ / (V₁² + V₂²)` available through conversions.

use serde::Serialize;

use crate::error::{invalid_param, Result};

/// `(K, Γ, σ²)` with the derived magnitudes cached.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwdpParams {
    k: f64,
    gamma: f64,
    sigma2: f64,
}

/// Physical amplitudes of the two specular rays and the per-dimension
/// diffuse variance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhysicalMagnitudes {
    v1: f64,
    v2: f64,
    sigma2: f64,
}

impl PhysicalMagnitudes {
    /// Builds the magnitudes, swapping `v1` and `v2` if needed so that `v2 ≤ v1`.
    pub fn new(v1: f64, v2: f64, sigma2: f64) -> Result<Self> {
        if !(v1.is_finite() && v1 >= 0.0 && v2.is_finite() && v2 >= 0.0) {
            return Err(invalid_param(format!(
                "specular magnitudes must be finite and nonnegative (v1={v1}, v2={v2})"
            )));
        }
        check_sigma2(sigma2)?;
        let (v1, v2) = if v2 > v1 { (v2, v1) } else { (v1, v2) };
        Ok(Self { v1, v2, sigma2 })
    }

    pub fn v1(&self) -> f64 {
        self.v1
    }

    pub fn v2(&self) -> f64 {
        self.v2
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }
}

fn check_sigma2(sigma2: f64) -> Result<()> {
    if sigma2.is_finite() && sigma2 > 0.0 {
        Ok(())
    } else {
        Err(invalid_param(format!("sigma2 must be positive and finite, got {sigma2}")))
    }
}

fn check_unit(name: &str, v: f64) -> Result<()> {
    if (0.0..=1.0).contains(&v) {
        Ok(())
    } else {
        Err(invalid_param(format!("{name} must lie in [0, 1], got {v}")))
    }
}

fn check_k(k: f64) -> Result<()> {
    if k.is_finite() && k >= 0.0 {
        Ok(())
    } else {
        Err(invalid_param(format!("K must be finite and nonnegative, got {k}")))
    }
}

impl TwdpParams {
    pub fn new(k: f64, gamma: f64, sigma2: f64) -> Result<Self> {
        check_k(k)?;
        check_unit("gamma", gamma)?;
        check_sigma2(sigma2)?;
        Ok(Self { k, gamma, sigma2 })
    }

    /// `(K, Γ)` with `σ² = 1 / (2(1 + K))`, i.e. unit total power `Ω = 1`.
    pub fn normalized(k: f64, gamma: f64) -> Result<Self> {
        check_k(k)?;
        Self::new(k, gamma, 0.5 / (1.0 + k))
    }

    /// `(K, Δ)` with unit total power.
    pub fn normalized_from_delta(k: f64, delta: f64) -> Result<Self> {
        Self::normalized(k, gamma_from_delta(delta)?)
    }

    pub fn from_magnitudes(m: PhysicalMagnitudes) -> Result<Self> {
        let (v1, v2, sigma2) = (m.v1, m.v2, m.sigma2);
        check_sigma2(sigma2)?;
        let k = (v1 * v1 + v2 * v2) / (2.0 * sigma2);
        let gamma = if v1 > 0.0 { v2 / v1 } else { 0.0 };
        Self::new(k, gamma.min(1.0), sigma2)
    }

    /// Same `(K, Γ)` rescaled to a different diffuse variance.
    pub fn with_sigma2(&self, sigma2: f64) -> Result<Self> {
        Self::new(self.k, self.gamma, sigma2)
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn sigma2(&self) -> f64 {
        self.sigma2
    }

    pub fn delta(&self) -> f64 {
        delta_of(self.gamma)
    }

    pub fn k_rice(&self) -> f64 {
        k_rice(self)
    }

    /// Dominant specular amplitude `V₁ = sqrt(2σ²K / (1 + Γ²))`.
    pub fn v1(&self) -> f64 {
        (2.0 * self.sigma2 * self.k / (1.0 + self.gamma * self.gamma)).sqrt()
    }

    pub fn v2(&self) -> f64 {
        self.gamma * self.v1()
    }

    /// Total average power `Ω = V₁² + V₂² + 2σ² = 2σ²(1 + K)`.
    pub fn omega(&self) -> f64 {
        2.0 * self.sigma2 * (1.0 + self.k)
    }

    pub fn magnitudes(&self) -> PhysicalMagnitudes {
        PhysicalMagnitudes {
            v1: self.v1(),
            v2: self.v2(),
            sigma2: self.sigma2,
        }
    }
}

fn delta_of(gamma: f64) -> f64 {
    2.0 * gamma / (1.0 + gamma * gamma)
}

/// `Δ = 2Γ / (1 + Γ²)`.
pub fn delta_from_gamma(gamma: f64) -> Result<f64> {
    check_unit("gamma", gamma)?;
    Ok(delta_of(gamma))
}

/// Inverse of [`delta_from_gamma`].
///
/// Evaluated as `Δ / (1 + sqrt(1 - Δ²))`, which equals
/// `(1 - sqrt(1 - Δ²)) / Δ` without the cancellation near `Δ = 0`.
pub fn gamma_from_delta(delta: f64) -> Result<f64> {
    check_unit("delta", delta)?;
    Ok(delta / (1.0 + ((1.0 - delta) * (1.0 + delta)).sqrt()))
}

/// Rician factor of the dominant ray alone, `K / (1 + Γ²)`.
pub fn k_rice(p: &TwdpParams) -> f64 {
    p.k / (1.0 + p.gamma * p.gamma)
}

/// `K / K_Rice` as a function of `Γ`: `1 + Γ²`.
pub fn k_ratio_from_gamma(gamma: f64) -> Result<f64> {
    check_unit("gamma", gamma)?;
    Ok(1.0 + gamma * gamma)
}

/// `K / K_Rice` as a function of `Δ`: `2(1 - sqrt(1 - Δ²)) / Δ²`, written as
/// `2 / (1 + sqrt(1 - Δ²))` so that `Δ = 0` is regular.
pub fn k_ratio_from_delta(delta: f64) -> Result<f64> {
    check_unit("delta", delta)?;
    Ok(2.0 / (1.0 + ((1.0 - delta) * (1.0 + delta)).sqrt()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn from_magnitudes_examples() {
        let p = TwdpParams::from_magnitudes(PhysicalMagnitudes::new(0.0, 0.0, 1.0).unwrap()).unwrap();
        assert_eq!((p.k(), p.gamma()), (0.0, 0.0));

        let p = TwdpParams::from_magnitudes(PhysicalMagnitudes::new(1.0, 1.0, 0.5).unwrap()).unwrap();
        assert_eq!((p.k(), p.gamma()), (2.0, 1.0));

        let p = TwdpParams::from_magnitudes(PhysicalMagnitudes::new(2.0, 1.0, 1.0).unwrap()).unwrap();
        assert_eq!((p.k(), p.gamma()), (2.5, 0.5));
    }

    #[test]
    fn magnitudes_are_reordered() {
        let m = PhysicalMagnitudes::new(1.0, 2.0, 1.0).unwrap();
        assert_eq!((m.v1(), m.v2()), (2.0, 1.0));
    }

    #[test]
    fn rejects_bad_sigma2() {
        assert!(PhysicalMagnitudes::new(1.0, 1.0, 0.0).is_err());
        assert!(TwdpParams::new(1.0, 0.5, -1.0).is_err());
        assert!(TwdpParams::new(-1.0, 0.5, 1.0).is_err());
        assert!(TwdpParams::new(1.0, 1.5, 1.0).is_err());
    }

    #[test]
    fn delta_gamma_examples() {
        assert_eq!(delta_from_gamma(0.0).unwrap(), 0.0);
        assert_eq!(delta_from_gamma(1.0).unwrap(), 1.0);
        assert!((delta_from_gamma(0.5).unwrap() - 0.8).abs() < 1e-15);
        assert_eq!(gamma_from_delta(0.0).unwrap(), 0.0);
        assert_eq!(gamma_from_delta(1.0).unwrap(), 1.0);
        assert!((gamma_from_delta(0.8).unwrap() - 0.5).abs() < 1e-15);
        assert!(delta_from_gamma(-0.1).is_err());
        assert!(gamma_from_delta(1.1).is_err());
    }

    #[test]
    fn gamma_from_delta_small_argument() {
        // Γ ≈ Δ/2 (1 + Δ²/4) near zero.
        let d = 1e-9;
        let g = gamma_from_delta(d).unwrap();
        assert!((g - d / 2.0).abs() <= 1e-16 * d);
    }

    #[test]
    fn k_rice_examples() {
        assert_eq!(k_rice(&TwdpParams::normalized(0.0, 0.3).unwrap()), 0.0);
        assert_eq!(k_rice(&TwdpParams::normalized(8.0, 0.0).unwrap()), 8.0);
        assert_eq!(k_rice(&TwdpParams::normalized(14.0, 1.0).unwrap()), 7.0);
    }

    #[test]
    fn normalized_has_unit_power() {
        for &(k, g) in &[(0.0, 0.0), (8.0, 0.5), (14.0, 1.0)] {
            let p = TwdpParams::normalized(k, g).unwrap();
            assert!((p.omega() - 1.0).abs() < 1e-15);
            let m = p.magnitudes();
            let omega = m.v1() * m.v1() + m.v2() * m.v2() + 2.0 * m.sigma2();
            assert!((omega - 1.0).abs() < 1e-14);
        }
    }

    proptest! {
        // Near Γ = 1, dΓ/dΔ ~ 1/(1-Γ) amplifies the rounding of Δ itself, so
        // the 1e-14 bound only holds away from the endpoint.
        #[test]
        fn delta_round_trip(g in 0.0f64..=0.98) {
            let back = gamma_from_delta(delta_from_gamma(g).unwrap()).unwrap();
            prop_assert!((back - g).abs() <= 1e-14);
        }

        #[test]
        fn delta_round_trip_near_one(g in 0.98f64..=1.0) {
            let d = delta_from_gamma(g).unwrap();
            let back = gamma_from_delta(d).unwrap();
            // dΓ/dΔ = (1+Γ²)² / (2(1-Γ²)); Δ carries half an ulp of rounding.
            let cond = (1.0 + g * g).powi(2) / (2.0 * (1.0 - g * g)).max(f64::EPSILON.sqrt());
            prop_assert!((back - g).abs() <= 4.0 * f64::EPSILON * cond + 1e-15);
        }

        #[test]
        fn gamma_round_trip(d in 0.0f64..=1.0) {
            let back = delta_from_gamma(gamma_from_delta(d).unwrap()).unwrap();
            prop_assert!((back - d).abs() <= 1e-15);
        }

        #[test]
        fn delta_dominates_gamma(g in 1e-6f64..(1.0 - 1e-6)) {
            prop_assert!(delta_from_gamma(g).unwrap() > g);
        }

        #[test]
        fn k_consistency(k_r in 0.0f64..50.0, g in 0.0f64..=1.0) {
            let d = delta_from_gamma(g).unwrap();
            let via_gamma = k_r * k_ratio_from_gamma(g).unwrap();
            let via_delta = k_r * k_ratio_from_delta(d).unwrap();
            prop_assert!((via_gamma - via_delta).abs() <= 1e-12 * via_gamma.max(1.0));
        }

        #[test]
        fn magnitudes_round_trip(v1 in 0.0f64..10.0, v2 in 0.0f64..10.0, s2 in 0.01f64..10.0) {
            let m = PhysicalMagnitudes::new(v1, v2, s2).unwrap();
            let back = TwdpParams::from_magnitudes(m).unwrap().magnitudes();
            prop_assert!((back.v1() - m.v1()).abs() <= 1e-12 * m.v1().max(1.0));
            prop_assert!((back.v2() - m.v2()).abs() <= 1e-12 * m.v1().max(1.0));
        }
    }
}
