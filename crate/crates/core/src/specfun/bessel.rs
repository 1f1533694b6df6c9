use super::{dd, Dd};
use crate::error::{invalid_param, Result, TwdpError};

const RESCALE_ABOVE: f64 = 1e200;

/// `e^{-x} I_ν(x)` for integer `ν ≥ 0` and `x ≥ 0`.
///
/// # Panics
/// Panics if `x` is negative or NaN.
pub fn bessel_i_scaled(nu: usize, x: f64) -> f64 {
    assert!(x >= 0.0, "bessel_i_scaled requires x >= 0, got {x}");
    bessel_i_scaled_seq(nu + 1, x)[nu].hi()
}

/// `e^{-x} I_k(x)` for `k = 0..n` in double-double.
///
/// Miller's backward recurrence `I_{k-1} = I_{k+1} + (2k/x) I_k`, normalised
/// with `I_0 + 2 Σ I_k = e^x`, so no exponential is ever formed.
pub(crate) fn bessel_i_scaled_seq(n: usize, x: f64) -> Vec<Dd> {
    let mut out = vec![dd(0.0); n];
    if n == 0 {
        return out;
    }
    if x == 0.0 {
        out[0] = dd(1.0);
        return out;
    }
    if x < 1e-3 {
        return small_argument(n, x);
    }

    let start = n + 16 + (160.0 * x).sqrt().ceil() as usize;
    let two_over_x = dd(2.0) / dd(x);
    let mut hi = dd(0.0);
    let mut cur = dd(1.0);
    let mut norm = dd(0.0);
    for k in (1..=start).rev() {
        // cur = y_k, hi = y_{k+1}
        let lower = hi + two_over_x * (k as f64) * cur;
        if k < n {
            out[k] = cur;
        }
        norm += cur;
        hi = cur;
        cur = lower;
        if cur.hi().abs() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            cur *= s;
            hi *= s;
            norm *= s;
            for v in out.iter_mut().skip(k) {
                *v *= s;
            }
        }
    }
    out[0] = cur;
    let total = cur + dd(2.0) * norm;
    for v in &mut out {
        *v /= total;
    }
    out
}

/// Power series times `e^{-x}` for tiny arguments, where the backward
/// recurrence coefficients `2k/x` would overflow.
fn small_argument(n: usize, x: f64) -> Vec<Dd> {
    let q = dd(x) * dd(x) * 0.25;
    let scale = (-x).exp();
    let mut lead = dd(1.0); // (x/2)^k / k!
    (0..n)
        .map(|k| {
            if k > 0 {
                lead = lead * (x * 0.5) / (k as f64);
            }
            let mut t = lead;
            let mut s = lead;
            for j in 1..40 {
                t = t * q / ((j * (j + k)) as f64);
                s += t;
                if t.hi() < 1e-34 * s.hi() {
                    break;
                }
            }
            s * scale
        })
        .collect()
}

/// `exp(a + ab) I₀(2a√b)` assembled as `exp(a(1+√b)²) · e^{-z}I₀(z)`.
pub fn exp_i0_identity_rhs(a: f64, b: f64) -> Result<f64> {
    if !(a >= 0.0 && a.is_finite()) || !(0.0..=1.0).contains(&b) {
        return Err(invalid_param(format!("need a >= 0 and b in [0, 1], got a={a}, b={b}")));
    }
    let sb = b.sqrt();
    let z = 2.0 * a * sb;
    let log_value = a * (1.0 + sb) * (1.0 + sb) + bessel_i_scaled(0, z).ln();
    let v = log_value.exp();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(TwdpError::Range(format!("exp(a + ab) I0(2a sqrt b) overflows for a={a}, b={b}")))
    }
}

/// The `n`-term series `Σ_m a^m/m! ₂F₁(-m,-m;1;b)`, which converges to
/// [`exp_i0_identity_rhs`]. Summed in double-double with exact polynomial
/// coefficients.
pub fn exp_i0_identity_lhs(a: f64, b: f64, n: usize) -> Result<f64> {
    if !(a >= 0.0 && a.is_finite()) || !(0.0..=1.0).contains(&b) {
        return Err(invalid_param(format!("need a >= 0 and b in [0, 1], got a={a}, b={b}")));
    }
    let coeffs = super::power_coefficients(a, b, n);
    let s = coeffs.iter().fold(dd(0.0), |s, &c| s + c);
    Ok(s.hi())
}
