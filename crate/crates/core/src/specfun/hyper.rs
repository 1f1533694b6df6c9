use super::{dd, sum_streaming, Dd, SeriesControl, SeriesResult};
use crate::error::{invalid_param, Result, TwdpError};

/// `₁F₁(1-m; 2; x)` for `m ≥ 1`, the degree `m-1` polynomial
/// `Σ_j (1-m)_j / (2)_j · x^j / j!`, summed in double-double.
pub fn hyp1f1_poly(m: usize, x: f64) -> Result<f64> {
    if m == 0 {
        return Err(TwdpError::InvalidArgument("hyp1f1_poly needs m >= 1".into()));
    }
    let mut t = dd(1.0);
    let mut s = dd(1.0);
    for j in 0..m - 1 {
        // (1-m+j) / ((2+j)(j+1))
        t = t * x * ((j as f64) + 1.0 - m as f64) / (((j + 2) * (j + 1)) as f64);
        s += t;
    }
    Ok(s.hi())
}

/// `₂F₁(-m, -m; 1; b) = Σ_j C(m, j)² b^j` for `b ∈ [0, 1]`.
pub fn hyp2f1_poly(m: usize, b: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&b) {
        return Err(invalid_param(format!("b must lie in [0, 1], got {b}")));
    }
    let mut binom = dd(1.0);
    let mut pow = dd(1.0);
    let mut s = dd(1.0);
    for j in 1..=m {
        binom = binom * ((m + 1 - j) as f64) / (j as f64);
        pow *= b;
        s += binom * binom * pow;
    }
    Ok(s.hi())
}

/// `d_m = a^m/m! · ₂F₁(-m,-m;1;b)` for `m = 0..n`.
///
/// `₂F₁(-m,-m;1;b) = (1-b)^m P_m((1+b)/(1-b))` with `P_m` the Legendre
/// polynomial, so the three-term Legendre recurrence carries over:
/// `(m+1)² d_{m+1} = a[(2m+1)(1+b) d_m - a(1-b)² d_{m-1}]`.
/// The argument of `P_m` is at least 1, where forward recurrence is stable.
pub(crate) fn power_coefficients(a: f64, b: f64, n: usize) -> Vec<Dd> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    out.push(dd(1.0));
    if n == 1 {
        return out;
    }
    let one_plus_b = dd(1.0) + b;
    let one_minus_b_sq = (dd(1.0) - b) * (dd(1.0) - b);
    out.push(one_plus_b * a);
    for m in 1..n - 1 {
        let mf = m as f64;
        let next = (one_plus_b * (2.0 * mf + 1.0) * out[m] - one_minus_b_sq * a * out[m - 1]) * a
            / ((mf + 1.0) * (mf + 1.0));
        out.push(next);
    }
    out
}

/// `scale · ₁F₁(1-m; 2; x)` for `m = 0..n`.
///
/// `m = 0` is `(e^x - 1)/x`, summed from its positive Maclaurin series. For
/// `m ≥ 1`, `₁F₁(1-m; 2; x) = L^{(1)}_{m-1}(x) / m` and the generalised
/// Laguerre polynomials come from their forward recurrence. Summing the
/// polynomial coefficients directly would lose everything to cancellation
/// once `x` is a few tens.
pub(crate) fn hyp1f1_seq_scaled(n: usize, x: f64, scale: f64) -> Vec<Dd> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let mut t = dd(scale);
    let mut s = t;
    let mut j = 0usize;
    loop {
        t = t * x / ((j + 2) as f64);
        s += t;
        j += 1;
        if (t.hi() <= 1e-34 * s.hi() && (j as f64) > x) || t.hi() == 0.0 {
            break;
        }
    }
    out.push(s);
    // (k+1) L_{k+1} = (2k + 2 - x) L_k - (k+1) L_{k-1}, with L_0 = 1.
    let mut l_prev = dd(0.0);
    let mut l = dd(scale);
    for m in 1..n {
        out.push(l / (m as f64));
        let k = (m - 1) as f64;
        let next = ((dd(2.0 * k + 2.0) - x) * l - l_prev * (k + 1.0)) / (k + 1.0);
        l_prev = l;
        l = next;
    }
    out
}

/// `₂F₁(3/2, 1+m; 2; -c)` for `m = 0..n` and `c ≥ 0`.
///
/// Two Euler transformations turn it into the finite positive sum
/// `(1-x)^{3/2} Σ_{j<m} (1/2)_j/(j+1)! · C(m-1,j) x^j (1-x)^{m-1-j}`,
/// `x = c/(1+c)`. The binomial weights are advanced in `m` with Pascal's
/// rule, which never forms a large power of `x` or `1-x`.
pub(crate) fn hyp2f1_3half_seq(n: usize, c: f64) -> Vec<Dd> {
    let mut out = Vec::with_capacity(n);
    if n == 0 {
        return out;
    }
    let one_plus_c = dd(1.0) + c;
    let root = one_plus_c.sqrt();
    out.push(dd(2.0) / (root * (root + 1.0)));
    if n == 1 {
        return out;
    }
    let x = dd(c) / one_plus_c;
    let one_minus_x = dd(1.0) / one_plus_c;
    let lead = one_minus_x / root;

    // e_j = (1/2)_j / (j+1)!
    let mut e = Vec::with_capacity(n);
    e.push(dd(1.0));
    for j in 1..n {
        let prev: Dd = e[j - 1];
        e.push(prev * (j as f64 - 0.5) / ((j + 1) as f64));
    }

    let mut w = vec![dd(1.0)];
    for _m in 1..n {
        let s = w.iter().zip(&e).fold(dd(0.0), |s, (&wj, &ej)| s + wj * ej);
        out.push(lead * s);
        let mut next = Vec::with_capacity(w.len() + 1);
        for j in 0..=w.len() {
            let stay = if j < w.len() { w[j] * one_minus_x } else { dd(0.0) };
            let step = if j > 0 { w[j - 1] * x } else { dd(0.0) };
            next.push(stay + step);
        }
        w = next;
    }
    out
}

/// `₂F₁(3/2, 1+m; 2; z)` for `z ≤ 0` through the Pfaff transformation
/// `(1-z)^{-(1+m)} ₂F₁(1/2, 1+m; 2; z/(z-1))`.
///
/// The transformed series converges geometrically with ratio `z/(z-1)`, so
/// very negative `z` needs many terms and can exhaust `ctl.max_terms`.
pub fn hyp2f1_3half(m: usize, z: f64, ctl: &SeriesControl) -> Result<SeriesResult> {
    if !(z <= 0.0 && z.is_finite()) {
        return Err(invalid_param(format!("z must be finite and nonpositive, got {z}")));
    }
    let w = z / (z - 1.0);
    let mut t = dd(1.0);
    let b = (1 + m) as f64;
    let sum = sum_streaming(ctl, |j| {
        if j > 0 {
            let jf = (j - 1) as f64;
            t = t * w * (0.5 + jf) * (b + jf) / ((2.0 + jf) * (jf + 1.0));
        }
        t
    })?;
    Ok(sum.scaled((1.0 - z).powf(-b)))
}
