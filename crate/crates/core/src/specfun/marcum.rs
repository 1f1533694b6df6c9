use crate::error::{invalid_param, Result};

/// Poisson probabilities `e^{-λ} λ^k / k!` for `k = 0..n`, built outward
/// from the mode so that nothing underflows before it matters.
fn poisson_pmf(lambda: f64, n: usize) -> Vec<f64> {
    let mut p = vec![0.0; n];
    if lambda == 0.0 {
        p[0] = 1.0;
        return p;
    }
    let mode = (lambda.floor() as usize).min(n - 1);
    let mf = mode as f64;
    p[mode] = (-lambda + mf * lambda.ln() - libm::lgamma(mf + 1.0)).exp();
    for k in mode + 1..n {
        p[k] = p[k - 1] * lambda / k as f64;
    }
    for k in (0..mode).rev() {
        p[k] = p[k + 1] * (k + 1) as f64 / lambda;
    }
    p
}

fn terms_for(lambda: f64) -> usize {
    (lambda + 12.0 * lambda.sqrt() + 60.0).ceil() as usize
}

fn check(a: f64, b: f64) -> Result<()> {
    if a >= 0.0 && b >= 0.0 && a.is_finite() && b.is_finite() {
        Ok(())
    } else {
        Err(invalid_param(format!("Marcum Q needs finite a, b >= 0, got a={a}, b={b}")))
    }
}

/// Splits `Q₁(a, b) = Σ_j Pois(j; a²/2) · Pr[Pois(b²/2) ≤ j]` and its
/// complement `Σ_j Pois(j; a²/2) · Pr[Pois(b²/2) > j]`. Both are sums of
/// nonnegative terms, so each keeps full relative accuracy.
fn q_and_p(a: f64, b: f64) -> (f64, f64) {
    let lambda = 0.5 * a * a;
    let mu = 0.5 * b * b;
    let n = terms_for(lambda).max(terms_for(mu));
    let pa = poisson_pmf(lambda, n);
    let pb = poisson_pmf(mu, n);
    // Upper tails of Pois(mu), summed from the far end.
    let mut upper = vec![0.0; n];
    let mut acc = 0.0;
    for j in (0..n).rev() {
        upper[j] = acc;
        acc += pb[j];
    }
    let mut lower = 0.0;
    let mut q = 0.0;
    let mut p = 0.0;
    for j in 0..n {
        lower += pb[j];
        q += pa[j] * lower;
        p += pa[j] * upper[j];
    }
    (q, p)
}

/// First-order Marcum Q-function `Q₁(a, b) = ∫_b^∞ t e^{-(t²+a²)/2} I₀(at) dt`.
pub fn marcum_q1(a: f64, b: f64) -> Result<f64> {
    check(a, b)?;
    let (q, p) = q_and_p(a, b);
    Ok(if q <= 0.5 { q } else { 1.0 - p }.clamp(0.0, 1.0))
}

/// `1 - Q₁(a, b)`, accurate when `Q₁` is close to one.
pub fn marcum_p1(a: f64, b: f64) -> Result<f64> {
    check(a, b)?;
    let (q, p) = q_and_p(a, b);
    Ok(if p <= 0.5 { p } else { 1.0 - q }.clamp(0.0, 1.0))
}
