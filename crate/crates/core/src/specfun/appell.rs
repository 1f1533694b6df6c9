use super::{dd, hyp2f1_3half_seq, Dd};
use crate::error::{invalid_param, Result, TwdpError};
use crate::quad::{gl20_dd, integrate, QuadTol};

/// Appell `F1(3/2; 1/2, 1+m; 5/2; x, y)` for `0 ≤ x ≤ 1`, `y ≤ 0`.
///
/// Adaptive quadrature of the Euler integral
/// `(3/2) ∫₀¹ t^{1/2} (1-xt)^{-1/2} (1-yt)^{-(1+m)} dt`. With `t = u²` the
/// integrand is smooth for `x ≤ 1/2`; for larger `x` the substitution
/// `√x·u = sin θ` removes the `(1-xt)^{-1/2}` endpoint singularity at `x = 1`.
pub fn appell_f1(m: usize, x: f64, y: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) || !(y <= 0.0 && y.is_finite()) {
        return Err(invalid_param(format!("need 0 <= x <= 1 and finite y <= 0, got x={x}, y={y}")));
    }
    let p = -(1 + m as i32);
    let tol = QuadTol::both(1e-11, 1e-12);
    if x <= 0.5 {
        let f = |u: f64| {
            let t = u * u;
            t / (1.0 - x * t).sqrt() * (1.0 - y * t).powi(p)
        };
        Ok(3.0 * integrate(f, 0.0, 1.0, tol)?.value)
    } else {
        let sx = x.sqrt();
        let f = |th: f64| {
            let s2 = th.sin().powi(2);
            s2 * (1.0 - y * s2 / x).powi(p)
        };
        Ok(3.0 / (x * sx) * integrate(f, 0.0, sx.asin(), tol)?.value)
    }
}

/// `F1(3/2; 1/2, 1+m; 5/2; g, -A)` for `m = 0..n` in double-double, with
/// `0 < g ≤ 1`, `A > 0`.
///
/// With `c = A/g`, `x = c/(1+c)` and `v = tan θ`, the Euler integral becomes
/// `(3/g^{3/2})(1-x)^{3/2} ∫₀^V v² q(v)^{m-1} / (1+v²)² dv`,
/// `q = (1+(1-x)v²)/(1+v²)`, `V = sqrt(g(1+c)/(1-g))`, which is smooth and
/// gives all orders from the same nodes. At `g = 1` the integral reduces to
/// `(3π/4) ₂F₁(3/2, 1+m; 2; -A)`.
pub(crate) fn appell_f1_seq(n: usize, g: f64, a: f64) -> Result<Vec<Dd>> {
    if !(g > 0.0 && g <= 1.0) || !(a > 0.0 && a.is_finite()) {
        return Err(invalid_param(format!("need 0 < g <= 1 and A > 0, got g={g}, A={a}")));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    if g == 1.0 {
        let k = Dd::PI * 0.75;
        return Ok(hyp2f1_3half_seq(n, a).into_iter().map(|h| h * k).collect());
    }
    let c = dd(a) / g;
    let one_plus_c = dd(1.0) + c;
    let one_minus_x = dd(1.0) / one_plus_c;
    let upper = (dd(g) * one_plus_c / (dd(1.0) - g)).sqrt();

    let integrand = |v: Dd, out: &mut [Dd], weight: Dd| {
        let v2 = v * v;
        let den = dd(1.0) + v2;
        let q = (dd(1.0) + one_minus_x * v2) / den;
        let base = v2 / (den * den) * weight;
        let mut pw = base / q;
        for o in out.iter_mut() {
            *o += pw;
            pw *= q;
        }
    };
    let panel = |lo: Dd, hi: Dd| -> Vec<Dd> {
        let (xs, ws) = gl20_dd();
        let half = (hi - lo) * 0.5;
        let mid = (hi + lo) * 0.5;
        let mut out = vec![dd(0.0); n];
        for (x, w) in xs.iter().zip(ws) {
            integrand(mid + half * *x, &mut out, *w * half);
        }
        out
    };

    let whole = panel(dd(0.0), upper);
    let tol: Vec<f64> = whole.iter().map(|v| 1e-27 * v.hi().abs()).collect();
    let mut total = vec![dd(0.0); n];
    let mut stack = vec![(dd(0.0), upper, whole, 0u32)];
    let width = upper.hi();
    while let Some((lo, hi, est, depth)) = stack.pop() {
        let mid = (lo + hi) * 0.5;
        let left = panel(lo, mid);
        let right = panel(mid, hi);
        let share = (hi - lo).hi() / width;
        let mut worst = 0.0f64;
        let ok = (0..n).all(|m| {
            let diff = (left[m] + right[m] - est[m]).hi().abs();
            worst = worst.max(diff);
            diff <= tol[m] * share.max(1e-3)
        });
        if ok {
            for m in 0..n {
                total[m] += left[m] + right[m];
            }
        } else if depth >= 40 {
            return Err(TwdpError::Quadrature { achieved: worst });
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }

    let scale = dd(3.0) * one_minus_x * one_minus_x.sqrt() / (dd(g) * dd(g).sqrt());
    Ok(total.into_iter().map(|v| v * scale).collect())
}
