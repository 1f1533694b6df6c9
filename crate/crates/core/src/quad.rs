//! Numerical integration.
//!
//! [`integrate`] is a globally adaptive 21-point Gauss–Kronrod rule in `f64`.
//! The double-double Gauss–Legendre panels used by the exact symbol-error
//! series live in [`gauss_legendre_dd`].

use std::collections::BinaryHeap;
use std::sync::OnceLock;

use crate::error::{Result, TwdpError};
use crate::specfun::Dd;

/// Accuracy request: the estimated error must fall below
/// `min(abs, rel · |I|)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadTol {
    pub abs: f64,
    pub rel: f64,
    pub max_intervals: usize,
}

impl QuadTol {
    /// Both bounds must hold.
    pub fn both(abs: f64, rel: f64) -> Self {
        Self {
            abs,
            rel,
            max_intervals: 4000,
        }
    }

    pub fn absolute(abs: f64) -> Self {
        Self::both(abs, f64::INFINITY)
    }

    fn target(&self, value: f64) -> f64 {
        self.abs.min(self.rel * value.abs())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub abs_err: f64,
    pub intervals: usize,
}

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995657163025808080735527280689003,
    0.973906528517171720077964012084452,
    0.930157491355708226001207180059508,
    0.865063366688984510732096688423493,
    0.780817726586416897063717578345042,
    0.679409568299024406234327365114874,
    0.562757134668604683339000099272694,
    0.433395394129247190799265943165784,
    0.294392862701460198131126603103866,
    0.148874338981631210884826001129720,
    0.000000000000000000000000000000000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011694638867371874278064396062192,
    0.032558162307964727478818972459390,
    0.054755896574351996031381300244580,
    0.075039674810919952767043140916190,
    0.093125454583697605535065465083366,
    0.109387158802297641899210590325805,
    0.123491976262065851077600525386958,
    0.134709217311473325928054001771707,
    0.142775938577060080797094273138717,
    0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
];

// Gauss weights for the odd-indexed Kronrod nodes.
#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066671344308688137593568809893332,
    0.149451349150580593145776339657697,
    0.219086362515982043995534934228163,
    0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err.total_cmp(&other.err)
    }
}

fn gk21<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut kronrod = WGK[10] * fc;
    let mut gauss = 0.0;
    for i in 0..10 {
        let dx = h * XGK[i];
        let s = f(c - dx) + f(c + dx);
        kronrod += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * h,
        err: ((kronrod - gauss) * h).abs(),
    }
}

/// `∫_a^b f(x) dx`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: QuadTol) -> Result<QuadResult> {
    integrate_breaks(f, &[a, b], tol)
}

/// Integral over `[points[0], points[last]]` with the interior points used
/// as initial subdivision boundaries.
pub fn integrate_breaks<F: Fn(f64) -> f64>(f: F, points: &[f64], tol: QuadTol) -> Result<QuadResult> {
    if points.len() < 2 {
        return Err(TwdpError::InvalidArgument("integration needs at least two points".into()));
    }
    let mut heap: BinaryHeap<Panel> = points.windows(2).map(|w| gk21(&f, w[0], w[1])).collect();
    loop {
        let value: f64 = heap.iter().map(|p| p.value).sum();
        let err: f64 = heap.iter().map(|p| p.err).sum();
        if !value.is_finite() || !err.is_finite() {
            return Err(TwdpError::Quadrature { achieved: f64::NAN });
        }
        if err <= tol.target(value) {
            return Ok(QuadResult {
                value,
                abs_err: err,
                intervals: heap.len(),
            });
        }
        if heap.len() >= tol.max_intervals {
            return Err(TwdpError::Quadrature { achieved: err });
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            return Err(TwdpError::Quadrature { achieved: err });
        }
        heap.push(gk21(&f, worst.a, mid));
        heap.push(gk21(&f, mid, worst.b));
    }
}

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]` in
/// double-double, from Newton's method on `P_n`.
pub(crate) fn gauss_legendre_dd(n: usize) -> (Vec<Dd>, Vec<Dd>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    let nf = n as f64;
    for i in 0..n {
        let guess = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut x = Dd::from(guess);
        let mut dp = Dd::from(1.0);
        for _ in 0..8 {
            let (p, d) = legendre_and_derivative(n, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.hi().abs() < 1e-33 {
                break;
            }
        }
        let (_, d) = legendre_and_derivative(n, x);
        if d.hi().is_finite() {
            dp = d;
        }
        nodes.push(x);
        weights.push(Dd::from(2.0) / ((Dd::from(1.0) - x * x) * dp * dp));
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: Dd) -> (Dd, Dd) {
    let mut p0 = Dd::from(1.0);
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = (x * p1 * (2.0 * kf - 1.0) - p0 * (kf - 1.0)) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = (x * p1 - p0) * (n as f64) / (x * x - 1.0);
    (p1, d)
}

/// Cached 20-point double-double rule.
pub(crate) fn gl20_dd() -> &'static (Vec<Dd>, Vec<Dd>) {
    static RULE: OnceLock<(Vec<Dd>, Vec<Dd>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre_dd(20))
}
