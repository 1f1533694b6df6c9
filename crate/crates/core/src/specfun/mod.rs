//! Special functions used by the TWDP expressions.
//!
//! Everything that feeds an alternating series is evaluated in double-double
//! arithmetic ([`Dd`]) and rounded once at the end. The public `f64`
//! operations are thin wrappers over those kernels.

mod appell;
mod bessel;
mod double;
mod hyper;
mod marcum;

pub use appell::appell_f1;
pub use bessel::{bessel_i_scaled, exp_i0_identity_lhs, exp_i0_identity_rhs};
pub use hyper::{hyp1f1_poly, hyp2f1_3half, hyp2f1_poly};
pub use marcum::{marcum_p1, marcum_q1};

pub(crate) use appell::appell_f1_seq;
pub(crate) use bessel::bessel_i_scaled_seq;
pub(crate) use hyper::{power_coefficients, hyp1f1_seq_scaled, hyp2f1_3half_seq};

use serde::Serialize;

use crate::error::{invalid_param, Result, TwdpError};

pub use double::Dd;

/// Partial sums may exceed the final value by at most this factor before the
/// result is reported as [`TwdpError::CancellationLoss`]. Double-double keeps
/// about 31 significant digits, so this leaves roughly 13 for the answer.
pub const CANCELLATION_LIMIT: f64 = 1e18;

/// Truncation policy for the infinite series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesControl {
    pub rel_tol: f64,
    pub max_terms: usize,
    /// Number of consecutive terms that must fall below `rel_tol * |partial|`.
    pub consec_below: usize,
}

impl Default for SeriesControl {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            max_terms: 500,
            consec_below: 3,
        }
    }
}

impl SeriesControl {
    pub fn new(rel_tol: f64, max_terms: usize, consec_below: usize) -> Result<Self> {
        let ctl = Self {
            rel_tol,
            max_terms,
            consec_below,
        };
        ctl.validate()?;
        Ok(ctl)
    }

    pub fn with_rel_tol(self, rel_tol: f64) -> Self {
        Self { rel_tol, ..self }
    }

    pub fn with_max_terms(self, max_terms: usize) -> Self {
        Self { max_terms, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(invalid_param(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol)));
        }
        if self.max_terms == 0 || self.consec_below == 0 {
            return Err(invalid_param("max_terms and consec_below must be at least 1"));
        }
        Ok(())
    }
}

/// Value of a truncated series with its bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    /// `|last included term| / |value|`.
    pub trunc_estimate: f64,
}

/// Sum of a series in double-double before any outer prefactor is applied.
#[derive(Debug, Clone, Copy)]
pub(crate) struct DdSum {
    pub sum: Dd,
    pub terms_used: usize,
    pub trunc_estimate: f64,
}

impl DdSum {
    pub fn scaled(&self, factor: f64) -> SeriesResult {
        SeriesResult {
            value: self.sum.hi() * factor,
            terms_used: self.terms_used,
            trunc_estimate: self.trunc_estimate,
        }
    }
}

struct Accumulator {
    rel_tol: f64,
    consec_below: usize,
    sum: Dd,
    peak: f64,
    below: usize,
    terms: usize,
    last: f64,
}

impl Accumulator {
    fn new(ctl: &SeriesControl) -> Self {
        Self {
            rel_tol: ctl.rel_tol,
            consec_below: ctl.consec_below,
            sum: Dd::from(0.0),
            peak: 0.0,
            below: 0,
            terms: 0,
            last: 0.0,
        }
    }

    /// Adds one term; returns `true` once the stopping rule is met. `bound`
    /// is an a-priori bound on the magnitude of this term's family that must
    /// also be small before the term counts as negligible.
    fn push(&mut self, term: Dd, bound: f64) -> bool {
        self.sum += term;
        self.terms += 1;
        self.last = term.hi().abs();
        let partial = self.sum.hi().abs();
        self.peak = self.peak.max(partial);
        let size = self.last.max(bound);
        if size < self.rel_tol * partial || (size == 0.0 && partial == 0.0) {
            self.below += 1;
        } else {
            self.below = 0;
        }
        self.below >= self.consec_below
    }

    fn finish(self) -> Result<DdSum> {
        let value = self.sum.hi().abs();
        if self.peak > CANCELLATION_LIMIT * value {
            return Err(TwdpError::CancellationLoss {
                ratio: self.peak / value,
                terms_used: self.terms,
            });
        }
        let trunc_estimate = if value > 0.0 { self.last / value } else { 0.0 };
        Ok(DdSum {
            sum: self.sum,
            terms_used: self.terms,
            trunc_estimate,
        })
    }
}

/// Sums a series whose terms are produced in batches.
///
/// `terms(n)` must return the first `n` terms (it may return fewer when the
/// series terminates). The batch size starts at `first_batch` and doubles up
/// to `ctl.max_terms` until the stopping rule is met.
pub(crate) fn sum_batched<F>(ctl: &SeriesControl, first_batch: usize, mut terms: F) -> Result<DdSum>
where
    F: FnMut(usize) -> Result<Vec<Dd>>,
{
    sum_batched_bounded(ctl, first_batch, |n| Ok(terms(n)?.into_iter().map(|t| (t, 0.0)).collect()))
}

/// As [`sum_batched`], with each term paired with an upper bound on the
/// magnitude that term could have. The stopping rule then also waits for the
/// bounds to become negligible, which matters for series whose leading term
/// dwarfs a few small early terms before the later ones grow again.
pub(crate) fn sum_batched_bounded<F>(ctl: &SeriesControl, first_batch: usize, mut terms: F) -> Result<DdSum>
where
    F: FnMut(usize) -> Result<Vec<(Dd, f64)>>,
{
    ctl.validate()?;
    let mut n = first_batch.clamp(1, ctl.max_terms);
    loop {
        let batch = terms(n)?;
        let finite = batch.len() < n;
        let mut acc = Accumulator::new(ctl);
        let mut done = false;
        for (t, bound) in batch {
            if !t.hi().is_finite() {
                return Err(TwdpError::Range(format!("non-finite series term after {} terms", acc.terms)));
            }
            if acc.push(t, bound) {
                done = true;
                break;
            }
        }
        if done || finite {
            return acc.finish();
        }
        if n >= ctl.max_terms {
            return Err(TwdpError::SeriesDivergence { terms_used: n });
        }
        n = (2 * n).min(ctl.max_terms);
    }
}

/// Sums terms generated one at a time by `next(m)`, `m = 0, 1, ...`.
pub(crate) fn sum_streaming<F>(ctl: &SeriesControl, mut next: F) -> Result<DdSum>
where
    F: FnMut(usize) -> Dd,
{
    ctl.validate()?;
    let mut acc = Accumulator::new(ctl);
    for m in 0..ctl.max_terms {
        let t = next(m);
        if !t.hi().is_finite() {
            return Err(TwdpError::Range(format!("non-finite series term at index {m}")));
        }
        if acc.push(t, 0.0) {
            return acc.finish();
        }
    }
    Err(TwdpError::SeriesDivergence { terms_used: ctl.max_terms })
}

pub(crate) fn dd(x: f64) -> Dd {
    Dd::from(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn control_validation() {
        assert!(SeriesControl::default().validate().is_ok());
        assert!(SeriesControl::new(0.0, 10, 1).is_err());
        assert!(SeriesControl::new(1.0, 10, 1).is_err());
        assert!(SeriesControl::new(1e-6, 0, 1).is_err());
        assert!(SeriesControl::new(1e-6, 10, 0).is_err());
    }

    #[test]
    fn geometric_series_stops_by_rule() {
        let ctl = SeriesControl::new(1e-10, 500, 3).unwrap();
        let r = sum_streaming(&ctl, |m| dd(0.5f64.powi(m as i32))).unwrap();
        assert!((r.sum.hi() - 2.0).abs() < 1e-9);
        // 0.5^m < 1e-10 * 2 first at m = 33; three in a row ends at m = 35.
        assert_eq!(r.terms_used, 36);
        assert!(r.trunc_estimate < 1e-10);
    }

    #[test]
    fn divergence_is_reported() {
        let ctl = SeriesControl::new(1e-12, 50, 3).unwrap();
        let err = sum_streaming(&ctl, |m| dd(1.0 / (m as f64 + 1.0))).unwrap_err();
        assert_eq!(err, TwdpError::SeriesDivergence { terms_used: 50 });
    }

    #[test]
    fn cancellation_is_reported() {
        // e^{-50} from its Maclaurin series: partial sums reach ~1e20.
        let ctl = SeriesControl::default();
        let mut t = dd(1.0);
        let err = sum_streaming(&ctl, |m| {
            if m > 0 {
                t = t * (-50.0) / (m as f64);
            }
            t
        })
        .unwrap_err();
        assert!(matches!(err, TwdpError::CancellationLoss { .. }));
    }

    #[test]
    fn batched_matches_streaming() {
        let ctl = SeriesControl::default();
        let term = |m: usize| dd(1.0 / ((m as f64 + 1.0).powi(8)));
        let a = sum_streaming(&ctl, term).unwrap();
        let b = sum_batched(&ctl, 8, |n| Ok((0..n).map(term).collect())).unwrap();
        assert_eq!(a.terms_used, b.terms_used);
        assert_eq!(a.sum.hi(), b.sum.hi());
    }
}
