//! Sweep grids, curve records and the fixed CSV number format.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::error::{invalid_param, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    EnvelopeR,
    SnrDb,
    Gamma,
    Delta,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepScale {
    Linear,
    Log,
}

/// Evenly spaced points on `[start, stop]`, linear or logarithmic.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepGrid {
    pub axis: SweepAxis,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    pub scale: SweepScale,
}

impl SweepGrid {
    pub fn new(axis: SweepAxis, start: f64, stop: f64, points: usize, scale: SweepScale) -> Result<Self> {
        let g = Self {
            axis,
            start,
            stop,
            points,
            scale,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn linear(axis: SweepAxis, start: f64, stop: f64, points: usize) -> Result<Self> {
        Self::new(axis, start, stop, points, SweepScale::Linear)
    }

    /// Parses `from:to:step` into a linear grid that includes both ends.
    pub fn from_range(axis: SweepAxis, spec: &str) -> Result<Self> {
        let parts: Vec<&str> = spec.split(':').collect();
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| invalid_param(format!("bad number {s:?} in range {spec:?}")));
        match parts.as_slice() {
            [a, b, s] => {
                let (a, b, s) = (parse(a)?, parse(b)?, parse(s)?);
                if !(s > 0.0) {
                    return Err(invalid_param(format!("range step must be positive in {spec:?}")));
                }
                let steps = ((b - a) / s + 1e-9).floor();
                if !(steps >= 1.0) {
                    return Err(invalid_param(format!("range {spec:?} needs from < to")));
                }
                Self::linear(axis, a, a + steps * s, steps as usize + 1)
            }
            _ => Err(invalid_param(format!("expected from:to:step, got {spec:?}"))),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.start.is_finite() && self.stop.is_finite() && self.start < self.stop) || self.points < 2 {
            return Err(invalid_param(format!(
                "grid needs finite start < stop and at least 2 points (start={}, stop={}, points={})",
                self.start, self.stop, self.points
            )));
        }
        if self.scale == SweepScale::Log && self.start <= 0.0 {
            return Err(invalid_param("log grid needs start > 0"));
        }
        Ok(())
    }

    pub fn values(&self) -> Vec<f64> {
        let n = self.points - 1;
        (0..=n)
            .map(|i| {
                if i == n {
                    return self.stop;
                }
                let t = i as f64 / n as f64;
                match self.scale {
                    SweepScale::Linear => self.start + t * (self.stop - self.start),
                    SweepScale::Log => (self.start.ln() + t * (self.stop / self.start).ln()).exp(),
                }
            })
            .collect()
    }
}

/// One `(x, y)` record of a curve with optional per-point details.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvePoint {
    pub x: f64,
    pub y: f64,
    pub aux: BTreeMap<String, String>,
}

impl CurvePoint {
    pub fn new(x: f64, y: f64) -> Self {
        Self {
            x,
            y,
            aux: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.aux.insert(key.to_string(), value.to_string());
        self
    }
}

/// C `%.12e` formatting: `1.234567890123e-05`.
pub fn fmt_e12(x: f64) -> String {
    if !x.is_finite() {
        return if x.is_nan() {
            "nan".into()
        } else if x > 0.0 {
            "inf".into()
        } else {
            "-inf".into()
        };
    }
    let s = format!("{x:.12e}");
    let (mant, exp) = s.split_once('e').expect("exponent present");
    let e: i32 = exp.parse().expect("integer exponent");
    format!("{mant}e{}{:02}", if e < 0 { '-' } else { '+' }, e.abs())
}

/// Renders one CSV line of numbers, LF terminated.
pub fn csv_row(values: &[f64]) -> String {
    let mut out = String::new();
    for (i, v) in values.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{}", fmt_e12(*v));
    }
    out.push('\n');
    out
}
