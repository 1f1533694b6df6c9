use std::io::Write;

use twdp_core::asep::{asep_asymptotic, asep_exact, asep_quadrature};
use twdp_core::dist::{cdf, pdf};
use twdp_core::mcsim::{simulate_psk_ser, simulate_psk_ser_adaptive};
use twdp_core::mgf::{mgf_closed, mgf_series};
use twdp_core::params::{delta_from_gamma, gamma_from_delta, k_ratio_from_delta, k_ratio_from_gamma};
use twdp_core::sweep::fmt_e12;
use twdp_core::{
    AvgSnr, CurvePoint, EnvelopePoint, ModulationSpec, SimConfig, SnrContext, SweepAxis, SweepGrid, TwdpError,
};

use crate::{AsepArgs, AsepMethod, CliError, CliResult, ConvertArgs, CurveArgs, MgfArgs, SimulateArgs};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curve {
    Pdf,
    Cdf,
}

fn line(out: &mut dyn Write, fields: &[String]) -> CliResult<()> {
    writeln!(out, "{}", fields.join(","))?;
    Ok(())
}

fn nums(values: &[f64]) -> Vec<String> {
    values.iter().map(|v| fmt_e12(*v)).collect()
}

/// Parses a single value or a `from:to:step` range.
pub fn snr_points(spec: &str) -> CliResult<Vec<f64>> {
    if spec.contains(':') {
        Ok(SweepGrid::from_range(SweepAxis::SnrDb, spec)?.values())
    } else {
        spec.trim()
            .parse::<f64>()
            .map(|v| vec![v])
            .map_err(|_| CliError::Usage(format!("bad SNR value {spec:?}")))
    }
}

/// Envelope PDF or CDF samples. With `normalized` the axis is
/// `u = r/sqrt(Ω)` and the PDF is that of `u`.
pub fn envelope_curve(a: &CurveArgs, which: Curve) -> CliResult<Vec<CurvePoint>> {
    let p = a.params.params()?;
    let ctl = a.series.control()?;
    let scale = if a.normalized { p.omega().sqrt() } else { 1.0 };
    let grid = SweepGrid::linear(SweepAxis::EnvelopeR, 0.0, a.rmax, a.points)?;
    grid.values()
        .into_iter()
        .map(|x| {
            let r = EnvelopePoint::new(x * scale)?;
            let res = match which {
                Curve::Pdf => {
                    let mut v = pdf(&p, r, &ctl)?;
                    v.value *= scale;
                    v
                }
                Curve::Cdf => cdf(&p, r, &ctl)?,
            };
            Ok(CurvePoint::new(x, res.value).with("terms_used", res.terms_used))
        })
        .collect()
}

pub fn envelope(a: &CurveArgs, which: Curve, out: &mut dyn Write) -> CliResult<()> {
    let points = envelope_curve(a, which)?;
    line(out, &["x".into(), "y".into(), "terms_used".into()])?;
    for pt in points {
        let mut f = nums(&[pt.x, pt.y]);
        f.push(pt.aux["terms_used"].clone());
        line(out, &f)?;
    }
    Ok(())
}

pub fn mgf(a: &MgfArgs, out: &mut dyn Write) -> CliResult<()> {
    let p = a.params.params()?;
    let ctl = a.series.control()?;
    if !(a.s_min < 0.0) {
        return Err(CliError::Usage(format!("--s-min must be negative, got {}", a.s_min)));
    }
    let ctx = SnrContext::from_gamma0(&p, AvgSnr::from_db(a.snr_db)?.value())?;
    let grid = SweepGrid::linear(SweepAxis::SnrDb, a.s_min, 0.0, a.points)?;
    line(out, &["x".into(), "closed".into(), "series".into(), "terms_used".into()])?;
    for s in grid.values() {
        let series = mgf_series(&p, &ctx, s, &ctl)?;
        let mut f = nums(&[s, mgf_closed(&p, &ctx, s)?, series.value]);
        f.push(series.terms_used.to_string());
        line(out, &f)?;
    }
    Ok(())
}

/// Exact ASEP, or quadrature when the series reports cancellation loss.
/// Returns the value, the terms used (0 for quadrature) and a method tag.
pub fn asep_with_fallback(
    p: &twdp_core::TwdpParams,
    m: &ModulationSpec,
    s: AvgSnr,
    ctl: &twdp_core::SeriesControl,
) -> CliResult<(f64, usize, &'static str)> {
    match asep_exact(p, m, s, ctl) {
        Ok(v) => Ok((v.value, v.terms_used, "exact")),
        Err(TwdpError::CancellationLoss { .. }) => Ok((asep_quadrature(p, m, s)?, 0, "quadrature_fallback")),
        Err(e) => Err(e.into()),
    }
}

pub fn asep(a: &AsepArgs, out: &mut dyn Write) -> CliResult<()> {
    let p = a.params.params()?;
    let ctl = a.series.control()?;
    let m = ModulationSpec::new(a.mod_order)?;
    let grid = SweepGrid::from_range(SweepAxis::SnrDb, &a.snr_db)?;
    let (exact, asym, quad) = match a.method {
        AsepMethod::Exact => (true, false, false),
        AsepMethod::Asymptotic => (false, true, false),
        AsepMethod::Quadrature => (false, false, true),
        AsepMethod::All => (true, true, true),
    };
    let mut header = vec!["x".to_string()];
    for (on, name) in [(exact, "exact"), (asym, "asymptotic"), (quad, "quadrature")] {
        if on {
            header.push(name.into());
        }
    }
    if exact {
        header.push("terms_used".into());
        header.push("method_tag".into());
    }
    line(out, &header)?;
    for db in grid.values() {
        let s = AvgSnr::from_db(db)?;
        let mut values = vec![db];
        let mut tail = Vec::new();
        if exact {
            let (v, terms, tag) = asep_with_fallback(&p, &m, s, &ctl)?;
            values.push(v);
            tail.push(terms.to_string());
            tail.push(tag.to_string());
        }
        if asym {
            values.push(asep_asymptotic(&p, &m, s));
        }
        if quad {
            values.push(asep_quadrature(&p, &m, s)?);
        }
        let mut f = nums(&values);
        f.extend(tail);
        line(out, &f)?;
    }
    Ok(())
}

pub fn simulate(a: &SimulateArgs, out: &mut dyn Write) -> CliResult<()> {
    if a.samples < 1000 {
        return Err(CliError::Usage(format!("--samples must be at least 1000, got {}", a.samples)));
    }
    let p = a.params.params()?;
    let m = ModulationSpec::new(a.mod_order)?;
    let cfg = SimConfig::new(a.samples, SimConfig::default().n_bins, a.sim.seed, a.sim.workers())?;
    line(out, &["x", "ser", "ci95", "errors", "trials"].map(String::from))?;
    for db in snr_points(&a.snr_db)? {
        let est = match a.min_errors {
            Some(n) => simulate_psk_ser_adaptive(&p, &m, db, &cfg, n, a.samples)?,
            None => simulate_psk_ser(&p, &m, db, &cfg)?,
        };
        let mut f = nums(&[db, est.ser, est.ci95_halfwidth]);
        f.push(est.errors.to_string());
        f.push(est.trials.to_string());
        line(out, &f)?;
    }
    Ok(())
}

pub fn convert(a: &ConvertArgs, out: &mut dyn Write) -> CliResult<()> {
    let (gamma, delta) = match (a.gamma, a.delta) {
        (Some(g), None) => (g, delta_from_gamma(g)?),
        (None, Some(d)) => (gamma_from_delta(d)?, d),
        _ => return Err(CliError::Usage("give exactly one of --gamma and --delta".into())),
    };
    let mut header = vec!["gamma".to_string(), "delta".to_string()];
    let mut values = vec![gamma, delta];
    if let Some(kr) = a.k_rice {
        if !(kr >= 0.0 && kr.is_finite()) {
            return Err(CliError::Usage(format!("--k-rice must be finite and >= 0, got {kr}")));
        }
        header.push("k_rice".into());
        header.push("k".into());
        values.push(kr);
        let ratio = match a.delta {
            Some(d) => k_ratio_from_delta(d)?,
            None => k_ratio_from_gamma(gamma)?,
        };
        values.push(kr * ratio);
    }
    line(out, &header)?;
    line(out, &nums(&values))
}
