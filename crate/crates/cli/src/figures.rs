//! The figure set: ten CSV files and `manifest.json`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;
use twdp_core::asep::asep_asymptotic;
use twdp_core::dist::{cdf, pdf};
use twdp_core::mcsim::{histogram, sample_envelope, simulate_psk_ser_adaptive};
use twdp_core::params::{delta_from_gamma, gamma_from_delta, k_ratio_from_delta, k_ratio_from_gamma};
use twdp_core::sweep::csv_row;
use twdp_core::{
    AvgSnr, EnvelopePoint, ModulationSpec, SeriesControl, SimConfig, SweepAxis, SweepGrid, TwdpParams,
};

use crate::commands::asep_with_fallback;
use crate::{CliError, CliResult, FiguresArgs};

/// `(K, Γ)` of the envelope and ASEP figures.
pub const FIGURE_SETS: [(f64, f64); 4] = [(0.0, 0.0), (8.0, 0.0), (8.0, 0.5), (14.0, 1.0)];
pub const FIG6_K: f64 = 6.0;
pub const MIN_SER_ERRORS: u64 = 100;

#[derive(Debug, Serialize)]
pub struct ParamRecord {
    pub k: f64,
    pub gamma: f64,
    pub delta: f64,
    pub sigma2: f64,
}

impl From<&TwdpParams> for ParamRecord {
    fn from(p: &TwdpParams) -> Self {
        Self {
            k: p.k(),
            gamma: p.gamma(),
            delta: p.delta(),
            sigma2: p.sigma2(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct FigureEntry {
    pub file: String,
    pub description: String,
    pub columns: Vec<String>,
    pub parameter_sets: Vec<ParamRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mod_order: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub max_terms_used: usize,
    pub quadrature_fallbacks: usize,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub generator: String,
    pub simulated: bool,
    pub seed: u64,
    pub series_rel_tol: f64,
    pub figures: Vec<FigureEntry>,
}

struct Table {
    columns: Vec<String>,
    body: String,
}

impl Table {
    fn new(columns: Vec<String>) -> Self {
        Self {
            columns,
            body: String::new(),
        }
    }

    fn row(&mut self, values: &[f64]) {
        debug_assert_eq!(values.len(), self.columns.len());
        self.body.push_str(&csv_row(values));
    }

    fn render(&self) -> String {
        let mut s = self.columns.join(",");
        s.push('\n');
        s.push_str(&self.body);
        s
    }
}

fn tag(k: f64, g: f64) -> String {
    format!("k{k}_g{g}")
}

fn figure_params() -> CliResult<Vec<TwdpParams>> {
    Ok(FIGURE_SETS
        .iter()
        .map(|&(k, g)| TwdpParams::normalized(k, g))
        .collect::<Result<_, _>>()?)
}

fn entry(file: &str, description: &str, table: &Table, sets: &[TwdpParams]) -> FigureEntry {
    FigureEntry {
        file: file.into(),
        description: description.into(),
        columns: table.columns.clone(),
        parameter_sets: sets.iter().map(ParamRecord::from).collect(),
        mod_order: None,
        seed: None,
        samples: None,
        max_terms_used: 0,
        quadrature_fallbacks: 0,
    }
}

fn unit_grid(points: usize) -> CliResult<Vec<f64>> {
    Ok(SweepGrid::linear(SweepAxis::Gamma, 0.0, 1.0, points)?.values())
}

fn fig1() -> CliResult<(Table, FigureEntry)> {
    let mut t = Table::new(vec!["x".into(), "delta".into(), "gamma".into()]);
    for x in unit_grid(101)? {
        t.row(&[x, delta_from_gamma(x)?, x]);
    }
    let e = entry("fig1.csv", "Delta and Gamma against V2/V1", &t, &[]);
    Ok((t, e))
}

fn fig2() -> CliResult<(Table, FigureEntry)> {
    let mut t = Table::new(vec!["x".into(), "k_ratio_delta".into(), "k_ratio_gamma".into()]);
    for x in unit_grid(101)? {
        t.row(&[x, k_ratio_from_delta(x)?, k_ratio_from_gamma(x)?]);
    }
    let e = entry("fig2.csv", "K/K_Rice against Delta and against Gamma (x is the parameter value)", &t, &[]);
    Ok((t, e))
}

/// Normalized envelope samples for every figure set, or nothing when
/// simulation is off.
fn envelope_samples(a: &FiguresArgs, sets: &[TwdpParams]) -> CliResult<Vec<Vec<f64>>> {
    if a.no_sim {
        return Ok(Vec::new());
    }
    let cfg = SimConfig::new(a.hist_samples, 20, a.sim.seed, a.sim.workers())?;
    sets.iter()
        .map(|p| {
            let s = p.omega().sqrt();
            Ok(sample_envelope(p, &cfg)?.into_iter().map(|r| r / s).collect())
        })
        .collect()
}

fn fig3(a: &FiguresArgs, sets: &[TwdpParams], samples: &[Vec<f64>], ctl: &SeriesControl) -> CliResult<[(Table, FigureEntry); 2]> {
    let sim = !samples.is_empty();
    let tags: Vec<String> = sets.iter().map(|p| tag(p.k(), p.gamma())).collect();
    let mut pdf_cols = vec!["x".to_string()];
    let mut cdf_cols = vec!["x".to_string()];
    pdf_cols.extend(tags.iter().map(|t| format!("pdf_{t}")));
    cdf_cols.extend(tags.iter().map(|t| format!("cdf_{t}")));
    if sim {
        pdf_cols.extend(tags.iter().map(|t| format!("hist_{t}")));
        cdf_cols.extend(tags.iter().map(|t| format!("ecdf_{t}")));
    }
    let cfg = SimConfig::new(a.hist_samples.max(20), 20, a.sim.seed, 1)?;
    let hists = samples.iter().map(|x| histogram(x, true, &cfg)).collect::<Result<Vec<_>, _>>()?;
    let sorted: Vec<Vec<f64>> = samples
        .iter()
        .map(|x| {
            let mut v = x.clone();
            v.sort_by(f64::total_cmp);
            v
        })
        .collect();

    let mut tp = Table::new(pdf_cols);
    let mut tc = Table::new(cdf_cols);
    let (mut pdf_terms, mut cdf_terms) = (0, 0);
    for u in SweepGrid::linear(SweepAxis::EnvelopeR, 0.0, 3.0, 601)?.values() {
        let mut prow = vec![u];
        let mut crow = vec![u];
        for p in sets {
            let s = p.omega().sqrt();
            let r = EnvelopePoint::new(u * s)?;
            let f = pdf(p, r, ctl)?;
            let c = cdf(p, r, ctl)?;
            pdf_terms = pdf_terms.max(f.terms_used);
            cdf_terms = cdf_terms.max(c.terms_used);
            prow.push(f.value * s);
            crow.push(c.value);
        }
        for h in &hists {
            let w = h.bin_width();
            let i = (u / w) as usize;
            prow.push(if u <= h.edges[h.edges.len() - 1] { h.density[i.min(h.density.len() - 1)] } else { 0.0 });
        }
        for v in &sorted {
            crow.push(v.partition_point(|&x| x <= u) as f64 / v.len() as f64);
        }
        tp.row(&prow);
        tc.row(&crow);
    }
    let mut ep = entry("fig3a.csv", "Normalized envelope PDF of r/sqrt(Omega) with 20-bin normalized histograms", &tp, sets);
    let mut ec = entry("fig3b.csv", "Normalized envelope CDF with empirical CDF of the same samples", &tc, sets);
    ep.max_terms_used = pdf_terms;
    ec.max_terms_used = cdf_terms;
    if sim {
        for e in [&mut ep, &mut ec] {
            e.seed = Some(a.sim.seed);
            e.samples = Some(a.hist_samples);
        }
    }
    Ok([(tp, ep), (tc, ec)])
}

fn snr_grid() -> CliResult<Vec<f64>> {
    Ok(SweepGrid::from_range(SweepAxis::SnrDb, "0:40:2.5")?.values())
}

fn fig4(a: &FiguresArgs, m_order: u32, file: &str, sets: &[TwdpParams], ctl: &SeriesControl) -> CliResult<(Table, FigureEntry)> {
    let m = ModulationSpec::new(m_order)?;
    let sim = !a.no_sim;
    let mut cols = vec!["x".to_string()];
    for p in sets {
        let t = tag(p.k(), p.gamma());
        cols.push(format!("exact_{t}"));
        cols.push(format!("asymptotic_{t}"));
        if sim {
            cols.push(format!("sim_{t}"));
            cols.push(format!("ci95_{t}"));
        }
    }
    let cfg = SimConfig::new(a.ser_trials.max(20), 20, a.sim.seed, a.sim.workers())?;
    let mut t = Table::new(cols);
    let (mut terms, mut fallbacks) = (0, 0);
    for db in snr_grid()? {
        let s = AvgSnr::from_db(db)?;
        let mut row = vec![db];
        for p in sets {
            let (v, n, method) = asep_with_fallback(p, &m, s, ctl)?;
            terms = terms.max(n);
            if method != "exact" {
                fallbacks += 1;
            }
            row.push(v);
            row.push(asep_asymptotic(p, &m, s));
            if sim {
                let e = simulate_psk_ser_adaptive(p, &m, db, &cfg, MIN_SER_ERRORS, a.ser_trials)?;
                row.push(e.ser);
                row.push(e.ci95_halfwidth);
            }
        }
        t.row(&row);
    }
    let desc = format!("{m_order}-PSK average symbol error probability: exact, asymptotic and simulated");
    let mut e = entry(file, &desc, &t, sets);
    e.mod_order = Some(m_order);
    e.max_terms_used = terms;
    e.quadrature_fallbacks = fallbacks;
    if sim {
        e.seed = Some(a.sim.seed);
        e.samples = Some(a.ser_trials);
    }
    Ok((t, e))
}

fn fig6(by_delta: bool, ctl: &SeriesControl) -> CliResult<(Table, FigureEntry)> {
    let values: Vec<f64> = (0..=10).map(|i| i as f64 / 10.0).collect();
    let name = if by_delta { "delta" } else { "gamma" };
    let sets = values
        .iter()
        .map(|&v| {
            let g = if by_delta { gamma_from_delta(v)? } else { v };
            Ok(TwdpParams::normalized(FIG6_K, g)?)
        })
        .collect::<CliResult<Vec<_>>>()?;
    let mut cols = vec!["x".to_string()];
    cols.extend(values.iter().map(|v| format!("{name}_{v}")));
    let m = ModulationSpec::new(2)?;
    let mut t = Table::new(cols);
    let (mut terms, mut fallbacks) = (0, 0);
    for db in snr_grid()? {
        let s = AvgSnr::from_db(db)?;
        let mut row = vec![db];
        for p in &sets {
            let (v, n, method) = asep_with_fallback(p, &m, s, ctl)?;
            terms = terms.max(n);
            if method != "exact" {
                fallbacks += 1;
            }
            row.push(v);
        }
        t.row(&row);
    }
    let (file, desc) = if by_delta {
        ("fig6a.csv", "BPSK ASEP at K = 6 for Delta = 0, 0.1, ..., 1")
    } else {
        ("fig6b.csv", "BPSK ASEP at K = 6 for Gamma = 0, 0.1, ..., 1")
    };
    let mut e = entry(file, desc, &t, &sets);
    e.mod_order = Some(2);
    e.max_terms_used = terms;
    e.quadrature_fallbacks = fallbacks;
    Ok((t, e))
}

fn write_file(dir: &Path, name: &str, contents: &str) -> CliResult<()> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| CliError::io(path, e))
}

pub fn write_all(a: &FiguresArgs, out: &mut dyn Write) -> CliResult<()> {
    fs::create_dir_all(&a.outdir).map_err(|e| CliError::io(&a.outdir, e))?;
    let ctl = SeriesControl::default();
    let sets = figure_params()?;
    let samples = envelope_samples(a, &sets)?;

    let mut done: Vec<(Table, FigureEntry)> = vec![fig1()?, fig2()?];
    done.extend(fig3(a, &sets, &samples, &ctl)?);
    for (m, file) in [(2, "fig4a.csv"), (4, "fig4b.csv"), (8, "fig4c.csv"), (16, "fig4d.csv")] {
        done.push(fig4(a, m, file, &sets, &ctl)?);
    }
    done.push(fig6(true, &ctl)?);
    done.push(fig6(false, &ctl)?);

    let mut log = String::new();
    let mut figures = Vec::new();
    for (table, e) in done {
        write_file(&a.outdir, &e.file, &table.render())?;
        let _ = writeln!(log, "wrote {}", a.outdir.join(&e.file).display());
        figures.push(e);
    }
    let manifest = Manifest {
        generator: format!("twdp {}", env!("CARGO_PKG_VERSION")),
        simulated: !a.no_sim,
        seed: a.sim.seed,
        series_rel_tol: ctl.rel_tol,
        figures,
    };
    write_file(&a.outdir, "manifest.json", &serde_json::to_string_pretty(&manifest)?)?;
    let _ = writeln!(log, "wrote {}", a.outdir.join("manifest.json").display());
    out.write_all(log.as_bytes())?;
    Ok(())
}
