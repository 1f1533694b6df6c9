//! Monte Carlo simulation of the TWDP channel.
//!
//! Work is split into fixed-size chunks; chunk `i` draws from a ChaCha8
//! generator seeded with the user seed and switched to stream `i`. The
//! results therefore depend only on the seed, never on the worker count.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::asep::{AvgSnr, ModulationSpec};
use crate::error::{invalid_param, Result, TwdpError};
use crate::params::TwdpParams;

use std::f64::consts::PI;

const CHUNK: usize = 1 << 14;
const SER_ROUND: usize = 32;
// Separates the SER streams from the envelope streams of the same seed.
const SER_STREAM_BASE: u64 = 1 << 40;

/// Sampling configuration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SimConfig {
    pub n_samples: usize,
    pub n_bins: usize,
    pub seed: u64,
    pub workers: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            n_samples: 1_000_000,
            n_bins: 20,
            seed: 2016,
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
        }
    }
}

impl SimConfig {
    pub fn new(n_samples: usize, n_bins: usize, seed: u64, workers: usize) -> Result<Self> {
        let cfg = Self {
            n_samples,
            n_bins,
            seed,
            workers,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_bins == 0 || self.workers == 0 || self.n_samples < self.n_bins {
            return Err(invalid_param(format!(
                "need workers >= 1 and n_samples >= n_bins >= 1 (n_samples={}, n_bins={}, workers={})",
                self.n_samples, self.n_bins, self.workers
            )));
        }
        Ok(())
    }

    fn pool(&self) -> Result<rayon::ThreadPool> {
        rayon::ThreadPoolBuilder::new()
            .num_threads(self.workers)
            .build()
            .map_err(|e| TwdpError::InvalidArgument(format!("cannot start worker pool: {e}")))
    }
}

/// Equal-width histogram over `[0, max sample]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    pub edges: Vec<f64>,
    pub density: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    pub fn bin_width(&self) -> f64 {
        self.edges[1] - self.edges[0]
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

/// Symbol-error count with a normal-approximation 95% interval.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SerEstimate {
    pub errors: u64,
    pub trials: u64,
    pub ser: f64,
    pub ci95_halfwidth: f64,
}

impl SerEstimate {
    /// Fewest error events before an estimate is treated as converged.
    pub const MIN_ERRORS: u64 = 10;

    pub fn from_counts(errors: u64, trials: u64) -> Self {
        let n = trials.max(1) as f64;
        let ser = errors as f64 / n;
        Self {
            errors,
            trials,
            ser,
            ci95_halfwidth: 1.959963984540054 * (ser * (1.0 - ser) / n).sqrt(),
        }
    }

    pub fn converged(&self) -> bool {
        self.errors >= Self::MIN_ERRORS
    }

    /// Whether `value` lies inside the 95% interval.
    pub fn covers(&self, value: f64) -> bool {
        (self.ser - value).abs() <= self.ci95_halfwidth
    }
}

fn chunk_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One draw of `|V₁e^{jΦ₁} + V₂e^{jΦ₂} + n|` with `Re n, Im n ~ N(0, σ²)`.
#[inline]
fn envelope_draw(rng: &mut ChaCha8Rng, v1: f64, v2: f64, sigma: f64) -> f64 {
    let (s1, c1) = (2.0 * PI * rng.random::<f64>()).sin_cos();
    let (s2, c2) = (2.0 * PI * rng.random::<f64>()).sin_cos();
    let nr: f64 = rng.sample(StandardNormal);
    let ni: f64 = rng.sample(StandardNormal);
    let re = v1 * c1 + v2 * c2 + sigma * nr;
    let im = v1 * s1 + v2 * s2 + sigma * ni;
    re.hypot(im)
}

/// `cfg.n_samples` envelope samples in a seed-determined order.
pub fn sample_envelope(p: &TwdpParams, cfg: &SimConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let (v1, v2, sigma) = (p.v1(), p.v2(), p.sigma2().sqrt());
    let n = cfg.n_samples;
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = cfg.pool()?.install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let len = CHUNK.min(n - c * CHUNK);
                let mut rng = chunk_rng(cfg.seed, c as u64);
                (0..len).map(|_| envelope_draw(&mut rng, v1, v2, sigma)).collect()
            })
            .collect()
    });
    Ok(parts.concat())
}

/// Histogram with `cfg.n_bins` equal bins on `[0, max]`. With `normalized`
/// the density integrates to one; otherwise `density` holds raw counts.
pub fn histogram(samples: &[f64], normalized: bool, cfg: &SimConfig) -> Result<Histogram> {
    if samples.is_empty() {
        return Err(TwdpError::InvalidArgument("histogram of an empty sample".into()));
    }
    if cfg.n_bins == 0 {
        return Err(invalid_param("histogram needs at least one bin"));
    }
    if samples.iter().any(|x| !(x.is_finite() && *x >= 0.0)) {
        return Err(TwdpError::InvalidArgument("samples must be finite and nonnegative".into()));
    }
    let bins = cfg.n_bins;
    let max = samples.iter().cloned().fold(0.0, f64::max);
    let top = if max > 0.0 { max } else { 1.0 };
    let width = top / bins as f64;
    let mut counts = vec![0u64; bins];
    for &x in samples {
        let i = ((x / width) as usize).min(bins - 1);
        counts[i] += 1;
    }
    let edges = (0..=bins).map(|i| if i == bins { top } else { i as f64 * width }).collect();
    let n = samples.len() as f64;
    let density = counts
        .iter()
        .map(|&c| if normalized { c as f64 / (n * width) } else { c as f64 })
        .collect();
    Ok(Histogram { edges, density, counts })
}

/// Errors in `len` PSK symbols with fading drawn from `p` rescaled to unit
/// mean-square, unit symbol energy and per-dimension noise variance `1/(2γ₀)`.
fn ser_chunk(p: &TwdpParams, m: u32, gamma0: f64, seed: u64, chunk: u64, len: usize) -> u64 {
    let scale = p.omega().sqrt().recip();
    let (v1, v2, sigma) = (p.v1() * scale, p.v2() * scale, p.sigma2().sqrt() * scale);
    let noise = (0.5 / gamma0).sqrt();
    let sector = 2.0 * PI / m as f64;
    let mut rng = chunk_rng(seed, SER_STREAM_BASE + chunk);
    let mut errors = 0;
    for _ in 0..len {
        let r = envelope_draw(&mut rng, v1, v2, sigma);
        let sym = rng.random_range(0..m);
        let (s, c) = (sector * sym as f64).sin_cos();
        let nr: f64 = rng.sample(StandardNormal);
        let ni: f64 = rng.sample(StandardNormal);
        let (yr, yi) = (r * c + noise * nr, r * s + noise * ni);
        let detected = ((yi.atan2(yr) / sector).round() as i64).rem_euclid(m as i64) as u32;
        if detected != sym {
            errors += 1;
        }
    }
    errors
}

#[allow(clippy::too_many_arguments)]
fn run_ser_chunks(p: &TwdpParams, m: u32, gamma0: f64, cfg: &SimConfig, pool: &rayon::ThreadPool, from: usize, to: usize, total: usize) -> u64 {
    pool.install(|| {
        (from..to)
            .into_par_iter()
            .map(|c| ser_chunk(p, m, gamma0, cfg.seed, c as u64, CHUNK.min(total - c * CHUNK)))
            .sum()
    })
}

/// Symbol error rate of M-PSK from `cfg.n_samples` trials.
pub fn simulate_psk_ser(p: &TwdpParams, m: &ModulationSpec, gamma0_db: f64, cfg: &SimConfig) -> Result<SerEstimate> {
    cfg.validate()?;
    let g0 = AvgSnr::from_db(gamma0_db)?.value();
    let n = cfg.n_samples;
    let errors = run_ser_chunks(p, m.m_order(), g0, cfg, &cfg.pool()?, 0, n.div_ceil(CHUNK), n);
    Ok(SerEstimate::from_counts(errors, n as u64))
}

/// Symbol error rate with the trial count grown in fixed rounds until at
/// least `min_errors` errors or `max_trials` trials. `cfg.n_samples` is not
/// used.
pub fn simulate_psk_ser_adaptive(
    p: &TwdpParams,
    m: &ModulationSpec,
    gamma0_db: f64,
    cfg: &SimConfig,
    min_errors: u64,
    max_trials: usize,
) -> Result<SerEstimate> {
    if cfg.workers == 0 || max_trials == 0 {
        return Err(invalid_param("need workers >= 1 and max_trials >= 1"));
    }
    let g0 = AvgSnr::from_db(gamma0_db)?.value();
    let pool = cfg.pool()?;
    let chunks = max_trials.div_ceil(CHUNK);
    let mut errors = 0;
    let mut done = 0;
    while done < chunks && errors < min_errors {
        let next = (done + SER_ROUND).min(chunks);
        errors += run_ser_chunks(p, m.m_order(), g0, cfg, &pool, done, next, max_trials);
        done = next;
    }
    Ok(SerEstimate::from_counts(errors, (done * CHUNK).min(max_trials) as u64))
}

/// Kolmogorov–Smirnov distance between the empirical CDF of `samples` and
/// `cdf`.
pub fn ks_statistic<F: Fn(f64) -> f64>(samples: &[f64], cdf: F) -> Result<f64> {
    if samples.is_empty() {
        return Err(TwdpError::InvalidArgument("KS statistic of an empty sample".into()));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let d = sorted.iter().enumerate().fold(0.0f64, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    });
    Ok(d)
}

/// Asymptotic 1% critical value of the KS distance for `n` samples.
pub fn ks_critical_1pct(n: usize) -> f64 {
    let s = (n as f64).sqrt();
    1.6276 / (s + 0.12 + 0.11 / s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::asep::asep_quadrature;

    fn cfg(n: usize, workers: usize) -> SimConfig {
        SimConfig::new(n, 20, 7, workers).unwrap()
    }

    fn mean_sq(x: &[f64]) -> (f64, f64) {
        let n = x.len() as f64;
        let m = x.iter().map(|v| v * v).sum::<f64>() / n;
        let var = x.iter().map(|v| (v * v - m).powi(2)).sum::<f64>() / (n - 1.0);
        (m, (var / n).sqrt())
    }

    #[test]
    fn config_validation() {
        assert!(SimConfig::new(10, 20, 0, 1).is_err());
        assert!(SimConfig::new(100, 20, 0, 0).is_err());
        assert!(SimConfig::default().validate().is_ok());
    }

    #[test]
    fn power_matches_omega() {
        for &(k, g) in &[(0.0, 0.0), (8.0, 0.5), (14.0, 1.0)] {
            let p = TwdpParams::new(k, g, 0.7).unwrap();
            let x = sample_envelope(&p, &cfg(200_000, 4)).unwrap();
            let (m, se) = mean_sq(&x);
            assert!((m - p.omega()).abs() < 3.0 * se, "K={k}: {m} vs {}", p.omega());
        }
    }

    #[test]
    fn independent_of_worker_count() {
        let p = TwdpParams::normalized(8.0, 0.5).unwrap();
        let a = sample_envelope(&p, &cfg(50_000, 1)).unwrap();
        let b = sample_envelope(&p, &cfg(50_000, 5)).unwrap();
        assert_eq!(a, b);
        let m = ModulationSpec::new(4).unwrap();
        let s1 = simulate_psk_ser(&p, &m, 5.0, &cfg(60_000, 1)).unwrap();
        let s2 = simulate_psk_ser(&p, &m, 5.0, &cfg(60_000, 3)).unwrap();
        assert_eq!(s1, s2);
    }

    #[test]
    fn seeds_differ() {
        let p = TwdpParams::normalized(0.0, 0.0).unwrap();
        let a = sample_envelope(&p, &SimConfig::new(1000, 20, 1, 1).unwrap()).unwrap();
        let b = sample_envelope(&p, &SimConfig::new(1000, 20, 2, 1).unwrap()).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn histogram_basics() {
        let c = cfg(100, 1);
        let h = histogram(&[2.0; 100], true, &c).unwrap();
        assert_eq!(h.counts.iter().filter(|&&n| n > 0).count(), 1);
        let x: Vec<f64> = (0..100).map(|i| i as f64 * 0.37).collect();
        let h = histogram(&x, false, &c).unwrap();
        assert_eq!(h.total(), 100);
        assert_eq!(h.edges.len(), 21);
        let h = histogram(&x, true, &c).unwrap();
        let area: f64 = h.density.iter().map(|d| d * h.bin_width()).sum();
        assert!((area - 1.0).abs() < 1e-12);
        assert!(histogram(&[], true, &c).is_err());
    }

    #[test]
    fn ks_against_exact_uniform() {
        let x: Vec<f64> = (0..1000).map(|i| (i as f64 + 0.5) / 1000.0).collect();
        let d = ks_statistic(&x, |v| v.clamp(0.0, 1.0)).unwrap();
        assert!((d - 0.0005).abs() < 1e-12);
        assert!(ks_critical_1pct(1_000_000) > 1.6e-3 && ks_critical_1pct(1_000_000) < 1.63e-3);
    }

    #[test]
    fn rayleigh_bpsk_ser() {
        let p = TwdpParams::normalized(0.0, 0.0).unwrap();
        let s = simulate_psk_ser(&p, &ModulationSpec::new(2).unwrap(), 10.0, &cfg(400_000, 4)).unwrap();
        let want = 0.5 * (1.0 - (10.0f64 / 11.0).sqrt());
        let sigma = (want * (1.0 - want) / s.trials as f64).sqrt();
        assert!((s.ser - want).abs() < 3.0 * sigma, "{} vs {want}", s.ser);
    }

    #[test]
    fn qpsk_matches_quadrature() {
        let p = TwdpParams::normalized(8.0, 0.5).unwrap();
        let m = ModulationSpec::new(4).unwrap();
        let s = simulate_psk_ser_adaptive(&p, &m, 20.0, &cfg(1000, 4), 400, 4_000_000).unwrap();
        let want = asep_quadrature(&p, &m, AvgSnr::from_db(20.0).unwrap()).unwrap();
        let sigma = (want * (1.0 - want) / s.trials as f64).sqrt();
        assert!((s.ser - want).abs() < 3.0 * sigma, "{} vs {want} ({} trials)", s.ser, s.trials);
    }

    #[test]
    fn high_snr_has_no_errors() {
        let p = TwdpParams::normalized(8.0, 0.0).unwrap();
        let s = simulate_psk_ser(&p, &ModulationSpec::new(2).unwrap(), 80.0, &cfg(100_000, 2)).unwrap();
        assert_eq!(s.errors, 0);
        assert_eq!(s.ci95_halfwidth, 0.0);
    }

    #[test]
    fn estimate_fields() {
        let e = SerEstimate::from_counts(25, 1000);
        assert_eq!(e.ser, 0.025);
        assert!(e.ci95_halfwidth > 0.0 && e.converged());
        assert!(!SerEstimate::from_counts(3, 1000).converged());
    }
}
