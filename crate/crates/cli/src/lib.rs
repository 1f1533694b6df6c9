//! `twdp` command-line front end: CSV curves for the envelope PDF/CDF, the
//! SNR MGF, M-PSK error probability, Monte Carlo SER and the figure set.

pub mod commands;
pub mod error;
pub mod figures;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use twdp_core::params::gamma_from_delta;
use twdp_core::{SeriesControl, SimConfig, TwdpParams};

pub use error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "twdp", version, about = "TWDP fading statistics and M-PSK error probability")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Envelope PDF curve.
    Pdf(CurveArgs),
    /// Envelope CDF curve.
    Cdf(CurveArgs),
    /// SNR moment generating function over s <= 0.
    Mgf(MgfArgs),
    /// Average symbol error probability of M-PSK against SNR.
    Asep(AsepArgs),
    /// Monte Carlo symbol error rate of M-PSK.
    Simulate(SimulateArgs),
    /// Convert between Gamma and Delta, optionally giving K from K_Rice.
    Convert(ConvertArgs),
    /// Write the full set of figure CSVs and a manifest.
    Figures(FiguresArgs),
}

#[derive(Debug, Clone, Args)]
pub struct ParamArgs {
    /// Total specular to diffuse power ratio.
    #[arg(long, default_value_t = 0.0)]
    pub k: f64,
    /// Specular magnitude ratio V2/V1.
    #[arg(long, conflicts_with = "delta")]
    pub gamma: Option<f64>,
    /// Legacy parameter 2 V1 V2 / (V1^2 + V2^2).
    #[arg(long)]
    pub delta: Option<f64>,
    /// Diffuse power per dimension; defaults to the value giving Omega = 1.
    #[arg(long)]
    pub sigma2: Option<f64>,
}

impl ParamArgs {
    pub fn params(&self) -> CliResult<TwdpParams> {
        let gamma = match (self.gamma, self.delta) {
            (Some(g), None) => g,
            (None, Some(d)) => gamma_from_delta(d)?,
            (None, None) => 0.0,
            (Some(_), Some(_)) => return Err(CliError::Usage("--gamma and --delta are mutually exclusive".into())),
        };
        Ok(match self.sigma2 {
            Some(s2) => TwdpParams::new(self.k, gamma, s2)?,
            None => TwdpParams::normalized(self.k, gamma)?,
        })
    }
}

#[derive(Debug, Clone, Args)]
pub struct SeriesArgs {
    /// Relative tolerance of the series stopping rule.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    /// Maximum number of series terms.
    #[arg(long, default_value_t = 500)]
    pub max_terms: usize,
}

impl SeriesArgs {
    pub fn control(&self) -> CliResult<SeriesControl> {
        Ok(SeriesControl::new(self.tol, self.max_terms, SeriesControl::default().consec_below)?)
    }
}

#[derive(Debug, Clone, Args)]
pub struct CurveArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Number of grid points.
    #[arg(long, default_value_t = 301)]
    pub points: usize,
    /// Upper end of the envelope axis (in units of sqrt(Omega) when normalized).
    #[arg(long, default_value_t = 3.0)]
    pub rmax: f64,
    /// Use the normalized envelope r / sqrt(Omega).
    #[arg(long, default_value_t = true, action = clap::ArgAction::Set)]
    pub normalized: bool,
}

#[derive(Debug, Clone, Args)]
pub struct MgfArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub series: SeriesArgs,
    /// Average SNR in dB.
    #[arg(long, default_value_t = 10.0)]
    pub snr_db: f64,
    /// Lower end of the s axis (must be negative).
    #[arg(long, default_value_t = -10.0, allow_negative_numbers = true)]
    pub s_min: f64,
    #[arg(long, default_value_t = 201)]
    pub points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum AsepMethod {
    Exact,
    Asymptotic,
    Quadrature,
    All,
}

#[derive(Debug, Clone, Args)]
pub struct AsepArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub series: SeriesArgs,
    #[arg(long, default_value_t = 2)]
    pub mod_order: u32,
    /// SNR grid in dB as from:to:step.
    #[arg(long, default_value = "0:40:5")]
    pub snr_db: String,
    #[arg(long, value_enum, default_value_t = AsepMethod::Exact)]
    pub method: AsepMethod,
}

#[derive(Debug, Clone, Args)]
pub struct SimArgs {
    /// Random seed; a fixed seed reproduces the output exactly.
    #[arg(long, default_value_t = SimConfig::default().seed)]
    pub seed: u64,
    /// Worker threads.
    #[arg(long, env = "TWDP_WORKERS")]
    pub workers: Option<usize>,
}

impl SimArgs {
    pub fn workers(&self) -> usize {
        self.workers.unwrap_or(SimConfig::default().workers)
    }
}

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamArgs,
    #[command(flatten)]
    pub sim: SimArgs,
    #[arg(long, default_value_t = 2)]
    pub mod_order: u32,
    /// Single SNR in dB or a from:to:step grid.
    #[arg(long, default_value = "10")]
    pub snr_db: String,
    /// Trials per SNR point (the cap when --min-errors is given).
    #[arg(long, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Keep drawing until this many errors are seen or --samples is reached.
    #[arg(long)]
    pub min_errors: Option<u64>,
}

#[derive(Debug, Clone, Args)]
pub struct ConvertArgs {
    #[arg(long, conflicts_with = "delta", required_unless_present = "delta")]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    /// Rician factor of the dominant ray; prints the matching K.
    #[arg(long)]
    pub k_rice: Option<f64>,
}

#[derive(Debug, Clone, Args)]
pub struct FiguresArgs {
    /// Output directory (created if missing).
    #[arg(long)]
    pub outdir: PathBuf,
    #[command(flatten)]
    pub sim: SimArgs,
    /// Skip all Monte Carlo columns.
    #[arg(long)]
    pub no_sim: bool,
    /// Envelope samples per histogram.
    #[arg(long, default_value_t = 1_000_000)]
    pub hist_samples: usize,
    /// Trial cap per simulated SER point.
    #[arg(long, default_value_t = 1_000_000)]
    pub ser_trials: usize,
}

/// Runs one command, writing CSV or text to `out`.
pub fn run(cli: &Cli, out: &mut dyn Write) -> CliResult<()> {
    match &cli.command {
        Command::Pdf(a) => commands::envelope(a, commands::Curve::Pdf, out),
        Command::Cdf(a) => commands::envelope(a, commands::Curve::Cdf, out),
        Command::Mgf(a) => commands::mgf(a, out),
        Command::Asep(a) => commands::asep(a, out),
        Command::Simulate(a) => commands::simulate(a, out),
        Command::Convert(a) => commands::convert(a, out),
        Command::Figures(a) => figures::write_all(a, out),
    }
}
