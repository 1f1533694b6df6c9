//! Exact statistics of the two-wave with diffuse power (TWDP) fading model.
//!
//! The crate is organised bottom-up:
//!
//! - [`params`]: the `(K, Γ)` parameter set and conversions to `(K, Δ)` and
//!   to the physical magnitudes `V₁`, `V₂`, `σ²`.
//! - [`specfun`]: exponentially scaled Bessel functions, the terminating and
//!   transformed hypergeometric families, Appell `F1`, Marcum `Q₁`.
//! - [`dist`]: infinite-series envelope PDF/CDF and the SNR-domain CDF.
//! - [`mgf`]: the SNR moment generating function in series and closed form.
//! - [`asep`]: average symbol error probability of M-ary PSK (exact series,
//!   high-SNR asymptote, MGF quadrature).
//! - [`mcsim`]: Monte Carlo envelope sampling and PSK symbol-error simulation.
//! - [`sweep`]: sweep grids, curve points and the CSV formatting used by the CLI.
//!
//! The alternating series are summed in double-double arithmetic; partial
//! sums at `K = 14, Γ = 1` exceed the final value by roughly twelve orders of
//! magnitude, which plain `f64` cannot absorb.

pub mod asep;
pub mod dist;
pub mod error;
pub mod mcsim;
pub mod mgf;
pub mod params;
pub mod quad;
pub mod specfun;
pub mod sweep;

pub use asep::{AvgSnr, ModulationSpec};
pub use dist::{EnvelopePoint, SnrContext};
pub use error::{Result, TwdpError};
pub use mcsim::{Histogram, SerEstimate, SimConfig};
pub use params::{PhysicalMagnitudes, TwdpParams};
pub use specfun::{SeriesControl, SeriesResult};
pub use sweep::{CurvePoint, SweepAxis, SweepGrid, SweepScale};
