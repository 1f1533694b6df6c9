//! Shared fixtures for the benchmarks.

use twdp_core::{AvgSnr, EnvelopePoint, ModulationSpec, SimConfig, TwdpParams};

/// `(K, Γ)` pairs spanning Rayleigh to two equal specular rays.
pub const PARAM_SETS: [(f64, f64); 4] = [(0.0, 0.0), (8.0, 0.0), (8.0, 0.5), (14.0, 1.0)];

pub fn label(k: f64, gamma: f64) -> String {
    format!("k{k}_g{gamma}")
}

pub fn params(k: f64, gamma: f64) -> TwdpParams {
    TwdpParams::normalized(k, gamma).expect("fixture parameters are valid")
}

pub fn radius(r: f64) -> EnvelopePoint {
    EnvelopePoint::new(r).expect("fixture radius is valid")
}

pub fn snr(db: f64) -> AvgSnr {
    AvgSnr::from_db(db).expect("fixture SNR is valid")
}

pub fn psk(m: u32) -> ModulationSpec {
    ModulationSpec::new(m).expect("fixture order is valid")
}

pub fn sim_config(samples: usize, workers: usize) -> SimConfig {
    SimConfig::new(samples, 20, 1, workers).expect("fixture config is valid")
}
