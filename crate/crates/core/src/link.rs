//! Link-to-system abstraction: SINR composition and SINR-to-rate mapping.
//!
//! Rates come from a [`RateMapper`]. The shipped mapper is the modified
//! Shannon bound `min(η_bw · log2(1 + sinr / η_snr), SE_max)`; other mappers
//! (e.g. an effective-SINR/BLER lookup) plug in through the same trait.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct L2sConfig {
    /// Resource blocks in the carrier (50 for 10 MHz).
    pub n_rb: usize,
    pub bandwidth_efficiency: f64,
    pub snr_efficiency: f64,
    /// bit/s/Hz
    pub max_spectral_efficiency: f64,
    /// Hz
    pub rb_bandwidth: f64,
    /// seconds
    pub tti_duration: f64,
    /// dB
    pub noise_figure: f64,
    /// dBm/Hz
    pub thermal_noise_density: f64,
}

impl Default for L2sConfig {
    fn default() -> Self {
        Self {
            n_rb: 50,
            bandwidth_efficiency: 0.6,
            snr_efficiency: 1.0,
            max_spectral_efficiency: 5.55,
            rb_bandwidth: 180_000.0,
            tti_duration: 0.001,
            noise_figure: 9.0,
            thermal_noise_density: -174.0,
        }
    }
}

impl L2sConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_rb == 0 {
            return Err(Error::config("l2s.n_rb must be > 0"));
        }
        if !(self.bandwidth_efficiency > 0.0 && self.bandwidth_efficiency <= 1.0) {
            return Err(Error::config("l2s.bandwidth_efficiency must be in (0, 1]"));
        }
        if !(self.snr_efficiency > 0.0) {
            return Err(Error::config("l2s.snr_efficiency must be > 0"));
        }
        if !(self.max_spectral_efficiency > 0.0) {
            return Err(Error::config("l2s.max_spectral_efficiency must be > 0"));
        }
        if !(self.rb_bandwidth > 0.0 && self.tti_duration > 0.0) {
            return Err(Error::config("l2s.rb_bandwidth and l2s.tti_duration must be > 0"));
        }
        Ok(())
    }

    /// Resource elements' worth of bandwidth-time per RB per TTI, in Hz·s.
    pub fn rb_hz_seconds(&self) -> f64 {
        self.rb_bandwidth * self.tti_duration
    }

    pub fn mapper(&self) -> ModifiedShannon {
        ModifiedShannon {
            bandwidth_efficiency: self.bandwidth_efficiency,
            snr_efficiency: self.snr_efficiency,
            max_spectral_efficiency: self.max_spectral_efficiency,
        }
    }
}

#[inline]
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[inline]
pub fn linear_to_db(x: f64) -> f64 {
    10.0 * x.log10()
}

/// Thermal noise over one RB in dBm.
pub fn noise_power_per_rb(cfg: &L2sConfig) -> f64 {
    cfg.thermal_noise_density + linear_to_db(cfg.rb_bandwidth) + cfg.noise_figure
}

/// Linear SINR from dBm powers.
pub fn compute_sinr(rx_serving_dbm: f64, rx_interferers_dbm: &[f64], noise_dbm: f64) -> f64 {
    let interference: f64 = rx_interferers_dbm.iter().map(|&p| db_to_linear(p)).sum();
    db_to_linear(rx_serving_dbm) / (interference + db_to_linear(noise_dbm))
}

/// Maps a linear SINR to spectral efficiency in bit/s/Hz.
pub trait RateMapper: Sync {
    fn spectral_efficiency(&self, sinr_linear: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedShannon {
    pub bandwidth_efficiency: f64,
    pub snr_efficiency: f64,
    pub max_spectral_efficiency: f64,
}

impl RateMapper for ModifiedShannon {
    fn spectral_efficiency(&self, sinr_linear: f64) -> f64 {
        let se = self.bandwidth_efficiency * (1.0 + sinr_linear.max(0.0) / self.snr_efficiency).log2();
        se.min(self.max_spectral_efficiency)
    }
}

pub fn spectral_efficiency(sinr_linear: f64, cfg: &L2sConfig) -> f64 {
    cfg.mapper().spectral_efficiency(sinr_linear)
}

/// Bits one RB carries in one TTI.
pub fn rb_rate(sinr_linear: f64, cfg: &L2sConfig) -> f64 {
    spectral_efficiency(sinr_linear, cfg) * cfg.rb_hz_seconds()
}

/// [`rb_rate`] rounded to whole bits; the engine accumulates these.
pub fn rb_bits(mapper: &dyn RateMapper, sinr_linear: f64, rb_hz_seconds: f64) -> u64 {
    (mapper.spectral_efficiency(sinr_linear) * rb_hz_seconds).round() as u64
}

/// Per-RB and aggregate SINR seen by one UE.
#[derive(Debug, Clone, PartialEq)]
pub struct SinrVector {
    /// Linear SINR per RB; 0 on RBs the serving cell does not use.
    pub per_rb: Vec<f64>,
    /// Serving power over interference-plus-noise, both summed over the
    /// serving cell's active RBs.
    pub wideband: f64,
}

impl SinrVector {
    /// `interference_mw[rb]` is the co-channel interference on each RB;
    /// `active[rb]` says whether the serving cell transmits there.
    pub fn from_powers(serving_mw: f64, interference_mw: &[f64], noise_mw: f64, active: impl Fn(usize) -> bool) -> Self {
        let mut per_rb = vec![0.0; interference_mw.len()];
        let mut sig = 0.0;
        let mut den = 0.0;
        for (rb, &i) in interference_mw.iter().enumerate() {
            if active(rb) {
                per_rb[rb] = serving_mw / (i + noise_mw);
                sig += serving_mw;
                den += i + noise_mw;
            }
        }
        let wideband = if den > 0.0 { sig / den } else { 0.0 };
        Self { per_rb, wideband }
    }
}
