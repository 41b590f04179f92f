//! BPSK over AWGN: modulation, noise sampling, received-LLR computation,
//! and SNR/noise-power conversions.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::code::Bit;
use crate::error::{Error, Result};

/// Which SNR definition a dB figure uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SnrConvention {
    /// Energy per information bit over noise density.
    #[default]
    EbN0,
    /// Energy per transmitted symbol over noise density.
    EsN0,
}

/// Channel operating point.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ChannelParams {
    pub sigma2: f64,
    pub snr_db: f64,
    pub convention: SnrConvention,
}

impl ChannelParams {
    pub fn from_snr(snr_db: f64, rate: f64, convention: SnrConvention) -> Result<Self> {
        Ok(Self {
            sigma2: sigma_from_snr(snr_db, rate, convention)?,
            snr_db,
            convention,
        })
    }
}

/// Per-dimension noise variance for a given SNR and code rate.
pub fn sigma_from_snr(snr_db: f64, rate: f64, convention: SnrConvention) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::Config(format!("rate must lie in (0,1], got {rate}")));
    }
    let lin = 10f64.powf(snr_db / 10.0);
    Ok(match convention {
        SnrConvention::EbN0 => 1.0 / (2.0 * rate * lin),
        SnrConvention::EsN0 => 1.0 / (2.0 * lin),
    })
}

/// Perturbation power sigma_p^2 = 10^{-(SNR-0.1)/10} - sigma^2.
/// Errors when the operating point makes it nonpositive.
pub fn perturb_power(snr_db: f64, sigma2: f64) -> Result<f64> {
    let p = 10f64.powf(-(snr_db - 0.1) / 10.0) - sigma2;
    if p <= 0.0 {
        return Err(Error::Config(format!(
            "perturbation power undefined: 10^(-(SNR-0.1)/10) - sigma2 = {p} at SNR {snr_db} dB, sigma2 {sigma2}"
        )));
    }
    Ok(p)
}

/// BPSK mapping 0 -> +1, 1 -> -1.
pub fn modulate_bpsk(c: &[Bit]) -> Vec<f64> {
    c.iter().map(|&b| 1.0 - 2.0 * b as f64).collect()
}

/// Add i.i.d. zero-mean Gaussian noise of variance sigma2.
pub fn awgn_transmit<R: Rng>(x: &[f64], sigma2: f64, rng: &mut R) -> Vec<f64> {
    let sigma = sigma2.sqrt();
    x.iter()
        .map(|&xi| xi + sigma * rng.sample::<f64, _>(StandardNormal))
        .collect()
}

/// Received LLRs 2y/sigma^2 (positive favors bit 0).
pub fn llr_from_channel(y: &[f64], sigma2: f64) -> Vec<f64> {
    y.iter().map(|&yi| 2.0 * yi / sigma2).collect()
}
