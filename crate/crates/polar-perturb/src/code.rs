//! Code configuration: block length, information set, and the CRC spec.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A bit is stored as `u8` with value 0 or 1.
pub type Bit = u8;

/// CRC generator polynomial given by its nonzero exponents, MSB-first
/// shift register with all-zero initial state and no final XOR.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrcSpec {
    pub exponents: Vec<u32>,
}

impl CrcSpec {
    /// CRC-24 with g(x) = x^24 + x^23 + x^6 + x^5 + x + 1.
    pub fn crc24() -> Self {
        Self {
            exponents: vec![24, 23, 6, 5, 1, 0],
        }
    }

    pub fn degree(&self) -> usize {
        *self.exponents.iter().max().unwrap_or(&0) as usize
    }

    pub fn validate(&self) -> Result<()> {
        let deg = self.degree();
        if deg == 0 {
            return Err(Error::Config("CRC polynomial degree must be > 0".into()));
        }
        if !self.exponents.contains(&0) {
            return Err(Error::Config(
                "CRC polynomial must contain the x^0 term".into(),
            ));
        }
        Ok(())
    }

    /// Polynomial coefficients below the leading term, MSB first.
    /// Length equals `degree()`.
    pub fn taps(&self) -> Vec<Bit> {
        let deg = self.degree();
        let mut taps = vec![0u8; deg];
        for &e in &self.exponents {
            if (e as usize) < deg {
                taps[deg - 1 - e as usize] = 1;
            }
        }
        taps
    }
}

/// Static shape of one polar code: N = 2^n, K information positions,
/// and an optional CRC whose bits are counted inside K.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CodeConfig {
    pub n: u32,
    #[serde(rename = "K")]
    pub k: usize,
    pub info_set: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub crc: Option<CrcSpec>,
}

impl CodeConfig {
    pub fn new(n: u32, info_set: Vec<usize>, crc: Option<CrcSpec>) -> Result<Self> {
        let cfg = Self {
            n,
            k: info_set.len(),
            info_set,
            crc,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn block_len(&self) -> usize {
        1usize << self.n
    }

    /// Number of payload bits (information bits minus CRC bits).
    pub fn payload_len(&self) -> usize {
        match &self.crc {
            Some(spec) => self.k - spec.degree(),
            None => self.k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let n_len = self.block_len();
        if self.k != self.info_set.len() {
            return Err(Error::Config(format!(
                "K = {} but info_set has {} entries",
                self.k,
                self.info_set.len()
            )));
        }
        if self.info_set.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "info_set must be strictly ascending".into(),
            ));
        }
        if self.info_set.last().is_some_and(|&i| i >= n_len) {
            return Err(Error::Config(format!(
                "info_set index out of range for N = {n_len}"
            )));
        }
        if let Some(crc) = &self.crc {
            crc.validate()?;
            if self.k <= crc.degree() {
                return Err(Error::Config(
                    "K must exceed the CRC degree when a CRC is present".into(),
                ));
            }
        }
        Ok(())
    }

    /// Membership mask over all N indices, true at information positions.
    pub fn info_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.block_len()];
        for &i in &self.info_set {
            mask[i] = true;
        }
        mask
    }

    /// Scatter information bits into a full length-N source vector,
    /// frozen positions set to zero.
    pub fn place_info_bits(&self, info: &[Bit]) -> Vec<Bit> {
        assert_eq!(info.len(), self.k);
        let mut u = vec![0u8; self.block_len()];
        for (&pos, &b) in self.info_set.iter().zip(info) {
            u[pos] = b;
        }
        u
    }

    /// Gather information bits out of a full length-N source vector.
    pub fn extract_info_bits(&self, u: &[Bit]) -> Vec<Bit> {
        self.info_set.iter().map(|&i| u[i]).collect()
    }
}
