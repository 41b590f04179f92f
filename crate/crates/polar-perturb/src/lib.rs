//! Polar codes with perturbation-enhanced SC/SCL decoding.
//!
//! The crate covers the full pipeline: Gaussian-approximation code
//! construction, polar encoding with CRC attachment, BPSK/AWGN channel
//! simulation, LLR-based SC/SCL decoding, y-side and u-side perturbation
//! retry loops, analytic bounds on the first-error-position behavior, and
//! a deterministic Monte Carlo harness for BLER and first-error-position
//! statistics.

pub mod bounds;
pub mod channel;
pub mod code;
pub mod construction;
pub mod crc;
pub mod decoder;
pub mod encode;
pub mod error;
pub mod perturb;
pub mod rng;
pub mod sim;
pub mod stats;

pub use code::{Bit, CodeConfig, CrcSpec};
pub use decoder::DecodeResult;
pub use error::{Error, Result};
