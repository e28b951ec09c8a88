//! BPSK over AWGN and channel LLRs.
//!
//! Bits map to unit-energy symbols (0 -> +1, 1 -> -1). LLRs follow the
//! `log p(y|0) / p(y|1)` convention, so a positive LLR favours bit 0.
//!
//! Frame noise comes from [`frame_rng`]: ChaCha8 keyed by the master seed,
//! with the frame index selecting the stream. A frame's samples therefore
//! depend only on `(master_seed, frame_index)`, never on execution order.

use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ChannelError {
    #[error("noise variance must be positive, got {0}")]
    NonPositiveVariance(f64),
    #[error("code rate must lie in (0, 1], got {0}")]
    BadRate(f64),
}

/// How the dB operating point is interpreted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SnrConvention {
    /// Eb/N0: `sigma^2 = 1 / (2 * rate * 10^(dB/10))`.
    #[default]
    EbN0,
    /// Es/N0 per BPSK symbol: `sigma^2 = 1 / (2 * 10^(dB/10))`.
    EsN0,
}

impl FromStr for SnrConvention {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "ebno" => Ok(SnrConvention::EbN0),
            "snr" => Ok(SnrConvention::EsN0),
            other => Err(format!(
                "unknown SNR convention `{other}` (expected ebno|snr)"
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelParams {
    pub ebno_db: f64,
    pub rate: f64,
    pub convention: SnrConvention,
}

impl ChannelParams {
    pub fn new(ebno_db: f64, rate: f64) -> Result<Self, ChannelError> {
        Self::with_convention(ebno_db, rate, SnrConvention::EbN0)
    }

    pub fn with_convention(
        ebno_db: f64,
        rate: f64,
        convention: SnrConvention,
    ) -> Result<Self, ChannelError> {
        if !(rate > 0.0 && rate <= 1.0) {
            return Err(ChannelError::BadRate(rate));
        }
        let params = ChannelParams {
            ebno_db,
            rate,
            convention,
        };
        let s2 = params.sigma2();
        if !(s2 > 0.0) {
            return Err(ChannelError::NonPositiveVariance(s2));
        }
        Ok(params)
    }

    /// Noise variance per real dimension for unit-energy BPSK.
    pub fn sigma2(&self) -> f64 {
        let lin = 10f64.powf(self.ebno_db / 10.0);
        match self.convention {
            SnrConvention::EbN0 => 1.0 / (2.0 * self.rate * lin),
            SnrConvention::EsN0 => 1.0 / (2.0 * lin),
        }
    }
}

/// Channel LLR of one received sample: `2y / sigma^2`.
pub fn llr_from_sample(y: f64, sigma2: f64) -> Result<f64, ChannelError> {
    if !(sigma2 > 0.0) {
        return Err(ChannelError::NonPositiveVariance(sigma2));
    }
    Ok(2.0 * y / sigma2)
}

/// Generator for one frame. Streams for distinct frame indices are
/// independent.
pub fn frame_rng(master_seed: u64, frame_index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(frame_index);
    rng
}

/// Sends the all-zero codeword (all symbols `+1`) and returns clipped
/// channel LLRs.
pub fn transmit_all_zero(
    params: &ChannelParams,
    n: usize,
    llr_max: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    transmit(params, &vec![0u8; n], llr_max, rng)
}

/// Sends an arbitrary word of bits and returns clipped channel LLRs.
pub fn transmit(
    params: &ChannelParams,
    bits: &[u8],
    llr_max: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<f64> {
    let sigma2 = params.sigma2();
    let sigma = sigma2.sqrt();
    bits.iter()
        .map(|&b| {
            let symbol = if b == 0 { 1.0 } else { -1.0 };
            let noise: f64 = StandardNormal.sample(rng);
            let y = symbol + sigma * noise;
            (2.0 * y / sigma2).clamp(-llr_max, llr_max)
        })
        .collect()
}
