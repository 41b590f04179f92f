//! Perturbation-enhanced decoding: the y-side retry loop over perturbed
//! received LLRs and the u-side variant that injects variance-scaled noise
//! into each decision LLR during SC decoding.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::code::{Bit, CodeConfig, CrcSpec};
use crate::crc::crc_check;
use crate::decoder::{
    ca_scl_decode, hard_decision, sc_decode, sc_decode_with, DecodeResult, FVariant,
};
use crate::error::{Error, Result};

/// Per-bit perturbation variances sigma_i^2 = 2^{k_i} * sigma_p^2, where
/// k_i counts the g-operations on bit i's decoding path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PerturbSchedule {
    pub sigma_p2: f64,
    pub k: Vec<u32>,
    pub sigma_i2: Vec<f64>,
}

/// Number of g-branches on the path to decision `i`: the popcount of its
/// n-bit expansion.
pub fn g_op_count(i: usize, n: u32) -> u32 {
    debug_assert!(i < 1usize << n);
    (i as u64).count_ones()
}

/// Build the variance schedule for a length-2^n code.
pub fn build_schedule(n: u32, sigma_p2: f64) -> Result<PerturbSchedule> {
    if sigma_p2 < 0.0 {
        return Err(Error::Config(format!(
            "perturbation power must be nonnegative, got {sigma_p2}"
        )));
    }
    let len = 1usize << n;
    let k: Vec<u32> = (0..len).map(|i| g_op_count(i, n)).collect();
    let sigma_i2 = k.iter().map(|&ki| 2f64.powi(ki as i32) * sigma_p2).collect();
    Ok(PerturbSchedule { sigma_p2, k, sigma_i2 })
}

/// One SC pass with u-side noise injected at information positions.
/// Noise is drawn from `rng` only at information indices, in index order.
pub fn u_side_sc(
    llr: &[f64],
    cfg: &CodeConfig,
    schedule: &PerturbSchedule,
    rng: &mut ChaCha8Rng,
) -> Result<DecodeResult> {
    assert_eq!(schedule.sigma_i2.len(), cfg.block_len());
    let mask = cfg.info_mask();
    sc_decode_with(llr, cfg, FVariant::MinSum, |i, l| {
        if mask[i] && schedule.sigma_p2 > 0.0 {
            l + schedule.sigma_i2[i].sqrt() * rng.sample::<f64, _>(StandardNormal)
        } else {
            l
        }
    })
}

/// How Algorithm 2's retry loop perturbs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum USideMode {
    /// Inject noise during SC so perturbed decisions feed the g-updates.
    #[default]
    InDecoding,
    /// Perturb the stored decision LLRs of the initial pass and re-harden
    /// without re-propagating (the literal pseudocode).
    StaticReharden,
}

fn info_crc_pass(u_hat: &[Bit], cfg: &CodeConfig, crc: &CrcSpec) -> bool {
    crc_check(&cfg.extract_info_bits(u_hat), crc)
}

/// u-side perturbation-enhanced SC (Algorithm 2 shape): attempt 0 is plain
/// SC; on CRC failure up to `attempts` independent perturbed passes, each
/// drawing fresh noise for the same received LLRs.
pub fn u_side_enhanced(
    llr: &[f64],
    cfg: &CodeConfig,
    sigma_p2: f64,
    attempts: u32,
    crc: &CrcSpec,
    mode: USideMode,
    mut attempt_rng: impl FnMut(u32) -> ChaCha8Rng,
) -> Result<DecodeResult> {
    let base = sc_decode(llr, cfg)?;
    if info_crc_pass(&base.u_hat, cfg, crc) {
        return Ok(DecodeResult { crc_pass: true, ..base });
    }
    let schedule = build_schedule(cfg.n, sigma_p2)?;
    let mask = cfg.info_mask();
    let mut last = base.clone();
    for t in 1..=attempts {
        let mut rng = attempt_rng(t);
        let result = match mode {
            USideMode::InDecoding => u_side_sc(llr, cfg, &schedule, &mut rng)?,
            USideMode::StaticReharden => {
                // Re-harden the original pass's decision LLRs with noise,
                // no re-propagation through the g-updates.
                let mut u_hat = vec![0u8; cfg.block_len()];
                let mut decision_llrs = base.decision_llrs.clone();
                for i in 0..cfg.block_len() {
                    if mask[i] && schedule.sigma_p2 > 0.0 {
                        decision_llrs[i] +=
                            schedule.sigma_i2[i].sqrt() * rng.sample::<f64, _>(StandardNormal);
                    }
                    if mask[i] {
                        u_hat[i] = hard_decision(decision_llrs[i]);
                    }
                }
                DecodeResult { u_hat, decision_llrs, attempts_used: 0, crc_pass: false }
            }
        };
        let pass = info_crc_pass(&result.u_hat, cfg, crc);
        last = DecodeResult { attempts_used: t, crc_pass: pass, ..result };
        if pass {
            return Ok(last);
        }
    }
    last.attempts_used = attempts;
    Ok(last)
}

/// Base decoder for the y-side retry loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BaseDecoder {
    Sc,
    Scl { list_size: usize },
}

/// y-side perturbation-enhanced decoding (Algorithm 1): each attempt
/// decodes L_1 + n_p with fresh i.i.d. N(0, sigma_p^2) noise added to the
/// original received LLRs, never cumulatively.
pub fn y_side_enhanced(
    llr: &[f64],
    cfg: &CodeConfig,
    sigma_p2: f64,
    attempts: u32,
    crc: &CrcSpec,
    base: BaseDecoder,
    mut attempt_rng: impl FnMut(u32) -> ChaCha8Rng,
) -> Result<DecodeResult> {
    if sigma_p2 < 0.0 {
        return Err(Error::Config(format!(
            "perturbation power must be nonnegative, got {sigma_p2}"
        )));
    }
    let decode_once = |input: &[f64]| -> Result<DecodeResult> {
        match base {
            BaseDecoder::Sc => {
                let res = sc_decode(input, cfg)?;
                let pass = info_crc_pass(&res.u_hat, cfg, crc);
                Ok(DecodeResult { crc_pass: pass, ..res })
            }
            BaseDecoder::Scl { list_size } => ca_scl_decode(input, cfg, list_size, crc),
        }
    };
    let base_result = decode_once(llr)?;
    if base_result.crc_pass {
        return Ok(base_result);
    }
    let sigma_p = sigma_p2.sqrt();
    let mut last = base_result;
    for t in 1..=attempts {
        let mut rng = attempt_rng(t);
        let perturbed: Vec<f64> = llr
            .iter()
            .map(|&l| l + sigma_p * rng.sample::<f64, _>(StandardNormal))
            .collect();
        let mut result = decode_once(&perturbed)?;
        result.attempts_used = t;
        if result.crc_pass {
            return Ok(result);
        }
        last = result;
    }
    Ok(last)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crc::crc_encode;
    use crate::encode::encode;
    use crate::rng::{substream, Role};
    use approx::assert_abs_diff_eq;
    use rand::SeedableRng;

    #[test]
    fn g_op_count_examples() {
        assert_eq!(g_op_count(0, 3), 0);
        assert_eq!(g_op_count(7, 3), 3);
        assert_eq!(g_op_count(5, 3), 2);
        assert_eq!(g_op_count(1023, 10), 10);
    }

    #[test]
    fn schedule_n2_example() {
        let s = build_schedule(2, 0.1).unwrap();
        assert_eq!(s.k, vec![0, 1, 1, 2]);
        let expect = [0.1, 0.2, 0.2, 0.4];
        for (a, e) in s.sigma_i2.iter().zip(expect) {
            assert_abs_diff_eq!(*a, e, epsilon = 1e-15);
        }
    }

    #[test]
    fn schedule_total_is_three_pow_n() {
        for n in 1..=8u32 {
            let s = build_schedule(n, 1.0).unwrap();
            let total: f64 = s.sigma_i2.iter().sum();
            assert_abs_diff_eq!(total, 3f64.powi(n as i32), epsilon = 1e-9 * total);
        }
    }

    #[test]
    fn schedule_boundary_indices() {
        let n = 6;
        let s = build_schedule(n, 0.3).unwrap();
        assert_eq!(s.k[0], 0);
        assert_eq!(s.k[(1 << n) - 1], n);
    }

    #[test]
    fn zero_noise_u_side_equals_plain_sc() {
        let cfg = CodeConfig::new(4, (8..16).collect(), None).unwrap();
        let schedule = build_schedule(4, 0.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for trial in 0..1000u64 {
            let llr: Vec<f64> = (0..16).map(|_| rng.gen_range(-4.0..4.0)).collect();
            let plain = sc_decode(&llr, &cfg).unwrap();
            let mut prng = substream(1, trial, Role::UPerturb(1));
            let perturbed = u_side_sc(&llr, &cfg, &schedule, &mut prng).unwrap();
            assert_eq!(plain.u_hat, perturbed.u_hat);
            assert_eq!(plain.decision_llrs, perturbed.decision_llrs);
        }
    }

    #[test]
    fn injected_noise_variance_matches_schedule() {
        // Decode a fixed input many times and measure the hook noise at a
        // few indices through the decision-LLR delta of the first bit.
        let n = 3u32;
        let cfg = CodeConfig::new(n, (0..8).collect(), None).unwrap();
        let schedule = build_schedule(n, 0.5).unwrap();
        let llr = vec![2.0; 8];
        let plain = sc_decode(&llr, &cfg).unwrap();
        let draws = 100_000usize;
        let mut sum = 0.0;
        let mut sumsq = 0.0;
        for t in 0..draws {
            let mut rng = substream(99, t as u64, Role::UPerturb(1));
            let res = u_side_sc(&llr, &cfg, &schedule, &mut rng).unwrap();
            // Index 0 is decided first, before any feedback can differ.
            let d = res.decision_llrs[0] - plain.decision_llrs[0];
            sum += d;
            sumsq += d * d;
        }
        let mean = sum / draws as f64;
        let var = sumsq / draws as f64 - mean * mean;
        assert!((var - schedule.sigma_i2[0]).abs() < 0.02 * schedule.sigma_i2[0]);
    }

    fn crc_code() -> (CodeConfig, CrcSpec) {
        let spec = CrcSpec::crc24();
        let cfg = CodeConfig::new(6, (24..64).collect(), Some(spec.clone())).unwrap();
        (cfg, spec)
    }

    fn encode_payload(cfg: &CodeConfig, spec: &CrcSpec, payload: &[Bit]) -> Vec<Bit> {
        let info = crc_encode(payload, spec);
        let u = cfg.place_info_bits(&info);
        encode(&u, cfg.n).unwrap()
    }

    #[test]
    fn clean_input_exits_without_perturbation() {
        let (cfg, spec) = crc_code();
        let payload: Vec<Bit> = (0..16).map(|i| (i % 2) as u8).collect();
        let c = encode_payload(&cfg, &spec, &payload);
        let llr: Vec<f64> = c.iter().map(|&b| if b == 0 { 1e3 } else { -1e3 }).collect();
        let res = u_side_enhanced(&llr, &cfg, 0.1, 10, &spec, USideMode::InDecoding, |t| {
            substream(5, 0, Role::UPerturb(t))
        })
        .unwrap();
        assert!(res.crc_pass);
        assert_eq!(res.attempts_used, 0);
    }

    #[test]
    fn t_zero_is_plain_sc() {
        let (cfg, spec) = crc_code();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(21);
        let llr: Vec<f64> = (0..64).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let plain = sc_decode(&llr, &cfg).unwrap();
        let res = u_side_enhanced(&llr, &cfg, 0.1, 0, &spec, USideMode::InDecoding, |t| {
            substream(5, 0, Role::UPerturb(t))
        })
        .unwrap();
        assert_eq!(res.u_hat, plain.u_hat);
        assert_eq!(res.attempts_used, 0);
    }

    #[test]
    fn y_side_zero_power_attempts_identical() {
        let (cfg, spec) = crc_code();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(23);
        let llr: Vec<f64> = (0..64).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let plain = sc_decode(&llr, &cfg).unwrap();
        let res = y_side_enhanced(&llr, &cfg, 0.0, 3, &spec, BaseDecoder::Sc, |t| {
            substream(5, 0, Role::YPerturb(t))
        })
        .unwrap();
        // Every attempt re-decodes the unperturbed LLRs.
        assert_eq!(res.u_hat, plain.u_hat);
    }

    #[test]
    fn attempts_are_deterministic_per_key() {
        let (cfg, spec) = crc_code();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        let llr: Vec<f64> = (0..64).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let run = |seed| {
            u_side_enhanced(&llr, &cfg, 0.2, 5, &spec, USideMode::InDecoding, |t| {
                substream(seed, 7, Role::UPerturb(t))
            })
            .unwrap()
        };
        let a = run(11);
        let b = run(11);
        assert_eq!(a.u_hat, b.u_hat);
        assert_eq!(a.decision_llrs, b.decision_llrs);
        assert_eq!(a.attempts_used, b.attempts_used);
    }

    #[test]
    fn static_reharden_does_not_repropagate() {
        let (cfg, spec) = crc_code();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        let llr: Vec<f64> = (0..64).map(|_| rng.gen_range(-2.0..2.0)).collect();
        let base = sc_decode(&llr, &cfg).unwrap();
        let res = u_side_enhanced(&llr, &cfg, 0.2, 1, &spec, USideMode::StaticReharden, |t| {
            substream(13, 3, Role::UPerturb(t))
        })
        .unwrap();
        // Rehardened decision LLRs differ from the base run only by the
        // injected noise at information positions.
        let mask = cfg.info_mask();
        for i in 0..64 {
            if !mask[i] {
                assert_eq!(res.decision_llrs[i], base.decision_llrs[i]);
            }
        }
    }
}
