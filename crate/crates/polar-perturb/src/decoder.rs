//! LLR-based SC and SCL decoding.
//!
//! The SC engine walks the polarization tree leaf by leaf, recomputing only
//! the levels invalidated since the previous leaf. Channel LLRs are fed in
//! bit-reversed order so decisions come out in natural source order, which
//! keeps the per-bit g-operation count equal to the popcount of the index.
//!
//! A decision hook lets callers modify each decision LLR right before the
//! hard decision; the perturbation decoders inject their noise there.

use crate::code::{Bit, CodeConfig, CrcSpec};
use crate::crc::crc_check;
use crate::encode::bit_reversal_permute;
use crate::error::Result;

/// Which f-function the decoder uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FVariant {
    /// Min-sum: sgn(a)sgn(b) min(|a|,|b|).
    #[default]
    MinSum,
    /// Exact boxplus 2 atanh(tanh(a/2) tanh(b/2)), evaluated in log domain.
    Exact,
}

/// Min-sum f-operation.
#[inline]
pub fn f_op(a: f64, b: f64) -> f64 {
    a.signum() * b.signum() * a.abs().min(b.abs())
}

/// Exact boxplus in a numerically stable form.
#[inline]
pub fn f_op_exact(a: f64, b: f64) -> f64 {
    f_op(a, b) + (-(a + b).abs()).exp().ln_1p() - (-(a - b).abs()).exp().ln_1p()
}

/// g-operation: (-1)^u * a + b.
#[inline]
pub fn g_op(a: f64, b: f64, u_prev: Bit) -> f64 {
    if u_prev == 1 {
        b - a
    } else {
        a + b
    }
}

/// Hard decision: negative LLR maps to 1, zero ties to 0.
#[inline]
pub fn hard_decision(llr: f64) -> Bit {
    if llr < 0.0 {
        1
    } else {
        0
    }
}

/// Result of one SC (or CA-SCL) decode.
#[derive(Debug, Clone)]
pub struct DecodeResult {
    pub u_hat: Vec<Bit>,
    /// LLR on which each hard decision was made, after any hook.
    pub decision_llrs: Vec<f64>,
    /// Perturbation attempts consumed (0 for a plain decode).
    pub attempts_used: u32,
    /// Whether the returned path passed its CRC (true when no CRC is
    /// configured and decoding simply completed).
    pub crc_pass: bool,
}

/// Per-path tree state: one active node per depth.
#[derive(Debug, Clone)]
struct PathState {
    /// llr[d] holds the active node's LLRs at depth d (len N >> d).
    llr: Vec<Vec<f64>>,
    /// beta[d] holds the encoded bits of the finished left child of the
    /// active node at depth d (len N >> (d+1)).
    beta: Vec<Vec<Bit>>,
    u_hat: Vec<Bit>,
    decision_llrs: Vec<f64>,
    metric: f64,
    variant: FVariant,
}

impl PathState {
    fn new(channel_llrs_bitrev: Vec<f64>, variant: FVariant) -> Self {
        let n_len = channel_llrs_bitrev.len();
        let stages = n_len.trailing_zeros() as usize;
        let mut llr = Vec::with_capacity(stages + 1);
        llr.push(channel_llrs_bitrev);
        for d in 1..=stages {
            llr.push(vec![0.0; n_len >> d]);
        }
        let beta = (0..stages).map(|d| vec![0u8; n_len >> (d + 1)]).collect();
        Self {
            llr,
            beta,
            u_hat: Vec::with_capacity(n_len),
            decision_llrs: Vec::with_capacity(n_len),
            metric: 0.0,
            variant,
        }
    }

    #[inline]
    fn f(&self, a: f64, b: f64) -> f64 {
        match self.variant {
            FVariant::MinSum => f_op(a, b),
            FVariant::Exact => f_op_exact(a, b),
        }
    }

    /// Compute the decision LLR for leaf `phase`, refreshing invalidated
    /// levels only.
    fn leaf_llr(&mut self, phase: usize) -> f64 {
        let stages = self.beta.len();
        let start = if phase == 0 {
            1
        } else {
            let switch = stages - phase.trailing_zeros() as usize;
            // The node at `switch` turns into a g-branch; its parent LLRs
            // and the stashed left-sibling bits are both still valid.
            let half = self.llr[switch].len();
            for j in 0..half {
                let a = self.llr[switch - 1][j];
                let b = self.llr[switch - 1][j + half];
                self.llr[switch][j] = g_op(a, b, self.beta[switch - 1][j]);
            }
            switch + 1
        };
        for d in start..=stages {
            let half = self.llr[d].len();
            for j in 0..half {
                let a = self.llr[d - 1][j];
                let b = self.llr[d - 1][j + half];
                self.llr[d][j] = self.f(a, b);
            }
        }
        self.llr[stages][0]
    }

    /// Record the decided bit and propagate partial sums upward.
    fn commit(&mut self, phase: usize, bit: Bit, decision_llr: f64, penalty: f64) {
        self.u_hat.push(bit);
        self.decision_llrs.push(decision_llr);
        self.metric += penalty;

        let stages = self.beta.len();
        let mut enc = vec![bit];
        let mut d = stages;
        let mut ph = phase;
        while d > 0 {
            let parent = d - 1;
            if ph & 1 == 0 {
                self.beta[parent][..enc.len()].copy_from_slice(&enc);
                return;
            }
            let half = enc.len();
            let mut combined = vec![0u8; half * 2];
            for j in 0..half {
                combined[j] = self.beta[parent][j] ^ enc[j];
                combined[j + half] = enc[j];
            }
            enc = combined;
            d = parent;
            ph >>= 1;
        }
    }
}

/// Penalty the LLR-based path metric assigns to deciding `bit` on `llr`.
#[inline]
fn metric_penalty(llr: f64, bit: Bit) -> f64 {
    if hard_decision(llr) == bit {
        0.0
    } else {
        llr.abs()
    }
}

/// Successive cancellation decoding with an injectable decision hook.
///
/// The hook sees `(index, decision_llr)` and returns the LLR actually used
/// for the hard decision. Frozen indices always decide 0 but still record
/// the hooked LLR.
pub fn sc_decode_with<F>(
    llr: &[f64],
    cfg: &CodeConfig,
    variant: FVariant,
    mut hook: F,
) -> Result<DecodeResult>
where
    F: FnMut(usize, f64) -> f64,
{
    let n_len = cfg.block_len();
    assert_eq!(llr.len(), n_len, "LLR length must equal N");
    let mask = cfg.info_mask();
    let mut path = PathState::new(bit_reversal_permute(llr)?, variant);
    for phase in 0..n_len {
        let raw = path.leaf_llr(phase);
        let hooked = hook(phase, raw);
        let bit = if mask[phase] { hard_decision(hooked) } else { 0 };
        let penalty = metric_penalty(hooked, bit);
        path.commit(phase, bit, hooked, penalty);
    }
    Ok(DecodeResult {
        u_hat: path.u_hat,
        decision_llrs: path.decision_llrs,
        attempts_used: 0,
        crc_pass: true,
    })
}

/// Plain SC decoding (identity hook, min-sum f).
pub fn sc_decode(llr: &[f64], cfg: &CodeConfig) -> Result<DecodeResult> {
    sc_decode_with(llr, cfg, FVariant::MinSum, |_, l| l)
}

/// SCL decoding: returns up to `list_size` paths sorted by metric
/// ascending, ties broken by path age (older first).
pub fn scl_decode(
    llr: &[f64],
    cfg: &CodeConfig,
    list_size: usize,
) -> Result<Vec<(Vec<Bit>, f64)>> {
    assert!(list_size >= 1, "list size must be >= 1");
    let n_len = cfg.block_len();
    assert_eq!(llr.len(), n_len, "LLR length must equal N");
    let mask = cfg.info_mask();
    let mut paths = vec![PathState::new(bit_reversal_permute(llr)?, FVariant::MinSum)];

    for phase in 0..n_len {
        if mask[phase] {
            let mut forks: Vec<PathState> = Vec::with_capacity(paths.len() * 2);
            for mut path in paths.drain(..) {
                let l = path.leaf_llr(phase);
                let mut other = path.clone();
                path.commit(phase, 0, l, metric_penalty(l, 0));
                other.commit(phase, 1, l, metric_penalty(l, 1));
                forks.push(path);
                forks.push(other);
            }
            if forks.len() > list_size {
                // Stable sort keeps the lower-index path on metric ties.
                forks.sort_by(|a, b| a.metric.partial_cmp(&b.metric).unwrap());
                forks.truncate(list_size);
            }
            paths = forks;
        } else {
            for path in &mut paths {
                let l = path.leaf_llr(phase);
                path.commit(phase, 0, l, metric_penalty(l, 0));
            }
        }
    }
    paths.sort_by(|a, b| a.metric.partial_cmp(&b.metric).unwrap());
    Ok(paths.into_iter().map(|p| (p.u_hat, p.metric)).collect())
}

/// CRC-aided SCL: lowest-metric CRC-passing path, or the lowest-metric
/// path with `crc_pass = false` when none passes.
pub fn ca_scl_decode(
    llr: &[f64],
    cfg: &CodeConfig,
    list_size: usize,
    crc: &CrcSpec,
) -> Result<DecodeResult> {
    let candidates = scl_decode(llr, cfg, list_size)?;
    let chosen = candidates
        .iter()
        .find(|(u_hat, _)| crc_check(&cfg.extract_info_bits(u_hat), crc));
    let (u_hat, pass) = match chosen {
        Some((u_hat, _)) => (u_hat.clone(), true),
        None => (candidates[0].0.clone(), false),
    };
    Ok(DecodeResult {
        decision_llrs: Vec::new(),
        u_hat,
        attempts_used: 0,
        crc_pass: pass,
    })
}
