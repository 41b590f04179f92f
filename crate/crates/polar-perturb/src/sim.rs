//! Monte Carlo experiment runner: BLER curves and first-error-position
//! statistics, with deterministic trial sharding and CSV/JSON output.
//!
//! Every trial is keyed by its global index, so results are byte-identical
//! for any worker count. Stopping is decided on whole-batch boundaries for
//! the same reason.

use std::fmt;
use std::fs::File;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channel::{
    awgn_transmit, llr_from_channel, modulate_bpsk, perturb_power, sigma_from_snr, SnrConvention,
};
use crate::code::{Bit, CodeConfig, CrcSpec};
use crate::construction::{ga_means, select_info_set};
use crate::crc::{crc_check, crc_encode};
use crate::decoder::{ca_scl_decode, sc_decode, scl_decode};
use crate::encode::encode;
use crate::error::{Error, Result};
use crate::perturb::{
    build_schedule, u_side_enhanced, u_side_sc, y_side_enhanced, BaseDecoder, USideMode,
};
use crate::rng::{substream, Role};
use crate::stats::wilson_interval;

/// Trials dispatched between stopping-rule checks. Constant so stopping
/// points do not depend on the worker count.
const BATCH: u64 = 1024;

/// Decoding method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "kebab-case")]
pub enum Method {
    Sc,
    Scl { list_size: usize },
    CaScl { list_size: usize },
    YPerturbSc,
    YPerturbScl { list_size: usize },
    UPerturbSc,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Sc => write!(f, "sc"),
            Method::Scl { .. } => write!(f, "scl"),
            Method::CaScl { .. } => write!(f, "ca-scl"),
            Method::YPerturbSc => write!(f, "y-perturb-sc"),
            Method::YPerturbScl { .. } => write!(f, "y-perturb-scl"),
            Method::UPerturbSc => write!(f, "u-perturb-sc"),
        }
    }
}

impl Method {
    pub fn needs_crc(self) -> bool {
        !matches!(self, Method::Sc | Method::Scl { .. })
    }
}

/// Perturbation power policy.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SigmaPPolicy {
    /// sigma_p^2 = 10^{-(SNR-0.1)/10} - sigma^2 at each operating point.
    Auto,
    Fixed(f64),
}

impl SigmaPPolicy {
    pub fn resolve(self, snr_db: f64, sigma2: f64) -> Result<f64> {
        match self {
            SigmaPPolicy::Auto => perturb_power(snr_db, sigma2),
            SigmaPPolicy::Fixed(v) => {
                if v < 0.0 {
                    Err(Error::Config(format!("sigma_p2 must be >= 0, got {v}")))
                } else {
                    Ok(v)
                }
            }
        }
    }
}

/// Where the code comes from: given explicitly, or GA-constructed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CodeSpecSource {
    Explicit(CodeConfig),
    Constructed {
        n: u32,
        /// Payload bits; CRC bits are added on top when `crc24` is set.
        k: usize,
        crc24: bool,
        /// Construction SNR; when absent each operating point constructs
        /// at its own noise level.
        design_snr_db: Option<f64>,
    },
}

impl CodeSpecSource {
    /// Payload rate K/N used for Eb/N0 conversion.
    pub fn rate(&self) -> f64 {
        match self {
            CodeSpecSource::Explicit(cfg) => cfg.payload_len() as f64 / cfg.block_len() as f64,
            CodeSpecSource::Constructed { n, k, .. } => *k as f64 / (1u64 << n) as f64,
        }
    }

    pub fn resolve(&self, operating_sigma2: f64, convention: SnrConvention) -> Result<CodeConfig> {
        match self {
            CodeSpecSource::Explicit(cfg) => {
                cfg.validate()?;
                Ok(cfg.clone())
            }
            CodeSpecSource::Constructed { n, k, crc24, design_snr_db } => {
                let crc = crc24.then(CrcSpec::crc24);
                let info_count = k + crc.as_ref().map_or(0, |c| c.degree());
                let sigma2 = match design_snr_db {
                    Some(d) => sigma_from_snr(*d, self.rate(), convention)?,
                    None => operating_sigma2,
                };
                let mu = ga_means(*n, sigma2)?;
                let info_set = select_info_set(&mu, info_count)?;
                CodeConfig::new(*n, info_set, crc)
            }
        }
    }
}

/// Full description of one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub code: CodeSpecSource,
    pub snr_db: Vec<f64>,
    pub method: Method,
    pub attempts: u32,
    pub sigma_p2: SigmaPPolicy,
    #[serde(default = "default_target_errors")]
    pub target_errors: u64,
    pub max_trials: u64,
    pub seed: u64,
    #[serde(default = "default_workers")]
    pub workers: usize,
    #[serde(default)]
    pub convention: SnrConvention,
    #[serde(default)]
    pub u_side_mode: USideMode,
}

fn default_target_errors() -> u64 {
    400
}

fn default_workers() -> usize {
    1
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.target_errors < 1 {
            return Err(Error::Config("target_errors must be >= 1".into()));
        }
        if self.snr_db.is_empty() {
            return Err(Error::Config("snr_db list must be non-empty".into()));
        }
        if self.max_trials < 1 {
            return Err(Error::Config("max_trials must be >= 1".into()));
        }
        Ok(())
    }
}

/// One point on a BLER curve.
#[derive(Debug, Clone, Serialize)]
pub struct BlerPoint {
    pub snr_db: f64,
    pub method: String,
    pub attempts: u32,
    pub trials: u64,
    pub block_errors: u64,
    pub bler: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub undetected_errors: u64,
    pub mean_attempts: f64,
    /// True when max_trials was hit before target_errors.
    pub incomplete: bool,
}

/// First-error-position statistics for one operating point.
#[derive(Debug, Clone, Serialize)]
pub struct FepStats {
    pub block_len: usize,
    pub snr_db: f64,
    pub sigma_p2: f64,
    pub total_trials: u64,
    pub conditioned_trials: u64,
    pub delay_count: u64,
    pub unchanged_count: u64,
    pub advance_count: u64,
    pub p_delay: f64,
    pub p_delay_lo: f64,
    pub p_delay_hi: f64,
    pub p_unchanged: f64,
    pub p_advance: f64,
    pub incomplete: bool,
}

/// First information-set index where u_hat disagrees with u, or N when
/// they agree everywhere (so "no error" sorts after every position).
pub fn first_error_position(u_hat: &[Bit], u: &[Bit], info_set: &[usize]) -> usize {
    assert_eq!(u_hat.len(), u.len());
    info_set
        .iter()
        .copied()
        .find(|&i| u_hat[i] != u[i])
        .unwrap_or(u.len())
}

/// Outcome class of one conditioned FEP trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TrialClass {
    Delay,
    Unchanged,
    Advance,
    NotConditioned,
}

/// Compare first error positions of the plain and perturbed decoders,
/// conditioning on a plain-SC failure.
pub fn classify_trial(tau0: usize, tau1: usize, block_len: usize) -> TrialClass {
    debug_assert!(tau0 <= block_len && tau1 <= block_len);
    if tau0 == block_len {
        TrialClass::NotConditioned
    } else if tau1 > tau0 {
        TrialClass::Delay
    } else if tau1 == tau0 {
        TrialClass::Unchanged
    } else {
        TrialClass::Advance
    }
}

/// Map trial indices to outcomes, sequentially or on a rayon pool.
fn map_trials<T, F>(start: u64, count: u64, workers: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(u64) -> T + Sync,
{
    #[cfg(feature = "parallel")]
    if workers > 1 {
        use rayon::prelude::*;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("rayon pool");
        return pool.install(|| (start..start + count).into_par_iter().map(&f).collect());
    }
    let _ = workers;
    (start..start + count).map(f).collect()
}

struct BlerTrialOutcome {
    error: bool,
    undetected: bool,
    attempts: u32,
}

fn run_bler_trial(
    cfg: &ExperimentConfig,
    code: &CodeConfig,
    sigma2: f64,
    sigma_p2: f64,
    trial: u64,
) -> Result<BlerTrialOutcome> {
    use rand::Rng;
    let crc = code.crc.clone();
    let payload_len = code.payload_len();
    let mut payload_rng = substream(cfg.seed, trial, Role::Payload);
    let payload: Vec<Bit> = (0..payload_len).map(|_| payload_rng.gen_range(0..2u8)).collect();
    let info = match &crc {
        Some(spec) => crc_encode(&payload, spec),
        None => payload.clone(),
    };
    let u = code.place_info_bits(&info);
    let c = encode(&u, code.n)?;
    let x = modulate_bpsk(&c);
    let y = awgn_transmit(&x, sigma2, &mut substream(cfg.seed, trial, Role::Channel));
    let llr = llr_from_channel(&y, sigma2);

    let (u_hat, attempts, crc_pass) = match cfg.method {
        Method::Sc => {
            let r = sc_decode(&llr, code)?;
            let pass = crc
                .as_ref()
                .map(|spec| crc_check(&code.extract_info_bits(&r.u_hat), spec));
            (r.u_hat, 0, pass.unwrap_or(false))
        }
        Method::Scl { list_size } => {
            let paths = scl_decode(&llr, code, list_size)?;
            (paths[0].0.clone(), 0, false)
        }
        Method::CaScl { list_size } => {
            let spec = crc.as_ref().expect("checked in run_bler_experiment");
            let r = ca_scl_decode(&llr, code, list_size, spec)?;
            (r.u_hat, 0, r.crc_pass)
        }
        Method::YPerturbSc | Method::YPerturbScl { .. } => {
            let spec = crc.as_ref().expect("checked in run_bler_experiment");
            let base = match cfg.method {
                Method::YPerturbScl { list_size } => BaseDecoder::Scl { list_size },
                _ => BaseDecoder::Sc,
            };
            let r = y_side_enhanced(&llr, code, sigma_p2, cfg.attempts, spec, base, |t| {
                substream(cfg.seed, trial, Role::YPerturb(t))
            })?;
            (r.u_hat, r.attempts_used, r.crc_pass)
        }
        Method::UPerturbSc => {
            let spec = crc.as_ref().expect("checked in run_bler_experiment");
            let r = u_side_enhanced(
                &llr,
                code,
                sigma_p2,
                cfg.attempts,
                spec,
                cfg.u_side_mode,
                |t| substream(cfg.seed, trial, Role::UPerturb(t)),
            )?;
            (r.u_hat, r.attempts_used, r.crc_pass)
        }
    };

    let decoded_info = code.extract_info_bits(&u_hat);
    let decoded_payload = &decoded_info[..payload_len];
    let error = decoded_payload != payload.as_slice();
    Ok(BlerTrialOutcome {
        error,
        undetected: error && crc_pass,
        attempts,
    })
}

/// Run the configured method over the SNR grid until `target_errors`
/// block errors (or `max_trials`) per point.
pub fn run_bler_experiment(cfg: &ExperimentConfig) -> Result<Vec<BlerPoint>> {
    cfg.validate()?;
    let rate = cfg.code.rate();
    let mut points = Vec::with_capacity(cfg.snr_db.len());
    for &snr_db in &cfg.snr_db {
        let sigma2 = sigma_from_snr(snr_db, rate, cfg.convention)?;
        let code = cfg.code.resolve(sigma2, cfg.convention)?;
        if cfg.method.needs_crc() && code.crc.is_none() {
            return Err(Error::Config(format!(
                "method {} requires a CRC in the code config",
                cfg.method
            )));
        }
        let sigma_p2 = match cfg.method {
            Method::Sc | Method::Scl { .. } | Method::CaScl { .. } => 0.0,
            _ => cfg.sigma_p2.resolve(snr_db, sigma2)?,
        };

        let mut trials = 0u64;
        let mut block_errors = 0u64;
        let mut undetected = 0u64;
        let mut attempts_sum = 0u64;
        while block_errors < cfg.target_errors && trials < cfg.max_trials {
            let count = BATCH.min(cfg.max_trials - trials);
            let outcomes = map_trials(trials, count, cfg.workers, |t| {
                run_bler_trial(cfg, &code, sigma2, sigma_p2, t)
            });
            for outcome in outcomes {
                let o = outcome?;
                block_errors += o.error as u64;
                undetected += o.undetected as u64;
                attempts_sum += o.attempts as u64;
            }
            trials += count;
        }
        let (ci_lo, ci_hi) = wilson_interval(block_errors, trials);
        points.push(BlerPoint {
            snr_db,
            method: cfg.method.to_string(),
            attempts: cfg.attempts,
            trials,
            block_errors,
            bler: block_errors as f64 / trials as f64,
            ci_lo,
            ci_hi,
            undetected_errors: undetected,
            mean_attempts: attempts_sum as f64 / trials as f64,
            incomplete: block_errors < cfg.target_errors,
        });
    }
    Ok(points)
}

fn run_fep_trial(
    cfg: &ExperimentConfig,
    code: &CodeConfig,
    sigma2: f64,
    sigma_p2: f64,
    trial: u64,
) -> Result<TrialClass> {
    use rand::Rng as _;
    let n_len = code.block_len();
    // All-zero codeword: BPSK maps every bit to +1.
    let x = vec![1.0; n_len];
    let y = awgn_transmit(&x, sigma2, &mut substream(cfg.seed, trial, Role::Channel));
    let llr = llr_from_channel(&y, sigma2);
    let zero = vec![0u8; n_len];

    let plain = sc_decode(&llr, code)?;
    let tau0 = first_error_position(&plain.u_hat, &zero, &code.info_set);
    if tau0 == n_len {
        return Ok(TrialClass::NotConditioned);
    }

    let perturbed_u_hat = match cfg.method {
        Method::UPerturbSc => {
            let schedule = build_schedule(code.n, sigma_p2)?;
            let mut rng = substream(cfg.seed, trial, Role::UPerturb(1));
            u_side_sc(&llr, code, &schedule, &mut rng)?.u_hat
        }
        Method::YPerturbSc => {
            let mut rng = substream(cfg.seed, trial, Role::YPerturb(1));
            let sigma_p = sigma_p2.sqrt();
            let perturbed: Vec<f64> = llr
                .iter()
                .map(|&l| l + sigma_p * rng.sample::<f64, _>(rand_distr::StandardNormal))
                .collect();
            sc_decode(&perturbed, code)?.u_hat
        }
        other => {
            return Err(Error::Config(format!(
                "FEP experiments support u-perturb-sc and y-perturb-sc, got {other}"
            )))
        }
    };
    let tau1 = first_error_position(&perturbed_u_hat, &zero, &code.info_set);
    Ok(classify_trial(tau0, tau1, n_len))
}

/// Genie-comparison first-error-position experiment: all-zero codeword,
/// plain SC vs one perturbed decode on the same channel realization,
/// aggregated until `target_errors` conditioned trials.
pub fn run_fep_experiment(cfg: &ExperimentConfig) -> Result<FepStats> {
    cfg.validate()?;
    if cfg.snr_db.len() != 1 {
        return Err(Error::Config(
            "FEP experiments take exactly one SNR point".into(),
        ));
    }
    let snr_db = cfg.snr_db[0];
    let sigma2 = sigma_from_snr(snr_db, cfg.code.rate(), cfg.convention)?;
    let code = cfg.code.resolve(sigma2, cfg.convention)?;
    let sigma_p2 = cfg.sigma_p2.resolve(snr_db, sigma2)?;

    let mut trials = 0u64;
    let mut delay = 0u64;
    let mut unchanged = 0u64;
    let mut advance = 0u64;
    loop {
        let conditioned = delay + unchanged + advance;
        if conditioned >= cfg.target_errors || trials >= cfg.max_trials {
            break;
        }
        let count = BATCH.min(cfg.max_trials - trials);
        let outcomes = map_trials(trials, count, cfg.workers, |t| {
            run_fep_trial(cfg, &code, sigma2, sigma_p2, t)
        });
        for outcome in outcomes {
            match outcome? {
                TrialClass::Delay => delay += 1,
                TrialClass::Unchanged => unchanged += 1,
                TrialClass::Advance => advance += 1,
                TrialClass::NotConditioned => {}
            }
        }
        trials += count;
    }
    let conditioned = delay + unchanged + advance;
    let (p_delay_lo, p_delay_hi) = wilson_interval(delay, conditioned);
    let denom = conditioned.max(1) as f64;
    Ok(FepStats {
        block_len: code.block_len(),
        snr_db,
        sigma_p2,
        total_trials: trials,
        conditioned_trials: conditioned,
        delay_count: delay,
        unchanged_count: unchanged,
        advance_count: advance,
        p_delay: delay as f64 / denom,
        p_delay_lo,
        p_delay_hi,
        p_unchanged: unchanged as f64 / denom,
        p_advance: advance as f64 / denom,
        incomplete: conditioned < cfg.target_errors,
    })
}

const BLER_HEADER: &str =
    "snr_db,method,T,trials,block_errors,bler,ci_lo,ci_hi,undetected_errors,mean_attempts";
const FEP_HEADER: &str = "N,snr_db,sigma_p2,conditioned_trials,delay,unchanged,advance,p_delay,p_delay_lo,p_delay_hi,p_unchanged,p_advance,incomplete";

/// Render BLER points as CSV text (fixed header, one row per SNR point).
pub fn bler_csv(points: &[BlerPoint]) -> String {
    let mut out = String::from(BLER_HEADER);
    out.push('\n');
    for p in points {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            p.snr_db,
            p.method,
            p.attempts,
            p.trials,
            p.block_errors,
            p.bler,
            p.ci_lo,
            p.ci_hi,
            p.undetected_errors,
            p.mean_attempts
        ));
    }
    out
}

/// Render FEP statistics as a single-row CSV document.
pub fn fep_csv(stats: &[FepStats]) -> String {
    let mut out = String::from(FEP_HEADER);
    out.push('\n');
    for s in stats {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{},{},{},{}\n",
            s.block_len,
            s.snr_db,
            s.sigma_p2,
            s.conditioned_trials,
            s.delay_count,
            s.unchanged_count,
            s.advance_count,
            s.p_delay,
            s.p_delay_lo,
            s.p_delay_hi,
            s.p_unchanged,
            s.p_advance,
            s.incomplete
        ));
    }
    out
}

#[derive(Serialize)]
struct Sidecar<'a> {
    version: &'static str,
    config: &'a ExperimentConfig,
}

/// Write CSV results plus a JSON sidecar embedding the full config.
pub fn write_results(csv: &str, cfg: &ExperimentConfig, path: &Path) -> Result<()> {
    let io_err = |e| Error::Io { path: path.display().to_string(), source: e };
    let mut file = File::create(path).map_err(io_err)?;
    file.write_all(csv.as_bytes()).map_err(io_err)?;
    let sidecar_path = path.with_extension("json");
    let sidecar = Sidecar {
        version: env!("CARGO_PKG_VERSION"),
        config: cfg,
    };
    let body = serde_json::to_string_pretty(&sidecar)?;
    let io_err2 = |e| Error::Io { path: sidecar_path.display().to_string(), source: e };
    File::create(&sidecar_path)
        .map_err(io_err2)?
        .write_all(body.as_bytes())
        .map_err(io_err2)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_cfg(method: Method) -> ExperimentConfig {
        ExperimentConfig {
            code: CodeSpecSource::Constructed { n: 6, k: 32, crc24: true, design_snr_db: None },
            snr_db: vec![2.0],
            method,
            attempts: 2,
            sigma_p2: SigmaPPolicy::Auto,
            target_errors: 20,
            max_trials: 20_000,
            seed: 1,
            workers: 1,
            convention: SnrConvention::EbN0,
            u_side_mode: USideMode::InDecoding,
        }
    }

    #[test]
    fn first_error_position_cases() {
        let info: Vec<usize> = vec![1, 3, 5, 7, 9];
        let u = vec![0u8; 12];
        assert_eq!(first_error_position(&u, &u, &info), 12);
        let mut one = u.clone();
        one[7] = 1;
        assert_eq!(first_error_position(&one, &u, &info), 7);
        let mut two = one.clone();
        two[3] = 1;
        assert_eq!(first_error_position(&two, &u, &info), 3);
        // Errors at frozen positions are invisible to tau.
        let mut frozen = u.clone();
        frozen[2] = 1;
        assert_eq!(first_error_position(&frozen, &u, &info), 12);
    }

    #[test]
    fn classify_trial_cases() {
        assert_eq!(classify_trial(16, 3, 16), TrialClass::NotConditioned);
        assert_eq!(classify_trial(5, 16, 16), TrialClass::Delay);
        assert_eq!(classify_trial(5, 7, 16), TrialClass::Delay);
        assert_eq!(classify_trial(5, 5, 16), TrialClass::Unchanged);
        assert_eq!(classify_trial(5, 3, 16), TrialClass::Advance);
    }

    #[test]
    fn near_noiseless_bler_is_zero() {
        let mut cfg = base_cfg(Method::Sc);
        cfg.code = CodeSpecSource::Constructed { n: 6, k: 16, crc24: true, design_snr_db: Some(2.0) };
        cfg.snr_db = vec![20.0];
        cfg.max_trials = 1000;
        cfg.target_errors = 1;
        let points = run_bler_experiment(&cfg).unwrap();
        assert_eq!(points[0].block_errors, 0);
        assert_eq!(points[0].trials, 1000);
        assert!(points[0].incomplete);
    }

    #[test]
    fn bler_counts_conserve() {
        let cfg = base_cfg(Method::UPerturbSc);
        let points = run_bler_experiment(&cfg).unwrap();
        let p = &points[0];
        assert!(p.block_errors >= cfg.target_errors || p.incomplete);
        assert!(p.undetected_errors <= p.block_errors);
        assert!(p.bler >= p.ci_lo && p.bler <= p.ci_hi);
    }

    #[test]
    fn fep_zero_perturbation_all_unchanged() {
        let mut cfg = base_cfg(Method::UPerturbSc);
        cfg.code = CodeSpecSource::Constructed { n: 6, k: 32, crc24: false, design_snr_db: None };
        cfg.sigma_p2 = SigmaPPolicy::Fixed(0.0);
        cfg.snr_db = vec![1.0];
        cfg.target_errors = 50;
        let stats = run_fep_experiment(&cfg).unwrap();
        assert!(stats.conditioned_trials >= 50);
        assert_eq!(stats.p_unchanged, 1.0);
        assert_eq!(stats.delay_count, 0);
        assert_eq!(stats.advance_count, 0);
    }

    #[test]
    fn fep_counts_conserve_and_sum_to_one() {
        let mut cfg = base_cfg(Method::UPerturbSc);
        cfg.code = CodeSpecSource::Constructed { n: 6, k: 32, crc24: false, design_snr_db: None };
        cfg.snr_db = vec![2.0];
        cfg.target_errors = 100;
        let s = run_fep_experiment(&cfg).unwrap();
        assert_eq!(
            s.delay_count + s.unchanged_count + s.advance_count,
            s.conditioned_trials
        );
        assert_eq!(s.p_delay + s.p_unchanged + s.p_advance, 1.0);
    }

    #[test]
    fn fep_rejects_non_perturbation_method() {
        let mut cfg = base_cfg(Method::Sc);
        cfg.code = CodeSpecSource::Constructed { n: 6, k: 32, crc24: false, design_snr_db: None };
        assert!(run_fep_experiment(&cfg).is_err());
    }

    #[test]
    fn worker_count_does_not_change_results() {
        for method in [Method::Sc, Method::UPerturbSc, Method::YPerturbSc] {
            let mut cfg = base_cfg(method);
            cfg.target_errors = 30;
            let seq = run_bler_experiment(&cfg).unwrap();
            cfg.workers = 4;
            let par = run_bler_experiment(&cfg).unwrap();
            assert_eq!(bler_csv(&seq), bler_csv(&par));
        }
    }

    #[test]
    fn csv_shapes() {
        assert_eq!(bler_csv(&[]).lines().count(), 1);
        let cfg = base_cfg(Method::Sc);
        let mut cfg3 = cfg.clone();
        cfg3.snr_db = vec![1.0, 2.0, 3.0];
        cfg3.target_errors = 5;
        cfg3.max_trials = 2000;
        let points = run_bler_experiment(&cfg3).unwrap();
        let csv = bler_csv(&points);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.starts_with("snr_db,method,T,"));
    }

    #[test]
    fn sidecar_round_trips_config() {
        let cfg = base_cfg(Method::CaScl { list_size: 8 });
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("out.csv");
        write_results("snr_db\n", &cfg, &path).unwrap();
        let body = std::fs::read_to_string(dir.path().join("out.json")).unwrap();
        let sidecar: serde_json::Value = serde_json::from_str(&body).unwrap();
        let back: ExperimentConfig =
            serde_json::from_value(sidecar.get("config").unwrap().clone()).unwrap();
        assert_eq!(back, cfg);
    }
}
