//! Command-line front end: code construction, BLER / first-error-position
//! simulations, and analytic bound evaluation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use polar_perturb::bounds::{lemma1_bound, mc_conditional_flip, prop2_sigma_floor, prop3_bound};
use polar_perturb::channel::{sigma_from_snr, SnrConvention};
use polar_perturb::construction::{
    bhattacharyya_bounds, ga_means, select_info_set, theory_info_set, ReliabilityProfile,
    TheoryParams,
};
use polar_perturb::error::Error;
use polar_perturb::perturb::USideMode;
use polar_perturb::rng::{substream, Role};
use polar_perturb::sim::{
    bler_csv, fep_csv, run_bler_experiment, run_fep_experiment, write_results, CodeSpecSource,
    ExperimentConfig, Method, SigmaPPolicy,
};

#[derive(Parser)]
#[command(name = "polar-perturb", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute GA reliabilities and an information set, emitted as JSON.
    Construct(ConstructArgs),
    /// Run Monte Carlo experiments.
    #[command(subcommand)]
    Simulate(SimulateCmd),
    /// Evaluate analytic bounds, optionally verified by Monte Carlo.
    Bound(BoundArgs),
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(long)]
    n: u32,
    /// Channel noise variance; alternative to --design-snr-db.
    #[arg(long, conflicts_with = "design_snr_db")]
    sigma2: Option<f64>,
    #[arg(long, requires = "rate")]
    design_snr_db: Option<f64>,
    /// Code rate for the SNR-to-sigma conversion.
    #[arg(long)]
    rate: Option<f64>,
    /// Information set size (GA top-K selection).
    #[arg(long, conflicts_with = "beta")]
    k: Option<usize>,
    /// Theory-restricted set {i : Z_i < 2^{-N^beta}} instead of top-K.
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value = "eb-n0")]
    convention: Convention,
    /// Output JSON path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    EbN0,
    EsN0,
}

impl From<Convention> for SnrConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::EbN0 => SnrConvention::EbN0,
            Convention::EsN0 => SnrConvention::EsN0,
        }
    }
}

#[derive(Subcommand)]
enum SimulateCmd {
    /// Block-error-rate curve over an SNR grid.
    Bler(SimArgs),
    /// First-error-position delay/unchanged/advance statistics.
    Fep(SimArgs),
}

#[derive(Args)]
struct SimArgs {
    /// JSON file holding a full ExperimentConfig; flags below are ignored
    /// when present.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    n: Option<u32>,
    /// Payload bit count (CRC bits are added when --crc24 is set).
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, default_value_t = false)]
    crc24: bool,
    #[arg(long, value_delimiter = ',')]
    snr: Vec<f64>,
    #[arg(long)]
    design_snr_db: Option<f64>,
    #[arg(long, default_value = "sc")]
    method: MethodArg,
    #[arg(long, default_value_t = 8)]
    list_size: usize,
    /// Maximum perturbation attempts T.
    #[arg(long, default_value_t = 1)]
    attempts: u32,
    #[arg(long, conflicts_with = "auto_sigma_p")]
    sigma_p2: Option<f64>,
    /// Use sigma_p^2 = 10^{-(SNR-0.1)/10} - sigma^2.
    #[arg(long, default_value_t = false)]
    auto_sigma_p: bool,
    #[arg(long, default_value_t = 400)]
    target_errors: u64,
    #[arg(long, default_value_t = 10_000_000)]
    max_trials: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    #[arg(long, default_value = "eb-n0")]
    convention: Convention,
    /// Re-harden stored decision LLRs instead of perturbing in-decoding.
    #[arg(long, default_value_t = false)]
    static_reharden: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Sc,
    Scl,
    CaScl,
    YPerturbSc,
    YPerturbScl,
    UPerturbSc,
}

#[derive(Args)]
struct BoundArgs {
    #[arg(long)]
    kind: BoundKind,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    sigma_l: Option<f64>,
    /// Block length N for lemma1 / prop2-floor.
    #[arg(long)]
    n_block: Option<u64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
    #[arg(long)]
    alpha: Option<f64>,
    /// Monte Carlo verification trial count (prop3 only).
    #[arg(long)]
    verify_mc: Option<usize>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundKind {
    Prop3,
    Lemma1,
    Prop2Floor,
}

#[derive(Serialize)]
struct ConstructOutput {
    profile: ReliabilityProfile,
    info_set: Vec<usize>,
    #[serde(rename = "K")]
    k: usize,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(Error::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run() -> polar_perturb::Result<ExitCode> {
    let cli = Cli::parse();
    match cli.command {
        Command::Construct(args) => construct(args),
        Command::Simulate(SimulateCmd::Bler(args)) => simulate_bler(args),
        Command::Simulate(SimulateCmd::Fep(args)) => simulate_fep(args),
        Command::Bound(args) => bound(args),
    }
}

fn construct(args: ConstructArgs) -> polar_perturb::Result<ExitCode> {
    let sigma2 = match (args.sigma2, args.design_snr_db) {
        (Some(s), _) => s,
        (None, Some(db)) => sigma_from_snr(
            db,
            args.rate.ok_or_else(|| Error::Config("--design-snr-db requires --rate".into()))?,
            args.convention.into(),
        )?,
        (None, None) => {
            return Err(Error::Config(
                "provide either --sigma2 or --design-snr-db with --rate".into(),
            ))
        }
    };
    let mu = ga_means(args.n, sigma2)?;
    let z_bound = bhattacharyya_bounds(args.n, sigma2)?;
    let info_set = match (args.k, args.beta) {
        (Some(k), None) => select_info_set(&mu, k)?,
        (None, Some(beta)) => {
            let params = TheoryParams { beta, alpha: 1.0 - 2.0 * beta + 1e-6, gamma: beta - 1e-6 };
            let set = theory_info_set(args.n, sigma2, &params)?;
            eprintln!("theory set size: {}", set.len());
            set
        }
        _ => return Err(Error::Config("provide exactly one of --k or --beta".into())),
    };
    let out = ConstructOutput {
        k: info_set.len(),
        profile: ReliabilityProfile { mu, z_bound, sigma2 },
        info_set,
    };
    let body = serde_json::to_string_pretty(&out)?;
    match args.out {
        Some(path) => std::fs::write(&path, body).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?,
        None => println!("{body}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn build_config(args: &SimArgs) -> polar_perturb::Result<ExperimentConfig> {
    if let Some(path) = &args.config {
        let body = std::fs::read_to_string(path).map_err(|e| Error::Io {
            path: path.display().to_string(),
            source: e,
        })?;
        let cfg: ExperimentConfig = serde_json::from_str(&body)?;
        return Ok(cfg);
    }
    let n = args.n.ok_or_else(|| Error::Config("--n is required without --config".into()))?;
    let k = args.k.ok_or_else(|| Error::Config("--k is required without --config".into()))?;
    let method = match args.method {
        MethodArg::Sc => Method::Sc,
        MethodArg::Scl => Method::Scl { list_size: args.list_size },
        MethodArg::CaScl => Method::CaScl { list_size: args.list_size },
        MethodArg::YPerturbSc => Method::YPerturbSc,
        MethodArg::YPerturbScl => Method::YPerturbScl { list_size: args.list_size },
        MethodArg::UPerturbSc => Method::UPerturbSc,
    };
    let sigma_p2 = match (args.sigma_p2, args.auto_sigma_p) {
        (Some(v), _) => SigmaPPolicy::Fixed(v),
        (None, true) => SigmaPPolicy::Auto,
        (None, false) => SigmaPPolicy::Fixed(0.0),
    };
    Ok(ExperimentConfig {
        code: CodeSpecSource::Constructed {
            n,
            k,
            crc24: args.crc24,
            design_snr_db: args.design_snr_db,
        },
        snr_db: args.snr.clone(),
        method,
        attempts: args.attempts,
        sigma_p2,
        target_errors: args.target_errors,
        max_trials: args.max_trials,
        seed: args.seed,
        workers: args.workers,
        convention: args.convention.into(),
        u_side_mode: if args.static_reharden {
            USideMode::StaticReharden
        } else {
            USideMode::InDecoding
        },
    })
}

fn simulate_bler(args: SimArgs) -> polar_perturb::Result<ExitCode> {
    let cfg = build_config(&args)?;
    let points = run_bler_experiment(&cfg)?;
    let csv = bler_csv(&points);
    write_results(&csv, &cfg, &args.out)?;
    print!("{csv}");
    if points.iter().any(|p| p.incomplete) {
        eprintln!("warning: max_trials reached before target_errors on some points");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn simulate_fep(args: SimArgs) -> polar_perturb::Result<ExitCode> {
    let cfg = build_config(&args)?;
    let stats = run_fep_experiment(&cfg)?;
    let csv = fep_csv(std::slice::from_ref(&stats));
    write_results(&csv, &cfg, &args.out)?;
    print!("{csv}");
    if stats.incomplete {
        eprintln!("warning: max_trials reached before target conditioned count");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn bound(args: BoundArgs) -> polar_perturb::Result<ExitCode> {
    let need = |v: Option<f64>, name: &str| {
        v.ok_or_else(|| Error::Config(format!("--{name} is required for this bound")))
    };
    match args.kind {
        BoundKind::Prop3 => {
            let mu = need(args.mu, "mu")?;
            let sigma_l = need(args.sigma_l, "sigma-l")?;
            let b = prop3_bound(mu, sigma_l)?;
            println!("kind,value,argmin_s,raw_value");
            println!("prop3,{},{},{}", b.value, b.argmin_s, b.raw_value);
            if let Some(trials) = args.verify_mc {
                let mut rng = substream(args.seed, 0, Role::Analysis);
                let est = mc_conditional_flip(mu, sigma_l, trials, &mut rng)?;
                println!("mc_estimate,ci_lo,ci_hi,trials");
                println!("{},{},{},{}", est.estimate, est.ci_lo, est.ci_hi, est.trials);
            }
        }
        BoundKind::Lemma1 => {
            let n_block = args
                .n_block
                .ok_or_else(|| Error::Config("--n-block is required for lemma1".into()))?;
            let b = lemma1_bound(
                n_block,
                need(args.sigma2, "sigma2")?,
                need(args.gamma, "gamma")?,
                need(args.alpha, "alpha")?,
            )?;
            println!("kind,value,argmin_s,raw_value");
            println!("lemma1,{},{},{}", b.value, b.argmin_s, b.raw_value);
        }
        BoundKind::Prop2Floor => {
            let n_block = args
                .n_block
                .ok_or_else(|| Error::Config("--n-block is required for prop2-floor".into()))?;
            let v = prop2_sigma_floor(n_block, need(args.gamma, "gamma")?, need(args.alpha, "alpha")?);
            println!("kind,value");
            println!("prop2-floor,{v}");
        }
    }
    Ok(ExitCode::SUCCESS)
}
