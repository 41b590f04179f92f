//! Throughput of the Monte Carlo trial loop, sequential vs rayon workers,
//! plus the raw SC decoder.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use polar_perturb::channel::SnrConvention;
use polar_perturb::decoder::sc_decode;
use polar_perturb::perturb::USideMode;
use polar_perturb::sim::{
    run_bler_experiment, CodeSpecSource, ExperimentConfig, Method, SigmaPPolicy,
};

fn trial_batch_config(workers: usize) -> ExperimentConfig {
    ExperimentConfig {
        code: CodeSpecSource::Constructed {
            n: 10,
            k: 512,
            crc24: true,
            design_snr_db: Some(2.5),
        },
        snr_db: vec![2.5],
        method: Method::UPerturbSc,
        attempts: 1,
        sigma_p2: SigmaPPolicy::Auto,
        // Fixed trial budget: the stopping rule never fires early.
        target_errors: u64::MAX,
        max_trials: 2048,
        seed: 7,
        workers,
        convention: SnrConvention::EbN0,
        u_side_mode: USideMode::InDecoding,
    }
}

fn bench_trial_loop(c: &mut Criterion) {
    let mut group = c.benchmark_group("bler_trials_n1024");
    group.sample_size(10);
    for workers in [1usize, num_threads()] {
        let cfg = trial_batch_config(workers);
        let label = if workers == 1 { "sequential" } else { "parallel" };
        group.bench_with_input(BenchmarkId::new(label, workers), &cfg, |b, cfg| {
            b.iter(|| run_bler_experiment(cfg).unwrap());
        });
    }
    group.finish();
}

fn num_threads() -> usize {
    std::thread::available_parallelism().map_or(4, |n| n.get())
}

fn bench_sc_decode(c: &mut Criterion) {
    use polar_perturb::code::CodeConfig;
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for n in [8u32, 10, 12] {
        let size = 1usize << n;
        let cfg = CodeConfig::new(n, (size / 2..size).collect(), None).unwrap();
        let llr: Vec<f64> = (0..size).map(|_| rng.gen_range(-4.0..4.0)).collect();
        c.bench_function(&format!("sc_decode_n{size}"), |b| {
            b.iter(|| sc_decode(&llr, &cfg).unwrap());
        });
    }
}

criterion_group!(benches, bench_trial_loop, bench_sc_decode);
criterion_main!(benches);
