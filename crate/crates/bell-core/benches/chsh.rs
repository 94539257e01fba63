//! Sequential vs parallel throughput of the sampling pipelines. Both modes
//! produce bitwise-identical results; this measures only the speed gap.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};

use bell_core::exec::ExecMode;
use bell_core::hidden::{
    chsh_disjoint, chsh_shared_estimate, draw_shared_sample, Angles, QuantumContextSampler,
    SignModel,
};
use bell_core::rng::StreamPlan;

const MODES: [(&str, ExecMode); 2] = [
    ("sequential", ExecMode::Sequential),
    ("parallel", ExecMode::Parallel),
];

fn bench_shared_draw(c: &mut Criterion) {
    let plan = StreamPlan::new(1);
    let mut group = c.benchmark_group("draw_shared_sample");
    for n in [100_000u64, 1_000_000] {
        group.throughput(Throughput::Elements(n));
        for (label, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(label, n), &n, |bencher, &n| {
                bencher.iter(|| draw_shared_sample(&plan, n, mode).unwrap());
            });
        }
    }
    group.finish();
}

fn bench_shared_chsh(c: &mut Criterion) {
    let plan = StreamPlan::new(1);
    let angles = Angles::new(
        0.0,
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_2,
        3.0 * std::f64::consts::FRAC_PI_4,
    );
    let states = draw_shared_sample(&plan, 1_000_000, ExecMode::Parallel).unwrap();
    let mut group = c.benchmark_group("chsh_shared_estimate");
    group.throughput(Throughput::Elements(4 * states.len() as u64));
    for (label, mode) in MODES {
        group.bench_function(label, |bencher| {
            bencher.iter(|| chsh_shared_estimate(mode, &SignModel, &angles, &states).unwrap());
        });
    }
    group.finish();
}

fn bench_disjoint_chsh(c: &mut Criterion) {
    let plan = StreamPlan::new(1);
    let angles = Angles::new(
        0.0,
        std::f64::consts::FRAC_PI_4,
        std::f64::consts::FRAC_PI_2,
        3.0 * std::f64::consts::FRAC_PI_4,
    );
    let mut group = c.benchmark_group("chsh_disjoint");
    let n = 250_000u64;
    group.throughput(Throughput::Elements(4 * n));
    for (label, mode) in MODES {
        group.bench_function(label, |bencher| {
            bencher
                .iter(|| chsh_disjoint(&QuantumContextSampler, &angles, n, &plan, mode).unwrap());
        });
    }
    group.finish();
}

criterion_group!(benches, bench_shared_draw, bench_shared_chsh, bench_disjoint_chsh);
criterion_main!(benches);
