use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion, Throughput};
use mergemarathon::ingest::DEFAULT_SYNTHETIC_MAX;
use mergemarathon::{apply_switch, natural_merge_sort, sort_tagged_stream, MergeConfig, Mode, SwitchConfig};
use mergemarathon_bench::uniform_trace;

const LEN: usize = 100_000;

fn switch_modes(c: &mut Criterion) {
    let trace = uniform_trace(LEN);
    let mut group = c.benchmark_group("switch");
    group.throughput(Throughput::Elements(LEN as u64));
    for l in [4, 16, 64] {
        let config = SwitchConfig::new(16, l, DEFAULT_SYNTHETIC_MAX).unwrap();
        for (name, mode) in [("array", Mode::Array), ("stage_accurate", Mode::StageAccurate)] {
            group.bench_with_input(BenchmarkId::new(name, l), &config, |b, &config| {
                b.iter(|| apply_switch(config, &trace, mode).unwrap())
            });
        }
    }
    group.finish();
}

fn merge_sort(c: &mut Criterion) {
    let trace = uniform_trace(LEN);
    let k = MergeConfig::default();
    let mut group = c.benchmark_group("sort");
    group.throughput(Throughput::Elements(LEN as u64));
    group.bench_function("raw", |b| b.iter(|| natural_merge_sort(&trace, k)));
    for (s, l) in [(16, 16), (64, 64)] {
        let config = SwitchConfig::new(s, l, DEFAULT_SYNTHETIC_MAX).unwrap();
        let tagged = apply_switch(config, &trace, Mode::Array).unwrap();
        group.bench_function(BenchmarkId::new("switched", format!("S{s}_L{l}")), |b| {
            b.iter(|| sort_tagged_stream(&tagged, s, k).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, switch_modes, merge_sort);
criterion_main!(benches);
