//! Compares the sequential and thread-pooled cross-validation drivers.
//! Both run the identical case list (seeding is per-index), so this
//! measures pure harness parallelism, not different work.
//!
//! `cargo bench` uses the default features (parallel on); rerun with
//! `--no-default-features` to see the fallback path standing in for
//! both sides.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rvaes_core::bench::{cross_validate, cross_validate_sequential};

fn bench_cross_validation(c: &mut Criterion) {
    let mut group = c.benchmark_group("cross_validate");
    group.sample_size(10);
    for per_combo in [25usize, 100] {
        let cases = 12 * per_combo;
        group.bench_with_input(
            BenchmarkId::new("sequential", cases),
            &per_combo,
            |b, &n| {
                b.iter(|| {
                    let rep = cross_validate_sequential(n, 0xae5);
                    assert!(rep.all_passed());
                    rep.total_cases
                })
            },
        );
        group.bench_with_input(
            BenchmarkId::new("parallel", cases),
            &per_combo,
            |b, &n| {
                b.iter(|| {
                    let rep = cross_validate(n, 0xae5);
                    assert!(rep.all_passed());
                    rep.total_cases
                })
            },
        );
    }
    group.finish();
}

criterion_group!(benches, bench_cross_validation);
criterion_main!(benches);
