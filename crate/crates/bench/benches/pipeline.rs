use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};

use hlmoments::arith::sieve_segment;
use hlmoments::correlations::avg_sq_error;
use hlmoments::moments::{expansion_moment, window_moments};
use hlmoments::singular::s0;
use hlmoments::{SingularSeries, Tuple};
use hlmoments_bench::table;

fn sieve(c: &mut Criterion) {
    let mut g = c.benchmark_group("sieve_segment");
    for base in [1u64, 1_000_000_000] {
        g.bench_with_input(BenchmarkId::from_parameter(base), &base, |b, &base| {
            b.iter(|| sieve_segment(black_box(base), 1 << 20).unwrap())
        });
    }
    g.finish();
}

fn moments(c: &mut Criterion) {
    let t = table(2_000_000);
    c.bench_function("window_moments N=1e6 H=100 K<=4", |b| {
        b.iter(|| window_moments(&t, black_box(1_000_000), 100, 4).unwrap())
    });
    c.bench_function("expansion_moment N=5000 H=25 K=4", |b| {
        b.iter(|| expansion_moment(&t, black_box(5000), 25, 4).unwrap())
    });
}

fn singular(c: &mut Criterion) {
    let tuple = Tuple::new(vec![0, 2, 6, 8, 12]).unwrap();
    c.bench_function("s0 k=5 pmax=1e6", |b| {
        b.iter(|| s0(black_box(&tuple), 1_000_000).unwrap())
    });
    let s = SingularSeries::new(1_000_000).unwrap();
    let t = table(200_000);
    c.bench_function("avg_sq_error x=1e5 H=30 k=2", |b| {
        b.iter(|| avg_sq_error(&t, black_box(100_000), 30, 2, &s).unwrap())
    });
}

criterion_group!(benches, sieve, moments, singular);
criterion_main!(benches);
