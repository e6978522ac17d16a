use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use stern_core::par::Execution;
use stern_core::zeros::{find_roots_with, RootOptions};
use stern_core::stern_poly;

fn modes() -> [(&'static str, Execution); 2] {
    [("sequential", Execution::Sequential), ("parallel", Execution::Parallel)]
}

fn single_polynomial(c: &mut Criterion) {
    let mut group = c.benchmark_group("find_roots");
    group.sample_size(10);
    for n in [501u64, 1001, 2000] {
        let p = stern_poly(n);
        for (name, exec) in modes() {
            let opts = RootOptions { execution: exec, ..RootOptions::default() };
            group.bench_with_input(BenchmarkId::new(name, n), &p, |b, p| {
                b.iter(|| find_roots_with(p, &opts).unwrap())
            });
        }
    }
    group.finish();
}

// Many small polynomials: parallelism is across the batch instead.
fn batch(c: &mut Criterion) {
    let polys: Vec<_> = (3u64..200).filter(|n| !n.is_power_of_two()).map(stern_poly).collect();
    let mut group = c.benchmark_group("batch_3_to_200");
    group.sample_size(10);
    for (name, exec) in modes() {
        group.bench_function(name, |b| {
            b.iter(|| {
                stern_core::par::map(exec, &polys, |p| {
                    let opts = RootOptions { execution: Execution::Sequential, ..RootOptions::default() };
                    find_roots_with(p, &opts).unwrap().roots.len()
                })
            })
        });
    }
    group.finish();
}

criterion_group!(benches, single_polynomial, batch);
criterion_main!(benches);
