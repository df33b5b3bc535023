use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use permwold::exec::Exec;
use permwold::oracle::{search, Property, SearchSpace};

fn bench_search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    let cases = [
        (
            "doubly-2x2-base2",
            SearchSpace::all_thetas(2, 2, 2).unwrap(),
            Property::DoublyCommuting,
        ),
        (
            "no-slocinski-1x2-base3",
            SearchSpace::all_thetas(3, 1, 2).unwrap(),
            Property::NoSlocinski,
        ),
    ];
    for (name, space, prop) in &cases {
        for (mode, exec) in [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)] {
            group.bench_with_input(BenchmarkId::new(*name, mode), space, |b, space| {
                b.iter(|| search(space, *prop, exec).unwrap().len())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, bench_search);
criterion_main!(benches);
