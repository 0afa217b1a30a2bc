use criterion::{black_box, criterion_group, criterion_main, Criterion};
use flextile::assembly::DEFAULT_BUDGET;
use flextile::{
    build_matrix, enumerate_complexes, min_order, search_minima, solve, verify_scenario, Multigraph, Scenario,
    SearchSpec,
};
use flextile_bench::{s12, s3, scrambled_wheel};

fn canonical(c: &mut Criterion) {
    let w = scrambled_wheel(9);
    c.bench_function("canonical_form W9", |b| b.iter(|| black_box(&w).canonical_form()));
    let k = Multigraph::complete(7);
    c.bench_function("canonical_form K7", |b| b.iter(|| black_box(&k).canonical_form()));
}

fn spectra(c: &mut Criterion) {
    let pot = s3(12);
    c.bench_function("solve s3(12)", |b| b.iter(|| solve(&build_matrix(black_box(&pot)))));
    c.bench_function("min_order s3(12)", |b| b.iter(|| min_order(black_box(&pot), 64)));
}

fn enumeration(c: &mut Criterion) {
    let pot = s12(7);
    c.bench_function("enumerate s12(7) (6,1)", |b| {
        b.iter(|| enumerate_complexes(black_box(&pot), &[6, 1], DEFAULT_BUDGET).unwrap())
    });
    let pot = s3(8);
    let w8 = Multigraph::wheel(8).unwrap();
    c.bench_function("verify s3(8) scenario 3", |b| {
        b.iter(|| verify_scenario(black_box(&pot), &w8, Scenario::Three, DEFAULT_BUDGET))
    });
}

fn search(c: &mut Criterion) {
    let mut group = c.benchmark_group("search");
    group.sample_size(10);
    let spec = SearchSpec::new(Multigraph::wheel(5).unwrap(), Scenario::Three);
    group.bench_function("W5 scenario 3", |b| b.iter(|| search_minima(black_box(&spec))));
    let spec = SearchSpec::new(Multigraph::cycle(7).unwrap(), Scenario::Three);
    group.bench_function("C7 scenario 3", |b| b.iter(|| search_minima(black_box(&spec))));
    group.finish();
}

criterion_group!(benches, canonical, spectra, enumeration, search);
criterion_main!(benches);
