use braggstack::engine::{chain_matrix, chain_matrix_sequential, field_profile};
use braggstack::experiments::{solve_boundary_value, spectrum, DeltaGrid};
use braggstack_bench::{irregular_chain, setup, working_point};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

fn chain_product(c: &mut Criterion) {
    let (cfg, geom) = setup();
    let mut g = c.benchmark_group("chain_product");
    for n_s in [100, 600, 1000] {
        let chain = working_point(n_s).build(&geom).unwrap();
        g.bench_with_input(BenchmarkId::new("periodic", n_s), &chain, |b, ch| {
            b.iter(|| chain_matrix(black_box(ch), 0.5 * cfg.gamma, &cfg, &geom).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("sequential", n_s), &chain, |b, ch| {
            b.iter(|| chain_matrix_sequential(black_box(ch), 0.5 * cfg.gamma, &cfg, &geom).unwrap())
        });
    }
    g.finish();
}

fn full_spectrum(c: &mut Criterion) {
    let (cfg, geom) = setup();
    let grid = DeltaGrid::default();
    let model = working_point(600);
    c.bench_function("spectrum_1101_points", |b| {
        b.iter(|| spectrum(black_box(&model), &grid, &cfg, &geom).unwrap())
    });
}

fn oracle(c: &mut Criterion) {
    let (cfg, geom) = setup();
    let chain = irregular_chain(20, &geom);
    c.bench_function("oracle_20_slabs", |b| {
        b.iter(|| solve_boundary_value(black_box(&chain), 0.3 * cfg.gamma, &cfg, &geom).unwrap())
    });
}

fn profile(c: &mut Criterion) {
    let (cfg, geom) = setup();
    let chain = working_point(200).build(&geom).unwrap();
    c.bench_function("field_profile_200_periods", |b| {
        b.iter(|| field_profile(black_box(&chain), 0.0, 20, &cfg, &geom).unwrap())
    });
}

criterion_group!(benches, chain_product, full_spectrum, oracle, profile);
criterion_main!(benches);
