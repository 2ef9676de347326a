//! Parallel vs sequential sweep timings on the real certification
//! workloads: jet-backed eigenvalue grids, pairwise monotonicity sampling,
//! and Simpson potential reconstruction.
//!
//! `sweep::map_indexed` is the path the library uses (rayon under the
//! default `parallel` feature); `sweep::map_indexed_seq` is the sequential
//! reference, always available.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use opcert::builtin;
use opcert::certify::{certify_monotone, reconstruct_potential};
use opcert::geom::{Grid, GridSpec, Region, Vec2};
use opcert::sample;
use opcert::sweep;
use opcert::tolerances::{SEED, TOL_EXACT, TOL_QUAD};

fn bench_eigenvalue_grid(c: &mut Criterion) {
    let field = builtin::field_plus_saddle();
    let g = Grid::new(Region::standard(), GridSpec::default());
    let work = |k: usize| field.jacobian(g.point(k)).unwrap().min_sym_eig();

    let mut group = c.benchmark_group("eigenvalue_grid_129x129");
    group.bench_with_input(BenchmarkId::new("default", g.len()), &g.len(), |b, &n| {
        b.iter(|| black_box(sweep::map_indexed(n, work)))
    });
    group.bench_with_input(BenchmarkId::new("sequential", g.len()), &g.len(), |b, &n| {
        b.iter(|| black_box(sweep::map_indexed_seq(n, work)))
    });
    group.finish();
}

fn bench_pairwise_sampling(c: &mut Criterion) {
    let field = builtin::field_plus();
    let region = Region::standard();
    let work = |k: usize| {
        let (z, z2) = sample::pair_in(&region, SEED, k as u64);
        let dz = z - z2;
        (field.value(z).unwrap() - field.value(z2).unwrap()).dot(dz) / dz.norm_sq()
    };

    let mut group = c.benchmark_group("pairwise_monotonicity_10k");
    group.bench_function("default", |b| {
        b.iter(|| black_box(sweep::map_indexed(10_000, work)))
    });
    group.bench_function("sequential", |b| {
        b.iter(|| black_box(sweep::map_indexed_seq(10_000, work)))
    });
    group.finish();
}

fn bench_end_to_end(c: &mut Criterion) {
    let field = builtin::field_plus();
    let mut group = c.benchmark_group("end_to_end");
    group.sample_size(10);
    group.bench_function("certify_monotone_129x129", |b| {
        b.iter(|| {
            black_box(certify_monotone(
                &field,
                Region::standard(),
                GridSpec::default(),
                10_000,
                SEED,
                TOL_EXACT,
            ))
        })
    });
    group.bench_function("reconstruct_potential_33x33", |b| {
        let sum = builtin::field_sum();
        b.iter(|| {
            black_box(
                reconstruct_potential(
                    &sum,
                    Region::standard(),
                    GridSpec::new(33, 33).unwrap(),
                    Vec2::ZERO,
                    1e-3,
                    TOL_QUAD,
                )
                .unwrap(),
            )
        })
    });
    group.finish();
}

criterion_group!(
    benches,
    bench_eigenvalue_grid,
    bench_pairwise_sampling,
    bench_end_to_end
);
criterion_main!(benches);
