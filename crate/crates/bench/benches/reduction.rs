use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use kphi_core::{
    boundary_complex, build_f, build_reduction, build_torus, moment_coords, rank_gf2, seeded_coords, simplicial_betti,
    van_kampen_number, CnfFormula, GadgetParams,
};

fn reduction(c: &mut Criterion) {
    let p = GadgetParams::new(2, 1).unwrap();
    let mut group = c.benchmark_group("reduction");
    for t in [5usize, 10, 20, 40] {
        let phi = CnfFormula::random_3cnf(8, t, 1);
        group.bench_with_input(BenchmarkId::from_parameter(t), &phi, |b, phi| {
            b.iter(|| build_reduction(black_box(phi), p).unwrap())
        });
    }
    group.finish();
}

fn homology(c: &mut Criterion) {
    let t = build_torus(2).unwrap();
    let chain = boundary_complex(&t);
    c.bench_function("gf2_rank_torus2_top_boundary", |b| b.iter(|| rank_gf2(black_box(chain.boundary(4).unwrap()))));
    c.bench_function("betti_torus2", |b| b.iter(|| simplicial_betti(black_box(&t))));
}

fn van_kampen(c: &mut Criterion) {
    let mut group = c.benchmark_group("van_kampen");
    group.sample_size(10);
    for (k, ell) in [(2usize, 1usize), (4, 2)] {
        let p = GadgetParams::new(k, ell).unwrap();
        let f = build_f(p);
        let d = p.ambient_dim();
        let moment = moment_coords(&f, d).unwrap();
        group.bench_function(format!("F({k},{ell})_moment"), |b| {
            b.iter(|| van_kampen_number(black_box(&f), d, &moment).unwrap())
        });
        group.bench_function(format!("F({k},{ell})_seeded_coords"), |b| {
            b.iter(|| seeded_coords(black_box(&f), d, 3).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, reduction, homology, van_kampen);
criterion_main!(benches);
