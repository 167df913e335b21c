use criterion::{criterion_group, criterion_main, Criterion};
use metafunc_core::hybrid::compute_hybrid_constants;
use metafunc_core::ladder::{LadderModel, OmegaVariant};
use metafunc_core::levelset::{default_region, find_locus_point, LocusRequest, Strategy};
use metafunc_core::specfun::{eval_bessel_j, eval_cn, eval_gamma, eval_zeta_critical_sq};
use metafunc_core::{Complex, FunctionTag};
use std::hint::black_box;

fn bench_specfun(c: &mut Criterion) {
    let mut g = c.benchmark_group("specfun");
    g.bench_function("zeta_critical_sq_em_t500", |b| {
        b.iter(|| eval_zeta_critical_sq(black_box(500.0)).unwrap())
    });
    g.bench_function("zeta_critical_sq_rs_t30000", |b| {
        b.iter(|| eval_zeta_critical_sq(black_box(30_000.0)).unwrap())
    });
    g.bench_function("gamma_complex", |b| {
        b.iter(|| eval_gamma(black_box(Complex::new(3.3, 7.1))).unwrap())
    });
    g.bench_function("bessel_j0_series", |b| {
        b.iter(|| eval_bessel_j(0, black_box(Complex::new(5.0, 1.0))).unwrap())
    });
    g.bench_function("bessel_j0_recurrence", |b| {
        b.iter(|| eval_bessel_j(0, black_box(Complex::new(40.0, 3.0))).unwrap())
    });
    g.bench_function("jacobi_cn", |b| {
        b.iter(|| eval_cn(black_box(Complex::new(0.7, 0.3)), 0.5).unwrap())
    });
    g.finish();
}

fn bench_ladder(c: &mut Criterion) {
    let model = LadderModel::new(OmegaVariant::Calibrated, 300.0).unwrap();
    let mut g = c.benchmark_group("ladder");
    g.bench_function("phi1", |b| b.iter(|| model.phi1(black_box(250.3)).unwrap()));
    g.bench_function("phi1_inverse", |b| {
        b.iter(|| model.phi1_inverse(black_box(230.0)).unwrap())
    });
    g.finish();
}

fn bench_pipeline(c: &mut Criterion) {
    let model = LadderModel::new(OmegaVariant::Calibrated, 260.0).unwrap();
    let mut g = c.benchmark_group("pipeline");
    g.sample_size(10);
    g.bench_function("hybrid_constants_l50", |b| {
        b.iter(|| compute_hybrid_constants(50, 1.0, &model).unwrap())
    });
    let h = compute_hybrid_constants(50, 1.0, &model).unwrap();
    g.bench_function("locus_point_zeta", |b| {
        let req = LocusRequest {
            tag: FunctionTag::Zeta,
            n: 1,
            target_c: h.c1,
            search_region: default_region(FunctionTag::Zeta, 1),
            strategy: Strategy::LineScan,
        };
        b.iter(|| find_locus_point(black_box(&req)).unwrap())
    });
    g.finish();
}

criterion_group!(benches, bench_specfun, bench_ladder, bench_pipeline);
criterion_main!(benches);
