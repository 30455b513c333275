use criterion::{criterion_group, criterion_main, Criterion};
use oamsim_bench::{half_spiral, irregular_mask};
use oamsim_core::lg::{radial_column, radial_rule_order, LgMode};
use oamsim_core::quadrature::CircleQuadrature;
use oamsim_core::*;
use std::hint::black_box;

fn overlaps(c: &mut Criterion) {
    let plate = half_spiral();
    c.bench_function("spiral_curve_360", |b| {
        b.iter(|| sample_curve(black_box(&plate), 360, None).unwrap())
    });
    let mask = irregular_mask();
    c.bench_function("binary_mask_overlap", |b| {
        b.iter(|| binary_mask_overlap(black_box(&mask), 0.7).unwrap())
    });
    let quad = CircleQuadrature::default();
    c.bench_function("overlap_oracle", |b| {
        b.iter(|| verify_overlap(black_box(&plate), 1.3, 1e-8, &quad))
    });
}

fn chsh(c: &mut Criterion) {
    let fringe = ClosedFringe::for_plate(&irregular_mask());
    let settings = BellSettings::paper();
    c.bench_function("chsh_binary_mask", |b| {
        b.iter(|| chsh_s(black_box(&fringe), &settings).unwrap())
    });
    let mut cfg = SearchConfig::new(6, std::f64::consts::PI, settings, 2_000);
    cfg.starts = 8;
    c.bench_function("search_2000", |b| b.iter(|| search_max_s(black_box(&cfg)).unwrap()));
}

fn lg(c: &mut Criterion) {
    let input = LgMode::fundamental();
    c.bench_function("radial_column_l3_p120", |b| {
        b.iter(|| radial_column(black_box(3), 120, &input, radial_rule_order(120, 63)))
    });
    let plate = PhasePlate::spiral(3.5, 0.0).unwrap();
    c.bench_function("far_field_256", |b| {
        b.iter(|| far_field(black_box(&plate), &input, 256, 16.0).unwrap())
    });
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(10);
    targets = overlaps, chsh, lg
}
criterion_main!(benches);
