use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use vlplus_bench::{certificate_target, product_fixture};
use vlplus_core::exact::int;
use vlplus_core::fock::schur_p;
use vlplus_core::twisted::twisted_top_scalars;
use vlplus_core::zhu::{
    certify_in_ov, leading_residue_check, lemma51_check, star, verify_relations,
    zhu_basis_certificate, ERelation,
};

fn free_field(c: &mut Criterion) {
    c.bench_function("schur p_24(2 alpha)", |b| b.iter(|| schur_p(black_box(24), &int(2), 3)));
    c.bench_function("twisted T1- scalars k=4", |b| {
        b.iter(|| twisted_top_scalars(black_box(4), 1, -1).unwrap())
    });
}

fn zhu_products(c: &mut Criterion) {
    let f = product_fixture(3);
    c.bench_function("E * E k=3", |b| {
        b.iter(|| star(&f.generators.e, &f.generators.e).unwrap())
    });
    c.bench_function("omega * (omega * E) k=3", |b| {
        b.iter(|| star(&f.generators.omega, &f.omega_star_e).unwrap())
    });
}

fn verification(c: &mut Criterion) {
    c.bench_function("lemma51 k=4", |b| b.iter(|| lemma51_check(black_box(4)).unwrap()));
    c.bench_function("relations k=10", |b| b.iter(|| verify_relations(black_box(10)).unwrap()));
    c.bench_function("basis certificate k=25", |b| {
        b.iter(|| zhu_basis_certificate(black_box(25)).unwrap())
    });
}

fn heavy(c: &mut Criterion) {
    let mut g = c.benchmark_group("heavy");
    g.sample_size(10);
    g.bench_function("leading residue m=2 k=2", |b| {
        b.iter(|| leading_residue_check(2, black_box(2)).unwrap())
    });
    let target = certificate_target(2, ERelation::L1);
    g.bench_function("certify L1 k=2 cutoff 10", |b| {
        b.iter(|| certify_in_ov(&target, 10).unwrap())
    });
    g.finish();
}

criterion_group!(benches, free_field, zhu_products, verification, heavy);
criterion_main!(benches);
