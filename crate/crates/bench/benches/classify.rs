use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use eo_core::classify::{membership_a, membership_p, purity, rebalance_witness, typed_eom_class};
use eo_core::grid::builtin::{f40, f56, sixv};
use eo_core::ExactComplex;

fn bench(c: &mut Criterion) {
    let (f40, f56) = (f40(), f56());
    c.bench_function("rebalance f40", |b| b.iter(|| rebalance_witness(black_box(&f40), 0).unwrap()));
    c.bench_function("rebalance f56 both bits", |b| {
        b.iter(|| (rebalance_witness(black_box(&f56), 0).unwrap(), rebalance_witness(&f56, 1).unwrap()))
    });
    c.bench_function("purity f40", |b| b.iter(|| purity(black_box(&f40))));

    let s = sixv(ExactComplex::from_int(1), ExactComplex::from_int(2), ExactComplex::from_int(3));
    c.bench_function("typed class sixv", |b| b.iter(|| typed_eom_class(black_box(&s)).unwrap()));
    c.bench_function("membership sixv", |b| b.iter(|| (membership_a(black_box(&s)), membership_p(&s))));
}

criterion_group!(benches, bench);
criterion_main!(benches);
