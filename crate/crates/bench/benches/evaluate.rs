use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use eo_bench::{csp, grids};
use eo_core::classify::Typing;
use eo_core::grid::random::GridFamily;
use eo_core::grid::brute_force_value;
use eo_core::solve::{affine_csp_value, evaluate, product_csp_value, EvalOptions, Strategy};

fn pipelines(c: &mut Criterion) {
    let mut group = c.benchmark_group("pipeline");
    for (name, family, strategy) in [
        ("active", GridFamily::PureUp, Strategy::Active),
        ("passive", GridFamily::Rebalancing, Strategy::Passive),
    ] {
        let gs = grids(family, Typing::P, 20, 6);
        let opts = EvalOptions::with_strategy(strategy);
        group.bench_function(name, |b| b.iter(|| gs.iter().map(|g| evaluate(g, &opts).unwrap()).count()));
        group.bench_function(format!("{name} brute force"), |b| {
            b.iter(|| gs.iter().map(|g| brute_force_value(g).unwrap()).count())
        });
    }
    group.finish();
}

fn backends(c: &mut Criterion) {
    let mut group = c.benchmark_group("backend");
    for n in [20, 60] {
        let a = csp(n, n, true);
        let p = csp(n, n, false);
        group.bench_function(format!("affine n={n}"), |b| {
            b.iter_batched(|| a.clone(), |i| affine_csp_value(&i).unwrap(), BatchSize::SmallInput)
        });
        group.bench_function(format!("product n={n}"), |b| {
            b.iter_batched(|| p.clone(), |i| product_csp_value(&i).unwrap(), BatchSize::SmallInput)
        });
    }
    group.finish();
}

criterion_group!(benches, pipelines, backends);
criterion_main!(benches);
