//! Benchmarks for the three pipeline layers: the likelihood kernel, a
//! single model fit, and the per-rate order search.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion as Bench};
use trendsel_bench::{arma11_draw, linear_series};
use trendsel_core::{difference, fit, kalman_loglik, ArimaOrder, Criterion, RegressionDesign};

fn bench_kalman(c: &mut Bench) {
    let z = arma11_draw(53, 1);
    c.bench_function("kalman_loglik n=53 arma(1,1)", |b| {
        b.iter(|| kalman_loglik(&z, &[0.6], &[0.3], 1.0).unwrap())
    });
}

fn bench_fit(c: &mut Bench) {
    let series = linear_series(54, 2);
    let dz = difference(series.values()).unwrap();
    let mut design = RegressionDesign::new();
    design.push("drift", vec![1.0; dz.len()]);
    c.bench_function("fit (1,1,1)+drift n=53", |b| {
        b.iter_batched(
            || (dz.clone(), design.clone()),
            |(dz, design)| fit(&dz, &design, ArimaOrder::new(1, 1), 0).unwrap(),
            BatchSize::SmallInput,
        )
    });
}

fn bench_select_order(c: &mut Bench) {
    let series = linear_series(54, 3);
    c.bench_function("select_order rate=0.02 p,q<=2", |b| {
        b.iter(|| {
            trendsel_core::select_order(&series, 0.02, Criterion::Aic, 2, 2, 0).unwrap()
        })
    });
}

criterion_group! {
    name = benches;
    config = Bench::default().sample_size(20);
    targets = bench_kalman, bench_fit, bench_select_order
}
criterion_main!(benches);
