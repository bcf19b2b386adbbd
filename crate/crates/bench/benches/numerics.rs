use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use gcos_core::cosine::{CosineOperator, ReducedKernelTable, TorusInvariantFunction};
use gcos_core::fredholm::{solve_first_kind_with, FirstKindOptions, MetricProfile};
use gcos_core::klain::{klain_l1_with, KlainMethod};
use gcos_core::spectral::{gauss_legendre, moments_2d};

fn kernel_table(c: &mut Criterion) {
    let mut g = c.benchmark_group("kernel_table");
    g.sample_size(10);
    for order in [16, 32] {
        g.bench_with_input(BenchmarkId::from_parameter(order), &order, |b, &n| {
            b.iter(|| ReducedKernelTable::new(black_box(n)))
        });
    }
    g.finish();

    let op = CosineOperator::new(32);
    let f = TorusInvariantFunction::legendre_product(2, 0);
    c.bench_function("cosine_apply_32", |b| b.iter(|| op.apply(black_box(&f))));
}

fn moments(c: &mut Criterion) {
    let rule = gauss_legendre(64);
    let max = |x: f64, y: f64| x.abs().max(y.abs());
    c.bench_function("moments_max_deg8_split", |b| {
        b.iter(|| moments_2d(max, black_box(8), &rule, true))
    });
    c.bench_function("moments_max_deg8_tensor", |b| {
        b.iter(|| moments_2d(max, black_box(8), &rule, false))
    });
}

fn klain(c: &mut Criterion) {
    let mut g = c.benchmark_group("klain");
    for (name, method) in [
        ("elliptic", KlainMethod::Elliptic),
        ("series", KlainMethod::Series),
        ("quadrature", KlainMethod::Quadrature),
    ] {
        g.bench_function(name, |b| {
            b.iter(|| klain_l1_with(black_box(0.3), black_box(-0.55), method))
        });
    }
    g.finish();
}

fn crofton(c: &mut Criterion) {
    let opts = FirstKindOptions::default();
    let l1 = MetricProfile::l1();
    c.bench_function("crofton_l1_64", |b| {
        b.iter(|| solve_first_kind_with(black_box(&l1), &opts))
    });
}

criterion_group!(benches, kernel_table, moments, klain, crofton);
criterion_main!(benches);
