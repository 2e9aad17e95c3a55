//! Throughput benches for the hot paths: the per-point operator
//! decomposition, full-domain classification, and expression parsing.

use std::collections::BTreeMap;

use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use slantlab_core::exprdsl;
use slantlab_core::slant::{classify, operators_at, SamplerConfig};
use slantlab_core::{gallery_get, Curve};

fn bench_operators_at(c: &mut Criterion) {
    let entry = gallery_get("G09").unwrap();
    let imm = entry.immersion_with(&[("k", 1.0)]).unwrap();
    let s = entry.ambient().unwrap();
    c.bench_function("operators_at/exponential-4d", |b| {
        b.iter(|| operators_at(black_box(&imm), black_box(&s), black_box(&[0.3, -0.2])).unwrap())
    });

    let entry8 = gallery_get("G14").unwrap();
    let imm8 = entry8.immersion_with(&[]).unwrap();
    let s8 = entry8.ambient().unwrap();
    c.bench_function("operators_at/linear-8d", |b| {
        b.iter(|| {
            operators_at(
                black_box(&imm8),
                black_box(&s8),
                black_box(&[0.3, -0.2, 0.5, 0.1]),
            )
            .unwrap()
        })
    });
}

fn bench_classify(c: &mut Criterion) {
    let entry = gallery_get("G04").unwrap();
    let imm = entry.immersion_with(&[("a", 2.0), ("b", 0.0)]).unwrap();
    let s = entry.ambient().unwrap();
    let config = SamplerConfig::default();
    c.bench_function("classify/moonlight-64-samples", |b| {
        b.iter(|| classify(black_box(&imm), black_box(&s), black_box(&config)).unwrap())
    });
}

fn bench_parser(c: &mut Criterion) {
    let vars = vec!["u".to_string(), "v".to_string()];
    let consts = vec!["k".to_string()];
    let text = "exp(k*u)*cos(u)*cosh(v) + sin(u)^2 / (1 + k^2) - sqrt(abs(v))";
    c.bench_function("exprdsl/parse", |b| {
        b.iter(|| exprdsl::parse(black_box(text), &vars, &consts).unwrap())
    });
    let ast = exprdsl::parse(text, &vars, &consts).unwrap();
    let mut env = BTreeMap::new();
    env.insert("u".to_string(), 0.4);
    env.insert("v".to_string(), -0.7);
    env.insert("k".to_string(), 1.3);
    c.bench_function("exprdsl/eval", |b| {
        b.iter(|| exprdsl::eval(black_box(&ast), black_box(&env)).unwrap())
    });
}

fn bench_curves(c: &mut Criterion) {
    let s5 = slantlab_core::registry_get("S5").unwrap().structure;
    let curve = Curve::from_expressions(
        "bench-line",
        "s",
        &["2*s + 0.1*s^3", "s + 0.05*s^3"],
        BTreeMap::new(),
        (0.0, 1.0),
        64,
        None,
    )
    .unwrap();
    c.bench_function("curve_classify/dsl-64-samples", |b| {
        b.iter(|| slantlab_core::curve_classify(black_box(&curve), black_box(&s5)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_operators_at,
    bench_classify,
    bench_parser,
    bench_curves
);
criterion_main!(benches);
