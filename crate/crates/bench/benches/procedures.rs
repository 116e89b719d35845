use std::hint::black_box;

use bayonet::borders::find_border;
use bayonet::cbc::{enumerate_cbc, stable_closure, CbcFamily};
use bayonet::completion::is_prefix_suffix;
use bayonet::cyclic::{enumerate_factorizations, enumerate_krasner};
use bayonet::hajos::{build_non_hajos_cbc, is_hajos_cbc, krasner_hajos_sweep, NonHajosSpec};
use bayonet::transforms::divisibility_analysis;
use bayonet::words::{is_code, FiniteCode};
use bayonet_bench::{cbc8, intro_code, stable_pair, t13};
use criterion::{criterion_group, criterion_main, Criterion};

fn words(c: &mut Criterion) {
    let intro = intro_code();
    c.bench_function("is_code/intro", |b| b.iter(|| is_code(black_box(&intro))));
    let t = t13();
    c.bench_function("divisibility/t13", |b| b.iter(|| divisibility_analysis(black_box(&t), 7)));
    let ps = FiniteCode::parse_list("aa ab abbab bbaa").unwrap();
    c.bench_function("prefix_suffix/aa_ab_abbab_bbaa", |b| b.iter(|| is_prefix_suffix(black_box(&ps), 6)));
}

fn cbc(c: &mut Criterion) {
    c.bench_function("enumerate_cbc/5", |b| b.iter(|| enumerate_cbc(black_box(5), 6)));
    let fam = stable_pair();
    c.bench_function("stable_closure/ce", |b| b.iter(|| stable_closure(black_box(&fam))));
    let single = CbcFamily::singleton(cbc8());
    c.bench_function("find_border/cbc8", |b| b.iter(|| find_border(black_box(&single), 0)));
}

fn cyclic(c: &mut Criterion) {
    c.bench_function("enumerate_factorizations/12", |b| b.iter(|| enumerate_factorizations(black_box(12))));
    c.bench_function("enumerate_krasner/36", |b| b.iter(|| enumerate_krasner(black_box(36))));
}

fn hajos(c: &mut Criterion) {
    let y = cbc8();
    c.bench_function("is_hajos_cbc/cbc8", |b| b.iter(|| is_hajos_cbc(black_box(&y))));
    let spec = NonHajosSpec::new(2, 2, 3, 3);
    c.bench_function("non_hajos/36", |b| b.iter(|| build_non_hajos_cbc(black_box(&spec), true)));
    let mut group = c.benchmark_group("sweep");
    group.sample_size(10);
    group.bench_function("krasner_hajos/5", |b| b.iter(|| krasner_hajos_sweep(black_box(5), 6)));
    group.finish();
}

criterion_group!(benches, words, cbc, cyclic, hajos);
criterion_main!(benches);
