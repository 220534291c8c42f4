use std::hint::black_box;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use elocc_core::catalysis::{catalyst_search, elocc_with_catalyst, CatalystSearchConfig};
use elocc_core::purify::{ppt_separability, random_separable_attack};
use elocc_core::qcore::{apply_separable_map, schmidt_spectrum, uhlmann_fidelity};
use elocc_core::transform::optimal_conversion_fidelity;
use elocc_core::{is_majorized, presets};
use elocc_bench::{core_pair, kraus, mixed, state, werner};

fn spectra(c: &mut Criterion) {
    let (alpha, beta) = core_pair();
    let omega = presets::omega_spectrum();
    c.bench_function("majorize_4x3", |b| b.iter(|| is_majorized(black_box(&alpha), black_box(&beta), 1e-10)));
    c.bench_function("catalyst_certificate", |b| {
        b.iter(|| elocc_with_catalyst(black_box(&alpha), black_box(&beta), black_box(&omega)))
    });
    c.bench_function("optimal_conversion", |b| {
        b.iter(|| optimal_conversion_fidelity(black_box(&alpha), black_box(&beta)).unwrap())
    });
    let cfg = CatalystSearchConfig::default();
    c.bench_function("catalyst_search_dim3", |b| b.iter(|| catalyst_search(black_box(&alpha), black_box(&beta), &cfg)));
}

fn states(c: &mut Criterion) {
    let mut group = c.benchmark_group("schmidt");
    for n in [2, 5, 8] {
        let psi = state(n, n as u64);
        group.bench_with_input(BenchmarkId::from_parameter(n), &psi, |b, psi| b.iter(|| schmidt_spectrum(psi)));
    }
    group.finish();

    let (x, y) = (mixed(3, 1), mixed(3, 2));
    c.bench_function("uhlmann_fidelity_9", |b| b.iter(|| uhlmann_fidelity(black_box(&x), black_box(&y)).unwrap()));
    c.bench_function("ppt_3x3", |b| b.iter(|| ppt_separability(black_box(&x)).unwrap()));
    let k = kraus(3, 0);
    c.bench_function("separable_map_3x3", |b| b.iter(|| apply_separable_map(black_box(&x), &k, true).unwrap()));
}

fn attacks(c: &mut Criterion) {
    let s = werner(0.5);
    let bell = presets::bell().projector();
    c.bench_function("attack_100_trials", |b| b.iter(|| random_separable_attack(&s, None, 100, 0, false).unwrap()));
    c.bench_function("attack_100_trials_catalyst", |b| {
        b.iter(|| random_separable_attack(&s, Some(&bell), 100, 0, false).unwrap())
    });
}

criterion_group!(benches, spectra, states, attacks);
criterion_main!(benches);
