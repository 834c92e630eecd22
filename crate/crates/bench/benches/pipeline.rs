use criterion::{criterion_group, criterion_main, Criterion};
use std::hint::black_box;

use qwc_core::metrics::analyze;
use qwc_core::presets::{baseline_params, reference_image};
use qwc_core::scan::{evaluate_point, ScanConfig};
use qwc_core::{encrypt, keygen, walk};

fn bench_encrypt(c: &mut Criterion) {
    let params = baseline_params();
    let image = reference_image();
    c.bench_function("walk_key_encrypt_64x64", |b| {
        b.iter(|| {
            let dist = walk::run_direct(black_box(&params));
            let key = keygen::derive_key_bytes(&dist, 64, 64).unwrap();
            encrypt(&image, &key).unwrap()
        })
    });
}

fn bench_metrics(c: &mut Criterion) {
    let image = reference_image();
    let dist = walk::run_direct(&baseline_params());
    let key = keygen::derive_key_bytes(&dist, 64, 64).unwrap();
    let cipher = encrypt(&image, &key).unwrap();
    c.bench_function("analyze_10k_pairs", |b| {
        b.iter(|| analyze(black_box(&image), black_box(&cipher), 0, 10_000).unwrap())
    });
}

fn bench_scan_point(c: &mut Criterion) {
    let config = ScanConfig::new(baseline_params(), 0.5);
    let image = reference_image();
    c.bench_function("scan_point", |b| {
        b.iter(|| evaluate_point(&config, &image, black_box([1.0, 0.5, 0.5])).unwrap())
    });
}

criterion_group!(benches, bench_encrypt, bench_metrics, bench_scan_point);
criterion_main!(benches);
