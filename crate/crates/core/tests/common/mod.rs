//! Helpers shared by the integration test targets.

#![allow(dead_code)]

use std::path::PathBuf;

use qwc_core::num_complex::Complex64;
use qwc_core::walk::CoinSchedule;
use qwc_core::{GrayImage, WalkParams};

pub const IMAGE_NAMES: [&str; 4] = ["terrain", "blobs", "portrait", "rings"];

pub fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/images")
}

pub fn load_images() -> Vec<(&'static str, GrayImage)> {
    IMAGE_NAMES
        .iter()
        .map(|&name| {
            let path = data_dir().join(format!("{name}.pgm"));
            let img = GrayImage::load_pgm(&path)
                .unwrap_or_else(|e| panic!("cannot load {}: {e}", path.display()));
            (name, img)
        })
        .collect()
}

pub fn golden(name: &str) -> Vec<f64> {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    serde_json::from_str(&text).unwrap()
}

/// Dense `2N × 2N` one-step operator in coin-major order, filled entry by
/// entry from the shift rule: coin 0 moves `j → j-1`, coin 1 moves `j → j+1`.
pub fn dense_step(n_pos: usize, theta: f64) -> Vec<Vec<f64>> {
    let c = [[theta.cos(), theta.sin()], [theta.sin(), -theta.cos()]];
    let dim = 2 * n_pos;
    let mut u = vec![vec![0.0; dim]; dim];
    for s_out in 0..2 {
        for s_in in 0..2 {
            for j in 0..n_pos {
                let dest = if s_out == 0 {
                    (j + n_pos - 1) % n_pos
                } else {
                    (j + 1) % n_pos
                };
                u[s_out * n_pos + dest][s_in * n_pos + j] += c[s_out][s_in];
            }
        }
    }
    u
}

pub fn mat_vec(m: &[Vec<f64>], v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(&a, &b)| b * a).sum())
        .collect()
}

/// Position distribution from repeated dense matrix-vector products.
pub fn dense_walk(params: &WalkParams, schedule: &CoinSchedule) -> Vec<f64> {
    let n_pos = params.cycle_len();
    let thetas = params.thetas();
    let mats: Vec<Vec<Vec<f64>>> = thetas.iter().map(|&t| dense_step(n_pos, t)).collect();
    let [a, b] = params.coin_init();
    let mut v = vec![Complex64::new(0.0, 0.0); 2 * n_pos];
    v[0] = a;
    v[n_pos] = b;
    for &idx in schedule.indices() {
        v = mat_vec(&mats[idx as usize], &v);
    }
    (0..n_pos)
        .map(|j| v[j].norm_sqr() + v[n_pos + j].norm_sqr())
        .collect()
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

pub fn max_abs_diff_c(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}
