//! Statistical security metrics for a plaintext/ciphertext pair.
//!
//! NPCR and UACI compare a plaintext with its own ciphertext. This differs
//! from the more common two-ciphertext differential test; with a
//! plaintext-independent XOR key the two readings measure different things.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::image::GrayImage;

/// Adjacent-pair samples per direction unless configured otherwise.
pub const DEFAULT_PAIRS: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    /// `(i, j)`–`(i, j+1)`
    Horizontal,
    /// `(i, j)`–`(i+1, j)`
    Vertical,
    /// `(i, j)`–`(i+1, j+1)`
    Diagonal,
}

impl Direction {
    pub const ALL: [Direction; 3] = [
        Direction::Horizontal,
        Direction::Vertical,
        Direction::Diagonal,
    ];

    fn offset(self) -> (usize, usize) {
        match self {
            Direction::Horizontal => (0, 1),
            Direction::Vertical => (1, 0),
            Direction::Diagonal => (1, 1),
        }
    }

    fn stream(self) -> u64 {
        match self {
            Direction::Horizontal => 0,
            Direction::Vertical => 1,
            Direction::Diagonal => 2,
        }
    }
}

/// Pearson coefficient of sampled neighbor pairs.
///
/// When either side of the sample has zero variance the coefficient is
/// undefined; it is then reported as `0.0` with `degenerate` set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Correlation {
    pub value: f64,
    pub degenerate: bool,
}

/// Draws `pairs` anchors uniformly over the pixels that have a neighbor in
/// `direction` and returns `(value, neighbor)` pairs.
///
/// Each direction draws from its own stream of a ChaCha8 generator seeded
/// with `seed`, so results are reproducible across platforms.
pub fn scatter_pairs(
    image: &GrayImage,
    direction: Direction,
    pairs: usize,
    seed: u64,
) -> Result<Vec<(u8, u8)>> {
    if image.width() < 2 || image.height() < 2 {
        return Err(Error::validation(format!(
            "adjacent-pair sampling needs at least a 2x2 image, got {}x{}",
            image.width(),
            image.height()
        )));
    }
    let (dr, dc) = direction.offset();
    let rows = image.height() - dr;
    let cols = image.width() - dc;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(direction.stream());
    Ok((0..pairs)
        .map(|_| {
            let r = rng.random_range(0..rows);
            let c = rng.random_range(0..cols);
            (image.get(r, c), image.get(r + dr, c + dc))
        })
        .collect())
}

pub fn pearson(pairs: &[(u8, u8)]) -> Correlation {
    let m = pairs.len() as f64;
    let (sx, sy) = pairs.iter().fold((0.0, 0.0), |(a, b), &(x, y)| {
        (a + f64::from(x), b + f64::from(y))
    });
    let (mx, my) = (sx / m, sy / m);
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        let dx = f64::from(x) - mx;
        let dy = f64::from(y) - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if pairs.is_empty() || sxx == 0.0 || syy == 0.0 {
        return Correlation {
            value: 0.0,
            degenerate: true,
        };
    }
    Correlation {
        value: sxy / (sxx * syy).sqrt(),
        degenerate: false,
    }
}

pub fn correlation(
    image: &GrayImage,
    direction: Direction,
    pairs: usize,
    seed: u64,
) -> Result<Correlation> {
    if pairs < 2 {
        return Err(Error::validation(format!(
            "need at least 2 sample pairs, got {pairs}"
        )));
    }
    Ok(pearson(&scatter_pairs(image, direction, pairs, seed)?))
}

fn check_same_shape(a: &GrayImage, b: &GrayImage) -> Result<()> {
    if a.same_shape(b) {
        Ok(())
    } else {
        Err(Error::validation(format!(
            "images differ in shape: {}x{} vs {}x{}",
            a.width(),
            a.height(),
            b.width(),
            b.height()
        )))
    }
}

/// Percentage of positions where the two images differ.
pub fn npcr(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_same_shape(a, b)?;
    let changed = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .filter(|(x, y)| x != y)
        .count();
    Ok(100.0 * changed as f64 / a.pixel_count() as f64)
}

/// Mean absolute intensity difference as a percentage of 255.
pub fn uaci(a: &GrayImage, b: &GrayImage) -> Result<f64> {
    check_same_shape(a, b)?;
    let total: u64 = a
        .pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| u64::from(x.abs_diff(y)))
        .sum();
    Ok(100.0 * total as f64 / (255.0 * a.pixel_count() as f64))
}

pub fn histogram(image: &GrayImage) -> [u64; 256] {
    let mut bins = [0u64; 256];
    for &p in image.pixels() {
        bins[usize::from(p)] += 1;
    }
    bins
}

/// Shannon entropy of the intensity histogram, in bits.
pub fn entropy(image: &GrayImage) -> f64 {
    let m = image.pixel_count() as f64;
    let h: f64 = histogram(image)
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / m;
            -p * p.log2()
        })
        .sum();
    // a single occupied bin yields -0.0
    h.max(0.0)
}

/// Pearson statistic of a histogram against the uniform distribution.
pub fn chi_square_uniform(bins: &[u64; 256]) -> f64 {
    let total: u64 = bins.iter().sum();
    let expected = total as f64 / 256.0;
    bins.iter()
        .map(|&c| {
            let d = c as f64 - expected;
            d * d / expected
        })
        .sum()
}

/// All metrics for one plaintext/ciphertext pair. Correlations are those of
/// the ciphertext.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub c_h: f64,
    pub c_v: f64,
    pub c_d: f64,
    pub npcr: f64,
    pub uaci: f64,
    pub entropy_plain: f64,
    pub entropy_cipher: f64,
    pub histogram_plain: Vec<u64>,
    pub histogram_cipher: Vec<u64>,
    pub sample_seed: u64,
    pub pair_count: usize,
}

impl MetricsReport {
    pub fn mean_abs_correlation(&self) -> f64 {
        (self.c_h.abs() + self.c_v.abs() + self.c_d.abs()) / 3.0
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }
}

pub fn analyze(
    plain: &GrayImage,
    cipher: &GrayImage,
    seed: u64,
    pairs: usize,
) -> Result<MetricsReport> {
    check_same_shape(plain, cipher)?;
    let [c_h, c_v, c_d] = cipher_correlations(cipher, seed, pairs)?;
    Ok(MetricsReport {
        c_h,
        c_v,
        c_d,
        npcr: npcr(plain, cipher)?,
        uaci: uaci(plain, cipher)?,
        entropy_plain: entropy(plain),
        entropy_cipher: entropy(cipher),
        histogram_plain: histogram(plain).to_vec(),
        histogram_cipher: histogram(cipher).to_vec(),
        sample_seed: seed,
        pair_count: pairs,
    })
}

pub(crate) fn cipher_correlations(image: &GrayImage, seed: u64, pairs: usize) -> Result<[f64; 3]> {
    let mut out = [0.0; 3];
    for (slot, dir) in out.iter_mut().zip(Direction::ALL) {
        *slot = correlation(image, dir, pairs, seed)?.value;
    }
    Ok(out)
}
