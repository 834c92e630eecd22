//! Walk distribution to 8-bit key matrix.
//!
//! Each probability is quantized as `floor((p · 10^8) mod 256)`. When the
//! target has more pixels than the cycle has positions, the distribution is
//! tiled cyclically in row-major order, so `key[t] = q(p[t mod N])`.

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::walk::ProbDist;

pub const KEY_SCALE_INT: u64 = 100_000_000;

/// Row-major key bytes sized to an image.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct KeyMatrix {
    width: usize,
    height: usize,
    bytes: Vec<u8>,
}

impl KeyMatrix {
    pub fn new(width: usize, height: usize, bytes: Vec<u8>) -> Result<Self> {
        if width == 0 || height == 0 || width.checked_mul(height) != Some(bytes.len()) {
            return Err(Error::validation(format!(
                "{width}x{height} key cannot hold {} bytes",
                bytes.len()
            )));
        }
        Ok(KeyMatrix {
            width,
            height,
            bytes,
        })
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn bytes(&self) -> &[u8] {
        &self.bytes
    }

    pub fn from_image(image: &GrayImage) -> Self {
        KeyMatrix {
            width: image.width(),
            height: image.height(),
            bytes: image.pixels().to_vec(),
        }
    }
}

/// `floor((p · 10^8) mod 256)`, evaluated exactly.
///
/// `p` is split into `m · 2^e` and the product `m · 10^8 · 2^e` is formed in
/// integer arithmetic, so the only rounding is the final floor. Negative
/// and non-finite inputs map to 0.
pub fn quantize(p: f64) -> u8 {
    if !p.is_finite() || p <= 0.0 {
        return 0;
    }
    let bits = p.to_bits();
    let biased = ((bits >> 52) & 0x7ff) as i32;
    let fraction = bits & ((1u64 << 52) - 1);
    let (mantissa, exp) = if biased == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), biased - 1075)
    };
    let scaled = u128::from(mantissa) * u128::from(KEY_SCALE_INT);
    let low = if exp >= 0 {
        if exp >= 8 {
            0
        } else {
            scaled << exp
        }
    } else if exp <= -128 {
        0
    } else {
        scaled >> -exp
    };
    (low & 0xff) as u8
}

pub fn derive_key_bytes(dist: &ProbDist, width: usize, height: usize) -> Result<KeyMatrix> {
    if dist.is_empty() {
        return Err(Error::validation(
            "cannot derive a key from an empty distribution",
        ));
    }
    if width == 0 || height == 0 {
        return Err(Error::validation(format!(
            "key dimensions must be positive, got {width}x{height}"
        )));
    }
    let n = dist.len();
    if !is_perfect_square(n) {
        log::warn!("cycle length {n} is not a perfect square; key is tiled cyclically");
    }
    let period: Vec<u8> = dist.values().iter().copied().map(quantize).collect();
    let total = width
        .checked_mul(height)
        .ok_or_else(|| Error::validation("key dimensions overflow"))?;
    let bytes = period.iter().copied().cycle().take(total).collect();
    KeyMatrix::new(width, height, bytes)
}

/// Repackages the key as an image (lossless).
pub fn key_as_image(key: &KeyMatrix) -> GrayImage {
    GrayImage::new(key.width, key.height, key.bytes.clone()).expect("key shape is valid")
}

fn is_perfect_square(n: usize) -> bool {
    let r = (n as f64).sqrt().round() as usize;
    r * r == n
}
