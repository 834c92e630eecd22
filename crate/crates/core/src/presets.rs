//! Ready-made parameter sets and the built-in reference image.
//!
//! Both presets walk `N = 256` positions for 128 steps under the message
//! `0011` repeated to 128 bits, starting from `|0_C⟩|0_P⟩`. They differ only
//! in the coin angles.

use crate::image::GrayImage;
use crate::walk::{Message, WalkParams};

pub const PRESET_POSITION_QUBITS: u32 = 8;
pub const PRESET_STEPS: usize = 128;
pub const PRESET_MESSAGE_PATTERN: &str = "0011";

/// Coin angles outside the paradox region.
pub const BASELINE_THETAS: [f64; 3] = [0.1, 0.2, 0.3];
/// Coin angles inside the paradox region.
pub const PARADOX_THETAS: [f64; 3] = [157.0 / 150.0, 157.0 / 900.0, 157.0 / 900.0];

fn preset(thetas: [f64; 3]) -> WalkParams {
    let message: Message = PRESET_MESSAGE_PATTERN.parse().expect("static message");
    WalkParams::new(
        PRESET_POSITION_QUBITS,
        PRESET_STEPS,
        message.repeated_to(PRESET_STEPS),
        thetas,
    )
    .expect("static preset")
}

pub fn baseline_params() -> WalkParams {
    preset(BASELINE_THETAS)
}

pub fn paradox_params() -> WalkParams {
    preset(PARADOX_THETAS)
}

/// 64×64 ramp with pixel `(i, j)` equal to `(64 i + j) mod 256`.
pub fn reference_image() -> GrayImage {
    GrayImage::from_fn(64, 64, |i, j| ((i * 64 + j) % 256) as u8).expect("static shape")
}
