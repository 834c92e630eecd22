//! CNOT encryption of NEQR-encoded images.
//!
//! In NEQR a `W×H` image is the superposition `Σ_{ij} |c_ij⟩ ⊗ |ij⟩` with
//! the 8-bit intensity `c_ij` held in computational-basis form. Pairing it
//! with the key image gives `Σ_{ij} |s_ij⟩ ⊗ |c_ij⟩ ⊗ |ij⟩`, and the
//! transversal CNOT (key bit `b` controls image bit `b`) maps each term to
//! `|s_ij⟩ ⊗ |c_ij ⊕ s_ij⟩ ⊗ |ij⟩`. Every term is a basis state, so the
//! position register is untouched and the whole operation is exactly the
//! byte-wise XOR `c ⊕ s` on the classical rasters. Applying it twice is the
//! identity, which is decryption.

use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::keygen::KeyMatrix;

pub fn encrypt(plain: &GrayImage, key: &KeyMatrix) -> Result<GrayImage> {
    if plain.width() != key.width() || plain.height() != key.height() {
        return Err(Error::validation(format!(
            "key is {}x{} but image is {}x{}",
            key.width(),
            key.height(),
            plain.width(),
            plain.height()
        )));
    }
    let pixels = plain
        .pixels()
        .iter()
        .zip(key.bytes())
        .map(|(c, s)| c ^ s)
        .collect();
    GrayImage::new(plain.width(), plain.height(), pixels)
}

/// Same transversal CNOT as [`encrypt`].
pub fn decrypt(cipher: &GrayImage, key: &KeyMatrix) -> Result<GrayImage> {
    encrypt(cipher, key)
}
