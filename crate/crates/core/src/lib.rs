//! Quantum-walk image cipher toolkit.
//!
//! A discrete-time quantum walk on an `N = 2^n` cycle produces a position
//! distribution, which is quantized into an 8-bit key image and applied to
//! a grayscale image by transversal CNOT (byte-wise XOR). The crate also
//! builds the gate-level walk circuit, computes the usual statistical
//! security metrics, and sweeps coin angles looking for Parrondo-paradox
//! regimes in which the cipher breaks down.
//!
//! ```
//! use qwc_core::{cipher, keygen, presets, walk};
//!
//! let params = presets::baseline_params();
//! let dist = walk::run_direct(&params);
//! let key = keygen::derive_key_bytes(&dist, 64, 64).unwrap();
//! let plain = presets::reference_image();
//! let enc = cipher::encrypt(&plain, &key).unwrap();
//! assert_eq!(cipher::decrypt(&enc, &key).unwrap(), plain);
//! ```

pub mod cipher;
pub mod circuit;
pub mod error;
pub mod image;
pub mod keygen;
pub mod metrics;
pub mod presets;
pub mod scan;
pub mod walk;

pub use cipher::{decrypt, encrypt};
pub use circuit::{Gate, GateCounts, GateList};
pub use error::{Error, Result};
pub use image::GrayImage;
pub use keygen::KeyMatrix;
pub use metrics::{Correlation, Direction, MetricsReport};
pub use scan::{ParadoxVerdict, ScanConfig, ScanFormat, ScanRecord};
pub use walk::{CoinOp, CoinSchedule, Message, ProbDist, WalkParams, WalkState};

pub use num_complex;
