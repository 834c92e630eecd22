//! Parrondo-paradox detection and the `(θ₁, θ₂, θ₃)` grid sweep.
//!
//! A walk "wins" when its final [`payoff`] is positive. A parameter triple
//! is paradoxical when the constant-`Ĉ₀` and constant-`Ĉ₁` walks both lose
//! by more than `ε` while the message-driven alternation wins by more than
//! `ε`. Independently, each grid point is run through the cipher on a
//! reference image and flagged `degraded` when the ciphertext falls short on
//! entropy, NPCR or adjacent-pixel decorrelation.

use std::f64::consts::TAU;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cipher::encrypt;
use crate::error::{Error, Result};
use crate::image::GrayImage;
use crate::keygen::derive_key_bytes;
use crate::metrics::{cipher_correlations, entropy, npcr, DEFAULT_PAIRS};
use crate::walk::{evolve_direct, payoff, run_direct, CoinSchedule, ProbDist, WalkParams};

pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Ciphertext entropy below this (bits) counts as degraded.
pub const ENTROPY_FLOOR: f64 = 7.94;
/// NPCR below this (percent) counts as degraded.
pub const NPCR_FLOOR: f64 = 99.0;
/// Mean absolute ciphertext correlation above this counts as degraded.
pub const CORRELATION_CEILING: f64 = 0.05;

/// Points evaluated per parallel batch before results are flushed in order.
const BATCH: usize = 256;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParadoxVerdict {
    pub payoff_c0: f64,
    pub payoff_c1: f64,
    pub payoff_c2: f64,
    pub payoff_alternating: f64,
    pub is_paradox: bool,
    pub epsilon: f64,
}

impl ParadoxVerdict {
    pub fn from_payoffs(c0: f64, c1: f64, c2: f64, alternating: f64, epsilon: f64) -> Self {
        ParadoxVerdict {
            payoff_c0: c0,
            payoff_c1: c1,
            payoff_c2: c2,
            payoff_alternating: alternating,
            is_paradox: paradox_predicate(c0, c1, alternating, epsilon),
            epsilon,
        }
    }
}

pub fn paradox_predicate(c0: f64, c1: f64, alternating: f64, epsilon: f64) -> bool {
    c0 < -epsilon && c1 < -epsilon && alternating > epsilon
}

pub fn degradation_predicate(cipher_entropy: f64, npcr: f64, mean_abs_corr: f64) -> bool {
    cipher_entropy < ENTROPY_FLOOR || npcr < NPCR_FLOOR || mean_abs_corr > CORRELATION_CEILING
}

/// Runs the three constant-coin walks and the message-driven walk.
pub fn classify(params: &WalkParams, epsilon: f64) -> ParadoxVerdict {
    classify_with(params, epsilon, &run_direct(params))
}

fn classify_with(params: &WalkParams, epsilon: f64, alternating: &ProbDist) -> ParadoxVerdict {
    let steps = params.steps();
    let constant = |idx: u8| {
        let schedule = CoinSchedule::constant(idx, steps).expect("index in range");
        payoff(&evolve_direct(params, &schedule).probabilities())
    };
    ParadoxVerdict::from_payoffs(
        constant(0),
        constant(1),
        constant(2),
        payoff(alternating),
        epsilon,
    )
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanRecord {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
    pub verdict: ParadoxVerdict,
    pub cipher_entropy: f64,
    pub npcr: f64,
    pub mean_abs_corr: f64,
    pub degraded: bool,
}

/// Flat row used for CSV output; same column order as the JSON keys.
#[derive(Debug, Serialize)]
struct CsvRow {
    theta1: f64,
    theta2: f64,
    theta3: f64,
    payoff_c0: f64,
    payoff_c1: f64,
    payoff_c2: f64,
    payoff_alternating: f64,
    is_paradox: bool,
    epsilon: f64,
    cipher_entropy: f64,
    npcr: f64,
    mean_abs_corr: f64,
    degraded: bool,
}

impl From<&ScanRecord> for CsvRow {
    fn from(r: &ScanRecord) -> Self {
        CsvRow {
            theta1: r.theta1,
            theta2: r.theta2,
            theta3: r.theta3,
            payoff_c0: r.verdict.payoff_c0,
            payoff_c1: r.verdict.payoff_c1,
            payoff_c2: r.verdict.payoff_c2,
            payoff_alternating: r.verdict.payoff_alternating,
            is_paradox: r.verdict.is_paradox,
            epsilon: r.verdict.epsilon,
            cipher_entropy: r.cipher_entropy,
            npcr: r.npcr,
            mean_abs_corr: r.mean_abs_corr,
            degraded: r.degraded,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ScanFormat {
    #[default]
    JsonLines,
    Csv,
}

#[derive(Debug, Clone)]
pub struct ScanConfig {
    pub theta_step: f64,
    /// Walk settings shared by every grid point; its angles are ignored.
    pub base: WalkParams,
    pub epsilon: f64,
    pub seed: u64,
    pub pairs: usize,
    /// Worker threads; `Some(1)` runs serially, `None` uses rayon's default.
    pub threads: Option<usize>,
}

impl ScanConfig {
    pub fn new(base: WalkParams, theta_step: f64) -> Self {
        ScanConfig {
            theta_step,
            base,
            epsilon: DEFAULT_EPSILON,
            seed: 0,
            pairs: DEFAULT_PAIRS,
            threads: None,
        }
    }
}

/// Axis values `k·h` for every `k` with `k·h < 2π`.
pub fn grid_axis(step: f64) -> Result<Vec<f64>> {
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::validation(format!(
            "theta step must be positive, got {step}"
        )));
    }
    Ok((0u32..)
        .map(|k| f64::from(k) * step)
        .take_while(|&t| t < TAU)
        .collect())
}

/// Lexicographic `(θ₁, θ₂, θ₃)` grid.
pub fn grid_points(step: f64) -> Result<Vec<[f64; 3]>> {
    let axis = grid_axis(step)?;
    let mut points = Vec::with_capacity(axis.len().pow(3));
    for &a in &axis {
        for &b in &axis {
            for &c in &axis {
                points.push([a, b, c]);
            }
        }
    }
    Ok(points)
}

/// Walk, key, encryption and metrics for one grid point.
pub fn evaluate_point(
    config: &ScanConfig,
    image: &GrayImage,
    thetas: [f64; 3],
) -> Result<ScanRecord> {
    let params = config.base.clone().with_thetas(thetas)?;
    let dist = run_direct(&params);
    let verdict = classify_with(&params, config.epsilon, &dist);
    let key = derive_key_bytes(&dist, image.width(), image.height())?;
    let cipher = encrypt(image, &key)?;
    let cipher_entropy = entropy(&cipher);
    let npcr = npcr(image, &cipher)?;
    let corr = cipher_correlations(&cipher, config.seed, config.pairs)?;
    let mean_abs_corr = corr.iter().map(|c| c.abs()).sum::<f64>() / 3.0;
    Ok(ScanRecord {
        theta1: thetas[0],
        theta2: thetas[1],
        theta3: thetas[2],
        verdict,
        cipher_entropy,
        npcr,
        mean_abs_corr,
        degraded: degradation_predicate(cipher_entropy, npcr, mean_abs_corr),
    })
}

/// Sweeps the grid and writes one record per point to `sink`, in
/// lexicographic order, skipping the first `skip` points (already present
/// in a resumed output). Returns the number of records written.
pub fn scan_grid<W: Write>(
    config: &ScanConfig,
    image: &GrayImage,
    sink: W,
    format: ScanFormat,
    skip: usize,
) -> Result<usize> {
    let points = grid_points(config.theta_step)?;
    if image.width() < 2 || image.height() < 2 {
        return Err(Error::validation("reference image must be at least 2x2"));
    }
    let todo = points.get(skip..).unwrap_or(&[]);
    let mut out = RecordWriter::new(sink, format, skip == 0);

    let pool = match config.threads {
        Some(1) => None,
        threads => Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads.unwrap_or(0))
                .build()
                .map_err(|e| Error::validation(format!("cannot start worker pool: {e}")))?,
        ),
    };

    for batch in todo.chunks(BATCH) {
        let records: Vec<Result<ScanRecord>> = match &pool {
            None => batch
                .iter()
                .map(|&t| evaluate_point(config, image, t))
                .collect(),
            Some(pool) => pool.install(|| {
                batch
                    .par_iter()
                    .map(|&t| evaluate_point(config, image, t))
                    .collect()
            }),
        };
        for rec in records {
            out.write(&rec?)?;
        }
    }
    out.finish()?;
    Ok(todo.len())
}

/// Scans an existing (possibly truncated) output and returns the number of
/// complete records and the byte length of the complete prefix.
pub fn completed_records(existing: &[u8], format: ScanFormat) -> (usize, usize) {
    let valid = existing
        .iter()
        .rposition(|&b| b == b'\n')
        .map_or(0, |i| i + 1);
    let lines = existing[..valid].iter().filter(|&&b| b == b'\n').count();
    let records = match format {
        ScanFormat::JsonLines => lines,
        ScanFormat::Csv => lines.saturating_sub(1),
    };
    (records, valid)
}

enum RecordWriter<W: Write> {
    Json(W),
    Csv(Box<csv::Writer<W>>),
}

impl<W: Write> RecordWriter<W> {
    fn new(sink: W, format: ScanFormat, header: bool) -> Self {
        match format {
            ScanFormat::JsonLines => RecordWriter::Json(sink),
            ScanFormat::Csv => RecordWriter::Csv(Box::new(
                csv::WriterBuilder::new()
                    .has_headers(header)
                    .from_writer(sink),
            )),
        }
    }

    fn write(&mut self, rec: &ScanRecord) -> Result<()> {
        match self {
            RecordWriter::Json(w) => {
                serde_json::to_writer(&mut *w, rec)?;
                w.write_all(b"\n")?;
            }
            RecordWriter::Csv(w) => w.serialize(CsvRow::from(rec))?,
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        match self {
            RecordWriter::Json(mut w) => w.flush()?,
            RecordWriter::Csv(mut w) => w.flush()?,
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;
    use crate::walk::Message;

    fn small_base() -> WalkParams {
        WalkParams::new(4, 6, "0011".parse().unwrap(), [0.0; 3]).unwrap()
    }

    #[test]
    fn axis_counts() {
        assert_eq!(grid_axis(std::f64::consts::PI).unwrap().len(), 2);
        assert_eq!(grid_axis(0.5).unwrap().len(), 13);
        assert_eq!(grid_axis(0.1).unwrap().len(), 63);
        assert!(grid_axis(0.0).is_err());
        assert!(grid_axis(f64::NAN).is_err());
        assert_eq!(grid_points(std::f64::consts::PI).unwrap().len(), 8);
    }

    #[test]
    fn grid_is_lexicographic() {
        let pts = grid_points(2.0).unwrap();
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn equal_angles_never_paradox() {
        for t in [0.0, 0.7, 2.2, 4.0, 6.0] {
            let p = small_base().with_thetas([t; 3]).unwrap();
            let v = classify(&p, DEFAULT_EPSILON);
            assert_eq!(v.payoff_alternating, v.payoff_c0);
            assert!(!v.is_paradox);
        }
    }

    #[test]
    fn zero_coins_lose_or_tie() {
        let p = WalkParams::new(8, 100, Message::default(), [0.0; 3]).unwrap();
        let v = classify(&p, DEFAULT_EPSILON);
        for x in [v.payoff_c0, v.payoff_c1, v.payoff_c2, v.payoff_alternating] {
            assert!(x <= 0.0);
        }
        assert!(!v.is_paradox);
    }

    #[test]
    fn predicates() {
        assert!(paradox_predicate(-0.1, -0.1, 0.1, 1e-6));
        assert!(!paradox_predicate(-0.1, 0.0, 0.1, 1e-6));
        assert!(!paradox_predicate(-0.1, -0.1, 1e-7, 1e-6));
        assert!(!degradation_predicate(7.95, 99.5, 0.01));
        assert!(degradation_predicate(7.93, 99.5, 0.01));
        assert!(degradation_predicate(7.95, 98.0, 0.01));
        assert!(degradation_predicate(7.95, 99.5, 0.06));
    }

    #[test]
    fn tiny_scan_outputs_eight_records() {
        let cfg = ScanConfig {
            pairs: 200,
            threads: Some(1),
            ..ScanConfig::new(small_base(), std::f64::consts::PI)
        };
        let img = presets::reference_image();
        let mut buf = Vec::new();
        assert_eq!(
            scan_grid(&cfg, &img, &mut buf, ScanFormat::JsonLines, 0).unwrap(),
            8
        );
        let text = String::from_utf8(buf).unwrap();
        let recs: Vec<ScanRecord> = text
            .lines()
            .map(|l| serde_json::from_str(l).unwrap())
            .collect();
        assert_eq!(recs.len(), 8);
        assert_eq!(
            (recs[1].theta1, recs[1].theta2, recs[1].theta3),
            (0.0, 0.0, std::f64::consts::PI)
        );
        assert!(text.lines().next().unwrap().starts_with(
            "{\"theta1\":0.0,\"theta2\":0.0,\"theta3\":0.0,\"verdict\":{\"payoff_c0\""
        ));
    }

    #[test]
    fn csv_has_flat_header_and_resumes() {
        let cfg = ScanConfig {
            pairs: 100,
            threads: Some(2),
            ..ScanConfig::new(small_base(), std::f64::consts::PI)
        };
        let img = presets::reference_image();
        let mut full = Vec::new();
        scan_grid(&cfg, &img, &mut full, ScanFormat::Csv, 0).unwrap();
        let text = String::from_utf8(full.clone()).unwrap();
        assert!(text.starts_with(
            "theta1,theta2,theta3,payoff_c0,payoff_c1,payoff_c2,payoff_alternating,is_paradox,epsilon,cipher_entropy,npcr,mean_abs_corr,degraded\n"
        ));
        assert_eq!(text.lines().count(), 9);

        // cut in the middle of the fourth record
        let cut = text.match_indices('\n').nth(3).unwrap().0 + 10;
        let (done, valid) = completed_records(&full[..cut], ScanFormat::Csv);
        assert_eq!(done, 3);
        let mut resumed = full[..valid].to_vec();
        scan_grid(&cfg, &img, &mut resumed, ScanFormat::Csv, done).unwrap();
        assert_eq!(resumed, full);
    }

    #[test]
    fn completed_records_counts_lines() {
        assert_eq!(completed_records(b"", ScanFormat::JsonLines), (0, 0));
        assert_eq!(
            completed_records(b"{}\n{}\n{", ScanFormat::JsonLines),
            (2, 6)
        );
        assert_eq!(completed_records(b"a,b\n", ScanFormat::Csv), (0, 4));
    }
}
