//! `qwc`: command-line front end for the quantum-walk image cipher.
//!
//! Exit codes: 0 success, 1 usage, 2 I/O, 3 validation.

use std::fs::{self, OpenOptions};
use std::io::{self, Seek, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use qwc_core::circuit::{build_walk_circuit, gate_counts};
use qwc_core::keygen::{derive_key_bytes, key_as_image};
use qwc_core::metrics::{analyze, DEFAULT_PAIRS};
use qwc_core::num_complex::Complex64;
use qwc_core::scan::{completed_records, scan_grid, ScanConfig, ScanFormat, DEFAULT_EPSILON};
use qwc_core::walk::{run_direct, run_fourier, Message, ProbDist, WalkParams};
use qwc_core::{decrypt, encrypt, presets, GrayImage, KeyMatrix};

const EXIT_USAGE: u8 = 1;
const EXIT_IO: u8 = 2;
const EXIT_VALIDATION: u8 = 3;

/// Coarse scan step used unless `--step` or `--full` is given.
const DEFAULT_SCAN_STEP: f64 = 0.5;
const FULL_SCAN_STEP: f64 = 0.1;

#[derive(Debug, Parser)]
#[command(name = "qwc", version, about = "Quantum-walk image cipher toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the walk and print the position distribution as a JSON array.
    Walk {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long, value_enum, default_value_t = Engine::Direct)]
        engine: Engine,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Derive the key image and write it as PGM.
    Keygen {
        #[command(flatten)]
        walk: WalkArgs,
        /// Take the key size from this image.
        #[arg(long = "in", conflicts_with_all = ["width", "height"])]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 64)]
        width: usize,
        #[arg(long, default_value_t = 64)]
        height: usize,
        #[arg(long)]
        key_out: PathBuf,
    },
    /// Encrypt a PGM image.
    Encrypt {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        key_out: Option<PathBuf>,
    },
    /// Decrypt a PGM image encrypted with the same walk flags.
    Decrypt {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Security metrics of a plaintext and its ciphertext as JSON.
    ///
    /// Without `--cipher`, the ciphertext is produced from `--in` using the
    /// walk flags.
    Analyze {
        #[command(flatten)]
        walk: WalkArgs,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        cipher: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PAIRS)]
        pairs: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep the coin angles and record paradox/degradation per grid point.
    Scan {
        #[command(flatten)]
        walk: WalkArgs,
        /// Grid spacing in radians (default 0.5).
        #[arg(long, value_parser = parse_angle, conflicts_with = "full")]
        step: Option<f64>,
        /// Use the fine 0.1 rad grid (250,047 points).
        #[arg(long)]
        full: bool,
        /// Reference image; defaults to the built-in 64x64 ramp.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Continue a previous, possibly truncated, run in `--out`.
        #[arg(long, requires = "out")]
        resume: bool,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_PAIRS)]
        pairs: usize,
        #[arg(long, default_value_t = DEFAULT_EPSILON)]
        epsilon: f64,
    },
    /// Build the gate-level walk circuit; prints gate counts as JSON.
    Circuit {
        #[command(flatten)]
        walk: WalkArgs,
        /// Replace the initial QFT by a Hadamard layer (walker starts at 0).
        #[arg(long)]
        localized: bool,
        /// Write the gate-per-line dump here.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
struct WalkArgs {
    /// Position qubits; the cycle has 2^n nodes.
    #[arg(long, default_value_t = 8)]
    n: u32,
    #[arg(long, default_value_t = 128)]
    steps: usize,
    /// Coin-selection bits, e.g. 0011.
    #[arg(long, default_value = "")]
    message: String,
    /// Cyclically extend the message to this many bits.
    #[arg(long)]
    repeat_message: Option<usize>,
    /// Radians, decimal or `p/q`.
    #[arg(long, value_parser = parse_angle, default_value = "0.1")]
    theta1: f64,
    #[arg(long, value_parser = parse_angle, default_value = "0.2")]
    theta2: f64,
    #[arg(long, value_parser = parse_angle, default_value = "0.3")]
    theta3: f64,
    /// Initial coin state as `re,im,re,im`.
    #[arg(long, value_parser = parse_coin_init, allow_hyphen_values = true)]
    coin_init: Option<[f64; 4]>,
}

impl WalkArgs {
    fn params(&self) -> anyhow::Result<WalkParams> {
        let mut message: Message = self.message.parse()?;
        if let Some(len) = self.repeat_message {
            if message.is_empty() {
                bail!(qwc_core::Error::Validation(
                    "--repeat-message needs a non-empty --message".into()
                ));
            }
            message = message.repeated_to(len);
        }
        let params = WalkParams::new(
            self.n,
            self.steps,
            message,
            [self.theta1, self.theta2, self.theta3],
        )?;
        Ok(match self.coin_init {
            Some([ar, ai, br, bi]) => {
                params.with_coin_init(Complex64::new(ar, ai), Complex64::new(br, bi))?
            }
            None => params,
        })
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Engine {
    Direct,
    Fourier,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

impl From<Format> for ScanFormat {
    fn from(f: Format) -> Self {
        match f {
            Format::Json => ScanFormat::JsonLines,
            Format::Csv => ScanFormat::Csv,
        }
    }
}

/// Decimal or rational `p/q` literal.
fn parse_angle(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((p, q)) => {
            let p: f64 = p
                .trim()
                .parse()
                .map_err(|_| format!("bad numerator in {s:?}"))?;
            let q: f64 = q
                .trim()
                .parse()
                .map_err(|_| format!("bad denominator in {s:?}"))?;
            if q == 0.0 {
                return Err(format!("zero denominator in {s:?}"));
            }
            p / q
        }
        None => s
            .trim()
            .parse()
            .map_err(|_| format!("not a number: {s:?}"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("not a finite number: {s:?}"))
    }
}

fn parse_coin_init(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = s.split(',').map(parse_angle).collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| format!("expected four comma-separated numbers, got {s:?}"))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<qwc_core::Error>() {
            return match e {
                qwc_core::Error::Io(_) => EXIT_IO,
                _ => EXIT_VALIDATION,
            };
        }
        if cause.downcast_ref::<io::Error>().is_some() {
            return EXIT_IO;
        }
    }
    EXIT_VALIDATION
}

fn run(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Walk { walk, engine, out } => {
            let params = walk.params()?;
            let dist = match engine {
                Engine::Direct => run_direct(&params),
                Engine::Fourier => run_fourier(&params),
            };
            let mut text = serde_json::to_string(dist.values())?;
            text.push('\n');
            emit(out.as_deref(), text.as_bytes())
        }
        Command::Keygen {
            walk,
            input,
            width,
            height,
            key_out,
        } => {
            let (w, h) = match input {
                Some(path) => {
                    let img = load(&path)?;
                    (img.width(), img.height())
                }
                None => (width, height),
            };
            let key = derive_key_bytes(&run_direct(&walk.params()?), w, h)?;
            write_file(&key_out, &key_as_image(&key).to_pgm())
        }
        Command::Encrypt {
            walk,
            input,
            out,
            key_out,
        } => {
            let params = walk.params()?;
            let plain = load(&input)?;
            let key = key_for(&params, &plain)?;
            let cipher = encrypt(&plain, &key)?;
            write_file(&out, &cipher.to_pgm())?;
            if let Some(path) = key_out {
                write_file(&path, &key_as_image(&key).to_pgm())?;
            }
            Ok(())
        }
        Command::Decrypt { walk, input, out } => {
            let params = walk.params()?;
            let cipher = load(&input)?;
            let key = key_for(&params, &cipher)?;
            write_file(&out, &decrypt(&cipher, &key)?.to_pgm())
        }
        Command::Analyze {
            walk,
            input,
            cipher,
            seed,
            pairs,
            out,
        } => {
            let plain = load(&input)?;
            let cipher = match cipher {
                Some(path) => load(&path)?,
                None => encrypt(&plain, &key_for(&walk.params()?, &plain)?)?,
            };
            let report = analyze(&plain, &cipher, seed, pairs)?;
            let mut text = report.to_json()?;
            text.push('\n');
            emit(out.as_deref(), text.as_bytes())
        }
        Command::Scan {
            walk,
            step,
            full,
            input,
            out,
            resume,
            format,
            seed,
            pairs,
            epsilon,
        } => {
            let theta_step = match (step, full) {
                (Some(s), _) => s,
                (None, true) => FULL_SCAN_STEP,
                (None, false) => DEFAULT_SCAN_STEP,
            };
            let config = ScanConfig {
                theta_step,
                base: walk.params()?,
                epsilon,
                seed,
                pairs,
                threads: thread_cap()?,
            };
            let image = match input {
                Some(path) => load(&path)?,
                None => presets::reference_image(),
            };
            run_scan(&config, &image, out.as_deref(), resume, format.into())
        }
        Command::Circuit {
            walk,
            localized,
            out,
        } => {
            let params = walk.params()?;
            let circuit = build_walk_circuit(&params, localized.then_some(0))?;
            if let Some(path) = out {
                write_file(&path, circuit.to_dump().as_bytes())?;
            }
            let mut text = serde_json::to_string(&gate_counts(&circuit))?;
            text.push('\n');
            emit(None, text.as_bytes())
        }
    }
}

fn key_for(params: &WalkParams, image: &GrayImage) -> anyhow::Result<KeyMatrix> {
    let dist: ProbDist = run_direct(params);
    Ok(derive_key_bytes(&dist, image.width(), image.height())?)
}

fn thread_cap() -> anyhow::Result<Option<usize>> {
    match std::env::var("QWC_THREADS") {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => bail!(qwc_core::Error::Validation(format!(
                "QWC_THREADS must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

fn run_scan(
    config: &ScanConfig,
    image: &GrayImage,
    out: Option<&Path>,
    resume: bool,
    format: ScanFormat,
) -> anyhow::Result<()> {
    let Some(path) = out else {
        let stdout = io::stdout().lock();
        scan_grid(config, image, io::BufWriter::new(stdout), format, 0)?;
        return Ok(());
    };
    let mut skip = 0;
    let file = if resume && path.exists() {
        let existing = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        let (done, valid) = completed_records(&existing, format);
        skip = done;
        let mut file = OpenOptions::new()
            .write(true)
            .open(path)
            .with_context(|| format!("opening {}", path.display()))?;
        file.set_len(valid as u64)?;
        file.seek(io::SeekFrom::End(0))?;
        log::info!("resuming after {done} records");
        file
    } else {
        fs::File::create(path).with_context(|| format!("creating {}", path.display()))?
    };
    scan_grid(config, image, io::BufWriter::new(file), format, skip)
        .with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

fn load(path: &Path) -> anyhow::Result<GrayImage> {
    GrayImage::load_pgm(path).with_context(|| format!("reading {}", path.display()))
}

fn write_file(path: &Path, bytes: &[u8]) -> anyhow::Result<()> {
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn emit(out: Option<&Path>, bytes: &[u8]) -> anyhow::Result<()> {
    match out {
        Some(path) => write_file(path, bytes),
        None => {
            let mut stdout = io::stdout().lock();
            stdout.write_all(bytes)?;
            stdout.flush()?;
            Ok(())
        }
    }
}
