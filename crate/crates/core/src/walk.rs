//! Discrete-time quantum walk on an `N = 2^n` cycle.
//!
//! The walker lives in `C^2 ⊗ C^N`. One step applies a coin to the internal
//! two-level register and then the conditional shift: coin state `0` moves
//! the walker from `j` to `j - 1 (mod N)`, coin state `1` moves it to
//! `j + 1 (mod N)`.
//!
//! Two engines are provided. [`run_direct`] applies the step operator in
//! position space and is the canonical engine for key derivation. The
//! [`run_fourier`] engine diagonalizes the shift with a discrete Fourier
//! transform of the position register, so that each step becomes the coin
//! followed by coin-conditioned diagonal phases. Both engines produce the
//! same distribution up to rounding.

use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Largest accepted number of position qubits.
pub const MAX_POSITION_QUBITS: u32 = 24;

/// Tolerance on `|α|² + |β|² = 1` for the initial coin state.
pub const COIN_NORM_TOLERANCE: f64 = 1e-12;

/// Binary message selecting the coin at each step.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash)]
pub struct Message(Vec<bool>);

impl Message {
    pub fn new(bits: Vec<bool>) -> Self {
        Message(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Cyclically extends (or truncates) the message to exactly `len` bits.
    /// An empty message stays empty.
    pub fn repeated_to(&self, len: usize) -> Message {
        if self.0.is_empty() {
            return Message::default();
        }
        Message(self.0.iter().copied().cycle().take(len).collect())
    }
}

impl FromStr for Message {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(Error::validation(format!(
                    "message may contain only '0' and '1', found {other:?}"
                ))),
            })
            .collect::<Result<Vec<_>>>()
            .map(Message)
    }
}

impl fmt::Display for Message {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// Real one-parameter coin `[[cos θ, sin θ], [sin θ, -cos θ]]`.
///
/// Every member of the family is symmetric, real and squares to the
/// identity, hence unitary and Hermitian.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoinOp {
    theta: f64,
    entries: [[f64; 2]; 2],
}

impl CoinOp {
    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn entries(&self) -> [[f64; 2]; 2] {
        self.entries
    }

    pub fn matrix(&self) -> [[Complex64; 2]; 2] {
        self.entries.map(|row| row.map(|x| Complex64::new(x, 0.0)))
    }

    #[inline]
    fn apply(&self, up: Complex64, down: Complex64) -> (Complex64, Complex64) {
        let [[a, b], [c, d]] = self.entries;
        (up * a + down * b, up * c + down * d)
    }
}

pub fn coin_matrix(theta: f64) -> Result<CoinOp> {
    if !theta.is_finite() {
        return Err(Error::validation(format!(
            "coin angle must be finite, got {theta}"
        )));
    }
    let (s, c) = theta.sin_cos();
    Ok(CoinOp {
        theta,
        entries: [[c, s], [s, -c]],
    })
}

/// Per-step coin indices: `0` and `1` follow the message bits, `2` is used
/// once the message is exhausted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CoinSchedule(Vec<u8>);

impl CoinSchedule {
    /// The same coin at every step.
    pub fn constant(index: u8, steps: usize) -> Result<Self> {
        if index > 2 {
            return Err(Error::validation(format!(
                "coin index {index} out of range 0..=2"
            )));
        }
        Ok(CoinSchedule(vec![index; steps]))
    }

    pub fn indices(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

pub fn schedule_from_message(message: &Message, steps: usize) -> CoinSchedule {
    CoinSchedule(
        (0..steps)
            .map(|t| match message.bits().get(t) {
                Some(&bit) => u8::from(bit),
                None => 2,
            })
            .collect(),
    )
}

/// All inputs of a walk (and of the key it generates).
///
/// Construction validates the invariants, so every engine can treat a
/// `WalkParams` as well-formed.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkParams {
    position_qubits: u32,
    steps: usize,
    message: Message,
    thetas: [f64; 3],
    coin_init: [Complex64; 2],
}

impl WalkParams {
    /// New parameters with the walker starting in `|0_C⟩|0_P⟩`.
    pub fn new(
        position_qubits: u32,
        steps: usize,
        message: Message,
        thetas: [f64; 3],
    ) -> Result<Self> {
        if !(1..=MAX_POSITION_QUBITS).contains(&position_qubits) {
            return Err(Error::validation(format!(
                "position qubits must be in 1..={MAX_POSITION_QUBITS}, got {position_qubits}"
            )));
        }
        check_thetas(&thetas)?;
        Ok(WalkParams {
            position_qubits,
            steps,
            message,
            thetas,
            coin_init: [Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
        })
    }

    pub fn with_coin_init(mut self, alpha: Complex64, beta: Complex64) -> Result<Self> {
        let norm = alpha.norm_sqr() + beta.norm_sqr();
        if !norm.is_finite() || (norm - 1.0).abs() > COIN_NORM_TOLERANCE {
            return Err(Error::validation(format!(
                "initial coin state must have unit norm, |α|²+|β|² = {norm}"
            )));
        }
        self.coin_init = [alpha, beta];
        Ok(self)
    }

    pub fn with_thetas(mut self, thetas: [f64; 3]) -> Result<Self> {
        check_thetas(&thetas)?;
        self.thetas = thetas;
        Ok(self)
    }

    pub fn with_steps(mut self, steps: usize) -> Self {
        self.steps = steps;
        self
    }

    pub fn with_message(mut self, message: Message) -> Self {
        self.message = message;
        self
    }

    pub fn position_qubits(&self) -> u32 {
        self.position_qubits
    }

    /// `N = 2^n`.
    pub fn cycle_len(&self) -> usize {
        1usize << self.position_qubits
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn message(&self) -> &Message {
        &self.message
    }

    pub fn thetas(&self) -> [f64; 3] {
        self.thetas
    }

    pub fn coin_init(&self) -> [Complex64; 2] {
        self.coin_init
    }

    pub fn coins(&self) -> [CoinOp; 3] {
        // thetas were validated as finite on construction
        self.thetas
            .map(|t| coin_matrix(t).expect("validated angle"))
    }

    pub fn schedule(&self) -> CoinSchedule {
        schedule_from_message(&self.message, self.steps)
    }

    /// Walker localized at the origin with the configured coin state.
    pub fn initial_state(&self) -> WalkState {
        WalkState::localized(self.cycle_len(), self.coin_init, 0)
    }
}

fn check_thetas(thetas: &[f64; 3]) -> Result<()> {
    for (i, &t) in thetas.iter().enumerate() {
        if !t.is_finite() || !(0.0..TAU).contains(&t) {
            return Err(Error::validation(format!(
                "theta{} must lie in [0, 2π), got {t}",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Amplitudes over coin ⊗ position, stored coin-major: index `s * N + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    cycle_len: usize,
    amplitudes: Vec<Complex64>,
}

impl WalkState {
    pub fn localized(cycle_len: usize, coin: [Complex64; 2], position: usize) -> Self {
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); 2 * cycle_len];
        amplitudes[position % cycle_len] = coin[0];
        amplitudes[cycle_len + position % cycle_len] = coin[1];
        WalkState {
            cycle_len,
            amplitudes,
        }
    }

    pub fn from_amplitudes(cycle_len: usize, amplitudes: Vec<Complex64>) -> Result<Self> {
        if cycle_len == 0 || amplitudes.len() != 2 * cycle_len {
            return Err(Error::validation(format!(
                "expected {} amplitudes for a cycle of {cycle_len}, got {}",
                2 * cycle_len,
                amplitudes.len()
            )));
        }
        Ok(WalkState {
            cycle_len,
            amplitudes,
        })
    }

    pub fn cycle_len(&self) -> usize {
        self.cycle_len
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, coin: usize, position: usize) -> Complex64 {
        self.amplitudes[coin * self.cycle_len + position]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(Complex64::norm_sqr).sum()
    }

    /// Position marginal `p_j = |a(0,j)|² + |a(1,j)|²`.
    pub fn probabilities(&self) -> ProbDist {
        let (up, down) = self.amplitudes.split_at(self.cycle_len);
        ProbDist(
            up.iter()
                .zip(down)
                .map(|(a, b)| a.norm_sqr() + b.norm_sqr())
                .collect(),
        )
    }

    /// Reorders into qubit order: bit 0 of the index is the coin, bits
    /// `1..=n` hold the position, i.e. index `s + 2j`.
    pub fn to_qubit_order(&self) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.amplitudes.len()];
        for s in 0..2 {
            for j in 0..self.cycle_len {
                out[s + 2 * j] = self.amplitudes[s * self.cycle_len + j];
            }
        }
        out
    }

    /// Inverse of [`WalkState::to_qubit_order`].
    pub fn from_qubit_order(cycle_len: usize, qubits: &[Complex64]) -> Result<Self> {
        if cycle_len == 0 || qubits.len() != 2 * cycle_len {
            return Err(Error::validation(format!(
                "expected {} amplitudes for a cycle of {cycle_len}, got {}",
                2 * cycle_len,
                qubits.len()
            )));
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); qubits.len()];
        for s in 0..2 {
            for j in 0..cycle_len {
                amplitudes[s * cycle_len + j] = qubits[s + 2 * j];
            }
        }
        Ok(WalkState {
            cycle_len,
            amplitudes,
        })
    }

    fn step_in_place(&mut self, coin: &CoinOp) {
        let (up, down) = self.amplitudes.split_at_mut(self.cycle_len);
        for (u, d) in up.iter_mut().zip(down.iter_mut()) {
            (*u, *d) = coin.apply(*u, *d);
        }
        // coin 0: j -> j-1, coin 1: j -> j+1
        up.rotate_left(1);
        down.rotate_right(1);
    }
}

/// Position distribution of the walker.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbDist(Vec<f64>);

impl ProbDist {
    /// Wraps non-negative finite weights. Normalization is not enforced
    /// here; walk engines always produce unit total mass.
    pub fn new(p: Vec<f64>) -> Result<Self> {
        if let Some((i, x)) = p
            .iter()
            .enumerate()
            .find(|(_, x)| !x.is_finite() || **x < 0.0)
        {
            return Err(Error::validation(format!(
                "probability p[{i}] = {x} is not a finite non-negative number"
            )));
        }
        Ok(ProbDist(p))
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }
}

/// One step `S (C ⊗ 1)`.
pub fn step_direct(state: &WalkState, coin: &CoinOp) -> WalkState {
    let mut next = state.clone();
    next.step_in_place(coin);
    next
}

/// Evolves the initial state through an explicit coin schedule in position
/// space.
pub fn evolve_direct(params: &WalkParams, schedule: &CoinSchedule) -> WalkState {
    let coins = params.coins();
    let mut state = params.initial_state();
    for &idx in schedule.indices() {
        state.step_in_place(&coins[usize::from(idx)]);
    }
    state
}

/// Canonical engine: `r` message-scheduled steps from `|φ_C⟩|0_P⟩`.
pub fn run_direct(params: &WalkParams) -> ProbDist {
    evolve_direct(params, &params.schedule()).probabilities()
}

/// Evolves through `schedule` in the Fourier basis of the position register.
///
/// With `F|j⟩ = N^{-1/2} Σ_k e^{2πi jk/N} |k⟩`, the shift by `+1` becomes
/// `Ω = diag(e^{2πi k/N})`, so each step is the coin followed by `Ω†` on
/// the coin-0 block and `Ω` on the coin-1 block.
pub fn evolve_fourier(params: &WalkParams, schedule: &CoinSchedule) -> WalkState {
    let n = params.cycle_len();
    let coins = params.coins();
    let mut planner = FftPlanner::<f64>::new();
    // rustfft's "inverse" uses the positive exponent, i.e. the QFT sign.
    let qft: Arc<dyn Fft<f64>> = planner.plan_fft_inverse(n);
    let iqft: Arc<dyn Fft<f64>> = planner.plan_fft_forward(n);
    let scale = 1.0 / (n as f64).sqrt();

    let mut state = params.initial_state();
    let amps = &mut state.amplitudes;
    for row in amps.chunks_exact_mut(n) {
        qft.process(row);
        row.iter_mut().for_each(|a| *a *= scale);
    }

    let omega: Vec<Complex64> = (0..n)
        .map(|k| Complex64::cis(TAU * k as f64 / n as f64))
        .collect();
    {
        let (up, down) = amps.split_at_mut(n);
        for &idx in schedule.indices() {
            let coin = &coins[usize::from(idx)];
            for ((u, d), w) in up.iter_mut().zip(down.iter_mut()).zip(&omega) {
                let (cu, cd) = coin.apply(*u, *d);
                *u = cu * w.conj();
                *d = cd * w;
            }
        }
    }

    for row in amps.chunks_exact_mut(n) {
        iqft.process(row);
        row.iter_mut().for_each(|a| *a *= scale);
    }
    state
}

/// Fourier-diagonalized engine; agrees with [`run_direct`] to rounding.
pub fn run_fourier(params: &WalkParams) -> ProbDist {
    evolve_fourier(params, &params.schedule()).probabilities()
}

/// Signed displacement on the cycle: `j` for `j < N/2`, `j - N` otherwise.
pub fn signed_displacement(position: usize, cycle_len: usize) -> i64 {
    if position < cycle_len / 2 {
        position as i64
    } else {
        position as i64 - cycle_len as i64
    }
}

/// Mass on the positive half of the cycle minus mass on the negative half.
pub fn payoff(dist: &ProbDist) -> f64 {
    let n = dist.len();
    let (mut win, mut lose) = (0.0, 0.0);
    for (j, &p) in dist.values().iter().enumerate() {
        match signed_displacement(j, n).signum() {
            1 => win += p,
            -1 => lose += p,
            _ => {}
        }
    }
    win - lose
}
