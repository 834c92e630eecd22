//! Gate-level realization of the cycle walk.
//!
//! Qubit `0` is the coin. Position qubit `k` (for `k = 1..=n`) holds the bit
//! of weight `2^(k-1)` of the position `j`. Statevector indices follow the
//! same convention: bit `q` of an index is the value of qubit `q`, so a basis
//! state `|s⟩|j⟩` sits at index `s + 2j` (see [`WalkState::to_qubit_order`]).
//!
//! The walk circuit is
//!
//! ```text
//! F̃† · [Σ (C ⊗ 1)]^t · F̃
//! ```
//!
//! where `F̃` is the QFT without its terminal swaps. Without the swaps, qubit
//! `k` ends up carrying the phase `e^{2πi j / 2^k}`, so the Fourier-basis
//! shift `Ω` factors as `R_k = diag(1, e^{2πi/2^k})` applied to qubit `k`.
//! Each step layer uses `Σ = (1 ⊗ Ω†)(|0⟩⟨0| ⊗ 1 + |1⟩⟨1| ⊗ Ω²)` together
//! with `R_k² = R_{k-1}` and `R_1² = 1`, which costs `n` single-qubit phases
//! and `n - 1` coin-controlled phases per step.
//!
//! [`WalkState::to_qubit_order`]: crate::walk::WalkState::to_qubit_order

use std::collections::BTreeMap;
use std::f64::consts::{FRAC_1_SQRT_2, TAU};
use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::walk::{CoinOp, WalkParams};

/// Upper bound on simulated register size.
pub const MAX_SIMULATED_QUBITS: usize = 13;

const UNITARY_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Hadamard {
        target: usize,
    },
    PauliX {
        target: usize,
    },
    /// `diag(1, e^{iφ})`.
    Phase {
        target: usize,
        phi: f64,
    },
    /// `diag(1, 1, 1, e^{iφ})` on (control, target).
    ControlledPhase {
        control: usize,
        target: usize,
        phi: f64,
    },
    SingleQubitUnitary {
        target: usize,
        matrix: [[Complex64; 2]; 2],
    },
}

impl Gate {
    pub fn target(&self) -> usize {
        match *self {
            Gate::Hadamard { target }
            | Gate::PauliX { target }
            | Gate::Phase { target, .. }
            | Gate::ControlledPhase { target, .. }
            | Gate::SingleQubitUnitary { target, .. } => target,
        }
    }

    pub fn control(&self) -> Option<usize> {
        match *self {
            Gate::ControlledPhase { control, .. } => Some(control),
            _ => None,
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        self.control().is_some()
    }

    /// Mnemonic used by the text dump.
    pub fn kind(&self) -> &'static str {
        match self {
            Gate::Hadamard { .. } => "H",
            Gate::PauliX { .. } => "X",
            Gate::Phase { .. } => "P",
            Gate::ControlledPhase { .. } => "CP",
            Gate::SingleQubitUnitary { .. } => "U",
        }
    }

    pub fn inverse(&self) -> Gate {
        match *self {
            Gate::Hadamard { .. } | Gate::PauliX { .. } => *self,
            Gate::Phase { target, phi } => Gate::Phase { target, phi: -phi },
            Gate::ControlledPhase {
                control,
                target,
                phi,
            } => Gate::ControlledPhase {
                control,
                target,
                phi: -phi,
            },
            Gate::SingleQubitUnitary { target, matrix: m } => Gate::SingleQubitUnitary {
                target,
                matrix: [
                    [m[0][0].conj(), m[1][0].conj()],
                    [m[0][1].conj(), m[1][1].conj()],
                ],
            },
        }
    }

    fn validate(&self, qubit_count: usize) -> Result<()> {
        let target = self.target();
        if target >= qubit_count {
            return Err(Error::validation(format!(
                "gate {} targets qubit {target} of a {qubit_count}-qubit register",
                self.kind()
            )));
        }
        match *self {
            Gate::Phase { phi, .. } if !phi.is_finite() => {
                Err(Error::validation("phase angle must be finite"))
            }
            Gate::ControlledPhase { control, phi, .. } => {
                if control >= qubit_count {
                    Err(Error::validation(format!(
                        "control qubit {control} outside a {qubit_count}-qubit register"
                    )))
                } else if control == target {
                    Err(Error::validation("control and target must differ"))
                } else if !phi.is_finite() {
                    Err(Error::validation("phase angle must be finite"))
                } else {
                    Ok(())
                }
            }
            Gate::SingleQubitUnitary { matrix, .. } => check_unitary(&matrix),
            _ => Ok(()),
        }
    }
}

fn check_unitary(m: &[[Complex64; 2]; 2]) -> Result<()> {
    // columns orthonormal <=> M†M = I
    for a in 0..2 {
        for b in 0..2 {
            let dot: Complex64 = (0..2).map(|r| m[r][a].conj() * m[r][b]).sum();
            let expected = if a == b { 1.0 } else { 0.0 };
            if !dot.re.is_finite() || (dot - expected).norm() > UNITARY_TOLERANCE {
                return Err(Error::validation("single-qubit gate matrix is not unitary"));
            }
        }
    }
    Ok(())
}

/// Ordered gate sequence on a fixed-size register.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct GateList {
    qubit_count: usize,
    gates: Vec<Gate>,
}

impl GateList {
    pub fn new(qubit_count: usize) -> Self {
        GateList {
            qubit_count,
            gates: Vec::new(),
        }
    }

    pub fn qubit_count(&self) -> usize {
        self.qubit_count
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<()> {
        gate.validate(self.qubit_count)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends `other`; both lists must act on the same register.
    pub fn append(&mut self, other: &GateList) -> Result<()> {
        if other.qubit_count != self.qubit_count {
            return Err(Error::validation(format!(
                "cannot append a {}-qubit list to a {}-qubit list",
                other.qubit_count, self.qubit_count
            )));
        }
        self.gates.extend_from_slice(&other.gates);
        Ok(())
    }

    /// Reversed list of inverted gates.
    pub fn inverse(&self) -> GateList {
        GateList {
            qubit_count: self.qubit_count,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
        }
    }

    /// Text form: `qubits <count>` followed by one gate per line as
    /// `KIND target [control] [phase]`. Unitaries list their four entries
    /// row-major as `re im` pairs.
    pub fn to_dump(&self) -> String {
        let mut out = format!("qubits {}\n", self.qubit_count);
        for g in &self.gates {
            // writing to a String cannot fail
            let _ = match *g {
                Gate::Hadamard { target } | Gate::PauliX { target } => {
                    writeln!(out, "{} {target}", g.kind())
                }
                Gate::Phase { target, phi } => writeln!(out, "P {target} {phi:?}"),
                Gate::ControlledPhase {
                    control,
                    target,
                    phi,
                } => {
                    writeln!(out, "CP {target} {control} {phi:?}")
                }
                Gate::SingleQubitUnitary { target, matrix } => {
                    let entries: Vec<String> = matrix
                        .iter()
                        .flatten()
                        .flat_map(|c| [format!("{:?}", c.re), format!("{:?}", c.im)])
                        .collect();
                    writeln!(out, "U {target} {}", entries.join(" "))
                }
            };
        }
        out
    }

    pub fn from_dump(text: &str) -> Result<GateList> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| Error::validation("empty circuit dump"))?;
        let qubit_count = match header.split_whitespace().collect::<Vec<_>>()[..] {
            ["qubits", count] => parse_field::<usize>(count, 1)?,
            _ => {
                return Err(Error::validation(
                    "circuit dump must start with `qubits <count>`",
                ))
            }
        };
        let mut list = GateList::new(qubit_count);
        for (idx, line) in lines {
            let lineno = idx + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            let gate = match fields[..] {
                ["H", t] => Gate::Hadamard {
                    target: parse_field(t, lineno)?,
                },
                ["X", t] => Gate::PauliX {
                    target: parse_field(t, lineno)?,
                },
                ["P", t, phi] => Gate::Phase {
                    target: parse_field(t, lineno)?,
                    phi: parse_field(phi, lineno)?,
                },
                ["CP", t, c, phi] => Gate::ControlledPhase {
                    control: parse_field(c, lineno)?,
                    target: parse_field(t, lineno)?,
                    phi: parse_field(phi, lineno)?,
                },
                ["U", t, ref rest @ ..] if rest.len() == 8 => {
                    let v = rest
                        .iter()
                        .map(|s| parse_field::<f64>(s, lineno))
                        .collect::<Result<Vec<_>>>()?;
                    let c = |i: usize| Complex64::new(v[2 * i], v[2 * i + 1]);
                    Gate::SingleQubitUnitary {
                        target: parse_field(t, lineno)?,
                        matrix: [[c(0), c(1)], [c(2), c(3)]],
                    }
                }
                _ => {
                    return Err(Error::validation(format!(
                        "line {lineno}: unrecognized gate `{line}`"
                    )))
                }
            };
            list.push(gate)?;
        }
        Ok(list)
    }
}

fn parse_field<T: std::str::FromStr>(s: &str, lineno: usize) -> Result<T> {
    s.parse()
        .map_err(|_| Error::validation(format!("line {lineno}: cannot parse `{s}`")))
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct GateCounts {
    pub single_qubit: usize,
    pub two_qubit: usize,
    pub total: usize,
    pub by_kind: BTreeMap<String, usize>,
}

pub fn gate_counts(gates: &GateList) -> GateCounts {
    let mut counts = GateCounts::default();
    for g in gates.gates() {
        if g.is_two_qubit() {
            counts.two_qubit += 1;
        } else {
            counts.single_qubit += 1;
        }
        *counts.by_kind.entry(g.kind().to_string()).or_default() += 1;
    }
    counts.total = counts.single_qubit + counts.two_qubit;
    counts
}

fn check_position_qubits(n: u32) -> Result<usize> {
    let n = n as usize;
    if n == 0 {
        return Err(Error::validation("at least one position qubit is required"));
    }
    Ok(n)
}

/// QFT on the position qubits `1..=n`, without the terminal swaps.
///
/// Emits `n` Hadamards and `n(n-1)/2` controlled phases. The output is in
/// bit-reversed order relative to the textbook QFT: qubit `k` carries the
/// phase `e^{2πi j/2^k}`.
pub fn build_qft_no_swap(n: u32) -> Result<GateList> {
    let n = check_position_qubits(n)?;
    let mut list = GateList::new(n + 1);
    for target in (1..=n).rev() {
        list.push(Gate::Hadamard { target })?;
        for control in (1..target).rev() {
            let k = target - control + 1;
            list.push(Gate::ControlledPhase {
                control,
                target,
                phi: TAU / (1u64 << k) as f64,
            })?;
        }
    }
    Ok(list)
}

/// One walk step `Σ (C ⊗ 1)` in the Fourier basis.
pub fn build_step_layer(n: u32, coin: &CoinOp) -> Result<GateList> {
    let n = check_position_qubits(n)?;
    let mut list = GateList::new(n + 1);
    list.push(Gate::SingleQubitUnitary {
        target: 0,
        matrix: coin.matrix(),
    })?;
    // 1 ⊗ Ω†
    for k in 1..=n {
        list.push(Gate::Phase {
            target: k,
            phi: -TAU / (1u64 << k) as f64,
        })?;
    }
    // |1⟩⟨1| ⊗ Ω², with R_k² = R_{k-1} and R_1² = 1
    for k in 2..=n {
        list.push(Gate::ControlledPhase {
            control: 0,
            target: k,
            phi: TAU / (1u64 << (k - 1)) as f64,
        })?;
    }
    Ok(list)
}

/// Full walk circuit for `params`.
///
/// `localized_start` requests the Hadamard-layer shortcut for a walker
/// localized at the given position; only the origin is supported, where
/// `F̃|0⟩ = H^{⊗n}|0⟩`. With `None` the full QFT is emitted.
pub fn build_walk_circuit(params: &WalkParams, localized_start: Option<usize>) -> Result<GateList> {
    let n = params.position_qubits();
    let qft = build_qft_no_swap(n)?;
    let mut list = GateList::new(qft.qubit_count());
    match localized_start {
        None => list.append(&qft)?,
        Some(0) => {
            for target in 1..=n as usize {
                list.push(Gate::Hadamard { target })?;
            }
        }
        Some(pos) => {
            return Err(Error::validation(format!(
                "the Hadamard shortcut requires a walker starting at position 0, not {pos}"
            )))
        }
    }
    let coins = params.coins();
    let layers = coins
        .iter()
        .map(|c| build_step_layer(n, c))
        .collect::<Result<Vec<_>>>()?;
    for &idx in params.schedule().indices() {
        list.append(&layers[usize::from(idx)])?;
    }
    list.append(&qft.inverse())?;
    Ok(list)
}

/// Dense statevector simulation of `gates` applied to `initial`.
pub fn simulate_gates(gates: &GateList, initial: &[Complex64]) -> Result<Vec<Complex64>> {
    let q = gates.qubit_count();
    if q > MAX_SIMULATED_QUBITS {
        return Err(Error::validation(format!(
            "refusing to simulate {q} qubits (limit {MAX_SIMULATED_QUBITS})"
        )));
    }
    let dim = 1usize << q;
    if initial.len() != dim {
        return Err(Error::validation(format!(
            "state of length {} does not match a {q}-qubit register ({dim})",
            initial.len()
        )));
    }
    let mut state = initial.to_vec();
    for g in gates.gates() {
        apply_gate(&mut state, g);
    }
    Ok(state)
}

fn apply_gate(state: &mut [Complex64], gate: &Gate) {
    let h = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    match *gate {
        Gate::Hadamard { target } => apply_single(state, target, [[h, h], [h, -h]]),
        Gate::PauliX { target } => apply_single(state, target, [[zero, one], [one, zero]]),
        Gate::SingleQubitUnitary { target, matrix } => apply_single(state, target, matrix),
        Gate::Phase { target, phi } => {
            let w = Complex64::cis(phi);
            let mask = 1 << target;
            state
                .iter_mut()
                .enumerate()
                .filter(|(i, _)| i & mask != 0)
                .for_each(|(_, a)| *a *= w);
        }
        Gate::ControlledPhase {
            control,
            target,
            phi,
        } => {
            let w = Complex64::cis(phi);
            let mask = (1 << target) | (1 << control);
            state
                .iter_mut()
                .enumerate()
                .filter(|(i, _)| i & mask == mask)
                .for_each(|(_, a)| *a *= w);
        }
    }
}

fn apply_single(state: &mut [Complex64], target: usize, m: [[Complex64; 2]; 2]) {
    let mask = 1 << target;
    for i in 0..state.len() {
        if i & mask == 0 {
            let (a, b) = (state[i], state[i | mask]);
            state[i] = m[0][0] * a + m[0][1] * b;
            state[i | mask] = m[1][0] * a + m[1][1] * b;
        }
    }
}
