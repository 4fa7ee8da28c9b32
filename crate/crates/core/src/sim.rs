// SPDX-License-Identifier: Apache-2.0

//! Reference semantics: a direct IR interpreter, a bit-parallel classical
//! simulator for reversible circuits, and oracle verification against
//! either the IR or an XAG.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::circuit::{Register, RevGate, ReversibleCircuit};
use crate::ir::{CheckedFunction, LInst, LOperand, LTerm};
use crate::xag::Xag;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimError {
    #[error("load from `%{slot}` before any store on this path")]
    UninitializedLoad { slot: String },
    #[error("exhaustive verification over {inputs} inputs is not supported (limit {limit}); use sampling")]
    TooLarge { inputs: usize, limit: usize },
    #[error("reference has {reference} inputs and {ref_outputs} outputs, circuit has {inputs} and {outputs}")]
    ShapeMismatch {
        reference: usize,
        ref_outputs: usize,
        inputs: usize,
        outputs: usize,
    },
}

/// Executes a checked function on one input assignment.
pub fn interpret_ir(f: &CheckedFunction, inputs: &[bool]) -> Result<Vec<bool>, SimError> {
    assert_eq!(inputs.len(), f.num_inputs(), "one value per parameter");
    let mut values: Vec<bool> = vec![false; f.num_values()];
    values[..inputs.len()].copy_from_slice(inputs);
    let mut slots: Vec<Option<bool>> = vec![None; f.num_slots()];
    let op = |values: &[bool], o: LOperand| match o {
        LOperand::Const(b) => b,
        LOperand::Value(v) => values[v],
    };
    let mut block = 0;
    let mut pred = None;
    loop {
        let b = &f.blocks[block];
        let phis: Vec<(usize, bool)> = b
            .insts
            .iter()
            .filter_map(|inst| match inst {
                LInst::Phi(r, incoming) => {
                    let p = pred.expect("validated: entry has no phi");
                    let (_, v) = incoming.iter().find(|(q, _)| *q == p).unwrap();
                    Some((*r, op(&values, *v)))
                }
                _ => None,
            })
            .collect();
        for (r, v) in phis {
            values[r] = v;
        }
        for inst in &b.insts {
            match *inst {
                LInst::Phi(..) => {}
                LInst::And(r, x, y) => values[r] = op(&values, x) & op(&values, y),
                LInst::Or(r, x, y) => values[r] = op(&values, x) | op(&values, y),
                LInst::Xor(r, x, y) | LInst::Ne(r, x, y) => {
                    values[r] = op(&values, x) ^ op(&values, y)
                }
                LInst::Eq(r, x, y) => values[r] = op(&values, x) == op(&values, y),
                LInst::Select(r, s, t, e) => {
                    values[r] = if op(&values, s) {
                        op(&values, t)
                    } else {
                        op(&values, e)
                    }
                }
                LInst::Load(r, slot) => {
                    values[r] = slots[slot].ok_or_else(|| SimError::UninitializedLoad {
                        slot: f.slot_names[slot].clone(),
                    })?;
                }
                LInst::Store(slot, v) => slots[slot] = Some(op(&values, v)),
            }
        }
        pred = Some(block);
        block = match b.term {
            LTerm::Jump(t) => t,
            LTerm::Branch(c, t, e) => {
                if op(&values, c) {
                    t
                } else {
                    e
                }
            }
            LTerm::Return(ref vals) => return Ok(vals.iter().map(|&v| op(&values, v)).collect()),
        };
    }
}

/// 64 classical basis states evolved in parallel: word `q` holds qubit `q`
/// across the 64 lanes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitState {
    pub qubits: Vec<u64>,
}

impl BitState {
    pub fn zeros(num_qubits: usize) -> Self {
        BitState {
            qubits: vec![0; num_qubits],
        }
    }

    pub fn apply(&mut self, g: &RevGate) {
        match *g {
            RevGate::X(t) => self.qubits[t] ^= u64::MAX,
            RevGate::Cnot { control, target } => self.qubits[target] ^= self.qubits[control],
            RevGate::Ccnot { c1, c2, target } => {
                self.qubits[target] ^= self.qubits[c1] & self.qubits[c2]
            }
        }
    }

    pub fn lane(&self, q: usize, lane: usize) -> bool {
        self.qubits[q] >> lane & 1 == 1
    }
}

pub fn run_circuit(c: &ReversibleCircuit, state: &mut BitState) {
    for g in &c.gates {
        state.apply(g);
    }
}

/// Runs the circuit on a single basis state given as one bool per qubit.
pub fn run_basis(c: &ReversibleCircuit, bits: &[bool]) -> Vec<bool> {
    let mut st = BitState {
        qubits: bits.iter().map(|&b| b as u64).collect(),
    };
    run_circuit(c, &mut st);
    (0..c.num_qubits()).map(|q| st.lane(q, 0)).collect()
}

#[derive(Clone, Copy, Debug)]
pub enum Reference<'a> {
    Function(&'a CheckedFunction),
    Network(&'a Xag),
}

impl Reference<'_> {
    fn shape(&self) -> (usize, usize) {
        match self {
            Reference::Function(f) => (f.num_inputs(), f.num_outputs()),
            Reference::Network(g) => (g.num_inputs(), g.num_outputs()),
        }
    }

    fn eval(&self, x: &[bool]) -> Result<Vec<bool>, SimError> {
        match self {
            Reference::Function(f) => interpret_ir(f, x),
            Reference::Network(g) => Ok(g.simulate(x)),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum FailureKind {
    /// An output qubit does not hold `b ⊕ f(x)`.
    Output,
    /// An input qubit was not restored.
    InputPreserved,
    /// A helper qubit was not returned to zero.
    HelperZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub kind: FailureKind,
    /// Input assignment, bit `i` is input `i`.
    pub x: u64,
    /// Initial output register, bit `j` is output `j`.
    pub b: u64,
    pub qubit: usize,
    pub expected: bool,
    pub actual: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum VerifyMode {
    Exhaustive,
    Sampled { seed: u64, samples: usize },
}

/// Failures kept in a report; the total count is always exact.
pub const MAX_REPORTED_FAILURES: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VerificationReport {
    pub mode: VerifyMode,
    /// Basis states `(x, b)` simulated.
    pub checked: u64,
    pub failure_count: u64,
    /// The first failures in `(x, b, qubit)` order.
    pub failures: Vec<Failure>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn has_kind(&self, kind: FailureKind) -> bool {
        self.failures.iter().any(|f| f.kind == kind)
    }
}

/// Inputs up to which exhaustive verification is allowed.
pub const EXHAUSTIVE_LIMIT: usize = 16;
pub const DEFAULT_SAMPLES: usize = 4096;

/// Values of the output register tried for each input: every value for up
/// to four outputs, otherwise all-zeros and all-ones.
fn b_values(m: usize) -> Vec<u64> {
    if m <= 4 {
        (0..1u64 << m).collect()
    } else {
        let ones = if m == 64 { u64::MAX } else { (1u64 << m) - 1 };
        vec![0, ones]
    }
}

fn bits(v: u64, n: usize) -> Vec<bool> {
    (0..n).map(|i| v >> i & 1 == 1).collect()
}

/// Checks `|x⟩|b⟩|0⟩ ↦ |x⟩|b ⊕ f(x)⟩|0⟩` on every input (or on `samples`
/// random inputs in sampled mode).
pub fn verify_oracle(
    c: &ReversibleCircuit,
    reference: Reference<'_>,
    mode: VerifyMode,
) -> Result<VerificationReport, SimError> {
    let (n, m) = reference.shape();
    if (n, m) != (c.num_inputs, c.num_outputs) {
        return Err(SimError::ShapeMismatch {
            reference: n,
            ref_outputs: m,
            inputs: c.num_inputs,
            outputs: c.num_outputs,
        });
    }
    let xs: Vec<u64> = match mode {
        VerifyMode::Exhaustive => {
            if n > EXHAUSTIVE_LIMIT {
                return Err(SimError::TooLarge {
                    inputs: n,
                    limit: EXHAUSTIVE_LIMIT,
                });
            }
            (0..1u64 << n).collect()
        }
        VerifyMode::Sampled { seed, samples } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };
            (0..samples).map(|_| rng.gen::<u64>() & mask).collect()
        }
    };
    let bs = b_values(m);
    let lanes: Vec<(u64, u64)> = xs
        .iter()
        .flat_map(|&x| bs.iter().map(move |&b| (x, b)))
        .collect();

    let chunks: Vec<Result<(u64, Vec<Failure>), SimError>> = lanes
        .par_chunks(64)
        .map(|chunk| {
            let mut st = BitState::zeros(c.num_qubits());
            let mut expected_out = vec![0u64; m];
            for (lane, &(x, b)) in chunk.iter().enumerate() {
                for i in 0..n {
                    st.qubits[i] |= (x >> i & 1) << lane;
                }
                let fx = reference.eval(&bits(x, n))?;
                for j in 0..m {
                    st.qubits[n + j] |= (b >> j & 1) << lane;
                    expected_out[j] |= ((b >> j & 1) ^ fx[j] as u64) << lane;
                }
            }
            let initial = st.clone();
            run_circuit(c, &mut st);
            let mut count = 0u64;
            let mut found = Vec::new();
            for (lane, &(x, b)) in chunk.iter().enumerate() {
                for q in 0..c.num_qubits() {
                    let actual = st.lane(q, lane);
                    let (kind, expected) = match c.register(q) {
                        Register::Input => (FailureKind::InputPreserved, initial.lane(q, lane)),
                        Register::Output => {
                            (FailureKind::Output, expected_out[q - n] >> lane & 1 == 1)
                        }
                        Register::Helper => (FailureKind::HelperZero, false),
                    };
                    if actual != expected {
                        count += 1;
                        if found.len() < MAX_REPORTED_FAILURES {
                            found.push(Failure {
                                kind,
                                x,
                                b,
                                qubit: q,
                                expected,
                                actual,
                            });
                        }
                    }
                }
            }
            Ok((count, found))
        })
        .collect();

    let mut failure_count = 0;
    let mut failures = Vec::new();
    for r in chunks {
        let (count, found) = r?;
        failure_count += count;
        failures.extend(found);
    }
    failures.truncate(MAX_REPORTED_FAILURES);
    Ok(VerificationReport {
        mode,
        checked: lanes.len() as u64,
        failure_count,
        failures,
    })
}
