// SPDX-License-Identifier: Apache-2.0

//! Compilation of an XAG into an X/CNOT/CCNOT circuit that computes
//! `|x⟩|b⟩|0⟩ ↦ |x⟩|b ⊕ f(x)⟩|0⟩`.
//!
//! Qubits are numbered inputs first, then outputs, then one helper per
//! reachable AND gate in topological order. The circuit has three
//! segments: compute (one step per AND), copy-out (CNOTs into the output
//! qubits), and uncompute (the compute steps in reverse order).

use std::fmt;

use thiserror::Error;

use crate::xag::{GateKind, NodeId, NodeKind, Signal, Xag};

pub type QubitId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Register {
    Input,
    Output,
    Helper,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RevGate {
    X(QubitId),
    Cnot {
        control: QubitId,
        target: QubitId,
    },
    Ccnot {
        c1: QubitId,
        c2: QubitId,
        target: QubitId,
    },
}

impl RevGate {
    pub fn target(&self) -> QubitId {
        match *self {
            RevGate::X(t) | RevGate::Cnot { target: t, .. } | RevGate::Ccnot { target: t, .. } => t,
        }
    }
}

impl fmt::Display for RevGate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            RevGate::X(t) => write!(f, "x q{t}"),
            RevGate::Cnot { control, target } => write!(f, "cnot q{control}, q{target}"),
            RevGate::Ccnot { c1, c2, target } => write!(f, "ccnot q{c1}, q{c2}, q{target}"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("AND node {node} has an operand with no qubit terms (constant operand)")]
    EmptyTermSet { node: NodeId },
    #[error("AND node {node} has affinely identical operands")]
    DegenerateAnd { node: NodeId },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReversibleCircuit {
    pub num_inputs: usize,
    pub num_outputs: usize,
    pub num_helpers: usize,
    pub gates: Vec<RevGate>,
    pub input_names: Vec<String>,
    pub output_names: Vec<String>,
    /// Gates in the compute segment.
    pub compute_len: usize,
    /// Gates in the copy-out segment, which follows compute.
    pub copy_len: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
pub struct CircuitStats {
    pub qubits: usize,
    pub inputs: usize,
    pub outputs: usize,
    pub helpers: usize,
    pub x: usize,
    pub cnot: usize,
    pub ccnot: usize,
}

impl ReversibleCircuit {
    pub fn num_qubits(&self) -> usize {
        self.num_inputs + self.num_outputs + self.num_helpers
    }

    pub fn input_qubit(&self, i: usize) -> QubitId {
        i
    }

    pub fn output_qubit(&self, j: usize) -> QubitId {
        self.num_inputs + j
    }

    pub fn helper_qubit(&self, k: usize) -> QubitId {
        self.num_inputs + self.num_outputs + k
    }

    pub fn register(&self, q: QubitId) -> Register {
        if q < self.num_inputs {
            Register::Input
        } else if q < self.num_inputs + self.num_outputs {
            Register::Output
        } else {
            Register::Helper
        }
    }

    pub fn compute_segment(&self) -> &[RevGate] {
        &self.gates[..self.compute_len]
    }

    pub fn copy_segment(&self) -> &[RevGate] {
        &self.gates[self.compute_len..self.compute_len + self.copy_len]
    }

    pub fn uncompute_segment(&self) -> &[RevGate] {
        &self.gates[self.compute_len + self.copy_len..]
    }

    pub fn stats(&self) -> CircuitStats {
        let mut s = CircuitStats {
            qubits: self.num_qubits(),
            inputs: self.num_inputs,
            outputs: self.num_outputs,
            helpers: self.num_helpers,
            ..CircuitStats::default()
        };
        for g in &self.gates {
            match g {
                RevGate::X(_) => s.x += 1,
                RevGate::Cnot { .. } => s.cnot += 1,
                RevGate::Ccnot { .. } => s.ccnot += 1,
            }
        }
        s
    }
}

/// Affine form over qubits: sorted qubit ids plus a constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LinearForm {
    pub terms: Vec<QubitId>,
    pub constant: bool,
}

impl LinearForm {
    fn unit(q: QubitId) -> Self {
        LinearForm {
            terms: vec![q],
            constant: false,
        }
    }

    pub fn xor(&self, other: &LinearForm) -> LinearForm {
        let (a, b) = (&self.terms, &other.terms);
        let mut terms = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Equal => {
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => {
                    terms.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    terms.push(b[j]);
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&a[i..]);
        terms.extend_from_slice(&b[j..]);
        LinearForm {
            terms,
            constant: self.constant ^ other.constant,
        }
    }

    fn complement_if(mut self, flag: bool) -> Self {
        self.constant ^= flag;
        self
    }
}

/// Affine forms of every node over the input and helper qubits of the
/// circuit compiled from `g`. AND nodes map to their own helper qubit.
pub fn linear_fanin(g: &Xag) -> Vec<Option<LinearForm>> {
    let n = g.num_inputs();
    let m = g.num_outputs();
    let mut forms: Vec<Option<LinearForm>> = vec![None; g.num_nodes()];
    forms[0] = Some(LinearForm::default());
    for (i, &id) in g.inputs().iter().enumerate() {
        forms[id] = Some(LinearForm::unit(i));
    }
    let mut helper = 0;
    for id in g.topo_order() {
        let node = g.node(id);
        forms[id] = Some(match node.kind {
            NodeKind::Gate(GateKind::And) => {
                helper += 1;
                LinearForm::unit(n + m + helper - 1)
            }
            NodeKind::Gate(GateKind::Xor) => {
                let [a, b] = node.fanins.map(|s| form_of(&forms, s));
                a.xor(&b)
            }
            _ => unreachable!(),
        });
    }
    forms
}

fn form_of(forms: &[Option<LinearForm>], s: Signal) -> LinearForm {
    forms[s.node()]
        .clone()
        .expect("fanin precedes gate")
        .complement_if(s.is_complemented())
}

/// Classical contents of every qubit as affine forms over the initial
/// qubit values. Used to check that input qubits are restored.
#[derive(Clone, Debug)]
pub struct LinearState {
    qubits: Vec<LinearForm>,
}

impl LinearState {
    pub fn new(num_qubits: usize) -> Self {
        LinearState {
            qubits: (0..num_qubits).map(LinearForm::unit).collect(),
        }
    }

    /// Applies X and CNOT gates; CCNOT targets are outside the linear model
    /// and are left untouched.
    pub fn apply(&mut self, g: &RevGate) {
        match *g {
            RevGate::X(t) => self.qubits[t].constant ^= true,
            RevGate::Cnot { control, target } => {
                self.qubits[target] = self.qubits[target].xor(&self.qubits[control]);
            }
            RevGate::Ccnot { .. } => {}
        }
    }

    pub fn holds_initial(&self, q: QubitId) -> bool {
        self.qubits[q] == LinearForm::unit(q)
    }
}

/// Appends the gates that load `form` onto its lowest term and returns
/// that qubit. The gate list is returned separately so it can be undone.
fn load_form(form: &LinearForm) -> (QubitId, Vec<RevGate>) {
    let target = form.terms[0];
    let mut gates: Vec<RevGate> = form.terms[1..]
        .iter()
        .map(|&q| RevGate::Cnot { control: q, target })
        .collect();
    if form.constant {
        gates.push(RevGate::X(target));
    }
    (target, gates)
}

fn and_step(
    node: NodeId,
    l1: &LinearForm,
    l2: &LinearForm,
    helper: QubitId,
) -> Result<Vec<RevGate>, CompileError> {
    if l1.terms.is_empty() || l2.terms.is_empty() {
        return Err(CompileError::EmptyTermSet { node });
    }
    if l1.terms == l2.terms {
        return Err(CompileError::DegenerateAnd { node });
    }
    let (t1, chain1) = load_form(l1);
    // after chain1, t1 holds l1, so l2 is rewritten over the new contents
    let l2 = if l2.terms.contains(&t1) {
        let rest1 = LinearForm {
            terms: l1.terms[1..].to_vec(),
            constant: l1.constant,
        };
        let without = LinearForm {
            terms: l2.terms.iter().copied().filter(|&q| q != t1).collect(),
            constant: l2.constant,
        };
        without.xor(&rest1).xor(&LinearForm::unit(t1))
    } else {
        l2.clone()
    };
    // load onto the lowest term other than t1
    let t2 = *l2
        .terms
        .iter()
        .find(|&&q| q != t1)
        .expect("operands differ");
    let mut chain2: Vec<RevGate> = l2
        .terms
        .iter()
        .filter(|&&q| q != t2)
        .map(|&q| RevGate::Cnot {
            control: q,
            target: t2,
        })
        .collect();
    if l2.constant {
        chain2.push(RevGate::X(t2));
    }
    let mut step = chain1.clone();
    step.extend_from_slice(&chain2);
    step.push(RevGate::Ccnot {
        c1: t1,
        c2: t2,
        target: helper,
    });
    step.extend(chain2.into_iter().rev());
    step.extend(chain1.into_iter().rev());
    Ok(step)
}

pub fn compile(g: &Xag) -> Result<ReversibleCircuit, CompileError> {
    let n = g.num_inputs();
    let m = g.num_outputs();
    let forms = linear_fanin(g);
    let mut steps: Vec<Vec<RevGate>> = Vec::new();
    for id in g.topo_order() {
        let node = g.node(id);
        if !node.is_and() {
            continue;
        }
        let [l1, l2] = node.fanins.map(|s| form_of(&forms, s));
        let helper = n + m + steps.len();
        steps.push(and_step(id, &l1, &l2, helper)?);
    }
    let num_helpers = steps.len();

    let mut gates: Vec<RevGate> = steps.iter().flatten().copied().collect();
    let compute_len = gates.len();
    for (j, &o) in g.outputs().iter().enumerate() {
        let form = form_of(&forms, o);
        let target = n + j;
        gates.extend(
            form.terms
                .iter()
                .map(|&q| RevGate::Cnot { control: q, target }),
        );
        if form.constant {
            gates.push(RevGate::X(target));
        }
    }
    let copy_len = gates.len() - compute_len;
    gates.extend(steps.iter().rev().flatten().copied());

    let circuit = ReversibleCircuit {
        num_inputs: n,
        num_outputs: m,
        num_helpers,
        gates,
        input_names: g.input_names().to_vec(),
        output_names: g.output_names().to_vec(),
        compute_len,
        copy_len,
    };
    debug_assert!({
        let mut st = LinearState::new(circuit.num_qubits());
        circuit.gates.iter().for_each(|gate| st.apply(gate));
        (0..n).all(|q| st.holds_initial(q))
    });
    Ok(circuit)
}
