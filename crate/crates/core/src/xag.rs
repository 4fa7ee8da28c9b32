// SPDX-License-Identifier: Apache-2.0

//! XOR-AND-inverter graphs.
//!
//! Nodes live in an arena indexed in topological order: node 0 is the
//! constant, primary inputs follow, and every gate refers only to smaller
//! indices. Gates are created through [`Xag::create_and`] and
//! [`Xag::create_xor`], which apply constant propagation and structural
//! hashing, so a network never holds two gates with the same operator and
//! operands.

use std::collections::HashMap;
use std::fmt;
use std::ops::Not;

use thiserror::Error;

use crate::truth_table::{TruthTable, MAX_VARS};

pub type NodeId = usize;

/// A node reference plus a complement flag.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Signal(u32);

impl Signal {
    pub const FALSE: Signal = Signal(0);
    pub const TRUE: Signal = Signal(1);

    pub fn new(node: NodeId, complemented: bool) -> Self {
        Signal(((node as u32) << 1) | complemented as u32)
    }

    pub fn node(self) -> NodeId {
        (self.0 >> 1) as NodeId
    }

    pub fn is_complemented(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn is_const(self) -> bool {
        self.node() == 0
    }

    /// The same node without complement.
    pub fn regular(self) -> Signal {
        Signal(self.0 & !1)
    }

    /// Complements the signal iff `flag` is set.
    pub fn complement_if(self, flag: bool) -> Signal {
        Signal(self.0 ^ flag as u32)
    }
}

impl Not for Signal {
    type Output = Signal;
    fn not(self) -> Signal {
        Signal(self.0 ^ 1)
    }
}

impl fmt::Debug for Signal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_complemented() {
            write!(f, "!n{}", self.node())
        } else {
            write!(f, "n{}", self.node())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GateKind {
    And,
    Xor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum NodeKind {
    Const0,
    Input(usize),
    Gate(GateKind),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct XagNode {
    pub kind: NodeKind,
    pub fanins: [Signal; 2],
}

impl XagNode {
    pub fn is_and(&self) -> bool {
        self.kind == NodeKind::Gate(GateKind::And)
    }

    pub fn is_xor(&self) -> bool {
        self.kind == NodeKind::Gate(GateKind::Xor)
    }

    pub fn is_gate(&self) -> bool {
        matches!(self.kind, NodeKind::Gate(_))
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum XagError {
    #[error("network has {inputs} primary inputs; at most {limit} are supported here")]
    TooManyInputs { inputs: usize, limit: usize },
}

#[derive(Clone)]
pub struct Xag {
    nodes: Vec<XagNode>,
    inputs: Vec<NodeId>,
    outputs: Vec<Signal>,
    input_names: Vec<String>,
    output_names: Vec<String>,
    strash: HashMap<(GateKind, Signal, Signal), NodeId>,
}

impl Default for Xag {
    fn default() -> Self {
        Self::new()
    }
}

impl Xag {
    pub fn new() -> Self {
        Xag {
            nodes: vec![XagNode {
                kind: NodeKind::Const0,
                fanins: [Signal::FALSE; 2],
            }],
            inputs: Vec::new(),
            outputs: Vec::new(),
            input_names: Vec::new(),
            output_names: Vec::new(),
            strash: HashMap::new(),
        }
    }

    /// Adds a primary input. All inputs must be created before any gate.
    pub fn add_input(&mut self, name: impl Into<String>) -> Signal {
        assert!(
            self.strash.is_empty() && self.nodes.len() == self.inputs.len() + 1,
            "primary inputs must be created before gates"
        );
        let id = self.nodes.len();
        self.nodes.push(XagNode {
            kind: NodeKind::Input(self.inputs.len()),
            fanins: [Signal::FALSE; 2],
        });
        self.inputs.push(id);
        self.input_names.push(name.into());
        Signal::new(id, false)
    }

    pub fn add_output(&mut self, signal: Signal, name: impl Into<String>) -> usize {
        debug_assert!(signal.node() < self.nodes.len());
        self.outputs.push(signal);
        self.output_names.push(name.into());
        self.outputs.len() - 1
    }

    pub fn input(&self, i: usize) -> Signal {
        Signal::new(self.inputs[i], false)
    }

    pub fn inputs(&self) -> &[NodeId] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[Signal] {
        &self.outputs
    }

    pub fn input_names(&self) -> &[String] {
        &self.input_names
    }

    pub fn output_names(&self) -> &[String] {
        &self.output_names
    }

    pub fn num_inputs(&self) -> usize {
        self.inputs.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.outputs.len()
    }

    pub fn num_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> &XagNode {
        &self.nodes[id]
    }

    pub fn nodes(&self) -> &[XagNode] {
        &self.nodes
    }

    fn lookup_or_insert(&mut self, kind: GateKind, a: Signal, b: Signal) -> NodeId {
        debug_assert!(a < b);
        let next = self.nodes.len();
        *self.strash.entry((kind, a, b)).or_insert_with(|| {
            self.nodes.push(XagNode {
                kind: NodeKind::Gate(kind),
                fanins: [a, b],
            });
            next
        })
    }

    pub fn create_and(&mut self, a: Signal, b: Signal) -> Signal {
        if a == Signal::FALSE || b == Signal::FALSE || a == !b {
            return Signal::FALSE;
        }
        if a == Signal::TRUE || a == b {
            return b;
        }
        if b == Signal::TRUE {
            return a;
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Signal::new(self.lookup_or_insert(GateKind::And, a, b), false)
    }

    pub fn create_xor(&mut self, a: Signal, b: Signal) -> Signal {
        let out_compl = a.is_complemented() ^ b.is_complemented();
        let (a, b) = (a.regular(), b.regular());
        if a == b {
            return Signal::FALSE.complement_if(out_compl);
        }
        if a == Signal::FALSE {
            return b.complement_if(out_compl);
        }
        if b == Signal::FALSE {
            return a.complement_if(out_compl);
        }
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        Signal::new(self.lookup_or_insert(GateKind::Xor, a, b), out_compl)
    }

    pub fn create_not(&self, a: Signal) -> Signal {
        !a
    }

    /// `a ∨ b` as `¬(¬a ∧ ¬b)`.
    pub fn create_or(&mut self, a: Signal, b: Signal) -> Signal {
        !self.create_and(!a, !b)
    }

    /// `s ? t : e` encoded as `e ⊕ (s ∧ (t ⊕ e))`, one AND.
    pub fn create_mux(&mut self, s: Signal, t: Signal, e: Signal) -> Signal {
        let d = self.create_xor(t, e);
        let g = self.create_and(s, d);
        self.create_xor(e, g)
    }

    /// Marks nodes in the transitive fanin of the outputs.
    pub fn reachable(&self) -> Vec<bool> {
        let mut live = vec![false; self.nodes.len()];
        for o in &self.outputs {
            live[o.node()] = true;
        }
        for id in (1..self.nodes.len()).rev() {
            if live[id] && self.nodes[id].is_gate() {
                for f in self.nodes[id].fanins {
                    live[f.node()] = true;
                }
            }
        }
        live
    }

    /// Reachable gates in topological (index) order.
    pub fn topo_order(&self) -> Vec<NodeId> {
        let live = self.reachable();
        (0..self.nodes.len())
            .filter(|&id| live[id] && self.nodes[id].is_gate())
            .collect()
    }

    pub fn count_ands(&self) -> usize {
        self.topo_order()
            .into_iter()
            .filter(|&id| self.nodes[id].is_and())
            .count()
    }

    pub fn count_xors(&self) -> usize {
        self.topo_order()
            .into_iter()
            .filter(|&id| self.nodes[id].is_xor())
            .count()
    }

    /// Number of references to each node from reachable gates and outputs.
    pub fn fanout_counts(&self) -> Vec<u32> {
        let live = self.reachable();
        let mut refs = vec![0u32; self.nodes.len()];
        for (node, _) in self
            .nodes
            .iter()
            .zip(&live)
            .filter(|(n, &l)| l && n.is_gate())
        {
            for f in node.fanins {
                refs[f.node()] += 1;
            }
        }
        for o in &self.outputs {
            refs[o.node()] += 1;
        }
        refs
    }

    /// Copies the reachable part into a fresh network, keeping input and
    /// output order.
    pub fn cleanup(&self) -> Xag {
        let mut out = Xag::new();
        let mut map = vec![Signal::FALSE; self.nodes.len()];
        for (i, &id) in self.inputs.iter().enumerate() {
            map[id] = out.add_input(self.input_names[i].clone());
        }
        for id in self.topo_order() {
            let n = self.nodes[id];
            let [a, b] = n
                .fanins
                .map(|f| map[f.node()].complement_if(f.is_complemented()));
            map[id] = match n.kind {
                NodeKind::Gate(GateKind::And) => out.create_and(a, b),
                NodeKind::Gate(GateKind::Xor) => out.create_xor(a, b),
                _ => unreachable!(),
            };
        }
        for (j, o) in self.outputs.iter().enumerate() {
            let s = map[o.node()].complement_if(o.is_complemented());
            out.add_output(s, self.output_names[j].clone());
        }
        out
    }

    pub fn simulate(&self, assignment: &[bool]) -> Vec<bool> {
        assert_eq!(
            assignment.len(),
            self.inputs.len(),
            "one value per primary input"
        );
        let mut values = vec![false; self.nodes.len()];
        for (i, &id) in self.inputs.iter().enumerate() {
            values[id] = assignment[i];
        }
        let val = |values: &[bool], s: Signal| values[s.node()] ^ s.is_complemented();
        for id in 0..self.nodes.len() {
            let n = &self.nodes[id];
            if let NodeKind::Gate(kind) = n.kind {
                let a = val(&values, n.fanins[0]);
                let b = val(&values, n.fanins[1]);
                values[id] = match kind {
                    GateKind::And => a & b,
                    GateKind::Xor => a ^ b,
                };
            }
        }
        self.outputs.iter().map(|&o| val(&values, o)).collect()
    }

    /// Truth tables of every node over the primary inputs.
    pub fn node_truth_tables(&self) -> Result<Vec<TruthTable>, XagError> {
        let n = self.inputs.len();
        if n > MAX_VARS {
            return Err(XagError::TooManyInputs {
                inputs: n,
                limit: MAX_VARS,
            });
        }
        let mut tables: Vec<TruthTable> = Vec::with_capacity(self.nodes.len());
        for node in &self.nodes {
            let t = match node.kind {
                NodeKind::Const0 => TruthTable::zero(n),
                NodeKind::Input(i) => TruthTable::var(n, i),
                NodeKind::Gate(kind) => {
                    let lit = |s: Signal| {
                        let t = &tables[s.node()];
                        if s.is_complemented() {
                            !t
                        } else {
                            t.clone()
                        }
                    };
                    let (a, b) = (lit(node.fanins[0]), lit(node.fanins[1]));
                    match kind {
                        GateKind::And => a & b,
                        GateKind::Xor => a ^ b,
                    }
                }
            };
            tables.push(t);
        }
        Ok(tables)
    }

    pub fn output_truth_tables(&self) -> Result<Vec<TruthTable>, XagError> {
        let tables = self.node_truth_tables()?;
        Ok(self
            .outputs
            .iter()
            .map(|o| {
                let t = &tables[o.node()];
                if o.is_complemented() {
                    !t
                } else {
                    t.clone()
                }
            })
            .collect())
    }

    /// Checks the structural invariants: topological fanins, canonical
    /// fanin order, uncomplemented XOR fanins, no constant fanins, and a
    /// strash table that mirrors the gate arena.
    pub fn check_invariants(&self) -> Result<(), String> {
        if self.nodes[0].kind != NodeKind::Const0 {
            return Err("node 0 is not the constant".into());
        }
        let mut gates = 0;
        for (id, n) in self.nodes.iter().enumerate().skip(1) {
            match n.kind {
                NodeKind::Const0 => return Err(format!("extra constant at {id}")),
                NodeKind::Input(i) => {
                    if self.inputs.get(i) != Some(&id) {
                        return Err(format!("input {i} misplaced at node {id}"));
                    }
                    if gates > 0 {
                        return Err(format!("input node {id} after a gate"));
                    }
                }
                NodeKind::Gate(kind) => {
                    gates += 1;
                    let [a, b] = n.fanins;
                    if a.node() >= id || b.node() >= id {
                        return Err(format!("node {id} has a non-topological fanin"));
                    }
                    if a >= b {
                        return Err(format!("node {id} fanins not sorted"));
                    }
                    if a.is_const() || b.is_const() {
                        return Err(format!("node {id} has a constant fanin"));
                    }
                    if a.node() == b.node() {
                        return Err(format!("node {id} has repeated fanin node"));
                    }
                    if kind == GateKind::Xor && (a.is_complemented() || b.is_complemented()) {
                        return Err(format!("xor node {id} has a complemented fanin"));
                    }
                    if self.strash.get(&(kind, a, b)) != Some(&id) {
                        return Err(format!("node {id} missing from strash"));
                    }
                }
            }
        }
        if self.strash.len() != gates {
            return Err("strash and arena disagree".into());
        }
        Ok(())
    }
}

impl fmt::Debug for Xag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Xag {{ inputs: {:?}", self.input_names)?;
        for (id, n) in self.nodes.iter().enumerate() {
            if let NodeKind::Gate(kind) = n.kind {
                writeln!(
                    f,
                    "  n{id} = {kind:?}({:?}, {:?})",
                    n.fanins[0], n.fanins[1]
                )?;
            }
        }
        write!(f, "  outputs: {:?} }}", self.outputs)
    }
}
