// SPDX-License-Identifier: Apache-2.0

//! If-conversion of a checked function into an XAG.
//!
//! Two strategies are available:
//!
//! * [`IfConversion::PathExpansion`] assigns every block the signal of its
//!   terminator: `ret` yields the returned values and a conditional `br`
//!   becomes a MUX over the signals of its two successors, each evaluated
//!   with the definitions live along that path. Shared subpaths collapse
//!   through structural hashing, but the number of explored paths can grow
//!   exponentially with the number of sequential branches.
//! * [`IfConversion::ReachingConditions`] walks blocks once in reverse
//!   postorder, tracks for each block the condition under which it is
//!   reached, and merges versioned slot definitions and `phi` operands at
//!   join points with a MUX chain keyed on the incoming edge conditions.

use thiserror::Error;

use super::check::{BlockId, CheckedFunction, LInst, LOperand, LTerm};
use crate::xag::{Signal, Xag};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum IfConversion {
    #[default]
    PathExpansion,
    ReachingConditions,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LowerError {
    #[error("load from `%{slot}` on a path where it was never stored")]
    LoadOfUninitializedSlot { slot: String },
    #[error("path expansion exceeded {limit} block visits; use reaching-condition if-conversion")]
    PathExplosion { limit: usize },
}

/// Block visits allowed before path expansion gives up.
pub const PATH_VISIT_LIMIT: usize = 1 << 20;

pub fn ir_to_xag(f: &CheckedFunction) -> Result<Xag, LowerError> {
    ir_to_xag_with(f, IfConversion::default())
}

pub fn ir_to_xag_with(f: &CheckedFunction, strategy: IfConversion) -> Result<Xag, LowerError> {
    let mut xag = Xag::new();
    let inputs: Vec<Signal> = f
        .func
        .params
        .iter()
        .map(|p| xag.add_input(p.name.clone()))
        .collect();
    let outputs = match strategy {
        IfConversion::PathExpansion => {
            let mut env = Env {
                values: vec![None; f.num_values()],
                slots: vec![None; f.num_slots()],
            };
            env.values[..inputs.len()]
                .iter_mut()
                .zip(&inputs)
                .for_each(|(v, &s)| *v = Some(s));
            let mut expander = Expander {
                f,
                xag: &mut xag,
                visits: 0,
            };
            expander.eval(0, None, env)?
        }
        IfConversion::ReachingConditions => {
            let mut state = PathState::new(f, &inputs);
            state.run(f, &mut xag)?
        }
    };
    for (j, s) in outputs.into_iter().enumerate() {
        let name = if f.num_outputs() == 1 {
            "f".to_string()
        } else {
            format!("f{j}")
        };
        xag.add_output(s, name);
    }
    Ok(xag)
}

fn operand(values: &[Option<Signal>], op: LOperand) -> Signal {
    match op {
        LOperand::Const(b) => Signal::FALSE.complement_if(b),
        LOperand::Value(v) => values[v].expect("validated: value defined before use"),
    }
}

/// Builds the gate for a non-phi, non-memory instruction.
fn gate(xag: &mut Xag, values: &[Option<Signal>], inst: &LInst) -> Option<(usize, Signal)> {
    let op = |o| operand(values, o);
    Some(match *inst {
        LInst::And(r, a, b) => (r, xag.create_and(op(a), op(b))),
        LInst::Or(r, a, b) => (r, xag.create_or(op(a), op(b))),
        LInst::Xor(r, a, b) => (r, xag.create_xor(op(a), op(b))),
        LInst::Ne(r, a, b) => (r, xag.create_xor(op(a), op(b))),
        LInst::Eq(r, a, b) => (r, !xag.create_xor(op(a), op(b))),
        LInst::Select(r, s, t, e) => (r, xag.create_mux(op(s), op(t), op(e))),
        _ => return None,
    })
}

#[derive(Clone)]
struct Env {
    values: Vec<Option<Signal>>,
    slots: Vec<Option<Signal>>,
}

struct Expander<'a> {
    f: &'a CheckedFunction,
    xag: &'a mut Xag,
    visits: usize,
}

impl Expander<'_> {
    fn eval(
        &mut self,
        mut block: BlockId,
        mut pred: Option<BlockId>,
        mut env: Env,
    ) -> Result<Vec<Signal>, LowerError> {
        let f = self.f;
        loop {
            self.visits += 1;
            if self.visits > PATH_VISIT_LIMIT {
                return Err(LowerError::PathExplosion {
                    limit: PATH_VISIT_LIMIT,
                });
            }
            let b = &f.blocks[block];
            // phis read the environment as it was on entry to the block
            let phis: Vec<(usize, Signal)> = b
                .insts
                .iter()
                .filter_map(|inst| match inst {
                    LInst::Phi(r, incoming) => {
                        let p = pred.expect("validated: entry has no phi");
                        let (_, v) = incoming.iter().find(|(q, _)| *q == p).unwrap();
                        Some((*r, operand(&env.values, *v)))
                    }
                    _ => None,
                })
                .collect();
            for (r, s) in phis {
                env.values[r] = Some(s);
            }
            for inst in &b.insts {
                match *inst {
                    LInst::Phi(..) => {}
                    LInst::Load(r, slot) => {
                        let s =
                            env.slots[slot].ok_or_else(|| LowerError::LoadOfUninitializedSlot {
                                slot: f.slot_names[slot].clone(),
                            })?;
                        env.values[r] = Some(s);
                    }
                    LInst::Store(slot, v) => env.slots[slot] = Some(operand(&env.values, v)),
                    _ => {
                        let (r, s) = gate(self.xag, &env.values, inst).unwrap();
                        env.values[r] = Some(s);
                    }
                }
            }
            match b.term {
                LTerm::Jump(t) => {
                    pred = Some(block);
                    block = t;
                }
                LTerm::Branch(c, t, e) => {
                    let s = operand(&env.values, c);
                    if t == e || s == Signal::TRUE || s == Signal::FALSE {
                        pred = Some(block);
                        block = if s == Signal::FALSE { e } else { t };
                        continue;
                    }
                    let then_vals = self.eval(t, Some(block), env.clone())?;
                    let else_vals = self.eval(e, Some(block), env)?;
                    return Ok(then_vals
                        .into_iter()
                        .zip(else_vals)
                        .map(|(tv, ev)| self.xag.create_mux(s, tv, ev))
                        .collect());
                }
                LTerm::Return(ref vals) => {
                    return Ok(vals.iter().map(|&v| operand(&env.values, v)).collect());
                }
            }
        }
    }
}

/// Reaching conditions and versioned definitions for the single-pass
/// if-conversion.
///
/// `conditions[b]` is the signal under which block `b` executes; the
/// conditions on the edges entering a block are pairwise disjoint because
/// the graph is acyclic. `slots_out[b]` holds each slot's definition on exit
/// from `b`, `None` when some path leaves it unset.
pub struct PathState {
    pub conditions: Vec<Signal>,
    pub slots_out: Vec<Vec<Option<Signal>>>,
    pub values: Vec<Option<Signal>>,
}

impl PathState {
    fn new(f: &CheckedFunction, inputs: &[Signal]) -> Self {
        let mut values = vec![None; f.num_values()];
        for (v, &s) in values.iter_mut().zip(inputs) {
            *v = Some(s);
        }
        PathState {
            conditions: vec![Signal::FALSE; f.blocks.len()],
            slots_out: vec![Vec::new(); f.blocks.len()],
            values,
        }
    }

    fn edge_condition(
        &self,
        f: &CheckedFunction,
        xag: &mut Xag,
        from: BlockId,
        to: BlockId,
    ) -> Signal {
        let cond = self.conditions[from];
        match f.blocks[from].term {
            LTerm::Branch(c, t, e) if t != e => {
                let s = operand(&self.values, c);
                if to == t {
                    xag.create_and(cond, s)
                } else {
                    xag.create_and(cond, !s)
                }
            }
            _ => cond,
        }
    }

    /// `current := mux(cond_i, def_i, current)` folded over predecessors in
    /// source order.
    fn merge(xag: &mut Xag, incoming: &[(Signal, Signal)]) -> Signal {
        let mut current = incoming[0].1;
        for &(cond, def) in &incoming[1..] {
            current = xag.create_mux(cond, def, current);
        }
        current
    }

    fn run(&mut self, f: &CheckedFunction, xag: &mut Xag) -> Result<Vec<Signal>, LowerError> {
        let mut outputs = None;
        for &b in &f.rpo {
            let preds = &f.preds[b];
            let edges: Vec<Signal> = preds
                .iter()
                .map(|&p| self.edge_condition(f, xag, p, b))
                .collect();
            let mut slots = if b == 0 {
                self.conditions[b] = Signal::TRUE;
                vec![None; f.num_slots()]
            } else {
                let mut reach = edges[0];
                for &e in &edges[1..] {
                    reach = xag.create_or(reach, e);
                }
                self.conditions[b] = reach;
                (0..f.num_slots())
                    .map(|s| {
                        let defs: Option<Vec<(Signal, Signal)>> = preds
                            .iter()
                            .zip(&edges)
                            .map(|(&p, &e)| self.slots_out[p][s].map(|d| (e, d)))
                            .collect();
                        defs.map(|d| Self::merge(xag, &d))
                    })
                    .collect()
            };
            for inst in &f.blocks[b].insts {
                match inst {
                    LInst::Phi(r, incoming) => {
                        let defs: Vec<(Signal, Signal)> = preds
                            .iter()
                            .zip(&edges)
                            .map(|(p, &e)| {
                                let (_, v) = incoming.iter().find(|(q, _)| q == p).unwrap();
                                (e, operand(&self.values, *v))
                            })
                            .collect();
                        self.values[*r] = Some(Self::merge(xag, &defs));
                    }
                    LInst::Load(r, slot) => {
                        let s =
                            slots[*slot].ok_or_else(|| LowerError::LoadOfUninitializedSlot {
                                slot: f.slot_names[*slot].clone(),
                            })?;
                        self.values[*r] = Some(s);
                    }
                    LInst::Store(slot, v) => slots[*slot] = Some(operand(&self.values, *v)),
                    _ => {
                        let (r, s) = gate(xag, &self.values, inst).unwrap();
                        self.values[r] = Some(s);
                    }
                }
            }
            if let LTerm::Return(vals) = &f.blocks[b].term {
                outputs = Some(vals.iter().map(|&v| operand(&self.values, v)).collect());
            }
            self.slots_out[b] = slots;
        }
        Ok(outputs.expect("validated: one reachable return"))
    }
}
