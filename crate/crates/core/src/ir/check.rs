// SPDX-License-Identifier: Apache-2.0

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{BinOp, CmpPred, IrFunction, IrInst, IrType, Operand, Terminator};

/// Largest number of parameters accepted; every function must remain
/// exhaustively verifiable.
pub const MAX_INPUTS: usize = 16;

pub type BlockId = usize;
pub type ValueId = usize;
pub type SlotId = usize;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CheckError {
    #[error("control flow contains a cycle through {}", .0.join(" -> "))]
    CyclicControlFlow(Vec<String>),
    #[error("`%{0}` may be used before it is defined")]
    UseBeforeDef(String),
    #[error("`%{0}` is not a single-bit value")]
    NonBooleanValue(String),
    #[error("`%{0}` is not an `alloca` slot")]
    NotASlot(String),
    #[error("`%{0}` is defined more than once")]
    Redefinition(String),
    #[error("branch to unknown label `%{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` is defined more than once")]
    DuplicateLabel(String),
    #[error("expected exactly one reachable `ret`, found {0}")]
    ReturnCount(usize),
    #[error("`ret` returns {found} values but the signature declares {expected}")]
    ReturnArity { expected: usize, found: usize },
    #[error("phi `%{value}`: {reason}")]
    InvalidPhi { value: String, reason: String },
    #[error("function has {inputs} inputs; at most {limit} are supported")]
    TooManyInputs { inputs: usize, limit: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LOperand {
    Value(ValueId),
    Const(bool),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LInst {
    And(ValueId, LOperand, LOperand),
    Or(ValueId, LOperand, LOperand),
    Xor(ValueId, LOperand, LOperand),
    /// `a == b` on single bits.
    Eq(ValueId, LOperand, LOperand),
    Ne(ValueId, LOperand, LOperand),
    Select(ValueId, LOperand, LOperand, LOperand),
    Load(ValueId, SlotId),
    Store(SlotId, LOperand),
    /// Incoming values keyed by predecessor block.
    Phi(ValueId, Vec<(BlockId, LOperand)>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LTerm {
    Jump(BlockId),
    Branch(LOperand, BlockId, BlockId),
    Return(Vec<LOperand>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LBlock {
    pub insts: Vec<LInst>,
    pub term: LTerm,
}

/// A validated function resolved to dense value, slot and block indices.
///
/// Values `0..num_params` are the parameters. Blocks keep source order;
/// [`CheckedFunction::rpo`] lists the reachable ones in reverse postorder.
#[derive(Clone, Debug)]
pub struct CheckedFunction {
    pub func: IrFunction,
    pub blocks: Vec<LBlock>,
    pub rpo: Vec<BlockId>,
    /// Reachable predecessors of each block, in source order.
    pub preds: Vec<Vec<BlockId>>,
    pub value_names: Vec<String>,
    pub slot_names: Vec<String>,
}

impl CheckedFunction {
    pub fn name(&self) -> &str {
        &self.func.name
    }

    pub fn num_inputs(&self) -> usize {
        self.func.params.len()
    }

    pub fn num_outputs(&self) -> usize {
        self.func.ret_arity
    }

    pub fn num_values(&self) -> usize {
        self.value_names.len()
    }

    pub fn num_slots(&self) -> usize {
        self.slot_names.len()
    }

    pub fn label(&self, b: BlockId) -> &str {
        &self.func.blocks[b].label
    }

    pub fn rpo_labels(&self) -> Vec<&str> {
        self.rpo.iter().map(|&b| self.label(b)).collect()
    }

    pub fn input_names(&self) -> Vec<String> {
        self.func.params.iter().map(|p| p.name.clone()).collect()
    }
}

#[derive(Clone, Copy)]
enum Name {
    Value(ValueId),
    Slot(SlotId),
}

/// Checks a parsed function and resolves it into a [`CheckedFunction`].
pub fn validate(f: &IrFunction) -> Result<CheckedFunction, CheckError> {
    if f.params.len() > MAX_INPUTS {
        return Err(CheckError::TooManyInputs {
            inputs: f.params.len(),
            limit: MAX_INPUTS,
        });
    }
    let mut labels = HashMap::new();
    for (i, b) in f.blocks.iter().enumerate() {
        if labels.insert(b.label.as_str(), i).is_some() {
            return Err(CheckError::DuplicateLabel(b.label.clone()));
        }
    }
    let block_of = |l: &str| {
        labels
            .get(l)
            .copied()
            .ok_or_else(|| CheckError::UnknownLabel(l.to_string()))
    };

    // Name table: parameters, then every defined value or slot.
    let mut names: HashMap<&str, Name> = HashMap::new();
    let mut value_names = Vec::new();
    let mut slot_names = Vec::new();
    for p in &f.params {
        if p.ty != IrType::I1 {
            return Err(CheckError::NonBooleanValue(p.name.clone()));
        }
        if names
            .insert(&p.name, Name::Value(value_names.len()))
            .is_some()
        {
            return Err(CheckError::Redefinition(p.name.clone()));
        }
        value_names.push(p.name.clone());
    }
    for b in &f.blocks {
        for inst in &b.instructions {
            if let Some(r) = inst.result() {
                let entry = if matches!(inst, IrInst::Alloca { .. }) {
                    slot_names.push(r.to_string());
                    Name::Slot(slot_names.len() - 1)
                } else {
                    value_names.push(r.to_string());
                    Name::Value(value_names.len() - 1)
                };
                if names.insert(r, entry).is_some() {
                    return Err(CheckError::Redefinition(r.to_string()));
                }
            }
        }
    }
    let value = |op: &Operand| -> Result<LOperand, CheckError> {
        match op {
            Operand::Const(b) => Ok(LOperand::Const(*b)),
            Operand::Value(v) => match names.get(v.as_str()) {
                Some(Name::Value(id)) => Ok(LOperand::Value(*id)),
                Some(Name::Slot(_)) => Err(CheckError::NonBooleanValue(v.clone())),
                None => Err(CheckError::UseBeforeDef(v.clone())),
            },
        }
    };
    let slot = |s: &str| -> Result<SlotId, CheckError> {
        match names.get(s) {
            Some(Name::Slot(id)) => Ok(*id),
            Some(Name::Value(_)) => Err(CheckError::NotASlot(s.to_string())),
            None => Err(CheckError::UseBeforeDef(s.to_string())),
        }
    };
    let result_id = |r: &str| match names[r] {
        Name::Value(id) => id,
        Name::Slot(_) => unreachable!(),
    };

    let mut blocks = Vec::with_capacity(f.blocks.len());
    for b in &f.blocks {
        let mut insts = Vec::new();
        for inst in &b.instructions {
            let l = match inst {
                IrInst::Binary {
                    result,
                    op,
                    lhs,
                    rhs,
                } => {
                    let (r, a, c) = (result_id(result), value(lhs)?, value(rhs)?);
                    match op {
                        BinOp::And => LInst::And(r, a, c),
                        BinOp::Or => LInst::Or(r, a, c),
                        BinOp::Xor => LInst::Xor(r, a, c),
                    }
                }
                IrInst::Icmp {
                    result,
                    pred,
                    lhs,
                    rhs,
                } => {
                    let (r, a, c) = (result_id(result), value(lhs)?, value(rhs)?);
                    match pred {
                        CmpPred::Eq => LInst::Eq(r, a, c),
                        CmpPred::Ne => LInst::Ne(r, a, c),
                    }
                }
                IrInst::Select {
                    result,
                    cond,
                    then_value,
                    else_value,
                } => LInst::Select(
                    result_id(result),
                    value(cond)?,
                    value(then_value)?,
                    value(else_value)?,
                ),
                IrInst::Alloca { .. } => continue,
                IrInst::Load { result, slot: s } => LInst::Load(result_id(result), slot(s)?),
                IrInst::Store { value: v, slot: s } => LInst::Store(slot(s)?, value(v)?),
                IrInst::Phi { result, incoming } => {
                    let mut inc = Vec::new();
                    for (v, l) in incoming {
                        inc.push((block_of(l)?, value(v)?));
                    }
                    LInst::Phi(result_id(result), inc)
                }
            };
            insts.push(l);
        }
        let term = match &b.terminator {
            Terminator::Jump(l) => LTerm::Jump(block_of(l)?),
            Terminator::Branch {
                cond,
                then_label,
                else_label,
            } => LTerm::Branch(value(cond)?, block_of(then_label)?, block_of(else_label)?),
            Terminator::Return(vals) => {
                if vals.len() != f.ret_arity {
                    return Err(CheckError::ReturnArity {
                        expected: f.ret_arity,
                        found: vals.len(),
                    });
                }
                LTerm::Return(vals.iter().map(&value).collect::<Result<_, _>>()?)
            }
        };
        blocks.push(LBlock { insts, term });
    }

    let succs: Vec<Vec<BlockId>> = blocks.iter().map(|b| successors(&b.term)).collect();
    let rpo = reverse_postorder(&succs, |b| f.blocks[b].label.clone())?;
    let reachable: HashSet<BlockId> = rpo.iter().copied().collect();

    let mut preds = vec![Vec::new(); blocks.len()];
    for (b, out) in succs.iter().enumerate() {
        if !reachable.contains(&b) {
            continue;
        }
        for &s in out {
            if !preds[s].contains(&b) {
                preds[s].push(b);
            }
        }
    }

    let returns = rpo
        .iter()
        .filter(|&&b| matches!(blocks[b].term, LTerm::Return(_)))
        .count();
    if returns != 1 {
        return Err(CheckError::ReturnCount(returns));
    }

    check_definitions(f, &blocks, &rpo, &preds, &value_names, &slot_names)?;

    Ok(CheckedFunction {
        func: f.clone(),
        blocks,
        rpo,
        preds,
        value_names,
        slot_names,
    })
}

fn successors(t: &LTerm) -> Vec<BlockId> {
    match *t {
        LTerm::Jump(b) => vec![b],
        LTerm::Branch(_, t, e) if t == e => vec![t],
        LTerm::Branch(_, t, e) => vec![t, e],
        LTerm::Return(_) => vec![],
    }
}

/// Iterative DFS from the entry block. Successors are visited last-first so
/// that the `then` side of a branch precedes the `else` side in the result.
fn reverse_postorder(
    succs: &[Vec<BlockId>],
    label: impl Fn(BlockId) -> String,
) -> Result<Vec<BlockId>, CheckError> {
    #[derive(Clone, Copy, PartialEq)]
    enum Mark {
        New,
        Active,
        Done,
    }
    let mut mark = vec![Mark::New; succs.len()];
    let mut post = Vec::with_capacity(succs.len());
    // (block, index of next successor to visit, counting from the back)
    let mut stack: Vec<(BlockId, usize)> = vec![(0, 0)];
    mark[0] = Mark::Active;
    while let Some(top) = stack.last_mut() {
        let (b, next) = *top;
        if next < succs[b].len() {
            let s = succs[b][succs[b].len() - 1 - next];
            top.1 += 1;
            match mark[s] {
                Mark::New => {
                    mark[s] = Mark::Active;
                    stack.push((s, 0));
                }
                Mark::Active => {
                    let start = stack.iter().position(|&(x, _)| x == s).unwrap();
                    let mut cycle: Vec<String> =
                        stack[start..].iter().map(|&(x, _)| label(x)).collect();
                    cycle.push(label(s));
                    return Err(CheckError::CyclicControlFlow(cycle));
                }
                Mark::Done => {}
            }
        } else {
            mark[b] = Mark::Done;
            post.push(b);
            stack.pop();
        }
    }
    post.reverse();
    Ok(post)
}

/// Must-availability of values and slots along every path from the entry.
fn check_definitions(
    f: &IrFunction,
    blocks: &[LBlock],
    rpo: &[BlockId],
    preds: &[Vec<BlockId>],
    value_names: &[String],
    slot_names: &[String],
) -> Result<(), CheckError> {
    let nv = value_names.len();
    let ns = slot_names.len();
    // Slot allocation sites, recovered from the source order of allocas.
    let mut slot_block = vec![usize::MAX; ns];
    let mut k = 0;
    for (bi, b) in f.blocks.iter().enumerate() {
        for inst in &b.instructions {
            if matches!(inst, IrInst::Alloca { .. }) {
                slot_block[k] = bi;
                k += 1;
            }
        }
    }
    let mut out_values: Vec<Option<Vec<bool>>> = vec![None; blocks.len()];
    let mut out_slots: Vec<Option<Vec<bool>>> = vec![None; blocks.len()];
    let value_err = |v: ValueId| CheckError::UseBeforeDef(value_names[v].clone());
    for (i, &b) in rpo.iter().enumerate() {
        let (mut avail, mut slots) = if i == 0 {
            let mut a = vec![false; nv];
            a[..f.params.len()].fill(true);
            (a, vec![false; ns])
        } else {
            let mut a = vec![true; nv];
            let mut s = vec![true; ns];
            for &p in &preds[b] {
                let pa = out_values[p].as_ref().expect("predecessor visited in rpo");
                let ps = out_slots[p].as_ref().unwrap();
                a.iter_mut().zip(pa).for_each(|(x, &y)| *x &= y);
                s.iter_mut().zip(ps).for_each(|(x, &y)| *x &= y);
            }
            (a, s)
        };
        for (si, &sb) in slot_block.iter().enumerate() {
            if sb == b {
                slots[si] = true;
            }
        }
        let use_op = |avail: &[bool], op: &LOperand| match *op {
            LOperand::Value(v) if !avail[v] => Err(value_err(v)),
            _ => Ok(()),
        };
        let mut seen_non_phi = false;
        for inst in &blocks[b].insts {
            match inst {
                LInst::And(r, a, c)
                | LInst::Or(r, a, c)
                | LInst::Xor(r, a, c)
                | LInst::Eq(r, a, c)
                | LInst::Ne(r, a, c) => {
                    use_op(&avail, a)?;
                    use_op(&avail, c)?;
                    avail[*r] = true;
                }
                LInst::Select(r, s, t, e) => {
                    use_op(&avail, s)?;
                    use_op(&avail, t)?;
                    use_op(&avail, e)?;
                    avail[*r] = true;
                }
                LInst::Load(r, s) => {
                    if !slots[*s] {
                        return Err(CheckError::UseBeforeDef(slot_names[*s].clone()));
                    }
                    avail[*r] = true;
                }
                LInst::Store(s, v) => {
                    if !slots[*s] {
                        return Err(CheckError::UseBeforeDef(slot_names[*s].clone()));
                    }
                    use_op(&avail, v)?;
                }
                LInst::Phi(r, incoming) => {
                    let name = &value_names[*r];
                    let bad = |reason: String| CheckError::InvalidPhi {
                        value: name.clone(),
                        reason,
                    };
                    if seen_non_phi {
                        return Err(bad("phi nodes must lead their block".into()));
                    }
                    for &(p, _) in incoming {
                        if !preds[b].contains(&p) {
                            return Err(bad(format!(
                                "`%{}` is not a predecessor",
                                f.blocks[p].label
                            )));
                        }
                    }
                    for &p in &preds[b] {
                        let hits: Vec<_> = incoming.iter().filter(|(q, _)| *q == p).collect();
                        if hits.is_empty() {
                            return Err(bad(format!(
                                "no value for predecessor `%{}`",
                                f.blocks[p].label
                            )));
                        }
                        if hits.iter().any(|(_, v)| *v != hits[0].1) {
                            return Err(bad(format!(
                                "conflicting values for predecessor `%{}`",
                                f.blocks[p].label
                            )));
                        }
                        use_op(out_values[p].as_ref().unwrap(), &hits[0].1)?;
                    }
                    avail[*r] = true;
                    continue;
                }
            }
            seen_non_phi = true;
        }
        match &blocks[b].term {
            LTerm::Branch(c, _, _) => use_op(&avail, c)?,
            LTerm::Return(vals) => {
                for v in vals {
                    use_op(&avail, v)?;
                }
            }
            LTerm::Jump(_) => {}
        }
        out_values[b] = Some(avail);
        out_slots[b] = Some(slots);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ir::parse_module;

    fn check(src: &str) -> Result<CheckedFunction, CheckError> {
        validate(&parse_module(src).unwrap().functions[0])
    }

    #[test]
    fn self_loop_is_cyclic() {
        let src = "define i1 @f(i1 %a) {\nentry:\n  br label %l\nl:\n  br i1 %a, label %l, label %x\nx:\n  ret i1 %a\n}";
        assert_eq!(
            check(src).unwrap_err(),
            CheckError::CyclicControlFlow(vec!["l".into(), "l".into()])
        );
    }

    #[test]
    fn undefined_return_value() {
        let err = check("define i1 @f(i1 %a) { entry: ret i1 %undefined }").unwrap_err();
        assert_eq!(err, CheckError::UseBeforeDef("undefined".into()));
    }

    #[test]
    fn def_on_one_path_only() {
        let src = r"define i1 @f(i1 %a, i1 %b) {
entry:
  br i1 %a, label %t, label %j
t:
  %x = and i1 %a, %b
  br label %j
j:
  ret i1 %x
}";
        assert_eq!(
            check(src).unwrap_err(),
            CheckError::UseBeforeDef("x".into())
        );
    }

    #[test]
    fn non_boolean_parameter() {
        let err = check("define i1 @f(i8 %a) { entry: ret i1 true }").unwrap_err();
        assert_eq!(err, CheckError::NonBooleanValue("a".into()));
    }

    #[test]
    fn slot_misuse() {
        let src =
            "define i1 @f(i1 %a) {\nentry:\n  %s = alloca i1\n  %x = and i1 %s, %a\n  ret i1 %x\n}";
        assert_eq!(
            check(src).unwrap_err(),
            CheckError::NonBooleanValue("s".into())
        );
        let src = "define i1 @f(i1 %a) {\nentry:\n  %x = load i1, i1* %a\n  ret i1 %x\n}";
        assert_eq!(check(src).unwrap_err(), CheckError::NotASlot("a".into()));
    }

    #[test]
    fn phi_must_cover_predecessors() {
        let src = r"define i1 @f(i1 %a, i1 %b) {
entry:
  br i1 %a, label %t, label %j
t:
  br label %j
j:
  %p = phi i1 [ %b, %t ]
  ret i1 %p
}";
        assert!(matches!(
            check(src).unwrap_err(),
            CheckError::InvalidPhi { .. }
        ));
    }

    #[test]
    fn too_many_inputs() {
        let params: Vec<String> = (0..17).map(|i| format!("i1 %x{i}")).collect();
        let src = format!(
            "define i1 @f({}) {{ entry: ret i1 %x0 }}",
            params.join(", ")
        );
        assert_eq!(
            check(&src).unwrap_err(),
            CheckError::TooManyInputs {
                inputs: 17,
                limit: 16
            }
        );
    }

    #[test]
    fn rpo_lists_then_before_else() {
        let src = r"define i1 @f(i1 %a, i1 %b) {
entry:
  br i1 %a, label %t, label %e
e:
  br label %j
t:
  br label %j
j:
  ret i1 %b
}";
        assert_eq!(
            check(src).unwrap().rpo_labels(),
            vec!["entry", "t", "e", "j"]
        );
    }
}
