// SPDX-License-Identifier: Apache-2.0

//! The textual IR subset: single-bit SSA functions with an acyclic control
//! flow graph, optionally using `alloca`/`load`/`store` slots in the shape
//! produced by register-to-memory demotion.

mod check;
mod lower;
mod parse;

use std::fmt;

pub use check::{
    validate, BlockId, CheckError, CheckedFunction, LBlock, LInst, LOperand, LTerm, SlotId,
    ValueId, MAX_INPUTS,
};
pub use lower::{ir_to_xag, ir_to_xag_with, IfConversion, LowerError, PathState};
pub use parse::{parse_module, ParseError};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrModule {
    pub source_name: String,
    pub functions: Vec<IrFunction>,
}

impl IrModule {
    pub fn function(&self, name: &str) -> Option<&IrFunction> {
        self.functions.iter().find(|f| f.name == name)
    }

    pub fn function_names(&self) -> Vec<&str> {
        self.functions.iter().map(|f| f.name.as_str()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IrType {
    I1,
    /// Any other integer width; parsed so it can be reported, never lowered.
    Int(u32),
}

impl fmt::Display for IrType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            IrType::I1 => f.write_str("i1"),
            IrType::Int(w) => write!(f, "i{w}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Param {
    pub name: String,
    pub ty: IrType,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrFunction {
    pub name: String,
    /// Linkage and visibility keywords between `define` and the return type.
    pub linkage: Vec<String>,
    pub params: Vec<Param>,
    pub ret_arity: usize,
    pub blocks: Vec<IrBlock>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IrBlock {
    pub label: String,
    pub instructions: Vec<IrInst>,
    pub terminator: Terminator,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Operand {
    Value(String),
    Const(bool),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinOp {
    And,
    Or,
    Xor,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CmpPred {
    Eq,
    Ne,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Opcode {
    And,
    Or,
    Xor,
    Select,
    IcmpEq,
    IcmpNe,
    Alloca,
    Load,
    Store,
    Phi,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IrInst {
    Binary {
        result: String,
        op: BinOp,
        lhs: Operand,
        rhs: Operand,
    },
    Icmp {
        result: String,
        pred: CmpPred,
        lhs: Operand,
        rhs: Operand,
    },
    Select {
        result: String,
        cond: Operand,
        then_value: Operand,
        else_value: Operand,
    },
    Alloca {
        result: String,
    },
    Load {
        result: String,
        slot: String,
    },
    Store {
        value: Operand,
        slot: String,
    },
    Phi {
        result: String,
        incoming: Vec<(Operand, String)>,
    },
}

impl IrInst {
    pub fn opcode(&self) -> Opcode {
        match self {
            IrInst::Binary { op: BinOp::And, .. } => Opcode::And,
            IrInst::Binary { op: BinOp::Or, .. } => Opcode::Or,
            IrInst::Binary { op: BinOp::Xor, .. } => Opcode::Xor,
            IrInst::Icmp {
                pred: CmpPred::Eq, ..
            } => Opcode::IcmpEq,
            IrInst::Icmp {
                pred: CmpPred::Ne, ..
            } => Opcode::IcmpNe,
            IrInst::Select { .. } => Opcode::Select,
            IrInst::Alloca { .. } => Opcode::Alloca,
            IrInst::Load { .. } => Opcode::Load,
            IrInst::Store { .. } => Opcode::Store,
            IrInst::Phi { .. } => Opcode::Phi,
        }
    }

    pub fn result(&self) -> Option<&str> {
        match self {
            IrInst::Binary { result, .. }
            | IrInst::Icmp { result, .. }
            | IrInst::Select { result, .. }
            | IrInst::Alloca { result }
            | IrInst::Load { result, .. }
            | IrInst::Phi { result, .. } => Some(result),
            IrInst::Store { .. } => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminator {
    Jump(String),
    Branch {
        cond: Operand,
        then_label: String,
        else_label: String,
    },
    Return(Vec<Operand>),
}

impl Terminator {
    pub fn successors(&self) -> Vec<&str> {
        match self {
            Terminator::Jump(l) => vec![l],
            Terminator::Branch {
                then_label,
                else_label,
                ..
            } => vec![then_label, else_label],
            Terminator::Return(_) => vec![],
        }
    }
}

fn is_plain_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '-' | '$' | '.' | '_'))
        && (!s.starts_with(|c: char| c.is_ascii_digit()) || s.chars().all(|c| c.is_ascii_digit()))
}

/// Prints a local name, quoting it when it contains characters outside
/// the bare identifier set.
pub(crate) fn fmt_name(name: &str) -> String {
    if is_plain_name(name) {
        name.to_string()
    } else {
        format!("\"{name}\"")
    }
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Value(v) => write!(f, "%{}", fmt_name(v)),
            Operand::Const(b) => write!(f, "{b}"),
        }
    }
}

impl fmt::Display for IrInst {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(r) = self.result() {
            write!(f, "%{} = ", fmt_name(r))?;
        }
        match self {
            IrInst::Binary { op, lhs, rhs, .. } => {
                let op = match op {
                    BinOp::And => "and",
                    BinOp::Or => "or",
                    BinOp::Xor => "xor",
                };
                write!(f, "{op} i1 {lhs}, {rhs}")
            }
            IrInst::Icmp { pred, lhs, rhs, .. } => {
                let p = match pred {
                    CmpPred::Eq => "eq",
                    CmpPred::Ne => "ne",
                };
                write!(f, "icmp {p} i1 {lhs}, {rhs}")
            }
            IrInst::Select {
                cond,
                then_value,
                else_value,
                ..
            } => write!(f, "select i1 {cond}, i1 {then_value}, i1 {else_value}"),
            IrInst::Alloca { .. } => write!(f, "alloca i1"),
            IrInst::Load { slot, .. } => write!(f, "load i1, i1* %{}", fmt_name(slot)),
            IrInst::Store { value, slot } => write!(f, "store i1 {value}, i1* %{}", fmt_name(slot)),
            IrInst::Phi { incoming, .. } => {
                write!(f, "phi i1 ")?;
                for (i, (v, l)) in incoming.iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "[ {v}, %{} ]", fmt_name(l))?;
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for Terminator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Terminator::Jump(l) => write!(f, "br label %{}", fmt_name(l)),
            Terminator::Branch {
                cond,
                then_label,
                else_label,
            } => write!(
                f,
                "br i1 {cond}, label %{}, label %{}",
                fmt_name(then_label),
                fmt_name(else_label)
            ),
            Terminator::Return(vals) if vals.len() == 1 => write!(f, "ret i1 {}", vals[0]),
            Terminator::Return(vals) => {
                let tys = vec!["i1"; vals.len()].join(", ");
                let vs: Vec<String> = vals.iter().map(|v| format!("i1 {v}")).collect();
                write!(f, "ret {{ {tys} }} {{ {} }}", vs.join(", "))
            }
        }
    }
}

impl fmt::Display for IrFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "define ")?;
        for l in &self.linkage {
            write!(f, "{l} ")?;
        }
        if self.ret_arity == 1 {
            write!(f, "i1")?;
        } else {
            write!(f, "{{ {} }}", vec!["i1"; self.ret_arity].join(", "))?;
        }
        let params: Vec<String> = self
            .params
            .iter()
            .map(|p| format!("{} %{}", p.ty, fmt_name(&p.name)))
            .collect();
        writeln!(f, " @{}({}) {{", fmt_name(&self.name), params.join(", "))?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "{}:", fmt_name(&b.label))?;
            for inst in &b.instructions {
                writeln!(f, "  {inst}")?;
            }
            writeln!(f, "  {}", b.terminator)?;
        }
        writeln!(f, "}}")
    }
}

impl fmt::Display for IrModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.source_name.is_empty() {
            writeln!(f, "source_filename = \"{}\"", self.source_name)?;
            writeln!(f)?;
        }
        for (i, func) in self.functions.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{func}")?;
        }
        Ok(())
    }
}
