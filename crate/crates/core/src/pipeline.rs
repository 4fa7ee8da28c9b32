// SPDX-License-Identifier: Apache-2.0

//! The end-to-end flow for one function, shared by the CLI and tests.

use std::fmt::Write as _;

use serde::Serialize;
use thiserror::Error;

use crate::circuit::{compile, CircuitStats, CompileError, ReversibleCircuit};
use crate::ir::{
    ir_to_xag_with, validate, CheckError, CheckedFunction, IfConversion, IrFunction, LowerError,
};
use crate::opt::{optimize, OptError, OptimizeOptions, XagDatabase};
use crate::sim::{verify_oracle, Reference, SimError, VerificationReport, VerifyMode};
use crate::xag::Xag;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Check(#[from] CheckError),
    #[error(transparent)]
    Lower(#[from] LowerError),
    #[error(transparent)]
    Opt(#[from] OptError),
    #[error(transparent)]
    Compile(#[from] CompileError),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Clone, Debug, Default)]
pub struct PipelineOptions {
    pub if_conversion: IfConversion,
    pub optimize: OptimizeOptions,
    /// Verify the circuit against the IR interpreter.
    pub verify: Option<VerifyMode>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Stats {
    pub function: String,
    pub inputs: usize,
    pub outputs: usize,
    pub initial_ands: usize,
    pub initial_xors: usize,
    pub optimized_ands: usize,
    pub optimized_xors: usize,
    pub circuit: CircuitStats,
}

impl Stats {
    /// `key: value` lines in a fixed order.
    pub fn to_text(&self) -> String {
        let c = &self.circuit;
        let mut s = String::new();
        let rows: [(&str, String); 13] = [
            ("function", self.function.clone()),
            ("inputs", self.inputs.to_string()),
            ("outputs", self.outputs.to_string()),
            ("initial_and", self.initial_ands.to_string()),
            ("initial_xor", self.initial_xors.to_string()),
            ("optimized_and", self.optimized_ands.to_string()),
            ("optimized_xor", self.optimized_xors.to_string()),
            ("qubits", c.qubits.to_string()),
            ("helpers", c.helpers.to_string()),
            ("x", c.x.to_string()),
            ("cnot", c.cnot.to_string()),
            ("ccnot", c.ccnot.to_string()),
            ("gates", (c.x + c.cnot + c.ccnot).to_string()),
        ];
        for (k, v) in rows {
            writeln!(s, "{k}: {v}").unwrap();
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub function: CheckedFunction,
    pub initial: Xag,
    pub optimized: Xag,
    pub circuit: ReversibleCircuit,
    pub stats: Stats,
    pub report: Option<VerificationReport>,
}

pub fn compile_function(
    f: &IrFunction,
    opts: &PipelineOptions,
    db: &XagDatabase,
) -> Result<Compiled, PipelineError> {
    let checked = validate(f)?;
    let initial = ir_to_xag_with(&checked, opts.if_conversion)?;
    let optimized = optimize(&initial, &opts.optimize, db)?;
    let circuit = compile(&optimized)?;
    let report = match opts.verify {
        Some(mode) => Some(verify_oracle(
            &circuit,
            Reference::Function(&checked),
            mode,
        )?),
        None => None,
    };
    let stats = Stats {
        function: checked.name().to_string(),
        inputs: checked.num_inputs(),
        outputs: checked.num_outputs(),
        initial_ands: initial.count_ands(),
        initial_xors: initial.count_xors(),
        optimized_ands: optimized.count_ands(),
        optimized_xors: optimized.count_xors(),
        circuit: circuit.stats(),
    };
    Ok(Compiled {
        function: checked,
        initial,
        optimized,
        circuit,
        stats,
        report,
    })
}
