// SPDX-License-Identifier: Apache-2.0

//! Compiles single-bit classical functions into quantum oracles.
//!
//! The flow is: textual IR ([`ir`]) → XOR-AND-inverter graph ([`xag`]) →
//! AND-count optimization ([`opt`]) → reversible X/CNOT/CCNOT circuit
//! ([`circuit`]) → QIR-flavored LLVM text ([`qir`]). The [`sim`] module
//! holds the reference semantics used to verify every stage.

pub mod circuit;
pub mod ir;
pub mod opt;
pub mod pipeline;
pub mod qir;
pub mod sim;
pub mod truth_table;
pub mod xag;

pub use truth_table::TruthTable;
pub use xag::{Signal, Xag};
