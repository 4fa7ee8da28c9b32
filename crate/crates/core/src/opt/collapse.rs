// SPDX-License-Identifier: Apache-2.0

//! Resynthesis from collapsed truth tables for networks with few inputs.

use std::collections::HashMap;

use super::database::XagDatabase;
use super::exact::TEMPLATE_INPUTS;
use super::OptError;
use crate::truth_table::TruthTable;
use crate::xag::{Signal, Xag};

/// Largest input count accepted by [`collapse_resynthesize`].
pub const COLLAPSE_LIMIT: usize = 8;

struct Resynth<'a> {
    db: &'a XagDatabase,
    out: Xag,
    inputs: Vec<Signal>,
    memo: HashMap<TruthTable, Signal>,
}

impl Resynth<'_> {
    fn build(&mut self, f: &TruthTable) -> Signal {
        if let Some(&s) = self.memo.get(f) {
            return s;
        }
        if let Some(&s) = self.memo.get(&!f) {
            return !s;
        }
        let support = f.support();
        let s = if support.len() <= TEMPLATE_INPUTS {
            let local = f.shrink_to(&support);
            let leaves: Vec<Signal> = support.iter().map(|&v| self.inputs[v]).collect();
            let m = self
                .db
                .lookup(&local)
                .expect("database covers every 4-input class");
            m.instantiate(&mut self.out, &leaves)
        } else {
            // f = f0 ⊕ (x ∧ (f0 ⊕ f1)), splitting on the variable that
            // leaves the smallest cofactor supports
            let x = *support
                .iter()
                .min_by_key(|&&v| f.cofactor0(v).support().len() + f.cofactor1(v).support().len())
                .unwrap();
            let f0 = f.cofactor0(x);
            let d = &f0 ^ &f.cofactor1(x);
            debug_assert_eq!(&f0 ^ &(&TruthTable::var(f.num_vars(), x) & &d), *f);
            let s0 = self.build(&f0);
            let sd = self.build(&d);
            let p = self.out.create_and(self.inputs[x], sd);
            self.out.create_xor(s0, p)
        };
        self.memo.insert(f.clone(), s);
        s
    }
}

/// Collapses every output to its truth table and rebuilds it by Shannon
/// decomposition down to database templates.
pub fn collapse_resynthesize(g: &Xag, db: &XagDatabase, threshold: usize) -> Result<Xag, OptError> {
    let limit = threshold.min(COLLAPSE_LIMIT);
    if g.num_inputs() > limit {
        return Err(OptError::TooManyInputs {
            inputs: g.num_inputs(),
            limit,
        });
    }
    let tables = g.output_truth_tables().expect("input count checked above");
    let mut out = Xag::new();
    let inputs = g
        .input_names()
        .iter()
        .map(|n| out.add_input(n.clone()))
        .collect();
    let mut r = Resynth {
        db,
        out,
        inputs,
        memo: HashMap::new(),
    };
    let signals: Vec<Signal> = tables.iter().map(|t| r.build(t)).collect();
    for (s, name) in signals.into_iter().zip(g.output_names()) {
        r.out.add_output(s, name.clone());
    }
    Ok(r.out.cleanup())
}
