// SPDX-License-Identifier: Apache-2.0

//! Exact synthesis of XAGs with a minimum number of AND gates for functions
//! of at most four inputs.
//!
//! AND gate `i` computes `p_i = L_a · L_b` where both operands are XOR
//! combinations of the inputs and the earlier products; the output is an
//! affine combination of the inputs, the constant and all products. A
//! constant inside an AND operand can always be moved into the operands of
//! later gates and the output (`(L ⊕ 1)·M = L·M ⊕ M`), so operands are
//! enumerated without constants. Operand pairs are enumerated as integer
//! masks in ascending order, which makes the first solution deterministic.
//! The output combination is recovered by Gaussian elimination over GF(2).

use std::fmt;

use crate::truth_table::TruthTable;
use crate::xag::{Signal, Xag};

use super::npn::to_u16;

/// Number of template inputs.
pub const TEMPLATE_INPUTS: usize = 4;
/// Largest AND budget the search supports.
pub const MAX_ANDS: usize = 3;

const INPUT_TABLES: [u16; TEMPLATE_INPUTS] = [0xAAAA, 0xCCCC, 0xF0F0, 0xFF00];
const PRODUCT_SHIFT: u32 = 4;
const CONST_BIT: u8 = 1 << 7;

/// An XOR of template inputs (mask bits 0..4) and products (bits 4..7),
/// optionally complemented.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Affine {
    pub mask: u8,
    pub negated: bool,
}

impl Affine {
    fn from_combo(c: u8) -> Self {
        Affine {
            mask: c & !CONST_BIT,
            negated: c & CONST_BIT != 0,
        }
    }

    fn table(&self, products: &[u16]) -> u16 {
        let mut t = if self.negated { 0xFFFF } else { 0 };
        for (i, &x) in INPUT_TABLES.iter().enumerate() {
            if self.mask >> i & 1 == 1 {
                t ^= x;
            }
        }
        for (j, &p) in products.iter().enumerate() {
            if self.mask >> (PRODUCT_SHIFT as usize + j) & 1 == 1 {
                t ^= p;
            }
        }
        t
    }

    pub fn xor_count(&self) -> usize {
        (self.mask.count_ones() as usize).saturating_sub(1)
    }
}

impl fmt::Display for Affine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms = Vec::new();
        for i in 0..7 {
            if self.mask >> i & 1 == 1 {
                if i < 4 {
                    terms.push(format!("x{i}"));
                } else {
                    terms.push(format!("p{}", i - 4));
                }
            }
        }
        let body = if terms.is_empty() {
            "0".to_string()
        } else {
            terms.join(" ^ ")
        };
        if self.negated {
            write!(f, "!({body})")
        } else {
            f.write_str(&body)
        }
    }
}

/// A single-output XAG over four template inputs.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct XagTemplate {
    /// Operands of each AND gate, in creation order.
    pub ands: Vec<[Affine; 2]>,
    pub output: Affine,
}

impl XagTemplate {
    pub fn and_count(&self) -> usize {
        self.ands.len()
    }

    /// XOR gates needed when every affine combination is built as a chain.
    pub fn xor_count(&self) -> usize {
        self.ands
            .iter()
            .flat_map(|ops| ops.iter())
            .chain(std::iter::once(&self.output))
            .map(Affine::xor_count)
            .sum()
    }

    /// Truth table over the four template inputs.
    pub fn table(&self) -> u16 {
        let mut products = Vec::with_capacity(self.ands.len());
        for [a, b] in &self.ands {
            products.push(a.table(&products) & b.table(&products));
        }
        self.output.table(&products)
    }

    /// Builds the template inside `xag` on top of the given input signals.
    pub fn instantiate(&self, xag: &mut Xag, inputs: &[Signal; TEMPLATE_INPUTS]) -> Signal {
        fn linear(xag: &mut Xag, a: &Affine, inputs: &[Signal], products: &[Signal]) -> Signal {
            let mut s = Signal::FALSE;
            for (i, &x) in inputs.iter().enumerate() {
                if a.mask >> i & 1 == 1 {
                    s = xag.create_xor(s, x);
                }
            }
            for (j, &p) in products.iter().enumerate() {
                if a.mask >> (PRODUCT_SHIFT as usize + j) & 1 == 1 {
                    s = xag.create_xor(s, p);
                }
            }
            s.complement_if(a.negated)
        }
        let mut products = Vec::with_capacity(self.ands.len());
        for [a, b] in &self.ands {
            let la = linear(xag, a, inputs, &products);
            let lb = linear(xag, b, inputs, &products);
            let p = xag.create_and(la, lb);
            products.push(p);
        }
        linear(xag, &self.output, inputs, &products)
    }
}

impl fmt::Display for XagTemplate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (j, [a, b]) in self.ands.iter().enumerate() {
            write!(f, "p{j} = ({a}) & ({b}); ")?;
        }
        write!(f, "out = {}", self.output)
    }
}

/// GF(2) basis over 16-bit tables, remembering which generators produce
/// each basis vector.
#[derive(Clone)]
struct Basis {
    // (pivot bit, vector, combination), pivots strictly decreasing
    rows: Vec<(u16, u16, u8)>,
}

impl Basis {
    fn new() -> Self {
        Basis {
            rows: Vec::with_capacity(8),
        }
    }

    fn reduce(&self, mut v: u16, mut c: u8) -> (u16, u8) {
        for &(pivot, row, combo) in &self.rows {
            if v & pivot != 0 {
                v ^= row;
                c ^= combo;
            }
        }
        (v, c)
    }

    fn insert(&mut self, v: u16, c: u8) {
        let (v, c) = self.reduce(v, c);
        if v == 0 {
            return;
        }
        let pivot = 1u16 << (15 - v.leading_zeros());
        // keep earlier rows free of the new pivot so one pass reduces
        for row in &mut self.rows {
            if row.1 & pivot != 0 {
                row.1 ^= v;
                row.2 ^= c;
            }
        }
        let pos = self
            .rows
            .iter()
            .position(|r| r.0 < pivot)
            .unwrap_or(self.rows.len());
        self.rows.insert(pos, (pivot, v, c));
    }
}

struct Search {
    target: u16,
    num_inputs: usize,
    budget: usize,
    products: Vec<u16>,
    pairs: Vec<[u8; 2]>,
}

impl Search {
    fn candidates(&self) -> Vec<(u8, u16)> {
        let level = self.products.len();
        let mut allowed = (1u8 << self.num_inputs) - 1;
        for j in 0..level {
            allowed |= 1 << (PRODUCT_SHIFT as usize + j);
        }
        (1..=allowed)
            .filter(|m| m & !allowed == 0)
            .map(|m| {
                let aff = Affine {
                    mask: m,
                    negated: false,
                };
                (m, aff.table(&self.products))
            })
            .collect()
    }

    fn base_basis(&self) -> Basis {
        let mut b = Basis::new();
        b.insert(0xFFFF, CONST_BIT);
        for (i, &x) in INPUT_TABLES.iter().enumerate().take(self.num_inputs) {
            b.insert(x, 1 << i);
        }
        for (j, &p) in self.products.iter().enumerate() {
            b.insert(p, 1 << (PRODUCT_SHIFT as usize + j));
        }
        b
    }

    fn finish(&self, combo: u8) -> XagTemplate {
        XagTemplate {
            ands: self
                .pairs
                .iter()
                .map(|&[a, b]| {
                    [
                        Affine {
                            mask: a,
                            negated: false,
                        },
                        Affine {
                            mask: b,
                            negated: false,
                        },
                    ]
                })
                .collect(),
            output: Affine::from_combo(combo),
        }
    }

    fn run(&mut self) -> Option<XagTemplate> {
        let level = self.products.len();
        if level == self.budget {
            let (r, c) = self.base_basis().reduce(self.target, 0);
            return (r == 0).then(|| self.finish(c));
        }
        let cands = self.candidates();
        if level + 1 == self.budget {
            // Last gate: t ∈ span(B ∪ {p}) iff reduce(t) is 0 or equals reduce(p).
            let basis = self.base_basis();
            let (rt, ct) = basis.reduce(self.target, 0);
            let bit = 1u8 << (PRODUCT_SHIFT as usize + level);
            for (i, &(ma, ta)) in cands.iter().enumerate() {
                for &(mb, tb) in &cands[i + 1..] {
                    let p = ta & tb;
                    let (rp, cp) = basis.reduce(p, 0);
                    if rt == 0 || rt == rp {
                        self.pairs.push([ma, mb]);
                        self.products.push(p);
                        let combo = if rt == 0 { ct } else { ct ^ cp ^ bit };
                        let t = self.finish(combo);
                        self.pairs.pop();
                        self.products.pop();
                        return Some(t);
                    }
                }
            }
            return None;
        }
        for (i, &(ma, ta)) in cands.iter().enumerate() {
            for &(mb, tb) in &cands[i + 1..] {
                self.pairs.push([ma, mb]);
                self.products.push(ta & tb);
                let found = self.run();
                self.pairs.pop();
                self.products.pop();
                if found.is_some() {
                    return found;
                }
            }
        }
        None
    }
}

/// Searches for a template realizing `t` with exactly `budget` AND gates
/// (some of which may be unused by the output). Returns `None` when no such
/// structure exists.
pub fn exact_synthesize(t: &TruthTable, budget: usize) -> Option<XagTemplate> {
    assert!(
        t.num_vars() <= TEMPLATE_INPUTS,
        "exact synthesis supports at most 4 inputs"
    );
    synthesize_u16(to_u16(t), t.num_vars(), budget)
}

/// As [`exact_synthesize`] for a raw 4-input table depending only on its
/// first `num_inputs` variables.
pub fn synthesize_u16(target: u16, num_inputs: usize, budget: usize) -> Option<XagTemplate> {
    assert!(
        budget <= MAX_ANDS,
        "AND budget above {MAX_ANDS} is not supported"
    );
    assert!(num_inputs <= TEMPLATE_INPUTS);
    let mut s = Search {
        target,
        num_inputs,
        budget,
        products: Vec::with_capacity(budget),
        pairs: Vec::with_capacity(budget),
    };
    s.run()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn maj3() -> TruthTable {
        TruthTable::from_u64(3, 0xE8)
    }

    #[test]
    fn projection_needs_no_and() {
        let t = exact_synthesize(&TruthTable::var(1, 0), 0).unwrap();
        assert_eq!(t.and_count(), 0);
        assert_eq!(
            t.output,
            Affine {
                mask: 1,
                negated: false
            }
        );
    }

    #[test]
    fn majority_is_not_affine() {
        // Independent check: majority differs from all 2^4 affine functions
        // of three variables.
        for combo in 0u8..16 {
            let mut f = 0u8;
            for x in 0..8u8 {
                let bits = [x & 1, (x >> 1) & 1, (x >> 2) & 1];
                let v = (combo & 1)
                    ^ (bits[0] & (combo >> 1))
                    ^ (bits[1] & (combo >> 2) & 1)
                    ^ (bits[2] & (combo >> 3) & 1);
                f |= (v & 1) << x;
            }
            assert_ne!(f, 0xE8);
        }
        assert!(exact_synthesize(&maj3(), 0).is_none());
    }

    #[test]
    fn majority_with_one_and() {
        let t = exact_synthesize(&maj3(), 1).unwrap();
        assert_eq!(t.and_count(), 1);
        assert_eq!(t.table(), 0xE8E8);
        assert_eq!(t.xor_count(), 3);
        let mut g = Xag::new();
        let ins: Vec<Signal> = (0..3).map(|i| g.add_input(format!("x{i}"))).collect();
        let s = t.instantiate(&mut g, &[ins[0], ins[1], ins[2], Signal::FALSE]);
        g.add_output(s, "f");
        assert_eq!(g.output_truth_tables().unwrap()[0].as_u64(), 0xE8);
        assert_eq!((g.count_ands(), g.count_xors()), (1, 3));
    }

    #[test]
    fn and4_needs_three() {
        let t = TruthTable::from_u64(4, 0x8000);
        assert!(exact_synthesize(&t, 2).is_none());
        let tpl = exact_synthesize(&t, 3).unwrap();
        assert_eq!(tpl.table(), 0x8000);
    }

    #[test]
    fn basis_membership() {
        let mut b = Basis::new();
        b.insert(0xAAAA, 1);
        b.insert(0xCCCC, 2);
        assert_eq!(b.reduce(0x6666, 0), (0, 3));
        assert_ne!(b.reduce(0x8888, 0).0, 0);
    }
}
