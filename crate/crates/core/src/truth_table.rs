// SPDX-License-Identifier: Apache-2.0

//! Dense truth tables over up to 16 variables.
//!
//! Bit `x` of a table holds `f(x)`, where variable `i` is bit `i` of the row
//! index `x` (LSB-first).

use std::fmt;
use std::ops::{BitAnd, BitOr, BitXor, Not};

/// Largest variable count a [`TruthTable`] may have.
pub const MAX_VARS: usize = 16;

const VAR_MASKS: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TruthTable {
    num_vars: usize,
    words: Vec<u64>,
}

fn word_count(num_vars: usize) -> usize {
    if num_vars <= 6 {
        1
    } else {
        1 << (num_vars - 6)
    }
}

fn tail_mask(num_vars: usize) -> u64 {
    if num_vars >= 6 {
        u64::MAX
    } else {
        (1u64 << (1u32 << num_vars)) - 1
    }
}

impl TruthTable {
    /// The constant-false function over `num_vars` variables.
    pub fn zero(num_vars: usize) -> Self {
        assert!(
            num_vars <= MAX_VARS,
            "truth tables support at most {MAX_VARS} variables"
        );
        TruthTable {
            num_vars,
            words: vec![0; word_count(num_vars)],
        }
    }

    pub fn one(num_vars: usize) -> Self {
        !Self::zero(num_vars)
    }

    /// The projection onto variable `var`.
    pub fn var(num_vars: usize, var: usize) -> Self {
        assert!(
            var < num_vars,
            "variable {var} out of range for {num_vars} variables"
        );
        let mut t = Self::zero(num_vars);
        if var < 6 {
            for w in &mut t.words {
                *w = VAR_MASKS[var];
            }
        } else {
            let stride = 1usize << (var - 6);
            for (i, w) in t.words.iter_mut().enumerate() {
                if i & stride != 0 {
                    *w = u64::MAX;
                }
            }
        }
        t.normalize();
        t
    }

    /// Builds a table of up to 6 variables from the low `2^num_vars` bits.
    pub fn from_u64(num_vars: usize, bits: u64) -> Self {
        assert!(num_vars <= 6);
        let mut t = TruthTable {
            num_vars,
            words: vec![bits],
        };
        t.normalize();
        t
    }

    /// Builds a table by evaluating `f` on every row.
    pub fn from_fn(num_vars: usize, mut f: impl FnMut(usize) -> bool) -> Self {
        let mut t = Self::zero(num_vars);
        for x in 0..t.num_rows() {
            if f(x) {
                t.set_bit(x, true);
            }
        }
        t
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_rows(&self) -> usize {
        1 << self.num_vars
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// The table as a single word; only valid for `num_vars <= 6`.
    pub fn as_u64(&self) -> u64 {
        assert!(self.num_vars <= 6, "table does not fit in one word");
        self.words[0]
    }

    pub fn bit(&self, x: usize) -> bool {
        (self.words[x >> 6] >> (x & 63)) & 1 == 1
    }

    pub fn set_bit(&mut self, x: usize, value: bool) {
        debug_assert!(x < self.num_rows());
        let m = 1u64 << (x & 63);
        if value {
            self.words[x >> 6] |= m;
        } else {
            self.words[x >> 6] &= !m;
        }
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn is_one(&self) -> bool {
        (!self.clone()).is_zero()
    }

    fn normalize(&mut self) {
        let m = tail_mask(self.num_vars);
        if let Some(w) = self.words.last_mut() {
            *w &= m;
        }
    }

    /// Negative cofactor `f|var=0`, kept over the same variable set.
    pub fn cofactor0(&self, var: usize) -> Self {
        self.cofactor(var, false)
    }

    /// Positive cofactor `f|var=1`, kept over the same variable set.
    pub fn cofactor1(&self, var: usize) -> Self {
        self.cofactor(var, true)
    }

    fn cofactor(&self, var: usize, positive: bool) -> Self {
        assert!(var < self.num_vars);
        let mut t = self.clone();
        if var < 6 {
            let shift = 1u32 << var;
            let hi = VAR_MASKS[var];
            for w in &mut t.words {
                *w = if positive {
                    (*w & hi) | ((*w & hi) >> shift)
                } else {
                    (*w & !hi) | ((*w & !hi) << shift)
                };
            }
        } else {
            let stride = 1usize << (var - 6);
            for i in 0..t.words.len() {
                if i & stride == 0 {
                    let src = if positive { i | stride } else { i };
                    let v = self.words[src];
                    t.words[i] = v;
                    t.words[i | stride] = v;
                }
            }
        }
        t.normalize();
        t
    }

    pub fn depends_on(&self, var: usize) -> bool {
        self.cofactor0(var) != self.cofactor1(var)
    }

    /// Variables the function actually depends on, ascending.
    pub fn support(&self) -> Vec<usize> {
        (0..self.num_vars).filter(|&v| self.depends_on(v)).collect()
    }

    /// Re-expresses the table over the variable subset `vars` (ascending or
    /// not); the function must not depend on any variable outside `vars`.
    pub fn shrink_to(&self, vars: &[usize]) -> Self {
        debug_assert!(self.support().iter().all(|v| vars.contains(v)));
        TruthTable::from_fn(vars.len(), |y| {
            let mut x = 0usize;
            for (j, &v) in vars.iter().enumerate() {
                if (y >> j) & 1 == 1 {
                    x |= 1 << v;
                }
            }
            self.bit(x)
        })
    }

    /// Re-expresses a table over `num_vars` variables where this table's
    /// variable `j` becomes variable `placement[j]`.
    pub fn expand(&self, num_vars: usize, placement: &[usize]) -> Self {
        assert_eq!(placement.len(), self.num_vars);
        TruthTable::from_fn(num_vars, |x| {
            let mut y = 0usize;
            for (j, &v) in placement.iter().enumerate() {
                if (x >> v) & 1 == 1 {
                    y |= 1 << j;
                }
            }
            self.bit(y)
        })
    }

    /// Lowercase hex, most significant nibble first.
    pub fn to_hex(&self) -> String {
        let digits = (self.num_rows() / 4).max(1);
        let mut s = String::with_capacity(digits);
        for d in (0..digits).rev() {
            let nibble = (self.words[(d * 4) >> 6] >> ((d * 4) & 63)) & 0xF;
            s.push(char::from_digit(nibble as u32, 16).unwrap());
        }
        s
    }

    pub fn from_hex(num_vars: usize, hex: &str) -> Option<Self> {
        let mut t = Self::zero(num_vars);
        let digits = (t.num_rows() / 4).max(1);
        if hex.len() != digits {
            return None;
        }
        for (i, c) in hex.chars().rev().enumerate() {
            let nibble = c.to_digit(16)? as u64;
            t.words[(i * 4) >> 6] |= nibble << ((i * 4) & 63);
        }
        let last = *t.words.last()?;
        (last & !tail_mask(num_vars) == 0).then_some(t)
    }

    fn zip_with(&self, other: &Self, f: impl Fn(u64, u64) -> u64) -> Self {
        assert_eq!(self.num_vars, other.num_vars, "variable count mismatch");
        let mut t = TruthTable {
            num_vars: self.num_vars,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        };
        t.normalize();
        t
    }
}

impl Not for TruthTable {
    type Output = TruthTable;
    fn not(mut self) -> TruthTable {
        for w in &mut self.words {
            *w = !*w;
        }
        self.normalize();
        self
    }
}

impl Not for &TruthTable {
    type Output = TruthTable;
    fn not(self) -> TruthTable {
        !self.clone()
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $op:tt) => {
        impl $tr for &TruthTable {
            type Output = TruthTable;
            fn $method(self, rhs: &TruthTable) -> TruthTable {
                self.zip_with(rhs, |a, b| a $op b)
            }
        }
        impl $tr for TruthTable {
            type Output = TruthTable;
            fn $method(self, rhs: TruthTable) -> TruthTable {
                self.zip_with(&rhs, |a, b| a $op b)
            }
        }
    };
}

binop!(BitAnd, bitand, &);
binop!(BitOr, bitor, |);
binop!(BitXor, bitxor, ^);

impl fmt::Debug for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TruthTable({}v, 0x{})", self.num_vars, self.to_hex())
    }
}

impl fmt::Display for TruthTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "0x{}", self.to_hex())
    }
}
