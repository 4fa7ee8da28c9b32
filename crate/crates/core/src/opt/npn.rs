// SPDX-License-Identifier: Apache-2.0

//! Exhaustive NPN canonicalization of functions with up to four inputs.
//!
//! A transform `(perm, neg, out_neg)` maps `f` to
//! `g(x) = f(y) ⊕ out_neg` where `y[perm[i]] = x[i] ⊕ neg[i]`. The canonical
//! representative of a class is its numerically smallest 16-bit table.

use std::sync::OnceLock;

use crate::truth_table::TruthTable;

pub const NPN_VARS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct NpnTransform {
    /// Input `i` of the transformed function feeds canonical input `perm[i]`.
    pub perm: [u8; NPN_VARS],
    /// Bit `i` set: input `i` is complemented before permutation.
    pub input_negations: u8,
    pub output_negated: bool,
}

impl NpnTransform {
    pub const IDENTITY: NpnTransform = NpnTransform {
        perm: [0, 1, 2, 3],
        input_negations: 0,
        output_negated: false,
    };

    /// Applies the transform to a 4-input table.
    pub fn apply(&self, f: u16) -> u16 {
        let mut g = 0u16;
        for x in 0..16usize {
            let mut y = 0usize;
            for i in 0..NPN_VARS {
                let bit = ((x >> i) & 1) ^ ((self.input_negations as usize >> i) & 1);
                y |= bit << self.perm[i];
            }
            let v = ((f >> y) & 1) ^ self.output_negated as u16;
            g |= v << x;
        }
        g
    }
}

fn all_permutations() -> Vec<[u8; NPN_VARS]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4u8 {
        for b in 0..4u8 {
            for c in 0..4u8 {
                for d in 0..4u8 {
                    let p = [a, b, c, d];
                    let mut seen = 0u8;
                    p.iter().for_each(|&v| seen |= 1 << v);
                    if seen == 0xF {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// All 4!·2⁴·2 = 768 transforms, in a fixed order.
pub fn all_transforms() -> &'static [NpnTransform] {
    static ALL: OnceLock<Vec<NpnTransform>> = OnceLock::new();
    ALL.get_or_init(|| {
        let mut v = Vec::with_capacity(768);
        for perm in all_permutations() {
            for neg in 0..16u8 {
                for out in [false, true] {
                    v.push(NpnTransform {
                        perm,
                        input_negations: neg,
                        output_negated: out,
                    });
                }
            }
        }
        v
    })
}

/// Canonical representative of every 4-input table, computed once by orbit
/// enumeration.
fn canonical_table() -> &'static [u16] {
    static CANON: OnceLock<Vec<u16>> = OnceLock::new();
    CANON.get_or_init(|| {
        let mut canon = vec![u16::MAX; 1 << 16];
        let mut assigned = vec![false; 1 << 16];
        let mut orbit = Vec::with_capacity(768);
        for t in 0..=u16::MAX {
            if assigned[t as usize] {
                continue;
            }
            orbit.clear();
            orbit.extend(all_transforms().iter().map(|tr| tr.apply(t)));
            let rep = *orbit.iter().min().unwrap();
            for &g in &orbit {
                canon[g as usize] = rep;
                assigned[g as usize] = true;
            }
        }
        canon
    })
}

/// Canonical form of a raw 4-input table and a transform reproducing it.
pub fn canonicalize_u16(t: u16) -> (u16, NpnTransform) {
    let c = canonical_table()[t as usize];
    let tr = all_transforms()
        .iter()
        .find(|tr| tr.apply(c) == t)
        .copied()
        .expect("table lies in its class orbit");
    (c, tr)
}

/// Canonicalizes a table over at most four variables; smaller tables are
/// first extended to four variables. Returns the canonical 4-input table
/// and a transform with `transform.apply(canonical) == t` (as 4-input tables).
pub fn npn_canonicalize(t: &TruthTable) -> (TruthTable, NpnTransform) {
    let raw = to_u16(t);
    let (c, tr) = canonicalize_u16(raw);
    (TruthTable::from_u64(NPN_VARS, c as u64), tr)
}

/// Widens a table over at most four variables to a 16-bit 4-input table.
pub fn to_u16(t: &TruthTable) -> u16 {
    assert!(
        t.num_vars() <= NPN_VARS,
        "NPN canonicalization supports at most 4 inputs"
    );
    let k = t.num_vars();
    let rows = 1usize << k;
    let mut w = t.as_u64() as u16;
    let mut width = rows;
    while width < 16 {
        w |= w << width;
        width *= 2;
    }
    w
}

/// Sorted list of all canonical representatives.
pub fn npn_classes() -> Vec<u16> {
    let mut reps: Vec<u16> = canonical_table().to_vec();
    reps.sort_unstable();
    reps.dedup();
    reps
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// Brute-force minimum over the whole group, independent of the
    /// orbit table.
    fn brute_canon(t: u16) -> u16 {
        all_transforms().iter().map(|tr| tr.apply(t)).min().unwrap()
    }

    #[test]
    fn group_size() {
        let all = all_transforms();
        assert_eq!(all.len(), 768);
        assert_eq!(NpnTransform::IDENTITY.apply(0xE8E8), 0xE8E8);
    }

    #[test]
    fn output_negation_shares_class() {
        let t = TruthTable::from_u64(4, 0x1234);
        assert_eq!(npn_canonicalize(&t).0, npn_canonicalize(&!t).0);
    }

    #[test]
    fn input_negations_share_class() {
        let a = TruthTable::var(2, 0);
        let b = TruthTable::var(2, 1);
        let and = &a & &b;
        let nor_like = &!a & &!b;
        assert_eq!(npn_canonicalize(&and).0, npn_canonicalize(&nor_like).0);
    }

    #[test]
    fn exactly_222_classes() {
        assert_eq!(npn_classes().len(), 222);
    }

    #[test]
    fn round_trip_random_tables() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let t: u16 = rng.gen();
            let (c, tr) = canonicalize_u16(t);
            assert_eq!(tr.apply(c), t);
            assert_eq!(c, brute_canon(t));
        }
    }

    #[test]
    fn small_tables_widen() {
        let maj = TruthTable::from_u64(3, 0xE8);
        assert_eq!(to_u16(&maj), 0xE8E8);
        let (c, tr) = npn_canonicalize(&maj);
        assert_eq!(tr.apply(c.as_u64() as u16), 0xE8E8);
    }
}
