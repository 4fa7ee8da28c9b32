// SPDX-License-Identifier: Apache-2.0

//! Bottom-up K-feasible cut enumeration with cut truth tables.

use crate::truth_table::TruthTable;
use crate::xag::{GateKind, NodeId, NodeKind, Signal, Xag};

pub const MAX_CUT_SIZE: usize = 6;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cut {
    pub root: NodeId,
    /// Sorted ascending.
    pub leaves: Vec<NodeId>,
    /// Function of the root over `leaves` (leaf `i` is variable `i`).
    pub table: TruthTable,
}

impl Cut {
    pub fn is_trivial(&self) -> bool {
        self.leaves.len() == 1 && self.leaves[0] == self.root
    }

    fn trivial(node: NodeId) -> Self {
        Cut {
            root: node,
            leaves: vec![node],
            table: TruthTable::var(1, 0),
        }
    }

    /// This cut's table over a superset of its leaves, with the fanin
    /// complement applied.
    fn table_over(&self, leaves: &[NodeId], complemented: bool) -> TruthTable {
        let placement: Vec<usize> = self
            .leaves
            .iter()
            .map(|l| leaves.binary_search(l).expect("leaf subset"))
            .collect();
        let t = self.table.expand(leaves.len(), &placement);
        if complemented {
            !t
        } else {
            t
        }
    }
}

fn merge_leaves(a: &[NodeId], b: &[NodeId], limit: usize) -> Option<Vec<NodeId>> {
    let mut out = Vec::with_capacity(limit);
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        if out.len() == limit {
            return None;
        }
        out.push(next);
    }
    Some(out)
}

/// Enumerates cuts for every node. Each node's list starts with up to
/// `cuts_per_node` non-trivial cuts (smallest leaf sets first) and ends with
/// its trivial cut; primary inputs and the constant only have the trivial
/// cut.
pub fn enumerate_cuts(g: &Xag, cut_size: usize, cuts_per_node: usize) -> Vec<Vec<Cut>> {
    assert!(
        (2..=MAX_CUT_SIZE).contains(&cut_size),
        "cut size must be in 2..={MAX_CUT_SIZE}"
    );
    assert!(cuts_per_node >= 1);
    let mut cuts: Vec<Vec<Cut>> = Vec::with_capacity(g.num_nodes());
    for (id, node) in g.nodes().iter().enumerate() {
        let NodeKind::Gate(kind) = node.kind else {
            cuts.push(vec![Cut::trivial(id)]);
            continue;
        };
        let [fa, fb]: [Signal; 2] = node.fanins;
        let mut found: Vec<Cut> = Vec::new();
        for ca in &cuts[fa.node()] {
            for cb in &cuts[fb.node()] {
                let Some(leaves) = merge_leaves(&ca.leaves, &cb.leaves, cut_size) else {
                    continue;
                };
                if found.iter().any(|c| c.leaves == leaves) {
                    continue;
                }
                let ta = ca.table_over(&leaves, fa.is_complemented());
                let tb = cb.table_over(&leaves, fb.is_complemented());
                let table = match kind {
                    GateKind::And => ta & tb,
                    GateKind::Xor => ta ^ tb,
                };
                found.push(Cut {
                    root: id,
                    leaves,
                    table,
                });
            }
        }
        // drop cuts whose leaf set contains another cut's leaf set
        let dominated = |c: &Cut, all: &[Cut]| {
            all.iter().any(|o| {
                o.leaves.len() < c.leaves.len()
                    && o.leaves.iter().all(|l| c.leaves.binary_search(l).is_ok())
            })
        };
        let mut kept: Vec<Cut> = found
            .iter()
            .filter(|c| !dominated(c, &found))
            .cloned()
            .collect();
        kept.sort_by_key(|c| c.leaves.len());
        kept.truncate(cuts_per_node);
        kept.push(Cut::trivial(id));
        cuts.push(kept);
    }
    cuts
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_and() {
        let mut g = Xag::new();
        let a = g.add_input("a");
        let b = g.add_input("b");
        let f = g.create_and(a, b);
        g.add_output(f, "f");
        let cuts = enumerate_cuts(&g, 4, 12);
        let root = &cuts[f.node()];
        assert_eq!(root.len(), 2);
        assert_eq!(root[0].leaves, vec![a.node(), b.node()]);
        assert_eq!(root[0].table.as_u64(), 0x8);
        assert!(root[1].is_trivial());
        assert_eq!(cuts[a.node()].len(), 1);
        assert!(cuts[a.node()][0].is_trivial());
    }

    #[test]
    fn majority_root_cut() {
        let mut g = Xag::new();
        let a = g.add_input("a");
        let b = g.add_input("b");
        let c = g.add_input("c");
        let x1 = g.create_xor(a, c);
        let x2 = g.create_xor(b, c);
        let m = g.create_and(x1, x2);
        let f = g.create_xor(m, c);
        g.add_output(f, "f");
        let cuts = enumerate_cuts(&g, 4, 12);
        let cut = cuts[f.node()]
            .iter()
            .find(|cut| cut.leaves == vec![a.node(), b.node(), c.node()])
            .expect("cut over the inputs");
        assert_eq!(cut.table.as_u64(), 0xE8);
    }

    #[test]
    fn cut_tables_match_simulation() {
        // random-ish network; every cut table must agree with simulation
        let mut g = Xag::new();
        let ins: Vec<Signal> = (0..5).map(|i| g.add_input(format!("x{i}"))).collect();
        let mut pool = ins.clone();
        for i in 0..20usize {
            let a = pool[(i * 7 + 3) % pool.len()].complement_if(i % 3 == 0);
            let b = pool[(i * 5 + 1) % pool.len()].complement_if(i % 2 == 0);
            let s = if i % 2 == 0 {
                g.create_and(a, b)
            } else {
                g.create_xor(a, b)
            };
            pool.push(s);
        }
        let tables = g.node_truth_tables().unwrap();
        for (id, node_cuts) in enumerate_cuts(&g, 4, 8).iter().enumerate() {
            for cut in node_cuts {
                assert!(cut.leaves.len() <= 4);
                for x in 0..32usize {
                    let mut row = 0;
                    for (j, &l) in cut.leaves.iter().enumerate() {
                        if tables[l].bit(x) {
                            row |= 1 << j;
                        }
                    }
                    assert_eq!(
                        cut.table.bit(row),
                        tables[id].bit(x),
                        "node {id} cut {:?}",
                        cut.leaves
                    );
                }
            }
        }
    }
}
