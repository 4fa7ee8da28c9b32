// SPDX-License-Identifier: Apache-2.0

//! Cut rewriting against the template database.

use std::collections::HashMap;

use super::cuts::enumerate_cuts;
use super::database::XagDatabase;
use super::exact::TEMPLATE_INPUTS;
use crate::xag::{GateKind, NodeId, NodeKind, Signal, Xag};

/// ANDs that disappear with `root` when the cut `leaves` is kept: the
/// maximum fanout-free cone of `root` bounded by the leaves.
pub fn mffc_and_count(g: &Xag, root: NodeId, leaves: &[NodeId], refs: &[u32]) -> usize {
    let mut local: HashMap<NodeId, u32> = HashMap::new();
    let mut stack = vec![root];
    let mut ands = 0;
    while let Some(n) = stack.pop() {
        let node = g.node(n);
        if node.is_and() {
            ands += 1;
        }
        for f in node.fanins {
            let c = f.node();
            if leaves.contains(&c) || !g.node(c).is_gate() {
                continue;
            }
            let r = local.entry(c).or_insert(refs[c]);
            *r -= 1;
            if *r == 0 {
                stack.push(c);
            }
        }
    }
    ands
}

struct Choice {
    cut: usize,
    gain: usize,
}

/// One rewriting round. Every gate picks the cut whose template saves the
/// most ANDs relative to its MFFC; the network is then rebuilt from the
/// outputs, materializing only what the chosen replacements still need.
/// If the rebuilt network ends up with more ANDs than `g` (overlapping
/// cones can make the local estimates optimistic), a cleaned copy of `g`
/// is returned instead.
pub fn cut_rewrite(g: &Xag, db: &XagDatabase, cut_size: usize, cuts_per_node: usize) -> Xag {
    assert!(
        cut_size <= TEMPLATE_INPUTS,
        "templates cover at most {TEMPLATE_INPUTS} leaves"
    );
    let cuts = enumerate_cuts(g, cut_size, cuts_per_node);
    let refs = g.fanout_counts();
    let live = g.reachable();

    let mut choice: Vec<Option<Choice>> = (0..g.num_nodes()).map(|_| None).collect();
    for id in g.topo_order() {
        let mut best: Option<Choice> = None;
        for (ci, cut) in cuts[id].iter().enumerate() {
            if cut.is_trivial() {
                continue;
            }
            let Some(m) = db.lookup(&cut.table) else {
                continue;
            };
            let saved = mffc_and_count(g, id, &cut.leaves, &refs);
            let cost = m.template.and_count();
            if saved <= cost {
                continue;
            }
            let gain = saved - cost;
            if best.as_ref().is_none_or(|b| gain > b.gain) {
                best = Some(Choice { cut: ci, gain });
            }
        }
        choice[id] = best;
    }

    // which old nodes must be materialized
    let mut needed = vec![false; g.num_nodes()];
    for o in g.outputs() {
        needed[o.node()] = true;
    }
    for id in (1..g.num_nodes()).rev() {
        if !needed[id] || !live[id] || !g.node(id).is_gate() {
            continue;
        }
        match &choice[id] {
            Some(c) => cuts[id][c.cut]
                .leaves
                .iter()
                .for_each(|&l| needed[l] = true),
            None => g
                .node(id)
                .fanins
                .iter()
                .for_each(|f| needed[f.node()] = true),
        }
    }

    let mut out = Xag::new();
    let mut map = vec![Signal::FALSE; g.num_nodes()];
    for (i, &id) in g.inputs().iter().enumerate() {
        map[id] = out.add_input(g.input_names()[i].clone());
    }
    for id in 1..g.num_nodes() {
        if !needed[id] {
            continue;
        }
        let node = g.node(id);
        let NodeKind::Gate(kind) = node.kind else {
            continue;
        };
        map[id] = match &choice[id] {
            Some(c) => {
                let cut = &cuts[id][c.cut];
                let leaves: Vec<Signal> = cut.leaves.iter().map(|&l| map[l]).collect();
                db.lookup(&cut.table)
                    .unwrap()
                    .instantiate(&mut out, &leaves)
            }
            None => {
                let [a, b] = node
                    .fanins
                    .map(|f| map[f.node()].complement_if(f.is_complemented()));
                match kind {
                    GateKind::And => out.create_and(a, b),
                    GateKind::Xor => out.create_xor(a, b),
                }
            }
        };
    }
    for (j, o) in g.outputs().iter().enumerate() {
        out.add_output(
            map[o.node()].complement_if(o.is_complemented()),
            g.output_names()[j].clone(),
        );
    }
    let out = out.cleanup();
    if out.count_ands() > g.count_ands() {
        g.cleanup()
    } else {
        out
    }
}
