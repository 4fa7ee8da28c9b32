// SPDX-License-Identifier: Apache-2.0

//! AND-count optimization of XAGs.

pub mod collapse;
pub mod cuts;
pub mod database;
pub mod exact;
pub mod npn;
pub mod rewrite;

use std::str::FromStr;

use thiserror::Error;

pub use collapse::{collapse_resynthesize, COLLAPSE_LIMIT};
pub use cuts::{enumerate_cuts, Cut};
pub use database::{DatabaseError, XagDatabase};
pub use exact::{exact_synthesize, XagTemplate};
pub use npn::{npn_canonicalize, NpnTransform};
pub use rewrite::cut_rewrite;

use crate::xag::{GateKind, NodeKind, Signal, Xag};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OptError {
    #[error("collapsing needs at most {limit} inputs, network has {inputs}")]
    TooManyInputs { inputs: usize, limit: usize },
    #[error("unknown pass `{0}` (expected `collapse` or `rewrite`)")]
    UnknownPass(String),
    #[error("cut size {0} is outside 2..=4")]
    BadCutSize(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pass {
    Collapse,
    Rewrite,
}

impl FromStr for Pass {
    type Err = OptError;
    fn from_str(s: &str) -> Result<Self, OptError> {
        match s {
            "collapse" => Ok(Pass::Collapse),
            "rewrite" => Ok(Pass::Rewrite),
            other => Err(OptError::UnknownPass(other.to_string())),
        }
    }
}

/// Rewriting rounds per `rewrite` pass; a round that saves nothing ends
/// the pass early.
pub const REWRITE_ROUNDS: usize = 4;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OptimizeOptions {
    pub passes: Vec<Pass>,
    pub cut_size: usize,
    pub cuts_per_node: usize,
    pub collapse_threshold: usize,
}

impl Default for OptimizeOptions {
    fn default() -> Self {
        OptimizeOptions {
            passes: vec![Pass::Collapse, Pass::Rewrite],
            cut_size: 4,
            cuts_per_node: 12,
            collapse_threshold: COLLAPSE_LIMIT,
        }
    }
}

/// Runs the configured passes and a final linear sweep. The result computes
/// the same outputs as `g` and never has more ANDs.
pub fn optimize(g: &Xag, opts: &OptimizeOptions, db: &XagDatabase) -> Result<Xag, OptError> {
    if !(2..=exact::TEMPLATE_INPUTS).contains(&opts.cut_size) {
        return Err(OptError::BadCutSize(opts.cut_size));
    }
    let mut cur = linear_sweep(g);
    for pass in &opts.passes {
        match pass {
            Pass::Collapse => {
                if cur.num_inputs() > opts.collapse_threshold.min(COLLAPSE_LIMIT) {
                    continue;
                }
                let next = collapse_resynthesize(&cur, db, opts.collapse_threshold)?;
                let (na, ca) = (next.count_ands(), cur.count_ands());
                if na < ca || (na == ca && next.count_xors() < cur.count_xors()) {
                    cur = next;
                }
            }
            Pass::Rewrite => {
                for _ in 0..REWRITE_ROUNDS {
                    let before = cur.count_ands();
                    let next = cut_rewrite(&cur, db, opts.cut_size, opts.cuts_per_node);
                    let after = next.count_ands();
                    cur = next;
                    if after >= before {
                        break;
                    }
                }
            }
        }
    }
    Ok(linear_sweep(&cur))
}

/// Affine form of a signal over primary inputs and AND outputs: sorted
/// variable nodes plus a constant.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Form {
    vars: Vec<usize>,
    constant: bool,
}

fn sym_diff(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            i += 1;
            j += 1;
        } else if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    out
}

/// Rebuilds `g`, folding every AND whose operands are affinely constant or
/// affinely equal (or complementary) to each other. Such ANDs have no
/// reversible realization with distinct control lines.
pub fn linear_sweep(g: &Xag) -> Xag {
    let mut out = Xag::new();
    let mut forms: Vec<Form> = vec![Form {
        vars: Vec::new(),
        constant: false,
    }];
    let mut map = vec![Signal::FALSE; g.num_nodes()];
    for (i, &id) in g.inputs().iter().enumerate() {
        let s = out.add_input(g.input_names()[i].clone());
        map[id] = s;
        forms.push(Form {
            vars: vec![s.node()],
            constant: false,
        });
    }
    let form_of = |forms: &[Form], s: Signal| {
        let mut f = forms[s.node()].clone();
        f.constant ^= s.is_complemented();
        f
    };
    for id in g.topo_order() {
        let node = g.node(id);
        let NodeKind::Gate(kind) = node.kind else {
            unreachable!()
        };
        let [a, b] = node
            .fanins
            .map(|f| map[f.node()].complement_if(f.is_complemented()));
        let (fa, fb) = (form_of(&forms, a), form_of(&forms, b));
        let s = match kind {
            GateKind::Xor => out.create_xor(a, b),
            GateKind::And => {
                if fa.vars.is_empty() {
                    if fa.constant {
                        b
                    } else {
                        Signal::FALSE
                    }
                } else if fb.vars.is_empty() {
                    if fb.constant {
                        a
                    } else {
                        Signal::FALSE
                    }
                } else if fa.vars == fb.vars {
                    if fa.constant == fb.constant {
                        a
                    } else {
                        Signal::FALSE
                    }
                } else {
                    out.create_and(a, b)
                }
            }
        };
        map[id] = s;
        while forms.len() < out.num_nodes() {
            let n = forms.len();
            let f = match out.node(n).kind {
                NodeKind::Gate(GateKind::Xor) => {
                    let [x, y] = out.node(n).fanins;
                    let (fx, fy) = (form_of(&forms, x), form_of(&forms, y));
                    Form {
                        vars: sym_diff(&fx.vars, &fy.vars),
                        constant: fx.constant ^ fy.constant,
                    }
                }
                _ => Form {
                    vars: vec![n],
                    constant: false,
                },
            };
            forms.push(f);
        }
    }
    for (j, o) in g.outputs().iter().enumerate() {
        out.add_output(
            map[o.node()].complement_if(o.is_complemented()),
            g.output_names()[j].clone(),
        );
    }
    out.cleanup()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sweep_folds_affinely_equal_operands() {
        let mut g = Xag::new();
        let a = g.add_input("a");
        let b = g.add_input("b");
        let c = g.add_input("c");
        let x1 = g.create_xor(a, b);
        let x2 = g.create_xor(x1, c);
        let x3 = g.create_xor(b, c);
        let y = g.create_xor(x3, a); // same affine form as x2
        let f = g.create_and(x2, !y); // always false
        let h = g.create_and(x2, y);
        g.add_output(f, "f");
        g.add_output(h, "h");
        let swept = linear_sweep(&g);
        assert_eq!(swept.count_ands(), 0);
        assert_eq!(
            swept.output_truth_tables().unwrap(),
            g.output_truth_tables().unwrap()
        );
    }

    #[test]
    fn pass_names() {
        assert_eq!("collapse".parse::<Pass>().unwrap(), Pass::Collapse);
        assert!("balance".parse::<Pass>().is_err());
    }
}
