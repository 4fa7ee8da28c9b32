// SPDX-License-Identifier: Apache-2.0

//! Text emitters: QIR-flavored LLVM for circuits and Graphviz DOT for XAGs.

use std::collections::HashSet;
use std::fmt::Write as _;

use thiserror::Error;

use crate::circuit::{QubitId, Register, RevGate, ReversibleCircuit};
use crate::xag::{GateKind, NodeKind, Xag};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmitError {
    #[error("`{0}` is not a valid operation name (expected [A-Za-z$._][A-Za-z$._0-9]*)")]
    InvalidName(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EmitConfig {
    /// Operation name; the emitted function is `@<name>__body`.
    pub name: String,
}

pub fn is_valid_identifier(s: &str) -> bool {
    let ok_first = |c: char| c.is_ascii_alphabetic() || matches!(c, '$' | '.' | '_');
    let mut chars = s.chars();
    chars.next().is_some_and(ok_first) && chars.all(|c| ok_first(c) || c.is_ascii_digit())
}

/// Operation name for a source function: a leading `Classical_` is dropped.
pub fn operation_name(function: &str) -> &str {
    function
        .strip_prefix("Classical_")
        .filter(|s| !s.is_empty())
        .unwrap_or(function)
}

const DECLARATIONS: &str = "\
declare %Qubit* @__quantum__rt__qubit_allocate()
declare void @__quantum__rt__qubit_release(%Qubit*)
declare void @__quantum__qis__x__body(%Qubit*)
declare void @__quantum__qis__cnot__body(%Qubit*, %Qubit*)
declare void @__quantum__qis__ccnot__body(%Qubit*, %Qubit*, %Qubit*)
";

fn qubit_ref(c: &ReversibleCircuit, q: QubitId) -> String {
    match c.register(q) {
        Register::Input => format!("%Qubit* %in{q}"),
        Register::Output => format!("%Qubit* %out{}", q - c.num_inputs),
        Register::Helper => format!("%Qubit* %h{}", q - c.num_inputs - c.num_outputs),
    }
}

pub fn emit_qir(c: &ReversibleCircuit, cfg: &EmitConfig) -> Result<String, EmitError> {
    if !is_valid_identifier(&cfg.name) {
        return Err(EmitError::InvalidName(cfg.name.clone()));
    }
    let mut s = String::new();
    writeln!(s, "; ModuleID = '{}'", cfg.name).unwrap();
    writeln!(s, "; inputs: {}", c.input_names.join(" ")).unwrap();
    writeln!(s, "; outputs: {}", c.output_names.join(" ")).unwrap();
    s.push_str("\n%Qubit = type opaque\n\n");
    let params: Vec<String> = (0..c.num_inputs + c.num_outputs)
        .map(|q| qubit_ref(c, q))
        .collect();
    writeln!(
        s,
        "define void @{}__body({}) {{",
        cfg.name,
        params.join(", ")
    )
    .unwrap();
    s.push_str("entry:\n");
    for k in 0..c.num_helpers {
        writeln!(s, "  %h{k} = call %Qubit* @__quantum__rt__qubit_allocate()").unwrap();
    }
    for g in &c.gates {
        match *g {
            RevGate::X(t) => writeln!(
                s,
                "  call void @__quantum__qis__x__body({})",
                qubit_ref(c, t)
            ),
            RevGate::Cnot { control, target } => writeln!(
                s,
                "  call void @__quantum__qis__cnot__body({}, {})",
                qubit_ref(c, control),
                qubit_ref(c, target)
            ),
            RevGate::Ccnot { c1, c2, target } => writeln!(
                s,
                "  call void @__quantum__qis__ccnot__body({}, {}, {})",
                qubit_ref(c, c1),
                qubit_ref(c, c2),
                qubit_ref(c, target)
            ),
        }
        .unwrap();
    }
    for k in (0..c.num_helpers).rev() {
        writeln!(
            s,
            "  call void @__quantum__rt__qubit_release(%Qubit* %h{k})"
        )
        .unwrap();
    }
    s.push_str("  ret void\n}\n\n");
    s.push_str(DECLARATIONS);
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LintIssue {
    pub line: usize,
    pub message: String,
}

/// Structural checks on emitted text: declared callees with the right
/// arity, qubit operands defined before use, helpers released exactly
/// once, and a terminating `ret void`.
pub fn lint(text: &str) -> Vec<LintIssue> {
    let mut issues = Vec::new();
    let mut declared: Vec<(String, usize)> = Vec::new();
    for line in text.lines() {
        if let Some(rest) = line.strip_prefix("declare ") {
            if let (Some(at), Some(open)) = (rest.find('@'), rest.find('(')) {
                let name = rest[at + 1..open].to_string();
                let args = &rest[open + 1..rest.rfind(')').unwrap_or(rest.len())];
                let arity = if args.trim().is_empty() {
                    0
                } else {
                    args.split(',').count()
                };
                declared.push((name, arity));
            }
        }
    }
    let mut defined: HashSet<String> = HashSet::new();
    let mut live_helpers: HashSet<String> = HashSet::new();
    let mut in_body = false;
    let mut saw_ret = false;
    let mut bodies = 0;
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        let mut issue = |message: String| issues.push(LintIssue { line: ln, message });
        let t = line.trim();
        if t.starts_with("define ") {
            bodies += 1;
            in_body = true;
            let open = t.find('(').unwrap_or(0);
            let close = t.rfind(')').unwrap_or(t.len());
            for p in t[open + 1..close]
                .split(',')
                .filter(|p| !p.trim().is_empty())
            {
                match p.trim().strip_prefix("%Qubit* %") {
                    Some(name) => {
                        defined.insert(name.to_string());
                    }
                    None => issue(format!("unexpected parameter `{}`", p.trim())),
                }
            }
            continue;
        }
        if !in_body {
            continue;
        }
        if t == "}" {
            in_body = false;
            if !saw_ret {
                issue("body does not end in `ret void`".into());
            }
            if !live_helpers.is_empty() {
                let mut names: Vec<_> = live_helpers.iter().cloned().collect();
                names.sort();
                issue(format!("helpers never released: {}", names.join(", ")));
            }
            continue;
        }
        if t.is_empty() || t == "entry:" {
            continue;
        }
        if saw_ret {
            issue("instruction after `ret void`".into());
            continue;
        }
        if t == "ret void" {
            saw_ret = true;
            continue;
        }
        let (result, call) = match t.split_once(" = ") {
            Some((r, c)) => (Some(r.trim_start_matches('%').to_string()), c),
            None => (None, t),
        };
        let Some(at) = call.find('@') else {
            issue(format!("unrecognized instruction `{t}`"));
            continue;
        };
        let open = call.find('(').unwrap_or(call.len());
        let callee = &call[at + 1..open];
        let args: Vec<&str> = call[open + 1..call.rfind(')').unwrap_or(call.len())]
            .split(',')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .collect();
        match declared.iter().find(|(n, _)| n == callee) {
            None => issue(format!("call to undeclared `@{callee}`")),
            Some((_, arity)) if *arity != args.len() => issue(format!(
                "`@{callee}` takes {arity} operands, got {}",
                args.len()
            )),
            _ => {}
        }
        let names: Vec<String> = args
            .iter()
            .filter_map(|a| a.strip_prefix("%Qubit* %"))
            .map(str::to_string)
            .collect();
        if names.len() != args.len() {
            issue("operand is not a qubit reference".into());
        }
        let mut distinct = HashSet::new();
        for n in &names {
            if !defined.contains(n) {
                issue(format!("use of undefined `%{n}`"));
            }
            if !distinct.insert(n) {
                issue(format!("qubit `%{n}` used twice in one gate"));
            }
        }
        if callee == "__quantum__rt__qubit_release" {
            for n in &names {
                if !live_helpers.remove(n) {
                    issue(format!("release of `%{n}` which is not a live helper"));
                }
                defined.remove(n);
            }
        }
        if let Some(r) = result {
            if callee != "__quantum__rt__qubit_allocate" {
                issue(format!("unexpected result from `@{callee}`"));
            }
            if !defined.insert(r.clone()) {
                issue(format!("`%{r}` defined twice"));
            }
            live_helpers.insert(r);
        }
    }
    if bodies != 1 {
        issues.push(LintIssue {
            line: 0,
            message: format!("expected one function body, found {bodies}"),
        });
    }
    issues
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering of the reachable part of an XAG. Complemented edges
/// are dashed.
pub fn emit_dot(g: &Xag, name: &str) -> String {
    let live = g.reachable();
    let mut s = String::new();
    writeln!(s, "digraph \"{}\" {{", dot_escape(name)).unwrap();
    s.push_str("  rankdir=BT;\n");
    if live[0] {
        s.push_str("  n0 [label=\"0\", shape=box];\n");
    }
    for (i, &id) in g.inputs().iter().enumerate() {
        writeln!(
            s,
            "  n{id} [label=\"{}\", shape=box];",
            dot_escape(&g.input_names()[i])
        )
        .unwrap();
    }
    let edge = |s: &mut String, from: usize, to: &str, complemented: bool| {
        let style = if complemented { " [style=dashed]" } else { "" };
        writeln!(s, "  n{from} -> {to}{style};").unwrap();
    };
    for id in g.topo_order() {
        let node = g.node(id);
        let label = match node.kind {
            NodeKind::Gate(GateKind::And) => "∧",
            NodeKind::Gate(GateKind::Xor) => "⊕",
            _ => unreachable!(),
        };
        writeln!(s, "  n{id} [label=\"{label}\", shape=circle];").unwrap();
        for f in node.fanins {
            edge(&mut s, f.node(), &format!("n{id}"), f.is_complemented());
        }
    }
    for (j, o) in g.outputs().iter().enumerate() {
        writeln!(
            s,
            "  o{j} [label=\"{}\", shape=invtriangle];",
            dot_escape(&g.output_names()[j])
        )
        .unwrap();
        edge(&mut s, o.node(), &format!("o{j}"), o.is_complemented());
    }
    s.push_str("}\n");
    s
}
