// SPDX-License-Identifier: Apache-2.0

#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::OnceLock;

use oracle_core::ir::{parse_module, IrModule};
use oracle_core::opt::XagDatabase;

pub fn database() -> &'static XagDatabase {
    static DB: OnceLock<XagDatabase> = OnceLock::new();
    DB.get_or_init(|| XagDatabase::build().expect("database builds"))
}

/// The corpus lives in the core crate; other crates include this module
/// by path.
pub fn corpus_dir() -> PathBuf {
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let local = manifest.join("corpus");
    if local.is_dir() {
        local
    } else {
        manifest.join("../core/corpus")
    }
}

pub fn corpus_module(file: &str) -> IrModule {
    let path = corpus_dir().join(file);
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    parse_module(&text).unwrap_or_else(|e| panic!("{file}: {e}"))
}

use rand::Rng;
use std::fmt::Write as _;

use oracle_core::xag::{NodeKind, Signal, Xag};

/// Random XAG with `inputs` PIs, `gates` gate attempts and `outputs`
/// outputs. Fanins are drawn from all earlier signals with random
/// complements, so strashing and constant rules get exercised.
pub fn random_xag(rng: &mut impl Rng, inputs: usize, gates: usize, outputs: usize) -> Xag {
    let mut g = Xag::new();
    let mut pool: Vec<Signal> = (0..inputs).map(|i| g.add_input(format!("x{i}"))).collect();
    for _ in 0..gates {
        let a = pool[rng.gen_range(0..pool.len())].complement_if(rng.gen());
        let b = pool[rng.gen_range(0..pool.len())].complement_if(rng.gen());
        let s = if rng.gen_bool(0.5) {
            g.create_and(a, b)
        } else {
            g.create_xor(a, b)
        };
        if !s.is_const() {
            pool.push(s);
        }
    }
    for j in 0..outputs {
        // bias towards the most recent signals so outputs have depth
        let lo = pool.len().saturating_sub(4);
        let s = pool[rng.gen_range(lo..pool.len())].complement_if(rng.gen());
        g.add_output(s, format!("y{j}"));
    }
    g
}

/// Straight-line IR text computing the same outputs as `g`.
pub fn xag_to_ir(g: &Xag, name: &str) -> String {
    let val = |s: Signal, names: &[String]| -> String {
        if s.is_const() {
            return if s.is_complemented() {
                "true".into()
            } else {
                "false".into()
            };
        }
        names[s.node()].clone()
    };
    let mut names = vec![String::new(); g.num_nodes()];
    let mut body = String::new();
    let mut params = Vec::new();
    for (i, &id) in g.inputs().iter().enumerate() {
        names[id] = format!("%{}", g.input_names()[i]);
        params.push(format!("i1 %{}", g.input_names()[i]));
    }
    let mut tmp = 0;
    let mut operand = |s: Signal, names: &[String], body: &mut String| -> String {
        let v = val(s.regular(), names);
        if s.is_complemented() && !s.is_const() {
            tmp += 1;
            writeln!(body, "  %n{tmp} = xor i1 {v}, true").unwrap();
            format!("%n{tmp}")
        } else {
            val(s, names)
        }
    };
    for id in g.topo_order() {
        let node = g.node(id);
        let [a, b] = node.fanins;
        let oa = operand(a, &names, &mut body);
        let ob = operand(b, &names, &mut body);
        let op = if matches!(node.kind, NodeKind::Gate(oracle_core::xag::GateKind::And)) {
            "and"
        } else {
            "xor"
        };
        writeln!(body, "  %g{id} = {op} i1 {oa}, {ob}").unwrap();
        names[id] = format!("%g{id}");
    }
    let outs: Vec<String> = g
        .outputs()
        .iter()
        .map(|&o| operand(o, &names, &mut body))
        .collect();
    let (ret_ty, ret) = if outs.len() == 1 {
        ("i1".to_string(), format!("ret i1 {}", outs[0]))
    } else {
        let tys = vec!["i1"; outs.len()].join(", ");
        let vs: Vec<String> = outs.iter().map(|o| format!("i1 {o}")).collect();
        (
            format!("{{ {tys} }}"),
            format!("ret {{ {tys} }} {{ {} }}", vs.join(", ")),
        )
    };
    format!(
        "define {ret_ty} @{name}({}) {{\n{body}  {ret}\n}}\n",
        params.join(", ")
    )
}

use oracle_core::circuit::compile;
use oracle_core::ir::{ir_to_xag, CheckedFunction};
use oracle_core::opt::{optimize, OptimizeOptions};
use oracle_core::sim::{interpret_ir, verify_oracle, Reference, VerifyMode};

/// Counts from one run of the equivalence triangle.
#[derive(Debug, Clone, Copy)]
pub struct TriangleCounts {
    pub initial_ands: usize,
    pub optimized_ands: usize,
    pub ccnot: usize,
}

/// IR interpreter, XAG simulation (before and after optimization) and the
/// compiled oracle must agree on every input; the oracle must also restore
/// its inputs and helpers.
pub fn check_triangle(f: &CheckedFunction) -> Result<TriangleCounts, String> {
    let name = f.name();
    let xag = ir_to_xag(f).map_err(|e| format!("{name}: {e}"))?;
    let opt = optimize(&xag, &OptimizeOptions::default(), database())
        .map_err(|e| format!("{name}: {e}"))?;
    let n = f.num_inputs();
    for x in 0..1u64 << n {
        let bits: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
        let ir = interpret_ir(f, &bits).map_err(|e| format!("{name}: {e}"))?;
        let sx = xag.simulate(&bits);
        let so = opt.simulate(&bits);
        if ir != sx || ir != so {
            return Err(format!(
                "{name}: x={x:#x} ir={ir:?} xag={sx:?} optimized={so:?}"
            ));
        }
    }
    let circuit = compile(&opt).map_err(|e| format!("{name}: {e}"))?;
    for reference in [Reference::Function(f), Reference::Network(&xag)] {
        let r = verify_oracle(&circuit, reference, VerifyMode::Exhaustive)
            .map_err(|e| format!("{name}: {e}"))?;
        if !r.passed() {
            return Err(format!("{name}: oracle mismatch {:?}", r.failures.first()));
        }
    }
    Ok(TriangleCounts {
        initial_ands: xag.count_ands(),
        optimized_ands: opt.count_ands(),
        ccnot: circuit.stats().ccnot,
    })
}

use oracle_core::circuit::{RevGate, ReversibleCircuit};

pub fn drop_copy_out(c: &ReversibleCircuit) -> ReversibleCircuit {
    let mut f = c.clone();
    f.gates.drain(c.compute_len..c.compute_len + c.copy_len);
    f.copy_len = 0;
    f
}

pub fn drop_uncompute(c: &ReversibleCircuit) -> ReversibleCircuit {
    let mut f = c.clone();
    f.gates.truncate(c.compute_len + c.copy_len);
    f
}

/// Swaps control and target of the first CNOT in the compute segment.
pub fn flip_first_cnot(c: &ReversibleCircuit) -> ReversibleCircuit {
    let mut f = c.clone();
    let g = f.gates[..c.compute_len]
        .iter_mut()
        .find(|g| matches!(g, RevGate::Cnot { .. }))
        .expect("compute segment has a CNOT");
    if let RevGate::Cnot { control, target } = *g {
        *g = RevGate::Cnot {
            control: target,
            target: control,
        };
    }
    f
}
