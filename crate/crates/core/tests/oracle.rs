// SPDX-License-Identifier: Apache-2.0

mod common;

use oracle_core::circuit::{compile, LinearState, RevGate};
use oracle_core::ir::validate;
use oracle_core::pipeline::{compile_function, PipelineOptions};
use oracle_core::qir::{emit_dot, emit_qir, lint, operation_name, EmitConfig};
use oracle_core::sim::{run_basis, verify_oracle, FailureKind, Reference, VerifyMode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn majority() -> oracle_core::pipeline::Compiled {
    let m = common::corpus_module("majority3.ll");
    compile_function(
        &m.functions[0],
        &PipelineOptions::default(),
        common::database(),
    )
    .unwrap()
}

#[test]
fn fault_injection_categories() {
    let c = majority();
    let f = &c.function;
    let run = |circ: &oracle_core::circuit::ReversibleCircuit| {
        verify_oracle(circ, Reference::Function(f), VerifyMode::Exhaustive).unwrap()
    };

    let r = run(&common::drop_copy_out(&c.circuit));
    assert!(!r.passed());
    assert!(r.failures.iter().all(|x| x.kind == FailureKind::Output));

    let r = run(&common::drop_uncompute(&c.circuit));
    assert!(!r.passed());
    assert!(r.failures.iter().all(|x| x.kind == FailureKind::HelperZero));

    // the mirrored CNOT no longer undoes the flipped one, so an input
    // qubit keeps a parity of two inputs
    let r = run(&common::flip_first_cnot(&c.circuit));
    assert!(!r.passed());
    assert!(r.has_kind(FailureKind::InputPreserved));
}

#[test]
fn circuits_restore_inputs_linearly() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for i in 0..40 {
        let g = common::random_xag(&mut rng, 2 + i % 7, 20, 2);
        let o = oracle_core::opt::linear_sweep(&g);
        let c = compile(&o).unwrap();
        let mut st = LinearState::new(c.num_qubits());
        c.gates.iter().for_each(|g| st.apply(g));
        assert!((0..c.num_inputs).all(|q| st.holds_initial(q)));
        // CCNOT targets are always helpers and controls never are the target
        for g in &c.gates {
            if let RevGate::Ccnot { c1, c2, target } = *g {
                assert!(target >= c.num_inputs + c.num_outputs);
                assert!(c1 != c2 && c1 != target && c2 != target);
            }
        }
        let r = verify_oracle(&c, Reference::Network(&g), VerifyMode::Exhaustive).unwrap();
        assert!(r.passed(), "{:?}", r.failures.first());
    }
}

#[test]
fn majority_basis_states() {
    let c = majority();
    // |a b c⟩|b⟩|0⟩ for a=1, b=0, c=1 with output register 1: maj = 1
    let out = run_basis(&c.circuit, &[true, false, true, true, false]);
    assert_eq!(out, vec![true, false, true, false, false]);
}

#[test]
fn emitted_corpus_passes_lint() {
    for file in ["functions.ll", "majority3.ll"] {
        let m = common::corpus_module(file);
        for f in &m.functions {
            let c = compile_function(f, &PipelineOptions::default(), common::database()).unwrap();
            let name = operation_name(&f.name).to_string();
            let text = emit_qir(&c.circuit, &EmitConfig { name: name.clone() }).unwrap();
            assert!(lint(&text).is_empty(), "{}: {:?}", f.name, lint(&text));
            let s = c.circuit.stats();
            assert_eq!(
                text.matches("call void @__quantum__qis__ccnot__body(")
                    .count(),
                s.ccnot
            );
            assert_eq!(
                text.matches("call void @__quantum__qis__cnot__body(")
                    .count(),
                s.cnot
            );
            assert_eq!(
                text.matches("call void @__quantum__qis__x__body(").count(),
                s.x
            );
            assert_eq!(
                text.matches("@__quantum__rt__qubit_allocate()\n").count(),
                s.helpers + 1
            );
            let dot = emit_dot(&c.optimized, &name);
            assert_eq!(dot.matches("label=\"∧\"").count(), c.optimized.count_ands());
            assert_eq!(dot.matches("label=\"⊕\"").count(), c.optimized.count_xors());
        }
    }
}

#[test]
fn sampled_verification_reproducible() {
    let m = common::corpus_module("functions.ll");
    let f = validate(m.function("and8").unwrap()).unwrap();
    let c = compile_function(&f.func, &PipelineOptions::default(), common::database()).unwrap();
    let mode = VerifyMode::Sampled {
        seed: 9,
        samples: 100,
    };
    let a = verify_oracle(&c.circuit, Reference::Function(&f), mode).unwrap();
    let b = verify_oracle(&c.circuit, Reference::Function(&f), mode).unwrap();
    assert_eq!(a, b);
    assert!(a.passed());
    let bad = common::drop_copy_out(&c.circuit);
    let a = verify_oracle(&bad, Reference::Function(&f), mode).unwrap();
    let b = verify_oracle(&bad, Reference::Function(&f), mode).unwrap();
    assert_eq!(a, b);
}
