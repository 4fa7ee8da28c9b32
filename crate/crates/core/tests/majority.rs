// SPDX-License-Identifier: Apache-2.0

mod common;

use oracle_core::ir::{ir_to_xag_with, validate, IfConversion};
use oracle_core::opt::{optimize, OptimizeOptions};
use oracle_core::pipeline::{compile_function, PipelineOptions};
use oracle_core::sim::VerifyMode;

#[test]
fn majority_block_order() {
    let m = common::corpus_module("majority3.ll");
    let f = validate(m.function("Classical_Majority3").unwrap()).unwrap();
    assert_eq!(
        f.rpo_labels(),
        vec![
            "entry",
            "condTrue__1",
            "entry.condContinue__1_crit_edge",
            "condContinue__1",
            "condTrue__2",
            "condContinue__1.condContinue__2_crit_edge",
            "condContinue__2",
        ]
    );
}

#[test]
fn majority_both_if_conversions() {
    let m = common::corpus_module("majority3.ll");
    let f = validate(m.function("Classical_Majority3").unwrap()).unwrap();
    let paths = ir_to_xag_with(&f, IfConversion::PathExpansion).unwrap();
    let merge = ir_to_xag_with(&f, IfConversion::ReachingConditions).unwrap();
    let maj = 0xE8;
    assert_eq!(paths.output_truth_tables().unwrap()[0].as_u64(), maj);
    assert_eq!(merge.output_truth_tables().unwrap()[0].as_u64(), maj);
    assert_eq!(paths.count_ands(), 6);
    println!("merge ANDs: {}", merge.count_ands());
    let opt = optimize(&merge, &OptimizeOptions::default(), common::database()).unwrap();
    assert_eq!(opt.count_ands(), 1);
}

#[test]
fn majority_end_to_end() {
    let m = common::corpus_module("majority3.ll");
    let opts = PipelineOptions {
        verify: Some(VerifyMode::Exhaustive),
        ..Default::default()
    };
    let c = compile_function(
        m.function("Classical_Majority3").unwrap(),
        &opts,
        common::database(),
    )
    .unwrap();
    println!("{}", c.stats.to_text());
    assert_eq!(c.stats.initial_ands, 6);
    assert_eq!(c.stats.optimized_ands, 1);
    assert_eq!(c.stats.optimized_xors, 3);
    assert_eq!(c.stats.circuit.helpers, 1);
    assert_eq!(c.stats.circuit.ccnot, 2);
    let r = c.report.unwrap();
    assert!(r.passed());
    assert_eq!(r.checked, 16);
}
