// SPDX-License-Identifier: Apache-2.0

mod common;

use oracle_core::ir::{
    ir_to_xag_with, parse_module, validate, CheckError, IfConversion, LowerError, ParseError,
};
use oracle_core::sim::{interpret_ir, SimError};

type Spec = fn(&[bool]) -> Vec<bool>;

fn num(bits: &[bool]) -> u32 {
    bits.iter().enumerate().map(|(i, &b)| (b as u32) << i).sum()
}

/// Independent Rust definitions of corpus functions (parameters in
/// declaration order).
fn specs() -> Vec<(&'static str, Spec)> {
    vec![
        ("xor3", |x| vec![x[0] ^ x[1] ^ x[2]]),
        ("and3", |x| vec![x[0] && x[1] && x[2]]),
        ("or4", |x| vec![x.iter().any(|&b| b)]),
        ("parity6", |x| {
            vec![x.iter().filter(|&&b| b).count() % 2 == 1]
        }),
        ("mux2_select", |x| vec![if x[0] { x[1] } else { x[2] }]),
        ("mux2_branch", |x| vec![if x[0] { x[1] } else { x[2] }]),
        ("mux4_select", |x| {
            vec![x[2 + (2 * x[0] as usize + x[1] as usize)]]
        }),
        ("mux4_branch", |x| {
            vec![x[2 + (2 * x[0] as usize + x[1] as usize)]]
        }),
        ("eq2", |x| vec![(x[0], x[1]) == (x[2], x[3])]),
        ("lt2", |x| {
            vec![(2 * x[0] as u32 + x[1] as u32) < (2 * x[2] as u32 + x[3] as u32)]
        }),
        ("half_adder", |x| {
            let s = x[0] as u32 + x[1] as u32;
            vec![s & 1 == 1, s & 2 == 2]
        }),
        ("full_adder", |x| {
            let s = x.iter().filter(|&&b| b).count();
            vec![s & 1 == 1, s & 2 == 2]
        }),
        ("add2", |x| {
            let s = num(&x[0..2]) + num(&x[2..4]);
            vec![s & 1 == 1, s & 2 == 2, s & 4 == 4]
        }),
        ("inc2", |x| {
            let s = (num(x) + 1) % 4;
            vec![s & 1 == 1, s & 2 == 2]
        }),
        ("gray2", |x| vec![x[0], x[0] ^ x[1]]),
        ("sort2", |x| vec![x[0].min(x[1]), x[0].max(x[1])]),
        ("cswap", |x| {
            if x[0] {
                vec![x[2], x[1]]
            } else {
                vec![x[1], x[2]]
            }
        }),
        ("at_least_two_of_four", |x| {
            vec![x.iter().filter(|&&b| b).count() >= 2]
        }),
        ("one_hot3", |x| vec![x.iter().filter(|&&b| b).count() == 1]),
        ("all_equal3", |x| vec![x[0] == x[1] && x[1] == x[2]]),
        ("implies_chain", |x| {
            vec![(!x[0] || x[1]) && (!x[1] || x[2])]
        }),
        ("and8", |x| vec![x.iter().all(|&b| b)]),
        ("branch_parity", |x| vec![x[0] ^ x[1] ^ x[2]]),
        ("constant_branch", |x| vec![x[0] && x[1]]),
        ("memory_diamond", |x| {
            vec![if x[0] { x[1] && x[2] } else { x[1] }]
        }),
        ("xor_with_constants", |x| vec![x[0] ^ x[1]]),
        ("nested_select", |x| {
            vec![if x[0] && x[1] { x[2] || x[3] } else { x[2] }]
        }),
    ]
}

#[test]
fn corpus_matches_specifications() {
    let m = common::corpus_module("functions.ll");
    let specs = specs();
    assert_eq!(specs.len(), m.functions.len());
    for (name, spec) in specs {
        let f = validate(m.function(name).unwrap_or_else(|| panic!("{name} missing"))).unwrap();
        let n = f.num_inputs();
        let paths = ir_to_xag_with(&f, IfConversion::PathExpansion).unwrap();
        let merge = ir_to_xag_with(&f, IfConversion::ReachingConditions).unwrap();
        for x in 0..1u32 << n {
            let bits: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
            let want = spec(&bits);
            assert_eq!(interpret_ir(&f, &bits).unwrap(), want, "{name} x={x:#x}");
            assert_eq!(paths.simulate(&bits), want, "{name} paths x={x:#x}");
            assert_eq!(merge.simulate(&bits), want, "{name} merge x={x:#x}");
        }
    }
}

#[test]
fn majority_matches_specification() {
    let m = common::corpus_module("majority3.ll");
    let f = validate(&m.functions[0]).unwrap();
    assert_eq!(f.name(), "Classical_Majority3");
    assert_eq!(f.func.blocks.len(), 7);
    for x in 0..8u32 {
        let bits: Vec<bool> = (0..3).map(|i| x >> i & 1 == 1).collect();
        let want = x.count_ones() >= 2;
        assert_eq!(interpret_ir(&f, &bits).unwrap(), vec![want]);
    }
}

#[test]
fn printed_modules_reparse_identically() {
    for file in ["functions.ll", "majority3.ll"] {
        let m = common::corpus_module(file);
        for f in &m.functions {
            let text = f.to_string();
            let back = parse_module(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
            assert_eq!(&back.functions[0], f);
        }
    }
}

fn check_err(src: &str) -> CheckError {
    let m = parse_module(src).unwrap();
    validate(&m.functions[0]).unwrap_err()
}

#[test]
fn rejected_programs() {
    assert!(matches!(
        parse_module("define i1 @f(i1 %a) {\n  %r = mul i1 %a, %a\n  ret i1 %r\n}\n"),
        Err(ParseError::UnsupportedInstruction { .. })
    ));
    assert!(matches!(
        parse_module("define i1 @f(i1 %a) {\n  %r = call i1 @g(i1 %a)\n  ret i1 %r\n}\n"),
        Err(ParseError::UnsupportedInstruction { .. })
    ));
    assert!(matches!(
        check_err("define i1 @f(i1 %a) {\nentry:\n  br label %l\nl:\n  br i1 %a, label %l, label %x\nx:\n  ret i1 %a\n}\n"),
        CheckError::CyclicControlFlow(_)
    ));
    assert!(matches!(
        check_err(
            "define i1 @f(i1 %a) {\n  %r = and i1 %a, %q\n  %q = xor i1 %a, true\n  ret i1 %r\n}\n"
        ),
        CheckError::UseBeforeDef(_)
    ));
    assert!(matches!(
        check_err("define i1 @f(i1 %a) {\nentry:\n  br label %nowhere\n}\n"),
        CheckError::UnknownLabel(_)
    ));
    let wide: Vec<String> = (0..17).map(|i| format!("i1 %x{i}")).collect();
    let src = format!("define i1 @f({}) {{\n  ret i1 %x0\n}}\n", wide.join(", "));
    assert!(matches!(
        check_err(&src),
        CheckError::TooManyInputs { inputs: 17, .. }
    ));
}

#[test]
fn load_before_store_on_some_path() {
    let src = "define i1 @f(i1 %s, i1 %a) {
entry:
  %p = alloca i1
  br i1 %s, label %set, label %join
set:
  store i1 %a, i1* %p
  br label %join
join:
  %r = load i1, i1* %p
  ret i1 %r
}
";
    let m = parse_module(src).unwrap();
    let f = validate(&m.functions[0]).unwrap();
    for strategy in [
        IfConversion::PathExpansion,
        IfConversion::ReachingConditions,
    ] {
        assert!(matches!(
            ir_to_xag_with(&f, strategy),
            Err(LowerError::LoadOfUninitializedSlot { .. })
        ));
    }
    assert!(interpret_ir(&f, &[true, false]).is_ok());
    assert!(matches!(
        interpret_ir(&f, &[false, false]),
        Err(SimError::UninitializedLoad { .. })
    ));
}
