// SPDX-License-Identifier: Apache-2.0

mod common;

use oracle_core::ir::{parse_module, validate};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn corpus_functions_agree() {
    let mut checked = 0;
    for file in ["functions.ll", "majority3.ll"] {
        let m = common::corpus_module(file);
        for f in &m.functions {
            let cf = validate(f).unwrap();
            let c = common::check_triangle(&cf).unwrap();
            assert!(c.optimized_ands <= c.initial_ands, "{}", f.name);
            assert_eq!(c.ccnot, 2 * c.optimized_ands, "{}", f.name);
            checked += 1;
        }
    }
    assert!(checked >= 21);
}

#[test]
fn random_networks_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..60 {
        let n = 1 + i % 8;
        let g = common::random_xag(&mut rng, n, 4 + i % 24, 1 + i % 3);
        let text = common::xag_to_ir(&g, &format!("r{i}"));
        let m = parse_module(&text).unwrap_or_else(|e| panic!("{e}\n{text}"));
        let f = validate(&m.functions[0]).unwrap();
        // the unparsed IR must compute what the generator built
        for x in 0..1u64 << n {
            let bits: Vec<bool> = (0..n).map(|k| x >> k & 1 == 1).collect();
            assert_eq!(
                oracle_core::sim::interpret_ir(&f, &bits).unwrap(),
                g.simulate(&bits)
            );
        }
        let c = common::check_triangle(&f).unwrap();
        assert!(c.optimized_ands <= c.initial_ands);
        assert_eq!(c.ccnot, 2 * c.optimized_ands);
    }
}
