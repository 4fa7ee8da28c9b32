// SPDX-License-Identifier: Apache-2.0

mod common;

use oracle_core::opt::exact::{synthesize_u16, MAX_ANDS};
use oracle_core::opt::npn::{canonicalize_u16, npn_classes};
use oracle_core::opt::{
    collapse_resynthesize, cut_rewrite, optimize, OptimizeOptions, Pass, XagDatabase,
};
use oracle_core::xag::Xag;
use oracle_core::TruthTable;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn template_network_table(t: &oracle_core::opt::XagTemplate) -> u64 {
    let mut g = Xag::new();
    let ins: Vec<_> = (0..4).map(|i| g.add_input(format!("x{i}"))).collect();
    let s = t.instantiate(&mut g, &[ins[0], ins[1], ins[2], ins[3]]);
    g.add_output(s, "f");
    assert!(g.count_ands() <= t.and_count());
    g.output_truth_tables().unwrap()[0].as_u64()
}

#[test]
fn database_templates_are_minimal_and_correct() {
    let db = common::database();
    assert_eq!(db.len(), 222);
    assert_eq!(npn_classes().len(), 222);
    for e in db.entries() {
        assert!(e.template.and_count() <= MAX_ANDS);
        assert_eq!(
            template_network_table(&e.template),
            e.canonical as u64,
            "class {:04x}",
            e.canonical
        );
        if let Some(fewer) = e.template.and_count().checked_sub(1) {
            assert!(
                synthesize_u16(e.canonical, 4, fewer).is_none(),
                "class {:04x}",
                e.canonical
            );
        }
    }
}

#[test]
fn known_multiplicative_complexities() {
    let db = common::database();
    let x = |i| TruthTable::var(4, i);
    let ands = |t: &TruthTable| db.lookup(t).unwrap().template.and_count();
    let and4 = &(&x(0) & &x(1)) & &(&x(2) & &x(3));
    let xor4 = &(&x(0) ^ &x(1)) ^ &(&x(2) ^ &x(3));
    let bent = &(&x(0) & &x(1)) ^ &(&x(2) & &x(3));
    let maj = TruthTable::from_u64(3, 0xE8);
    assert_eq!(ands(&and4), 3);
    assert_eq!(ands(&xor4), 0);
    assert_eq!(ands(&bent), 2);
    assert_eq!(ands(&maj), 1);
}

#[test]
fn full_database_text_round_trip() {
    let db = common::database();
    let text = db.serialize();
    assert_eq!(&XagDatabase::parse(&text).unwrap(), db);
    let dir = std::env::temp_dir().join(format!("oraclec-db-test-{}", std::process::id()));
    let path = dir.join("db.txt");
    db.save(&path).unwrap();
    assert_eq!(&XagDatabase::load_or_build(&path, false).unwrap(), db);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn lookup_every_function_of_three_inputs() {
    let db = common::database();
    for bits in 0..=255u64 {
        let t = TruthTable::from_u64(3, bits);
        let m = db.lookup(&t).unwrap();
        assert_eq!(
            m.transform.apply(canonicalize_u16(m.template.table()).0),
            (bits | bits << 8) as u16
        );
        let mut g = Xag::new();
        let ins: Vec<_> = (0..3).map(|i| g.add_input(format!("x{i}"))).collect();
        let s = m.instantiate(&mut g, &ins);
        g.add_output(s, "f");
        assert_eq!(g.output_truth_tables().unwrap()[0], t);
    }
}

fn assert_equivalent(a: &Xag, b: &Xag) {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = a.num_inputs();
    let rows: Vec<u64> = if n <= 12 {
        (0..1u64 << n).collect()
    } else {
        (0..4096)
            .map(|_| rng.gen::<u64>() & ((1 << n) - 1))
            .collect()
    };
    for x in rows {
        let bits: Vec<bool> = (0..n).map(|i| x >> i & 1 == 1).collect();
        assert_eq!(a.simulate(&bits), b.simulate(&bits), "x={x:#x}");
    }
}

#[test]
fn passes_preserve_function_and_never_add_ands() {
    let db = common::database();
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for i in 0..80 {
        let n = 2 + i % 13;
        let g = common::random_xag(&mut rng, n, 10 + i % 40, 1 + i % 4);
        for passes in [
            vec![Pass::Rewrite],
            vec![Pass::Collapse],
            vec![Pass::Collapse, Pass::Rewrite],
        ] {
            let opts = OptimizeOptions {
                passes,
                ..OptimizeOptions::default()
            };
            let o = optimize(&g, &opts, db).unwrap();
            assert!(o.count_ands() <= g.count_ands());
            o.check_invariants().unwrap();
            assert_equivalent(&g, &o);
            oracle_core::circuit::compile(&o).unwrap();
        }
        let r = cut_rewrite(&g, db, 4, 12);
        assert!(r.count_ands() <= g.count_ands());
        assert_equivalent(&g, &r);
        for cut_size in [2, 3] {
            let r = cut_rewrite(&g, db, cut_size, 4);
            assert!(r.count_ands() <= g.count_ands());
            assert_equivalent(&g, &r);
        }
    }
}

#[test]
fn collapse_limits() {
    let db = common::database();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let g = common::random_xag(&mut rng, 9, 30, 1);
    assert!(collapse_resynthesize(&g, db, 8).is_err());
    let small = common::random_xag(&mut rng, 6, 30, 2);
    assert!(collapse_resynthesize(&small, db, 5).is_err());
    let c = collapse_resynthesize(&small, db, 8).unwrap();
    assert_equivalent(&small, &c);
}

#[test]
fn bad_cut_size_is_rejected() {
    let g = common::random_xag(&mut ChaCha8Rng::seed_from_u64(0), 3, 5, 1);
    let opts = OptimizeOptions {
        cut_size: 5,
        ..OptimizeOptions::default()
    };
    assert!(optimize(&g, &opts, common::database()).is_err());
}
