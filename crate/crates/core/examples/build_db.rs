// SPDX-License-Identifier: Apache-2.0

//! Builds the template database and writes it to the path given as the
//! first argument (stdout when absent).

use std::time::Instant;

use oracle_core::opt::XagDatabase;

fn main() {
    let start = Instant::now();
    let db = XagDatabase::build().expect("every class has a template");
    eprintln!("{} classes in {:.1?}", db.len(), start.elapsed());
    match std::env::args().nth(1) {
        Some(path) => db.save(path.as_ref()).expect("write database"),
        None => print!("{}", db.serialize()),
    }
}
