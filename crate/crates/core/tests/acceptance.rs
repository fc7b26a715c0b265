//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Builds the period database for every odd prime up to 750 unless
//! `PCF_SIEVE_DB` names a file that already covers them.

use std::process::ExitCode;
use std::time::Instant;

use pcf_core::selftest::{acceptance_primes, run_all};
use pcf_core::Database;

fn database() -> Database {
    let primes = acceptance_primes();
    if let Ok(path) = std::env::var("PCF_SIEVE_DB") {
        match Database::load(path.as_ref()) {
            Ok(db) if primes.iter().all(|&p| db.covers(p)) => return db,
            Ok(_) => eprintln!("{path} does not cover the acceptance primes; rebuilding"),
            Err(e) => eprintln!("cannot load {path}: {e}; rebuilding"),
        }
    }
    Database::build(&primes).expect("acceptance primes are valid")
}

fn main() -> ExitCode {
    let t = Instant::now();
    let db = database();
    eprintln!("database ready in {:.1}s", t.elapsed().as_secs_f64());
    let results = run_all(&db);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed ({:.1}s)", results.len() - failed, t.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
