//! Fixtures shared by the benchmarks.

use pcf_core::arith::parse_rational;
use pcf_core::primes::odd_primes;
use pcf_core::{Database, QuadMap};

/// Tables for the first `n` odd primes.
pub fn tables(n: usize) -> (Vec<u32>, Database) {
    let primes = odd_primes(n);
    let db = Database::build(&primes).expect("odd primes");
    (primes, db)
}

pub fn normal_form(s1: &str, s2: &str) -> QuadMap {
    QuadMap::from_sigmas(&parse_rational(s1).expect("rational"), &parse_rational(s2).expect("rational"))
}
