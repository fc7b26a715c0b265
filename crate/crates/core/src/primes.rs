//! Small-prime utilities for the modular side of the pipeline.

/// Deterministic trial division; inputs here are at most a few million.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// The first `count` odd primes.
pub fn odd_primes(count: usize) -> Vec<u32> {
    let mut out = Vec::with_capacity(count);
    let mut n = 3u32;
    while out.len() < count {
        if is_prime(n as u64) {
            out.push(n);
        }
        n += 2;
    }
    out
}

/// Odd primes `p <= bound`.
pub fn odd_primes_up_to(bound: u32) -> Vec<u32> {
    (3..=bound).step_by(2).filter(|&n| is_prime(n as u64)).collect()
}

/// Distinct prime factors, ascending.
pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}
