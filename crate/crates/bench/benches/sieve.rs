use criterion::{black_box, criterion_group, criterion_main, Criterion};
use pcf_bench::{normal_form, tables};
use pcf_core::pcfverify::critical_orbit_portrait;
use pcf_core::preper::{rational_preperiodic_graph, PreperParams};
use pcf_core::primes::odd_primes;
use pcf_core::sievedb::sieve;
use pcf_core::{Database, VerifyLimits};

fn build(c: &mut Criterion) {
    let primes = odd_primes(25);
    c.bench_function("build 25 primes", |b| b.iter(|| Database::build(black_box(&primes)).unwrap()));
}

fn sieve_small(c: &mut Criterion) {
    let (primes, db) = tables(60);
    c.bench_function("sieve h1=3 h2=6", |b| b.iter(|| sieve(3, 6, black_box(&primes), &db).unwrap()));
}

fn verify(c: &mut Criterion) {
    let sqrt5 = normal_form("-2", "0");
    let rational = normal_form("-10/3", "20/3");
    let wandering = normal_form("2", "-12");
    let lim = VerifyLimits::default();
    c.bench_function("portrait sqrt(5) row", |b| b.iter(|| critical_orbit_portrait(black_box(&sqrt5), lim).unwrap()));
    c.bench_function("portrait rational row", |b| b.iter(|| critical_orbit_portrait(black_box(&rational), lim).unwrap()));
    c.bench_function("portrait to cutoff", |b| b.iter(|| critical_orbit_portrait(black_box(&wandering), lim).unwrap()));
}

fn preper(c: &mut Criterion) {
    let m = normal_form("2", "-8");
    c.bench_function("preperiodic search", |b| {
        b.iter(|| rational_preperiodic_graph(black_box(&m), PreperParams::default()).unwrap())
    });
}

criterion_group!(benches, build, sieve_small, verify, preper);
criterion_main!(benches);
