use pcf_core::arith::{int, parse_rational};
use pcf_core::pcfverify::cycle_length_from;
use pcf_core::primes::odd_primes;
use pcf_core::projmap::format_sigma_pair;
use pcf_core::sievedb::{sieve, table_key};
use pcf_core::{critical_orbit_portrait, run_pipeline, Database, DbFileFormat, Point, PrimeField, QuadMap, VerifyLimits};

fn small_db() -> (Vec<u32>, Database) {
    let primes = odd_primes(40);
    let db = Database::build(&primes).unwrap();
    (primes, db)
}

#[test]
fn sub_bound_pipeline() {
    let (primes, db) = small_db();
    let out = run_pipeline(2, 4, &primes, &db, VerifyLimits::default()).unwrap();
    let got: Vec<String> =
        out.records.iter().map(|r| format_sigma_pair(&r.candidate.sigma1, &r.candidate.sigma2)).collect();
    assert_eq!(got, ["(-2, 0)", "(-2, 2)", "(-2, 4)", "(2, -4)"]);
    assert!(out.records.iter().all(|r| r.is_verified()));
}

#[test]
fn saved_tables_sieve_identically() {
    let (primes, db) = small_db();
    let dir = tempfile::tempdir().unwrap();
    for (name, fmt) in [("b.db", DbFileFormat::Binary), ("t.db", DbFileFormat::Text)] {
        let path = dir.path().join(name);
        db.save(&path, fmt).unwrap();
        let back = Database::load(&path).unwrap();
        assert_eq!(sieve(2, 3, &primes, &back).unwrap(), sieve(2, 3, &primes, &db).unwrap());
    }
}

#[test]
fn stored_periods_contain_global_periods() {
    let (primes, db) = small_db();
    for (a, b) in [("2", "-8"), ("-6", "8"), ("-10/3", "20/3")] {
        let map = QuadMap::from_sigmas(&parse_rational(a).unwrap(), &parse_rational(b).unwrap());
        let st = critical_orbit_portrait(&map, VerifyLimits::default()).unwrap();
        let p = st.portrait().unwrap();
        let res = map.resultant();
        for &q in &primes {
            if num_traits::Zero::is_zero(&(&res % q)) {
                continue;
            }
            let field = PrimeField::new(q).unwrap();
            let (bk, ck) = table_key(&map, &field).unwrap();
            let entry = db.lookup(q, bk, ck).unwrap().unwrap();
            for c in p.critical_points() {
                let m = cycle_length_from(p, c).unwrap() as u64;
                let x = c.to_ext_rational().unwrap();
                let set = entry.periods_of(pcf_core::sievedb::reduce_point(&x, &field)).unwrap();
                assert!(set.contains(m), "({a}, {b}) at {q}: {m} not in {set}");
            }
        }
    }
}

#[test]
fn conjugation_preserves_pcf() {
    let m: QuadMap = "[1,0,-2]/[0,0,1]".parse().unwrap();
    let f = pcf_core::Mobius::from_i64(2, 1, 1, 1).unwrap();
    let c = m.conjugate(&f);
    let st = critical_orbit_portrait(&c, VerifyLimits::default()).unwrap();
    assert!(st.is_verified());
    assert_eq!(c.sigma_invariants().unwrap(), (int(2), int(-8)));
    assert_eq!(st.portrait().unwrap().len(), 4);
    assert!(st.portrait().unwrap().vertices().any(|v| *v == f.apply(&Point::int(0)).unwrap()));
}
