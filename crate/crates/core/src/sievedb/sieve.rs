//! Height-bounded search over normal forms, discarding maps whose critical
//! orbits cannot have a consistent global period across the covered primes.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use rayon::prelude::*;

use super::db::Database;
use crate::arith::{enumerate_rationals, format_rational, ExtRational, Point};
use crate::error::{Error, Result};
use crate::ffdyn::{FpPoint, PeriodSet, PrimeField};
use crate::projmap::QuadMap;

/// Running intersection of admissible periods. `Unset` until the first
/// prime contributes, so an emptied intersection is never confused with
/// an untouched one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Running {
    Unset,
    Set(PeriodSet),
}

impl Running {
    /// Intersects in place; `false` once the intersection is empty.
    pub fn meet(&mut self, other: PeriodSet) -> bool {
        let next = match self {
            Running::Unset => Some(other),
            Running::Set(s) => s.intersect(&other),
        };
        match next {
            Some(s) => {
                *self = Running::Set(s);
                true
            }
            None => false,
        }
    }
}

impl fmt::Display for Running {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Running::Unset => f.write_str("unset"),
            Running::Set(s) => s.fmt(f),
        }
    }
}

/// Result of intersecting period data over a prime list.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodCheck {
    pub survives: bool,
    /// One running set per rational critical point, or a single shared one
    /// for conjugate critical points.
    pub running: Vec<Running>,
    /// Primes whose table entry was used.
    pub informative_primes: usize,
    /// Prime at which an intersection emptied.
    pub failed_at: Option<u32>,
}

fn mod_p(n: &BigInt, p: u32) -> u32 {
    n.mod_floor(&BigInt::from(p)).to_u32().expect("residue fits in u32")
}

/// Reduction of a rational point; a denominator divisible by p gives infinity.
pub fn reduce_point(x: &ExtRational, field: &PrimeField) -> FpPoint {
    let p = field.p();
    match x {
        ExtRational::Infinity => FpPoint::Infinity,
        ExtRational::Finite(q) => {
            let d = mod_p(q.denom(), p);
            if d == 0 {
                FpPoint::Infinity
            } else {
                let n = mod_p(q.numer(), p) as u64;
                FpPoint::Finite((n * field.inv(d) as u64 % p as u64) as u32)
            }
        }
    }
}

/// Table key `(b, c)` of a map with good reduction at p, read off its
/// reduction after scaling the leading coefficient to 2.
pub fn table_key(map: &QuadMap, field: &PrimeField) -> Result<(u32, u32)> {
    let p = field.p();
    let pm = p as u64;
    let [f2, f1, f0] = map.f().each_ref().map(|c| mod_p(c, p) as u64);
    let [g2, g1, g0] = map.g().each_ref().map(|c| mod_p(c, p) as u64);
    let not_normal = || Error::NotNormalForm(map.to_string(), p);
    if f2 == 0 {
        return Err(not_normal());
    }
    let scale = 2 * field.inv(f2 as u32) as u64 % pm;
    let s = |x: u64| x * scale % pm;
    let (b, c) = (s(f1), s(g0));
    if s(f0) != b || s(g2) != pm - 1 || s(g1) != (4 + pm - b) % pm {
        return Err(not_normal());
    }
    Ok((b as u32, c as u32))
}

fn fields_for(primes: &[u32], db: &Database) -> Result<Vec<PrimeField>> {
    primes
        .iter()
        .map(|&p| {
            db.table(p)?;
            PrimeField::new(p)
        })
        .collect()
}

/// Rational critical points: one running set per point.
pub fn check_rational_periods(
    map: &QuadMap,
    gammas: &[ExtRational; 2],
    primes: &[u32],
    res: &BigInt,
    db: &Database,
) -> Result<PeriodCheck> {
    let fields = fields_for(primes, db)?;
    check_rational_in(map, gammas, &fields, res, db)
}

fn check_rational_in(
    map: &QuadMap,
    gammas: &[ExtRational; 2],
    fields: &[PrimeField],
    res: &BigInt,
    db: &Database,
) -> Result<PeriodCheck> {
    let mut running = vec![Running::Unset; 2];
    let mut used = 0;
    for field in fields {
        let p = field.p();
        if mod_p(res, p) == 0 {
            continue;
        }
        let (b, c) = table_key(map, field)?;
        let entry = db.lookup(p, b, c)?.ok_or_else(|| {
            Error::Inconsistent(format!(
                "{map} has rational critical points and good reduction at {p}, but ({b}, {c}) is absent"
            ))
        })?;
        used += 1;
        for (i, g) in gammas.iter().enumerate() {
            let pt = reduce_point(g, field);
            let set = entry.periods_of(pt).ok_or_else(|| {
                Error::Inconsistent(format!("{g} mod {p} = {pt} is not a stored critical point of ({b}, {c})"))
            })?;
            if !running[i].meet(set) {
                return Ok(PeriodCheck { survives: false, running, informative_primes: used, failed_at: Some(p) });
            }
        }
    }
    Ok(PeriodCheck { survives: true, running, informative_primes: used, failed_at: None })
}

/// Conjugate critical points: one shared running set, fed only by primes
/// where both critical points reduce into F_p.
pub fn check_irrational_periods(map: &QuadMap, primes: &[u32], res: &BigInt, db: &Database) -> Result<PeriodCheck> {
    let fields = fields_for(primes, db)?;
    check_irrational_in(map, &fields, res, db)
}

fn check_irrational_in(map: &QuadMap, fields: &[PrimeField], res: &BigInt, db: &Database) -> Result<PeriodCheck> {
    let mut running = Running::Unset;
    let mut used = 0;
    for field in fields {
        let p = field.p();
        if mod_p(res, p) == 0 {
            continue;
        }
        let (b, c) = table_key(map, field)?;
        let Some(entry) = db.lookup(p, b, c)? else {
            continue;
        };
        used += 1;
        let ok = match entry.periods[0].intersect(&entry.periods[1]) {
            Some(both) => running.meet(both),
            None => false,
        };
        if !ok {
            return Ok(PeriodCheck { survives: false, running: vec![running], informative_primes: used, failed_at: Some(p) });
        }
    }
    Ok(PeriodCheck { survives: true, running: vec![running], informative_primes: used, failed_at: None })
}

/// Whether the two critical points are rational, and if so which.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CriticalKind {
    Rational([ExtRational; 2]),
    /// Galois-conjugate pair (real or complex).
    Conjugate,
}

/// Critical points of a degree-2 map, classified by rationality.
pub fn critical_kind(map: &QuadMap, res: &BigInt) -> Result<CriticalKind> {
    let w = map.half_wronskian();
    // disc(w) = 4·Res
    let rational = w[0].is_zero() || (!res.is_negative() && res.sqrt().pow(2) == *res);
    if !rational {
        return Ok(CriticalKind::Conjugate);
    }
    let pts = map.critical_points()?;
    let conv = |p: &Point| p.to_ext_rational().expect("rational critical point");
    Ok(CriticalKind::Rational([conv(&pts[0]), conv(&pts[1])]))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SieveCandidate {
    pub sigma1: BigRational,
    pub sigma2: BigRational,
    pub map: QuadMap,
    pub resultant: BigInt,
    pub critical: CriticalKind,
    pub check: PeriodCheck,
}

impl SieveCandidate {
    pub fn rational_critical(&self) -> bool {
        matches!(self.critical, CriticalKind::Rational(_))
    }

    /// Conjugate critical points and no covered prime contributed data, so
    /// the sieve could not test the map at all.
    pub fn no_modular_info(&self) -> bool {
        !self.rational_critical() && self.check.informative_primes == 0
    }

    pub fn sigma_key(&self) -> (String, String) {
        (format_rational(&self.sigma1), format_rational(&self.sigma2))
    }

    /// Tab-separated survivor line.
    pub fn tsv(&self) -> String {
        let sets: Vec<String> = self.check.running.iter().map(|r| r.to_string()).collect();
        format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}",
            format_rational(&self.sigma1),
            format_rational(&self.sigma2),
            self.map,
            self.resultant,
            if self.rational_critical() { "rational" } else { "conjugate" },
            sets.join(";"),
            if self.no_modular_info() { "no-modular-info" } else { "ok" },
        )
    }

    pub const TSV_HEADER: &'static str = "sigma1\tsigma2\tmap\tresultant\tcritical\tperiods\tflag";
}

/// Counters from one sieve run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SieveStats {
    pub pairs: u64,
    pub degenerate: u64,
    pub rational_critical: u64,
    pub conjugate_critical: u64,
    pub survivors: u64,
}

impl SieveStats {
    fn add(mut self, o: SieveStats) -> SieveStats {
        self.pairs += o.pairs;
        self.degenerate += o.degenerate;
        self.rational_critical += o.rational_critical;
        self.conjugate_critical += o.conjugate_critical;
        self.survivors += o.survivors;
        self
    }
}

/// Tests one σ-pair; `None` when the map is degenerate.
pub fn sieve_pair(
    s1: &BigRational,
    s2: &BigRational,
    fields: &[PrimeField],
    db: &Database,
) -> Result<Option<SieveCandidate>> {
    let map = QuadMap::from_sigmas(s1, s2);
    let res = map.resultant();
    if res.is_zero() {
        return Ok(None);
    }
    let critical = critical_kind(&map, &res)?;
    let check = match &critical {
        CriticalKind::Rational(g) => check_rational_in(&map, g, fields, &res, db)?,
        CriticalKind::Conjugate => check_irrational_in(&map, fields, &res, db)?,
    };
    Ok(Some(SieveCandidate { sigma1: s1.clone(), sigma2: s2.clone(), map, resultant: res, critical, check }))
}

/// Survivors over all σ-pairs with `H(σ₁) <= h1`, `H(σ₂) <= h2`, in
/// enumeration order of (σ₁, σ₂).
pub fn sieve(h1: u64, h2: u64, primes: &[u32], db: &Database) -> Result<Vec<SieveCandidate>> {
    Ok(sieve_with_stats(h1, h2, primes, db)?.0)
}

pub fn sieve_with_stats(h1: u64, h2: u64, primes: &[u32], db: &Database) -> Result<(Vec<SieveCandidate>, SieveStats)> {
    if h1 == 0 || h2 == 0 {
        return Err(Error::InvalidParameter("height bounds must be at least 1".into()));
    }
    let fields = fields_for(primes, db)?;
    let outer: Vec<BigRational> = enumerate_rationals(h1).collect();
    let per_s1: Vec<(Vec<SieveCandidate>, SieveStats)> = outer
        .par_iter()
        .map(|s1| -> Result<_> {
            let mut out = Vec::new();
            let mut st = SieveStats::default();
            for s2 in enumerate_rationals(h2) {
                st.pairs += 1;
                let Some(cand) = sieve_pair(s1, &s2, &fields, db)? else {
                    st.degenerate += 1;
                    continue;
                };
                if cand.rational_critical() {
                    st.rational_critical += 1;
                } else {
                    st.conjugate_critical += 1;
                }
                if cand.check.survives {
                    st.survivors += 1;
                    out.push(cand);
                }
            }
            Ok((out, st))
        })
        .collect::<Result<_>>()?;
    let mut all = Vec::new();
    let mut stats = SieveStats::default();
    for (c, s) in per_s1 {
        all.extend(c);
        stats = stats.add(s);
    }
    Ok((all, stats))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, parse_rational};
    use crate::primes::odd_primes;

    fn q(s: &str) -> BigRational {
        parse_rational(s).unwrap()
    }

    #[test]
    fn table_key_matches_sigma_reduction() {
        let field = PrimeField::new(7).unwrap();
        let m = QuadMap::from_sigmas(&int(2), &int(-8));
        assert_eq!(table_key(&m, &field).unwrap(), (0, 1));
        let m = QuadMap::from_sigmas(&q("-2/3"), &q("4/3"));
        // (b, c) = (2 - σ₁, 2 - σ₁ - σ₂) = (8/3, 4/3) mod 7
        let field = PrimeField::new(7).unwrap();
        let inv3 = field.inv(3);
        assert_eq!(table_key(&m, &field).unwrap(), (8 * inv3 % 7, 4 * inv3 % 7));
        let z2 = "[1,0,0]/[0,0,1]".parse::<QuadMap>().unwrap();
        assert!(matches!(table_key(&z2, &field), Err(Error::NotNormalForm(_, 7))));
    }

    #[test]
    fn single_prime_running_sets() {
        let db = Database::build(&[7]).unwrap();
        let m = QuadMap::from_sigmas(&int(2), &int(-8));
        let g = [ExtRational::Finite(int(0)), ExtRational::Finite(int(-4))];
        let chk = check_rational_periods(&m, &g, &[7], &m.resultant(), &db).unwrap();
        assert!(chk.survives);
        assert_eq!(chk.running[0], Running::Set(PeriodSet::single(1)));
        assert_eq!(chk.running[1], Running::Set(PeriodSet::pair(1, 3)));
    }

    #[test]
    fn pcf_and_non_pcf_examples() {
        let primes = odd_primes(24);
        let db = Database::build(&primes).unwrap();
        let row1 = QuadMap::from_sigmas(&int(2), &int(-8));
        let g = [ExtRational::Finite(int(0)), ExtRational::Finite(int(-4))];
        assert!(check_rational_periods(&row1, &g, &primes, &row1.resultant(), &db).unwrap().survives);
        let row8 = QuadMap::from_sigmas(&int(-2), &int(0));
        assert!(check_irrational_periods(&row8, &primes, &row8.resultant(), &db).unwrap().survives);
        let off = QuadMap::from_sigmas(&int(-2), &int(1));
        assert!(!check_irrational_periods(&off, &primes, &off.resultant(), &db).unwrap().survives);
        let off = QuadMap::from_sigmas(&int(2), &int(-5));
        let cand = sieve_pair(&int(2), &int(-5), &fields_for(&primes, &db).unwrap(), &db).unwrap().unwrap();
        assert!(!cand.check.survives, "{}", off);
    }

    #[test]
    fn vacuous_irrational_check() {
        let db = Database::build(&[3]).unwrap();
        let chk = check_irrational_periods(&QuadMap::from_sigmas(&int(-2), &int(0)), &[], &BigInt::from(1), &db).unwrap();
        assert!(chk.survives);
        assert_eq!(chk.informative_primes, 0);
        assert_eq!(chk.running, [Running::Unset]);
    }

    #[test]
    fn uncovered_prime_is_an_error() {
        let db = Database::build(&[3]).unwrap();
        assert!(matches!(sieve(1, 1, &[5], &db), Err(Error::UncoveredPrime(5))));
    }

    #[test]
    fn running_meet() {
        let mut r = Running::Unset;
        assert!(r.meet(PeriodSet::pair(1, 3)));
        assert!(r.meet(PeriodSet::pair(3, 6)));
        assert_eq!(r, Running::Set(PeriodSet::single(3)));
        assert!(!r.meet(PeriodSet::single(1)));
    }
}
