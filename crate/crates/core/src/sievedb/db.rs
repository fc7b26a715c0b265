//! Per-prime tables of the normal-form family over F_p with the admissible
//! global periods of each critical point.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ffdyn::{orbit_data_with, possible_periods, FpMap, FpPoint, OrbitScratch, PeriodSet, PrimeField};
use crate::primes::is_prime;

/// Largest prime whose tables fit the packed `u16` slots.
pub const MAX_PRIME: u32 = 65_521;

/// Packed record: `m[0] == 0` marks an absent map; `r == 0` marks a
/// superattracting cycle.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub(crate) struct Slot {
    pub(crate) pts: [u16; 2],
    pub(crate) m: [u16; 2],
    pub(crate) r: [u16; 2],
}

impl Slot {
    fn is_present(&self) -> bool {
        self.m[0] != 0
    }

    fn periods(&self, i: usize) -> PeriodSet {
        let m = self.m[i] as u64;
        match self.r[i] {
            0 => PeriodSet::single(m),
            r => PeriodSet::pair(m, m * r as u64),
        }
    }
}

/// Both critical points of a stored map, with their period sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DbEntry {
    pub points: [FpPoint; 2],
    pub periods: [PeriodSet; 2],
}

impl DbEntry {
    /// Period set stored for the critical point `pt`, if it is one.
    pub fn periods_of(&self, pt: FpPoint) -> Option<PeriodSet> {
        self.points
            .iter()
            .position(|&q| q == pt)
            .map(|i| self.periods[i])
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct PrimeTable {
    pub(crate) p: u32,
    pub(crate) slots: Vec<Slot>,
}

impl PrimeTable {
    pub(crate) fn empty(p: u32) -> Self {
        PrimeTable {
            p,
            slots: vec![Slot::default(); p as usize * p as usize],
        }
    }

    pub(crate) fn get(&self, b: u32, c: u32) -> Option<DbEntry> {
        let s = self.slots[(b * self.p + c) as usize];
        if !s.is_present() {
            return None;
        }
        let pt = |i: usize| FpPoint::from_code(s.pts[i] as u32, self.p);
        Some(DbEntry {
            points: [pt(0), pt(1)],
            periods: [s.periods(0), s.periods(1)],
        })
    }

    pub(crate) fn set(&mut self, b: u32, c: u32, entry: &DbEntry) -> Result<()> {
        let mut slot = Slot::default();
        for i in 0..2 {
            slot.pts[i] = entry.points[i].code(self.p) as u16;
            let ps = entry.periods[i].as_slice();
            let m = ps[0];
            let r = match ps {
                [_] => 0,
                [_, mr] => mr / m,
                _ => unreachable!(),
            };
            if m == 0 || m > u16::MAX as u64 || r > u16::MAX as u64 || (ps.len() == 2 && ps[1] % m != 0) {
                return Err(Error::DbFormat(format!("period set {} out of range for p = {}", entry.periods[i], self.p)));
            }
            slot.m[i] = m as u16;
            slot.r[i] = r as u16;
        }
        self.slots[(b * self.p + c) as usize] = slot;
        Ok(())
    }

    pub(crate) fn records(&self) -> impl Iterator<Item = (u32, u32, DbEntry)> + '_ {
        let p = self.p;
        (0..p).flat_map(move |b| (0..p).filter_map(move |c| self.get(b, c).map(|e| (b, c, e))))
    }
}

/// Immutable lookup table keyed by `(p, b, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Database {
    pub(crate) tables: Vec<PrimeTable>,
    pub(crate) meta: String,
}

/// Entry for one `(b, c)` computed directly, without a table.
pub fn compute_entry(field: &PrimeField, scratch: &mut OrbitScratch, b: u32, c: u32) -> Option<DbEntry> {
    let map = FpMap::normal_form(field.p(), b, c)?;
    let points = map.critical_points(field)?;
    let periods = points.map(|pt| possible_periods(&orbit_data_with(&map, field, scratch, pt)));
    Some(DbEntry { points, periods })
}

fn build_table(p: u32) -> Result<PrimeTable> {
    let field = PrimeField::new(p)?;
    let rows: Vec<Vec<Slot>> = (0..p)
        .into_par_iter()
        .map_init(
            || OrbitScratch::new(p),
            |scratch, b| {
                let mut row = PrimeTable { p, slots: vec![Slot::default(); p as usize] };
                for c in 0..p {
                    if let Some(e) = compute_entry(&field, scratch, b, c) {
                        // row-local table: index b = 0
                        row.set(0, c, &e).expect("periods fit the packed slot");
                    }
                }
                row.slots
            },
        )
        .collect();
    Ok(PrimeTable {
        p,
        slots: rows.into_iter().flatten().collect(),
    })
}

pub(crate) fn validate_primes(primes: &[u32]) -> Result<()> {
    let mut seen = std::collections::BTreeSet::new();
    for &p in primes {
        if p == 2 || !is_prime(p as u64) {
            return Err(Error::NotOddPrime(p as u64));
        }
        if p > MAX_PRIME {
            return Err(Error::PrimeTooLarge(p));
        }
        if !seen.insert(p) {
            return Err(Error::InvalidParameter(format!("prime {p} listed twice")));
        }
    }
    Ok(())
}

impl Database {
    /// Builds the tables for distinct odd primes; blocks are stored in
    /// ascending order of p whatever the input order.
    pub fn build(primes: &[u32]) -> Result<Self> {
        Self::build_with_progress(primes, |_| {})
    }

    pub fn build_with_progress(primes: &[u32], progress: impl Fn(u32) + Sync) -> Result<Self> {
        validate_primes(primes)?;
        let mut sorted = primes.to_vec();
        sorted.sort_unstable();
        let tables = sorted
            .iter()
            .map(|&p| {
                let t = build_table(p);
                progress(p);
                t
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Database { tables, meta: String::new() })
    }

    /// Free-form provenance string carried in the file header.
    pub fn meta(&self) -> &str {
        &self.meta
    }

    pub fn set_meta(&mut self, meta: impl Into<String>) {
        self.meta = meta.into();
    }

    pub fn primes(&self) -> Vec<u32> {
        self.tables.iter().map(|t| t.p).collect()
    }

    pub fn covers(&self, p: u32) -> bool {
        self.table(p).is_ok()
    }

    pub(crate) fn table(&self, p: u32) -> Result<&PrimeTable> {
        self.tables
            .binary_search_by_key(&p, |t| t.p)
            .map(|i| &self.tables[i])
            .map_err(|_| Error::UncoveredPrime(p))
    }

    /// `Ok(None)` means the map was excluded at build time.
    pub fn lookup(&self, p: u32, b: u32, c: u32) -> Result<Option<DbEntry>> {
        let t = self.table(p)?;
        if b >= p || c >= p {
            return Err(Error::InvalidParameter(format!("({b}, {c}) is not reduced mod {p}")));
        }
        Ok(t.get(b, c))
    }

    pub fn entry_count(&self, p: u32) -> Result<usize> {
        Ok(self.table(p)?.slots.iter().filter(|s| s.is_present()).count())
    }

    /// All stored records for `p`, ordered by `(b, c)`.
    pub fn records(&self, p: u32) -> Result<Vec<(u32, u32, DbEntry)>> {
        Ok(self.table(p)?.records().collect())
    }
}
