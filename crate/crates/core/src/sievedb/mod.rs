//! Modular period tables and the sieve built on them.

mod db;
mod io;
mod sieve;

pub use db::{compute_entry, Database, DbEntry, MAX_PRIME};
pub use io::{DbFileFormat, FORMAT_VERSION};
pub use sieve::{
    check_irrational_periods, check_rational_periods, critical_kind, reduce_point, sieve, sieve_pair,
    sieve_with_stats, table_key, CriticalKind, PeriodCheck, Running, SieveCandidate, SieveStats,
};
