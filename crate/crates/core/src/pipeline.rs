//! Sieve followed by exact verification of every survivor.

use rayon::prelude::*;

use crate::error::Result;
use crate::pcfverify::{critical_orbit_portrait, PcfStatus, VerifyLimits};
use crate::sievedb::{sieve_with_stats, Database, SieveCandidate, SieveStats};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineRecord {
    pub candidate: SieveCandidate,
    pub status: PcfStatus,
}

impl PipelineRecord {
    pub fn is_verified(&self) -> bool {
        self.status.is_verified()
    }

    /// Survivor TSV line with the verification status appended.
    pub fn tsv(&self) -> String {
        let st = if self.is_verified() { "verified" } else { "undetermined" };
        format!("{}\t{st}", self.candidate.tsv())
    }

    pub const TSV_HEADER: &'static str = "sigma1\tsigma2\tmap\tresultant\tcritical\tperiods\tflag\tstatus";
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PipelineOutput {
    pub records: Vec<PipelineRecord>,
    pub stats: SieveStats,
}

impl PipelineOutput {
    pub fn verified(&self) -> impl Iterator<Item = &PipelineRecord> {
        self.records.iter().filter(|r| r.is_verified())
    }

    pub fn undetermined(&self) -> impl Iterator<Item = &PipelineRecord> {
        self.records.iter().filter(|r| !r.is_verified())
    }
}

pub fn run_pipeline(h1: u64, h2: u64, primes: &[u32], db: &Database, limits: VerifyLimits) -> Result<PipelineOutput> {
    let (survivors, stats) = sieve_with_stats(h1, h2, primes, db)?;
    let records = survivors
        .into_par_iter()
        .map(|candidate| {
            let status = critical_orbit_portrait(&candidate.map, limits)?;
            Ok(PipelineRecord { candidate, status })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(PipelineOutput { records, stats })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::primes::odd_primes;

    #[test]
    fn small_bounds() {
        let primes = odd_primes(20);
        let db = Database::build(&primes).unwrap();
        let out = run_pipeline(1, 1, &primes, &db, VerifyLimits::default()).unwrap();
        assert!(out.records.is_empty());
        assert_eq!(out.stats.pairs, 9);
    }
}
