//! Run configuration: defaults, then the TOML file, then flags.

use std::path::{Path, PathBuf};

use pcf_core::pcfverify::{DEFAULT_BUDGET, DEFAULT_HEIGHT_CUTOFF};
use pcf_core::preper::PreperParams;
use pcf_core::primes::{is_prime, odd_primes};
use pcf_core::sievedb::MAX_PRIME;
use pcf_core::VerifyLimits;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub const CONFIG_VERSION: u32 = 1;
pub const DEFAULT_PRIMES: usize = 130;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreperConfig {
    pub height_bound: u64,
    pub steps: usize,
    pub height_cutoff: u64,
}

impl From<PreperParams> for PreperConfig {
    fn from(p: PreperParams) -> Self {
        PreperConfig { height_bound: p.height_bound, steps: p.steps, height_cutoff: p.height_cutoff }
    }
}

impl From<PreperConfig> for PreperParams {
    fn from(p: PreperConfig) -> Self {
        PreperParams { height_bound: p.height_bound, steps: p.steps, height_cutoff: p.height_cutoff }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RunConfig {
    pub version: u32,
    pub primes: Vec<u32>,
    pub h1: u64,
    pub h2: u64,
    pub budget: usize,
    pub height_cutoff: u64,
    pub preper: PreperConfig,
    pub workers: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub db_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            version: CONFIG_VERSION,
            primes: odd_primes(DEFAULT_PRIMES),
            h1: 10,
            h2: 20,
            budget: DEFAULT_BUDGET,
            height_cutoff: DEFAULT_HEIGHT_CUTOFF,
            preper: PreperParams::default().into(),
            workers: None,
            output_dir: None,
            db_path: None,
        }
    }
}

/// On-disk form; every key but `version` is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    version: u32,
    primes: Option<usize>,
    prime_list: Option<Vec<u32>>,
    h1: Option<u64>,
    h2: Option<u64>,
    budget: Option<usize>,
    height_cutoff: Option<u64>,
    preper: Option<FilePreper>,
    workers: Option<usize>,
    output_dir: Option<PathBuf>,
    db_path: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct FilePreper {
    height_bound: Option<u64>,
    steps: Option<usize>,
    height_cutoff: Option<u64>,
}

/// Flag values; `None` leaves the lower layer in place.
#[derive(Clone, Debug, Default)]
pub struct Overrides {
    pub primes: Option<usize>,
    pub prime_list: Option<Vec<u32>>,
    pub h1: Option<u64>,
    pub h2: Option<u64>,
    pub budget: Option<usize>,
    pub height_cutoff: Option<u64>,
    pub height_bound: Option<u64>,
    pub steps: Option<usize>,
    pub preper_cutoff: Option<u64>,
    pub workers: Option<usize>,
    pub output_dir: Option<PathBuf>,
    pub db_path: Option<PathBuf>,
}

fn set<T>(slot: &mut T, v: Option<T>) {
    if let Some(v) = v {
        *slot = v;
    }
}

fn prime_count(n: usize) -> CliResult<Vec<u32>> {
    if n == 0 {
        return Err(CliError::Config("prime count must be at least 1".into()));
    }
    Ok(odd_primes(n))
}

impl RunConfig {
    pub fn parse_file(text: &str) -> CliResult<RunConfig> {
        let f: FileConfig = toml::from_str(text).map_err(|e| CliError::Config(format!("config: {}", e.message())))?;
        if f.version != CONFIG_VERSION {
            return Err(CliError::Config(format!(
                "config version {} is not supported (expected {CONFIG_VERSION})",
                f.version
            )));
        }
        let mut c = RunConfig::default();
        if let Some(n) = f.primes {
            c.primes = prime_count(n)?;
        }
        set(&mut c.primes, f.prime_list);
        set(&mut c.h1, f.h1);
        set(&mut c.h2, f.h2);
        set(&mut c.budget, f.budget);
        set(&mut c.height_cutoff, f.height_cutoff);
        if let Some(p) = f.preper {
            set(&mut c.preper.height_bound, p.height_bound);
            set(&mut c.preper.steps, p.steps);
            set(&mut c.preper.height_cutoff, p.height_cutoff);
        }
        c.workers = f.workers;
        c.output_dir = f.output_dir;
        c.db_path = f.db_path;
        Ok(c)
    }

    pub fn load(path: Option<&Path>) -> CliResult<RunConfig> {
        match path {
            None => Ok(RunConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| CliError::Config(format!("{}: {e}", p.display())))?;
                Self::parse_file(&text)
            }
        }
    }

    pub fn apply(&mut self, o: Overrides) -> CliResult<()> {
        if let Some(n) = o.primes {
            self.primes = prime_count(n)?;
        }
        set(&mut self.primes, o.prime_list);
        set(&mut self.h1, o.h1);
        set(&mut self.h2, o.h2);
        set(&mut self.budget, o.budget);
        set(&mut self.height_cutoff, o.height_cutoff);
        set(&mut self.preper.height_bound, o.height_bound);
        set(&mut self.preper.steps, o.steps);
        set(&mut self.preper.height_cutoff, o.preper_cutoff);
        if o.workers.is_some() {
            self.workers = o.workers;
        }
        if o.output_dir.is_some() {
            self.output_dir = o.output_dir;
        }
        if o.db_path.is_some() {
            self.db_path = o.db_path;
        }
        self.validate()
    }

    pub fn validate(&self) -> CliResult<()> {
        let bad = |m: String| Err(CliError::Config(m));
        if self.h1 == 0 || self.h2 == 0 {
            return bad("h1 and h2 must be at least 1".into());
        }
        if self.budget == 0 {
            return bad("budget must be at least 1".into());
        }
        if self.workers == Some(0) {
            return bad("workers must be at least 1".into());
        }
        if self.primes.is_empty() {
            return bad("prime list is empty".into());
        }
        let mut seen = std::collections::BTreeSet::new();
        for &p in &self.primes {
            if p == 2 || !is_prime(p as u64) {
                return bad(format!("{p} is not an odd prime"));
            }
            if p > MAX_PRIME {
                return bad(format!("{p} exceeds the largest supported prime {MAX_PRIME}"));
            }
            if !seen.insert(p) {
                return bad(format!("prime {p} is listed twice"));
            }
        }
        Ok(())
    }

    pub fn limits(&self) -> VerifyLimits {
        VerifyLimits { budget: self.budget, height_cutoff: self.height_cutoff }
    }

    pub fn preper_params(&self) -> PreperParams {
        self.preper.into()
    }

    /// SHA-256 over the settings that determine results; worker count and
    /// paths are left out.
    pub fn digest(&self) -> String {
        let mut v = serde_json::to_value(self).expect("config serializes");
        if let Some(m) = v.as_object_mut() {
            for k in ["workers", "output_dir", "db_path"] {
                m.remove(k);
            }
        }
        hex::encode(Sha256::digest(v.to_string().as_bytes()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut c = RunConfig::parse_file("version = 1\nh1 = 2\nh2 = 4\nprimes = 5\n[preper]\nsteps = 10\n").unwrap();
        assert_eq!((c.h1, c.h2), (2, 4));
        assert_eq!(c.primes, [3, 5, 7, 11, 13]);
        assert_eq!(c.preper.steps, 10);
        c.apply(Overrides { h2: Some(7), prime_list: Some(vec![3, 7]), ..Default::default() }).unwrap();
        assert_eq!((c.h1, c.h2), (2, 7));
        assert_eq!(c.primes, [3, 7]);
    }

    #[test]
    fn rejects_bad_files() {
        assert!(RunConfig::parse_file("h1 = 2\n").is_err());
        assert!(RunConfig::parse_file("version = 2\n").is_err());
        assert!(RunConfig::parse_file("version = 1\nbogus = 1\n").is_err());
        let mut c = RunConfig::default();
        assert!(c.apply(Overrides { prime_list: Some(vec![3, 3]), ..Default::default() }).is_err());
        assert!(c.apply(Overrides { prime_list: Some(vec![2]), ..Default::default() }).is_err());
        assert!(c.apply(Overrides { h1: Some(0), prime_list: Some(vec![3]), ..Default::default() }).is_err());
    }

    #[test]
    fn digest_ignores_workers_and_paths() {
        let a = RunConfig::default();
        let mut b = a.clone();
        b.workers = Some(3);
        b.db_path = Some("x.db".into());
        assert_eq!(a.digest(), b.digest());
        b.h1 = 3;
        assert_ne!(a.digest(), b.digest());
        assert_eq!(a.digest().len(), 64);
    }
}
