//! The acceptance criteria as runnable checks, shared by the test harness
//! and the `selftest` command.

use std::collections::BTreeSet;
use std::fmt;

use rayon::prelude::*;

use crate::arith::{enumerate_rationals, parse_rational, ExtRational, Point};
use crate::error::Result;
use crate::ffdyn::PrimeField;
use crate::pcfverify::{critical_orbit_portrait, cycle_length_from, PcfStatus, VerifyLimits};
use crate::pipeline::run_pipeline;
use crate::preper::{
    by_id, classify_psi1_twist, classify_psi2_map, family, figure_graph, power_map_graph,
    power_map_low_degree_preperiodic, rational_preperiodic_graph, Family, PowerVariant, PreperParams, Psi2Spec,
    INVERSE_SQUARE_FIGURES, SQUARE_FIGURE,
};
use crate::primes::{odd_primes, odd_primes_up_to};
use crate::projmap::{format_sigma_pair, QuadMap};
use crate::sievedb::{reduce_point, sieve, table_key, Database};

/// The ten σ-pairs of PCF maps with trivial stabilizer.
pub const PCF_SIGMAS: [(&str, &str); 10] = [
    ("2", "-8"),
    ("2", "-4"),
    ("-6", "4"),
    ("-6", "8"),
    ("-2", "4"),
    ("-2/3", "4/3"),
    ("-6", "10"),
    ("-2", "0"),
    ("-2", "2"),
    ("-10/3", "20/3"),
];

/// Critical portraits of the ten normal forms, as `P -> Q [r]` lines.
pub const PORTRAITS: [&[&str]; 10] = [
    &["-4 -> -4/3 [2]", "-4/3 -> 4 [1]", "0 -> 0 [2]", "4 -> 4 [1]"],
    &["-2 -> -1 [2]", "-1 -> -2 [1]", "0 -> 0 [2]"],
    &["-4 -> 2 [1]", "-2 -> 0 [2]", "0 -> 2 [1]", "2 -> -4 [1]", "inf -> -2 [2]"],
    &["-2 -> 0 [2]", "0 -> inf [1]", "inf -> -2 [2]"],
    &["-2 -> -1 [2]", "-1 -> -2 [1]", "0 -> inf [2]", "inf -> -2 [1]"],
    &["-2 -> -1 [2]", "-1 -> -2 [1]", "0 -> 2 [2]", "2 -> inf [1]", "inf -> -2 [1]"],
    &["-4 -> -4 [1]", "-2 -> 0 [2]", "0 -> -4 [1]", "inf -> -2 [2]"],
    &[
        "-3-1*sqrt(5) -> -1/2-1/2*sqrt(5) [2]",
        "-3+1*sqrt(5) -> -1/2+1/2*sqrt(5) [2]",
        "-1/2-1/2*sqrt(5) -> 2 [1]",
        "-1/2+1/2*sqrt(5) -> 2 [1]",
        "2 -> inf [1]",
        "inf -> -2 [1]",
        "-2 -> inf [1]",
    ],
    &[
        "-2-1*sqrt(2) -> -1*sqrt(2) [2]",
        "-2+1*sqrt(2) -> 1*sqrt(2) [2]",
        "-1*sqrt(2) -> inf [1]",
        "1*sqrt(2) -> inf [1]",
        "inf -> -2 [1]",
        "-2 -> -2 [1]",
    ],
    &["-4 -> -4/3 [1]", "-4/3 -> -4/3 [1]", "-2 -> -1 [2]", "-1 -> -2 [1]", "0 -> -4 [2]"],
];

/// Number of odd primes used by the sieve in the acceptance runs.
pub const SIEVE_PRIMES: usize = 130;
/// Bound on the primes checked by the local-global criterion.
pub const LOCAL_GLOBAL_BOUND: u32 = 750;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CriterionResult {
    pub index: usize,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for CriterionResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {} [{}]: {} - {}",
            self.index,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.detail
        )
    }
}

pub const CRITERIA: [&str; 8] = [
    "classification",
    "sub-bounds",
    "portraits",
    "preperiodic-graphs",
    "symmetry-locus",
    "roots-of-unity",
    "local-global",
    "oracle-equivalence",
];

fn result(index: usize, outcome: Result<(bool, String)>) -> CriterionResult {
    let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionResult { index, name: CRITERIA[index - 1], passed, detail }
}

fn sigma_set<'a>(it: impl Iterator<Item = (&'a str, &'a str)>) -> BTreeSet<String> {
    it.map(|(a, b)| format_sigma_pair(&parse_rational(a).unwrap(), &parse_rational(b).unwrap()))
        .collect()
}

fn table_map(i: usize) -> QuadMap {
    let (a, b) = PCF_SIGMAS[i];
    QuadMap::from_sigmas(&parse_rational(a).expect("table sigma"), &parse_rational(b).expect("table sigma"))
}

/// Primes the acceptance database must cover.
pub fn acceptance_primes() -> Vec<u32> {
    let mut p = odd_primes_up_to(LOCAL_GLOBAL_BOUND);
    for q in odd_primes(SIEVE_PRIMES) {
        if !p.contains(&q) {
            p.push(q);
        }
    }
    p.sort_unstable();
    p
}

fn pipeline_sigmas(h1: u64, h2: u64, db: &Database) -> Result<(BTreeSet<String>, usize, usize)> {
    let out = run_pipeline(h1, h2, &odd_primes(SIEVE_PRIMES), db, VerifyLimits::default())?;
    let got = out
        .records
        .iter()
        .map(|r| format_sigma_pair(&r.candidate.sigma1, &r.candidate.sigma2))
        .collect();
    Ok((got, out.verified().count(), out.undetermined().count()))
}

pub fn criterion_classification(db: &Database) -> CriterionResult {
    result(
        1,
        (|| {
            let (got, ok, undet) = pipeline_sigmas(10, 20, db)?;
            let want = sigma_set(PCF_SIGMAS.iter().copied());
            let passed = got == want && ok == 10 && undet == 0;
            Ok((passed, format!("{} survivors, {ok} verified, {undet} undetermined; pairs {:?}", got.len(), got)))
        })(),
    )
}

pub fn criterion_sub_bounds(db: &Database) -> CriterionResult {
    result(
        2,
        (|| {
            let (small, ok, undet) = pipeline_sigmas(2, 4, db)?;
            let want = sigma_set([("2", "-4"), ("-2", "4"), ("-2", "0"), ("-2", "2")].into_iter());
            let (tiny, _, _) = pipeline_sigmas(1, 1, db)?;
            let passed = small == want && ok == 4 && undet == 0 && tiny.is_empty();
            Ok((passed, format!("(2,4): {small:?}; (1,1): {} survivors", tiny.len())))
        })(),
    )
}

pub fn criterion_portraits() -> CriterionResult {
    result(
        3,
        (|| {
            let mut bad = Vec::new();
            for (i, want) in PORTRAITS.iter().enumerate() {
                let st = critical_orbit_portrait(&table_map(i), VerifyLimits::default())?;
                let got: BTreeSet<String> = match st.portrait() {
                    Some(p) => p.to_text().lines().map(str::to_string).collect(),
                    None => BTreeSet::new(),
                };
                let want: BTreeSet<String> = want.iter().map(|s| s.to_string()).collect();
                if got != want {
                    bad.push(format!("row {}: got {:?}", i + 1, got));
                }
            }
            Ok((bad.is_empty(), if bad.is_empty() { "10/10 portraits match".into() } else { bad.join("; ") }))
        })(),
    )
}

pub fn criterion_preperiodic_graphs() -> CriterionResult {
    result(
        4,
        (|| {
            let params = PreperParams::default();
            let mut bad = Vec::new();
            let mut counts = Vec::new();
            let mut max = 0;
            for (i, c) in family(Family::Trivial).enumerate() {
                let r = rational_preperiodic_graph(&c.representative(), params)?;
                if r.graph != c.reference_graph() || !r.unresolved.is_empty() {
                    bad.push(format!("{}: {:?}", c.id, r.graph.edge_lines()));
                }
                // the normal form is conjugate to the listed map, so sizes agree
                let nf = rational_preperiodic_graph(&table_map(i), params)?;
                if nf.graph.len() != r.graph.len() || !nf.graph.is_isomorphic(&r.graph) {
                    bad.push(format!("normal form {} differs from {}", i + 1, c.id));
                }
                counts.push(r.graph.len());
                max = max.max(r.graph.len()).max(nf.graph.len());
            }
            for c in family(Family::Psi1).chain(family(Family::Psi2)) {
                let r = rational_preperiodic_graph(&c.representative(), params)?;
                max = max.max(r.graph.len());
            }
            let passed = bad.is_empty() && counts == [6, 4, 6, 4, 4, 6, 4, 4, 2, 6] && max <= 6;
            Ok((passed, format!("vertex counts {counts:?}, max {max}{}", if bad.is_empty() { String::new() } else { format!("; {}", bad.join("; ")) })))
        })(),
    )
}

pub fn psi2_representatives() -> Vec<(Psi2Spec, &'static str)> {
    let m = |s: &str| Psi2Spec::Map(s.parse().expect("catalog map"));
    let q = |n: i64| crate::arith::int(n);
    vec![
        (Psi2Spec::Power { t: q(1) }, "T4.2-cycle-fixed"),
        (Psi2Spec::Power { t: q(2) }, "T4.2-cycle"),
        (Psi2Spec::Theta { d: q(2), k: q(1) }, "T4.empty"),
        (Psi2Spec::Theta { d: q(2), k: q(0) }, "T4.fixed"),
        (m("[-1,2,1]/[1,2,-1]"), "T4.fixed-tree"),
        (m("[-1,2,0]/[0,2,-1]"), "T4.three-fixed"),
        (m("[0,2,-1]/[1,0,-1]"), "T4.3-cycle"),
    ]
}

pub fn criterion_symmetry_locus() -> CriterionResult {
    result(
        5,
        (|| {
            let params = PreperParams::default();
            let mut bad = Vec::new();
            for (b, id) in [("1", "T3.generic"), ("1/2", "T3.fixed"), ("-3/2", "T3.2-cycle"), ("-1/2", "T3.type-1_2")] {
                let c = classify_psi1_twist(&parse_rational(b)?, params)?;
                if c.class.id() != id || *c.result.graph() != by_id(id)?.reference_graph() {
                    bad.push(format!("b = {b}: {}", c.class.id()));
                }
            }
            for (b, id) in [("-6", "T3.2-cycle"), ("-8", "T3.type-1_2")] {
                let c = classify_psi1_twist(&parse_rational(b)?, params)?;
                if c.class.id() != id {
                    bad.push(format!("b = {b}: {}", c.class.id()));
                }
            }
            for (spec, id) in psi2_representatives() {
                let c = classify_psi2_map(&spec, params)?;
                if c.class.id != id || *c.graph() != by_id(id)?.reference_graph() {
                    bad.push(format!("{}: {}", c.map, c.class.id));
                }
            }
            Ok((bad.is_empty(), if bad.is_empty() { "4 + 2 twists and 7 maps classified".into() } else { bad.join("; ") }))
        })(),
    )
}

pub fn criterion_roots_of_unity() -> CriterionResult {
    result(
        6,
        (|| {
            let sq = power_map_graph(PowerVariant::Square, 2)?;
            let sq_ok = sq == figure_graph(SQUARE_FIGURE)?;
            let comps = power_map_low_degree_preperiodic(PowerVariant::InverseSquare, 6)?;
            let got: BTreeSet<Vec<String>> = comps.iter().map(|c| c.edge_lines()).collect();
            let want = INVERSE_SQUARE_FIGURES
                .iter()
                .map(|f| Ok(figure_graph(f)?.edge_lines()))
                .collect::<Result<BTreeSet<_>>>()?;
            let mut sizes: Vec<usize> = comps.iter().map(|c| c.len()).collect();
            sizes.sort_unstable();
            let total: usize = sizes.iter().sum();
            let passed = sq_ok && sq.len() == 10 && got == want && total == 50 && sizes == [2, 4, 4, 6, 6, 8, 8, 12];
            Ok((passed, format!("z^2: {} points; 1/z^2: {total} points in components {sizes:?}", sq.len())))
        })(),
    )
}

pub fn criterion_local_global(db: &Database) -> CriterionResult {
    result(
        7,
        (|| {
            let primes = odd_primes_up_to(LOCAL_GLOBAL_BOUND);
            let mut checks = 0usize;
            let mut violations = Vec::new();
            for i in 0..PCF_SIGMAS.len() {
                let map = table_map(i);
                let PcfStatus::VerifiedPcf(portrait) = critical_orbit_portrait(&map, VerifyLimits::default())? else {
                    violations.push(format!("row {} not verified", i + 1));
                    continue;
                };
                let crit: Vec<&Point> = portrait.critical_points().iter().filter(|c| c.is_rational()).collect();
                let res = map.resultant();
                for &p in &primes {
                    if num_traits::Zero::is_zero(&(&res % p)) {
                        continue;
                    }
                    let field = PrimeField::new(p)?;
                    let (b, c) = table_key(&map, &field)?;
                    let entry = db.lookup(p, b, c)?;
                    for g in &crit {
                        let period = cycle_length_from(&portrait, g).expect("verified orbit closes") as u64;
                        let x: ExtRational = g.to_ext_rational().expect("rational point");
                        let set = entry.and_then(|e| e.periods_of(reduce_point(&x, &field)));
                        checks += 1;
                        match set {
                            Some(s) if s.contains(period) => {}
                            _ => violations.push(format!("row {} p={p} gamma={g} period {period}", i + 1)),
                        }
                    }
                }
            }
            Ok((violations.is_empty(), format!("{checks} checks, {} violations{}", violations.len(), if violations.is_empty() { String::new() } else { format!(": {}", violations.join("; ")) })))
        })(),
    )
}

pub fn criterion_oracle_equivalence(db: &Database) -> CriterionResult {
    result(
        8,
        (|| {
            let grid: Vec<_> = enumerate_rationals(3).collect();
            let pairs: Vec<_> = grid.iter().flat_map(|a| grid.iter().map(move |b| (a.clone(), b.clone()))).collect();
            let brute = pairs
                .par_iter()
                .map(|(a, b)| {
                    let m = QuadMap::from_sigmas(a, b);
                    if num_traits::Zero::is_zero(&m.resultant()) {
                        return Ok(None);
                    }
                    let ok = critical_orbit_portrait(&m, VerifyLimits::default())?.is_verified();
                    Ok(ok.then(|| format_sigma_pair(a, b)))
                })
                .collect::<Result<Vec<_>>>()?;
            let brute: BTreeSet<String> = brute.into_iter().flatten().collect();
            let sieved: BTreeSet<String> = sieve(3, 3, &odd_primes(SIEVE_PRIMES), db)?
                .iter()
                .map(|c| format_sigma_pair(&c.sigma1, &c.sigma2))
                .collect();
            let passed = brute == sieved;
            Ok((passed, format!("{} pairs; brute force {brute:?}; sieve {sieved:?}", pairs.len())))
        })(),
    )
}

/// Criteria that need no database.
pub fn run_offline() -> Vec<CriterionResult> {
    vec![criterion_portraits(), criterion_preperiodic_graphs(), criterion_symmetry_locus(), criterion_roots_of_unity()]
}

/// All eight criteria in order; `db` must cover [`acceptance_primes`].
pub fn run_all(db: &Database) -> Vec<CriterionResult> {
    let mut out = vec![criterion_classification(db), criterion_sub_bounds(db)];
    out.extend(run_offline());
    out.push(criterion_local_global(db));
    out.push(criterion_oracle_equivalence(db));
    out
}
