use std::path::PathBuf;
use std::time::Instant;

use pcf_core::arith::parse_rational;
use pcf_core::pcfverify::critical_orbit_portrait;
use pcf_core::preper::{
    by_id, catalog as all_classes, classify_psi1_twist, classify_psi2_map, rational_preperiodic_graph,
    Classification, Psi2Spec, StructureClass,
};
use pcf_core::projmap::format_sigma_pair;
use pcf_core::selftest::{acceptance_primes, run_all, run_offline, CriterionResult};
use pcf_core::sievedb::sieve_with_stats;
use pcf_core::{run_pipeline, Database, DbFileFormat, Error, PcfStatus, QuadMap, SieveCandidate};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};
use crate::output::{
    dot_with_digest, edge_text, emit, graph_json, json_text, portrait_json, status_json, tsv_preamble,
};
use crate::{Format, MapArg};

fn parse_pair(s: &str) -> CliResult<(num_rational::BigRational, num_rational::BigRational)> {
    let (a, b) = s
        .split_once(',')
        .ok_or_else(|| Error::Parse { what: "sigma pair", input: s.to_string() })?;
    Ok((parse_rational(a.trim())?, parse_rational(b.trim())?))
}

fn target_map(t: &MapArg) -> CliResult<QuadMap> {
    match (&t.map, &t.sigma) {
        (Some(m), _) => Ok(m.parse()?),
        (None, Some(s)) => {
            let (a, b) = parse_pair(s)?;
            Ok(QuadMap::from_sigmas(&a, &b))
        }
        (None, None) => unreachable!("clap requires one of --map and --sigma"),
    }
}

fn build_in_memory(cfg: &RunConfig, primes: &[u32]) -> CliResult<Database> {
    let t = Instant::now();
    eprintln!("building period tables for {} primes", primes.len());
    let mut db = Database::build(primes)?;
    db.set_meta(format!("config-digest {}", cfg.digest()));
    eprintln!("tables ready in {:.1}s", t.elapsed().as_secs_f64());
    Ok(db)
}

/// The configured database file, or tables built in memory when no path
/// is configured.
fn database(cfg: &RunConfig) -> CliResult<Database> {
    match &cfg.db_path {
        Some(p) if !p.exists() => Err(CliError::MissingDb(p.clone())),
        Some(p) => Ok(Database::load(p)?),
        None => build_in_memory(cfg, &cfg.primes),
    }
}

pub fn build_db(cfg: &RunConfig, output: Option<PathBuf>, text: bool) -> CliResult<()> {
    let path = output
        .or_else(|| cfg.db_path.clone())
        .ok_or_else(|| CliError::Config("build-db needs --output or --db".into()))?;
    let t = Instant::now();
    let mut db = Database::build(&cfg.primes)?;
    db.set_meta(format!("config-digest {}", cfg.digest()));
    let format = if text { DbFileFormat::Text } else { DbFileFormat::Binary };
    db.save(&path, format)?;
    let entries: usize = cfg.primes.iter().map(|&p| db.entry_count(p)).sum::<Result<usize, Error>>()?;
    let summary = json!({
        "path": path.display().to_string(),
        "format": if text { "text" } else { "binary" },
        "primes": cfg.primes.len(),
        "largest_prime": cfg.primes.iter().max(),
        "entries": entries,
        "seconds": (t.elapsed().as_secs_f64() * 10.0).round() / 10.0,
    });
    print!("{}", json_text(cfg, summary));
    Ok(())
}

fn survivors_tsv(cfg: &RunConfig, cands: &[SieveCandidate]) -> String {
    let mut s = tsv_preamble(cfg);
    s.push_str(SieveCandidate::TSV_HEADER);
    s.push('\n');
    for c in cands {
        s.push_str(&c.tsv());
        s.push('\n');
    }
    s
}

pub fn sieve(cfg: &RunConfig) -> CliResult<()> {
    let db = database(cfg)?;
    let (cands, stats) = sieve_with_stats(cfg.h1, cfg.h2, &cfg.primes, &db)?;
    eprintln!(
        "{} pairs, {} degenerate, {} survivors",
        stats.pairs, stats.degenerate, stats.survivors
    );
    emit(cfg, "sieve.tsv", &survivors_tsv(cfg, &cands))
}

pub fn verify(cfg: &RunConfig, t: &MapArg, format: Format) -> CliResult<()> {
    let map = target_map(t)?;
    let st = critical_orbit_portrait(&map, cfg.limits())?;
    let text = match format {
        Format::Json => {
            let mut v = status_json(&st);
            v["map"] = Value::String(map.to_string());
            json_text(cfg, v)
        }
        Format::Dot => match st.portrait() {
            Some(p) => dot_with_digest(cfg, &p.to_dot(&map.to_string())),
            None => return Err(Error::InvalidParameter("no portrait: status is undetermined".into()).into()),
        },
        Format::Text => match &st {
            PcfStatus::VerifiedPcf(p) => format!("verified\t{map}\n{}", p.to_text()),
            PcfStatus::Undetermined(u) => format!("undetermined\t{map}\t{u}\n"),
        },
    };
    emit(cfg, "verify.out", &text)
}

pub fn pipeline(cfg: &RunConfig) -> CliResult<()> {
    let db = database(cfg)?;
    let t = Instant::now();
    let out = run_pipeline(cfg.h1, cfg.h2, &cfg.primes, &db, cfg.limits())?;
    let mut tsv = tsv_preamble(cfg);
    tsv.push_str(pcf_core::PipelineRecord::TSV_HEADER);
    tsv.push('\n');
    for r in &out.records {
        tsv.push_str(&r.tsv());
        tsv.push('\n');
    }
    let records: Vec<Value> = out
        .records
        .iter()
        .map(|r| {
            let mut v = status_json(&r.status);
            v["sigma"] = Value::String(format_sigma_pair(&r.candidate.sigma1, &r.candidate.sigma2));
            v["map"] = Value::String(r.candidate.map.to_string());
            v["no_modular_info"] = Value::Bool(r.candidate.no_modular_info());
            v
        })
        .collect();
    let summary = json!({
        "h1": cfg.h1,
        "h2": cfg.h2,
        "primes": cfg.primes.len(),
        "pairs": out.stats.pairs,
        "degenerate": out.stats.degenerate,
        "rational_critical": out.stats.rational_critical,
        "conjugate_critical": out.stats.conjugate_critical,
        "survivors": out.stats.survivors,
        "verified": out.verified().count(),
        "undetermined": out.undetermined().count(),
        "records": records,
    });
    eprintln!(
        "{} pairs, {} survivors, {} verified, {} undetermined ({:.1}s)",
        out.stats.pairs,
        out.stats.survivors,
        out.verified().count(),
        out.undetermined().count(),
        t.elapsed().as_secs_f64()
    );
    emit(cfg, "pipeline.tsv", &tsv)?;
    if cfg.output_dir.is_some() {
        emit(cfg, "summary.json", &json_text(cfg, summary))?;
        for (i, r) in out.records.iter().enumerate() {
            if let Some(p) = r.status.portrait() {
                let name = format_sigma_pair(&r.candidate.sigma1, &r.candidate.sigma2);
                emit(cfg, &format!("portrait-{:02}.dot", i + 1), &dot_with_digest(cfg, &p.to_dot(&name)))?;
            }
        }
    }
    Ok(())
}

pub fn portrait(cfg: &RunConfig, t: &MapArg, format: Format) -> CliResult<()> {
    let map = target_map(t)?;
    let st = critical_orbit_portrait(&map, cfg.limits())?;
    let p = match &st {
        PcfStatus::VerifiedPcf(p) => p,
        PcfStatus::Undetermined(u) => {
            return Err(Error::InvalidParameter(format!("{map} is not certified PCF: {u}")).into())
        }
    };
    let text = match format {
        Format::Text => p.to_text(),
        Format::Dot => dot_with_digest(cfg, &p.to_dot(&map.to_string())),
        Format::Json => {
            let mut v = portrait_json(p);
            v["map"] = Value::String(map.to_string());
            json_text(cfg, v)
        }
    };
    emit(cfg, "portrait.out", &text)
}

pub fn preper(cfg: &RunConfig, t: &MapArg, format: Format) -> CliResult<()> {
    let map = target_map(t)?;
    let r = rational_preperiodic_graph(&map, cfg.preper_params())?;
    for u in &r.unresolved {
        eprintln!("warning: {u} unresolved after {} steps", cfg.preper.steps);
    }
    let text = match format {
        Format::Text => edge_text(&r.graph),
        Format::Dot => dot_with_digest(cfg, &r.graph.to_dot(&map.to_string())),
        Format::Json => {
            let mut v = graph_json(&r.graph);
            v["map"] = Value::String(map.to_string());
            v["candidates"] = json!(r.candidates);
            v["unresolved"] = json!(r.unresolved.iter().map(|x| x.to_string()).collect::<Vec<_>>());
            json_text(cfg, v)
        }
    };
    emit(cfg, "preper.out", &text)
}

fn classification_output(cfg: &RunConfig, label: &str, c: &Classification, format: Format) -> String {
    match format {
        Format::Text => format!("{label} ({})\nmap {}\n{}", c.class.id, c.map, edge_text(c.graph())),
        Format::Dot => dot_with_digest(cfg, &c.graph().to_dot(c.class.id)),
        Format::Json => {
            let mut v = graph_json(c.graph());
            v["class"] = Value::String(c.class.id.into());
            v["name"] = Value::String(label.into());
            v["map"] = Value::String(c.map.to_string());
            json_text(cfg, v)
        }
    }
}

#[allow(clippy::too_many_arguments)]
pub fn classify_twist(
    cfg: &RunConfig,
    psi1: bool,
    b: Option<String>,
    psi2: bool,
    theta: Option<String>,
    t: Option<String>,
    map: Option<String>,
    format: Format,
) -> CliResult<()> {
    let params = cfg.preper_params();
    let text = if psi1 {
        let b = b.ok_or_else(|| Error::InvalidParameter("--psi1 needs -b".into()))?;
        let c = classify_psi1_twist(&parse_rational(&b)?, params)?;
        classification_output(cfg, c.class.name(), &c.result, format)
    } else if psi2 {
        let spec = match (theta, t, map) {
            (Some(s), None, None) => {
                let (d, k) = parse_pair(&s)?;
                Psi2Spec::Theta { d, k }
            }
            (None, Some(t), None) => Psi2Spec::Power { t: parse_rational(&t)? },
            (None, None, Some(m)) => Psi2Spec::Map(m.parse()?),
            _ => return Err(Error::InvalidParameter("--psi2 needs exactly one of --theta, --t, --map".into()).into()),
        };
        let c = classify_psi2_map(&spec, params)?;
        classification_output(cfg, c.class.description, &c, format)
    } else {
        return Err(Error::InvalidParameter("choose --psi1 or --psi2".into()).into());
    };
    emit(cfg, "classification.out", &text)
}

fn class_json(c: &StructureClass) -> Value {
    let mut v = graph_json(&c.reference_graph());
    v["id"] = Value::String(c.id.into());
    v["family"] = Value::String(format!("{:?}", c.family));
    v["description"] = Value::String(c.description.into());
    v["map"] = Value::String(c.map.into());
    if let Some((a, b)) = c.sigmas {
        v["sigma"] = Value::String(format!("({a}, {b})"));
    }
    v
}

pub fn catalog(cfg: &RunConfig, id: Option<&str>, format: Format) -> CliResult<()> {
    let classes: Vec<&StructureClass> = match id {
        Some(id) => vec![by_id(id)?],
        None => all_classes().iter().collect(),
    };
    let text = match format {
        Format::Text => classes
            .iter()
            .map(|c| {
                format!(
                    "{}\t{}\t{} vertices\t{}\n{}",
                    c.id,
                    c.map,
                    c.reference_graph().len(),
                    c.description,
                    edge_text(&c.reference_graph()).lines().map(|l| format!("  {l}\n")).collect::<String>()
                )
            })
            .collect(),
        Format::Dot => {
            let dots: String = classes.iter().map(|c| c.reference_graph().to_dot(c.id)).collect();
            dot_with_digest(cfg, &dots)
        }
        Format::Json => json_text(cfg, json!({"classes": classes.iter().map(|c| class_json(c)).collect::<Vec<_>>()})),
    };
    emit(cfg, "catalog.out", &text)
}

fn acceptance_db(cfg: &RunConfig) -> CliResult<Database> {
    let primes = acceptance_primes();
    if let Some(p) = &cfg.db_path {
        if p.exists() {
            let db = Database::load(p)?;
            if primes.iter().all(|&q| db.covers(q)) {
                return Ok(db);
            }
            eprintln!("{} does not cover every odd prime up to 750; building in memory", p.display());
        }
    }
    build_in_memory(cfg, &primes)
}

pub fn selftest(cfg: &RunConfig, offline: bool) -> CliResult<()> {
    let results: Vec<CriterionResult> = if offline { run_offline() } else { run_all(&acceptance_db(cfg)?) };
    let mut text = String::new();
    for r in &results {
        text.push_str(&format!("{r}\n"));
    }
    emit(cfg, "selftest.out", &text)?;
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::SelftestFailed(failed));
    }
    Ok(())
}
