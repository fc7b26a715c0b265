//! Artifact writers. Every artifact carries the config digest.

use std::fmt::Display;
use std::fs;
use std::io::Write;

use pcf_core::pcfverify::Undetermined;
use pcf_core::{FunctionalGraph, PcfStatus, Portrait};
use serde_json::{json, Value};

use crate::config::RunConfig;
use crate::error::{CliError, CliResult};

/// Writes `content` to `<out_dir>/<name>` when an output directory is set,
/// otherwise to stdout.
pub fn emit(cfg: &RunConfig, name: &str, content: &str) -> CliResult<()> {
    match &cfg.output_dir {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
            let path = dir.join(name);
            fs::write(&path, content).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
            eprintln!("wrote {}", path.display());
            Ok(())
        }
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(content.as_bytes()).map_err(|e| CliError::io("writing stdout", e))
        }
    }
}

pub fn tsv_preamble(cfg: &RunConfig) -> String {
    format!("# config-digest {}\n", cfg.digest())
}

pub fn dot_with_digest(cfg: &RunConfig, dot: &str) -> String {
    format!("// config-digest {}\n{dot}", cfg.digest())
}

pub fn json_text(cfg: &RunConfig, mut v: Value) -> String {
    if let Some(m) = v.as_object_mut() {
        m.insert("config_digest".into(), Value::String(cfg.digest()));
    }
    let mut s = serde_json::to_string_pretty(&v).expect("json values serialize");
    s.push('\n');
    s
}

pub fn portrait_json(p: &Portrait) -> Value {
    let edges: Vec<Value> = p
        .edges()
        .map(|(a, b, r)| json!({"from": a.to_string(), "to": b.to_string(), "ramification": r}))
        .collect();
    let critical: Vec<String> = p.critical_points().iter().map(|c| c.to_string()).collect();
    let post: Vec<String> = p.postcritical_set().iter().map(|c| c.to_string()).collect();
    json!({"critical_points": critical, "edges": edges, "postcritical_set": post})
}

pub fn undetermined_json(u: &Undetermined) -> Value {
    json!({
        "critical_point": u.critical.to_string(),
        "iterations": u.iterations,
        "max_height": u.max_height.to_string(),
        "hit_height_cutoff": u.hit_height_cutoff,
    })
}

pub fn status_json(st: &PcfStatus) -> Value {
    match st {
        PcfStatus::VerifiedPcf(p) => json!({"status": "verified", "portrait": portrait_json(p)}),
        PcfStatus::Undetermined(u) => json!({"status": "undetermined", "reason": undetermined_json(u)}),
    }
}

pub fn graph_json<V: Ord + Clone + Display>(g: &FunctionalGraph<V>) -> Value {
    let edges: Vec<Value> = g.edges().map(|(a, b)| json!({"from": a.to_string(), "to": b.to_string()})).collect();
    let cycles: Vec<usize> = g.cycle_lengths();
    json!({"vertices": g.len(), "edges": edges, "cycle_lengths": cycles, "component_sizes": g.component_sizes()})
}

pub fn edge_text<V: Ord + Clone + Display>(g: &FunctionalGraph<V>) -> String {
    g.edge_lines().iter().map(|l| format!("{l}\n")).collect()
}
