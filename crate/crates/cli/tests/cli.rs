use std::path::Path;
use std::process::{Command, Output};

fn pcf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pcf"))
        .args(args)
        .env_remove("PCF_SIEVE_DB")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn preper_dot_for_z2_minus_2() {
    let o = pcf(&["preper", "--map", "[1,0,-2]/[0,0,1]"]);
    assert!(o.status.success());
    let s = stdout(&o);
    assert!(s.starts_with("// config-digest "));
    assert_eq!(s.matches(" -> ").count(), 6);
    assert!(s.contains("\"0\" -> \"-2\";"));
}

#[test]
fn psi1_two_cycle_class() {
    let o = pcf(&["classify-twist", "--psi1", "-b", "-3/2"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    assert!(s.starts_with("2-cycle class (T3.2-cycle)"));
    assert_eq!(s.matches(" -> ").count(), 6);
}

#[test]
fn psi2_json_is_stable() {
    let args = ["classify-twist", "--psi2", "--map", "[0,2,-1]/[1,0,-1]", "--format", "json"];
    let a = stdout(&pcf(&args));
    let b = stdout(&pcf(&args));
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert_eq!(v["class"], "T4.3-cycle");
    assert_eq!(v["vertices"], 6);
}

#[test]
fn error_categories_and_exit_codes() {
    let o = pcf(&["verify", "--map", "[1,0]"]);
    assert_eq!(o.status.code(), Some(4));
    assert!(stderr(&o).starts_with("error[input]:"));

    let o = pcf(&["--db", "/nonexistent/tables.db", "sieve"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stderr(&o).starts_with("error[missing-db]:"));

    let o = pcf(&["--prime-list", "3,9", "sieve"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).starts_with("error[config]:"));

    let o = pcf(&["verify"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn db_round_trip_and_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let db = dir.path().join("t.db");
    let db = db.to_str().unwrap();
    let o = pcf(&["--primes", "20", "build-db", "--output", db]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(Path::new(db).exists());

    let o = pcf(&["--db", db, "--primes", "20", "--h1", "2", "--h2", "4", "pipeline"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let s = stdout(&o);
    let rows: Vec<&str> = s.lines().filter(|l| !l.starts_with('#') && !l.starts_with("sigma1")).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().all(|r| r.ends_with("\tverified")));

    // the same run through the environment variable
    let o = Command::new(env!("CARGO_BIN_EXE_pcf"))
        .args(["--primes", "20", "--h1", "2", "--h2", "4", "pipeline"])
        .env("PCF_SIEVE_DB", db)
        .output()
        .unwrap();
    assert_eq!(stdout(&o), s);

    let o = pcf(&["--db", db, "--primes", "25", "sieve"]);
    assert_eq!(o.status.code(), Some(7));
    assert!(stderr(&o).starts_with("error[uncovered-prime]:"));
}

#[test]
fn config_file_and_worker_independence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.toml");
    std::fs::write(&cfg, "version = 1\nh1 = 2\nh2 = 4\nprimes = 15\n").unwrap();
    let cfg = cfg.to_str().unwrap();
    let one = pcf(&["--config", cfg, "--workers", "1", "sieve"]);
    let four = pcf(&["--config", cfg, "--workers", "4", "sieve"]);
    assert!(one.status.success(), "{}", stderr(&one));
    assert_eq!(stdout(&one), stdout(&four));
    // flags override the file, which changes the digest
    let other = pcf(&["--config", cfg, "--h2", "3", "sieve"]);
    assert_ne!(stdout(&one).lines().next(), stdout(&other).lines().next());

    std::fs::write(dir.path().join("bad.toml"), "h1 = 2\n").unwrap();
    let o = pcf(&["--config", dir.path().join("bad.toml").to_str().unwrap(), "catalog"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn out_dir_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = pcf(&["--primes", "20", "--h1", "2", "--h2", "4", "--out-dir", out.to_str().unwrap(), "pipeline"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("summary.json")).unwrap()).unwrap();
    assert_eq!(summary["verified"], 4);
    assert_eq!(summary["undetermined"], 0);
    assert!(out.join("portrait-04.dot").exists());
}

#[test]
fn catalog_and_offline_selftest() {
    let o = pcf(&["catalog", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["classes"].as_array().unwrap().len(), 21);
    let o = pcf(&["selftest", "--offline"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(stdout(&o).matches(": PASS").count(), 4);
}
