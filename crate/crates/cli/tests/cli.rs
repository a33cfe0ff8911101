use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use sha2::{Digest, Sha256};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_speclimit"));
    c.env_remove("SPECLIMIT_OUT_DIR");
    c
}

fn config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p
}

fn preset(dir: &Path, name: &str) -> PathBuf {
    config(dir, &format!("{name}.json"), &format!(r#"{{"model": {{"preset": "{name}"}}}}"#))
}

fn run(cmd: &str, cfg: &Path, out: &Path, extra: &[&str]) -> Output {
    bin().arg(cmd).arg("--config").arg(cfg).arg("--out").arg(out).args(extra).output().unwrap()
}

fn stderr_json(o: &Output) -> Value {
    serde_json::from_slice(o.stderr.trim_ascii())
        .unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stderr)))
}

fn csv(path: &Path) -> Vec<Vec<String>> {
    fs::read_to_string(path).unwrap().lines().map(|l| l.split(',').map(String::from).collect()).collect()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn version_mentions_schema() {
    let o = bin().arg("--version").output().unwrap();
    assert!(o.status.success());
    let s = String::from_utf8(o.stdout).unwrap();
    assert!(s.contains(env!("CARGO_PKG_VERSION")) && s.contains("schema 1"), "{s}");
}

#[test]
fn spectrum_tables() {
    let t = tempfile::tempdir().unwrap();
    let o = run("spectrum", &preset(t.path(), "box"), &t.path().join("b"), &[]);
    assert!(o.status.success());
    let rows = csv(&t.path().join("b/spectrum.csv"));
    assert_eq!(rows[0], ["n", "energy", "tau"]);
    assert_eq!(rows.len(), 11);
    assert_eq!(rows[1][1], "4.93480220054");

    let o = run("spectrum", &preset(t.path(), "harmonic"), &t.path().join("h"), &[]);
    assert!(o.status.success());
    assert!(csv(&t.path().join("h/spectrum.csv"))[1..].iter().all(|r| r[2] == "6.28318530718"));

    let o = run("spectrum", &preset(t.path(), "h2-morse"), &t.path().join("m"), &[]);
    assert!(o.status.success());
    let rows = csv(&t.path().join("m/spectrum.csv"));
    assert_eq!(rows.last().unwrap()[0], "16");
    assert_eq!(rows.len(), 18);
}

#[test]
fn spectrum_semiclassical_column() {
    let t = tempfile::tempdir().unwrap();
    let cfg =
        config(t.path(), "c.json", r#"{"model": {"preset": "h2-morse"}, "semiclassical": true, "n_range": [0, 5]}"#);
    assert!(run("spectrum", &cfg, &t.path().join("o"), &[]).status.success());
    let rows = csv(&t.path().join("o/spectrum.csv"));
    assert_eq!(rows[0].len(), 6);
    for r in &rows[1..] {
        assert!(r[5].parse::<f64>().unwrap() < 1e-6, "{r:?}");
    }
}

#[test]
fn criterion_outputs() {
    let t = tempfile::tempdir().unwrap();
    assert!(run("criterion", &preset(t.path(), "box"), &t.path().join("b"), &[]).status.success());
    let j = json(&t.path().join("b/criterion.json"));
    assert_eq!(j["threshold"], 4);
    let plot = csv(&t.path().join("b/criterion_plot.csv"));
    assert!(plot.iter().any(|r| r[0] == "half_hbar" && r[2] == "0.5"));

    assert!(run("criterion", &preset(t.path(), "hydrogen"), &t.path().join("h"), &[]).status.success());
    let j = json(&t.path().join("h/criterion.json"));
    assert_eq!(j["threshold"], 10);
    assert_eq!(j["quoted_threshold"], 9);
    assert!(j["notes"].as_array().unwrap().iter().any(|n| n.as_str().unwrap().contains("n >= 9")));

    assert!(run("criterion", &preset(t.path(), "harmonic"), &t.path().join("o"), &[]).status.success());
    let rows = csv(&t.path().join("o/criterion.csv"));
    assert!(rows[1..].iter().all(|r| r[5] == "0" && r[8].starts_with("period-degenerate")));
}

#[test]
fn exit_codes() {
    let t = tempfile::tempdir().unwrap();
    let out = t.path().join("o");

    let o = run("criterion", &config(t.path(), "bad.json", "{"), &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "parse");

    let o = run("criterion", &config(t.path(), "k.json", r#"{"model": {"preset": "box"}, "colour": 1}"#), &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr_json(&o)["message"].as_str().unwrap().contains("colour"));

    let cfg = r#"{"model": {"kind": "morse", "units": "molecular", "params": {"mass": 1, "depth": -2, "range": 1}}}"#;
    let o = run("spectrum", &config(t.path(), "m.json", cfg), &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["location"], "model.params.depth");

    let o = run("spectrum", &t.path().join("missing.json"), &out, &[]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(stderr_json(&o)["error"], "config_unreadable");

    let o = run(
        "noise",
        &config(t.path(), "a.json", r#"{"model": {"preset": "box"}, "analysis": "criterion"}"#),
        &out,
        &[],
    );
    assert_eq!(o.status.code(), Some(2));

    let o = run("simulate", &preset(t.path(), "harmonic"), &out, &[]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "degenerate_period");

    let o = run(
        "criterion",
        &config(t.path(), "r.json", r#"{"model": {"preset": "h2-morse"}, "n_range": [30, 40]}"#),
        &out,
        &[],
    );
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stderr_json(&o)["error"], "out_of_range");

    let o = bin().arg("spectrum").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

fn digests(dir: &Path) -> Vec<(String, String)> {
    let record = json(&dir.join("run_record.json"));
    record["files"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["name"].as_str().unwrap().to_string(), f["sha256"].as_str().unwrap().to_string()))
        .collect()
}

#[test]
fn reruns_are_byte_identical() {
    let t = tempfile::tempdir().unwrap();
    let cfg = config(t.path(), "c.json", r#"{"model": {"preset": "box"}, "seed": 17, "noise": {"count": 2000}}"#);
    let (a, b) = (t.path().join("a"), t.path().join("b"));
    assert!(run("report", &cfg, &a, &[]).status.success());
    assert!(run("report", &cfg, &b, &[]).status.success());
    let (da, db) = (digests(&a), digests(&b));
    assert_eq!(da, db);
    assert!(da.len() >= 10);
    for (name, sha) in &da {
        let bytes = fs::read(a.join(name)).unwrap();
        assert_eq!(bytes, fs::read(b.join(name)).unwrap(), "{name}");
        assert_eq!(&hex::encode(Sha256::digest(&bytes)), sha, "{name}");
    }
    let c = t.path().join("c");
    assert!(run("report", &cfg, &c, &["--seed", "18"]).status.success());
    let dc = digests(&c);
    let sweep = |d: &[(String, String)]| d.iter().find(|(n, _)| n == "sweep.csv").unwrap().1.clone();
    assert_ne!(sweep(&da), sweep(&dc));
}

#[test]
fn env_overrides_output_dir_only() {
    let t = tempfile::tempdir().unwrap();
    let cfg = config(
        t.path(),
        "c.json",
        &format!(r#"{{"model": {{"preset": "box"}}, "output_dir": "{}"}}"#, t.path().join("cfg").display()),
    );
    let env_dir = t.path().join("env");
    let o = bin().args(["spectrum", "--config"]).arg(&cfg).env("SPECLIMIT_OUT_DIR", &env_dir).output().unwrap();
    assert!(o.status.success());
    assert!(env_dir.join("spectrum.csv").exists());
    assert!(!t.path().join("cfg").exists());

    let flag_dir = t.path().join("flag");
    let o = bin()
        .args(["spectrum", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&flag_dir)
        .env("SPECLIMIT_OUT_DIR", &env_dir)
        .output()
        .unwrap();
    assert!(o.status.success());
    assert!(flag_dir.join("spectrum.csv").exists());

    let o = bin().args(["spectrum", "--config"]).arg(&cfg).output().unwrap();
    assert!(o.status.success());
    assert!(t.path().join("cfg/spectrum.csv").exists());
}

#[test]
fn noise_outputs_round_trip() {
    let t = tempfile::tempdir().unwrap();
    let cfg = config(
        t.path(),
        "c.json",
        r#"{"model": {"preset": "harmonic"}, "noise": {"count": 5000, "harmonic_levels": 50}}"#,
    );
    let out = t.path().join("o");
    assert!(run("noise", &cfg, &out, &[]).status.success());
    let ens =
        speclimit::io::ensemble_from_csv(&fs::read_to_string(out.join("ensemble_position.csv")).unwrap()).unwrap();
    assert_eq!(ens.samples.len(), 5000);
    let rows = csv(&out.join("noise_product.csv"));
    assert_eq!(rows.len(), 52);
    assert_eq!(rows[1][1], "0.125");
    let j = json(&out.join("noise.json"));
    assert_eq!(j["noise_product"]["all_below_sql"], true);
}
