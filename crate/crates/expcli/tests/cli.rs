use std::process::Command;

use ipstar_lab::report::csv_records;
use ipstar_lab::{emit, run_experiment, ExperimentConfig, ExperimentKind, Format};
use serde_json::{json, Value};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ipstar-lab"))
}

fn cfg(dir: &std::path::Path, v: Value) -> ExperimentConfig {
    let mut v = v;
    v["cache_dir"] = json!(dir.join("cache"));
    ExperimentConfig::from_value(v).unwrap()
}

fn strip_wall_time(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("\"wall_time_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn written_reports_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    for kind in [
        ExperimentKind::Jdiff,
        ExperimentKind::IpstarSubgroup,
        ExperimentKind::DeltaRPrimes,
    ] {
        let mut texts = Vec::new();
        for i in 0..2 {
            let path = dir.path().join(format!("{kind}-{i}.json"));
            let c = cfg(
                dir.path(),
                json!({"experiment": kind.name(), "seed": 11, "output": path}),
            );
            let report = run_experiment(&c).unwrap();
            assert!(emit(&report, &c).unwrap().is_none());
            texts.push(std::fs::read_to_string(&path).unwrap());
        }
        assert_eq!(strip_wall_time(&texts[0]), strip_wall_time(&texts[1]), "{kind}");
        let v: Value = serde_json::from_str(&texts[0]).unwrap();
        assert_eq!(v["schema"], "ipstar-lab/1");
        assert!(v["wall_time_ms"].is_u64());
        assert_eq!(v["body_hash"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn seeds_change_sampled_experiments() {
    let dir = tempfile::tempdir().unwrap();
    let a = run_experiment(&cfg(
        dir.path(),
        json!({"experiment": "jdiff", "seed": 1, "samples": 5}),
    ))
    .unwrap();
    let b = run_experiment(&cfg(
        dir.path(),
        json!({"experiment": "jdiff", "seed": 2, "samples": 5}),
    ))
    .unwrap();
    assert_ne!(a.body_hash, b.body_hash);
    assert_ne!(a.config_hash, b.config_hash);
    assert_eq!(a.body.prng, Some(ipstar_lab::rng::PRNG_NAME));
}

#[test]
fn csv_and_json_rows_agree() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ExperimentKind::ALL {
        let c = cfg(dir.path(), json!({"experiment": kind.name()}));
        let report = run_experiment(&c).unwrap();
        let csv_text = report.render(Format::Csv);
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(false)
            .flexible(true)
            .from_reader(csv_text.as_bytes());
        let parsed: Vec<Vec<String>> = reader
            .records()
            .map(|r| r.unwrap().iter().map(String::from).collect())
            .collect();
        assert_eq!(parsed, csv_records(&report), "{kind}");

        let json: Value = serde_json::from_str(&report.render(Format::Json)).unwrap();
        let mut from_json = Vec::new();
        for t in json["body"]["tables"].as_array().unwrap() {
            let name = t["name"].as_str().unwrap();
            for row in t["rows"].as_array().unwrap() {
                let cells: Vec<String> = row
                    .as_array()
                    .unwrap()
                    .iter()
                    .map(ipstar_lab::report::cell_text)
                    .collect();
                from_json.push((name.to_string(), cells));
            }
        }
        let from_csv: Vec<(String, Vec<String>)> = parsed
            .into_iter()
            .filter(|r| r[0] != "table")
            .map(|r| (r[0].clone(), r[1..].to_vec()))
            .collect();
        assert_eq!(from_csv, from_json, "{kind}");
    }
}

#[test]
fn every_embedded_certificate_rechecks() {
    let dir = tempfile::tempdir().unwrap();
    for kind in ExperimentKind::ALL {
        let report = run_experiment(&cfg(dir.path(), json!({"experiment": kind.name()}))).unwrap();
        assert!(!report.body.certificates.is_empty(), "{kind}");
        assert!(report.body.certificates.iter().all(|c| c.recheck), "{kind}");
    }
}

#[test]
fn unknown_experiment_exits_with_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("c.json");
    std::fs::write(&path, r#"{"experiment":"no-such-thing"}"#).unwrap();
    let out = bin().args(["run", "-c"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown experiment"));

    std::fs::write(&path, r#"{"experiment":"ipstar-subgroup","bogus":1}"#).unwrap();
    let out = bin().args(["run", "-c"]).arg(&path).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bogus"));
}

#[test]
fn guard_violations_exit_with_code_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args(["ipstar-subgroup", "-p", "k=8", "--cache-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn cli_runs_configs_with_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("c.json");
    let report = dir.path().join("out").join("r.csv");
    std::fs::write(&config, r#"{"experiment":"ipstar-subgroup","k":2}"#).unwrap();
    let out = bin()
        .args(["run", "-c"])
        .arg(&config)
        .args(["-p", "k=3", "--format", "csv", "-o"])
        .arg(&report)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = std::fs::read_to_string(&report).unwrap();
    assert!(text.starts_with("table,r,status,counterexample,search_cost"));
    assert!(text.contains("verdicts,4,certified-on-window"));

    let out = bin().args(["freesemigroup", "--explain"]).output().unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("freesemigroup:"));

    let out = bin().args(["list"]).output().unwrap();
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 9);
}

#[test]
fn sieve_subcommand_uses_the_cache() {
    let dir = tempfile::tempdir().unwrap();
    let run = || {
        bin()
            .args(["sieve", "100000", "--cache-dir"])
            .arg(dir.path())
            .output()
            .unwrap()
    };
    let first = String::from_utf8(run().stdout).unwrap();
    let second = String::from_utf8(run().stdout).unwrap();
    assert!(first.contains("pi(100000) = 9592") && first.contains("Miss"), "{first}");
    assert!(second.contains("Hit"), "{second}");
    let out = bin()
        .args(["sieve", "1000", "--max-limit", "10", "--cache-dir"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}
