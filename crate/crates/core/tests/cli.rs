use std::path::Path;
use std::process::{Command, Output};

use num_bigint::BigUint;
use serde_json::Value;

fn sadic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sadic"))
        .args(args)
        .env_remove("SADIC_MAX_LETTERS")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn paper_default_suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = sadic(&["verify", "--family", "paper", "--out", out_path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = read_json(&out_path);
    let checks = report["checks"].as_array().unwrap();
    assert_eq!(checks.len(), 8);
    for c in checks {
        assert_eq!(c["status"], "pass", "{}", c["name"]);
        assert!(!c["anchor"].as_str().unwrap().is_empty());
    }
    assert_eq!(report["tally"]["fail"], 0);
}

#[test]
fn structure_violation_exits_2_and_names_level() {
    let dir = tempfile::tempdir().unwrap();
    let fam = dir.path().join("bad.toml");
    std::fs::write(&fam, "kind = \"custom\"\nl = [2, 70]\nm = [8, 64]\nn = [32, 2048]\n").unwrap();
    for cmd in [&["verify", "--family"][..], &["report", "--kind", "bispecial", "--family"][..]] {
        let mut args = cmd.to_vec();
        args.push(fam.to_str().unwrap());
        let out = sadic(&args);
        assert_eq!(code(&out), 2);
        assert!(stderr(&out).contains("level 1"), "{}", stderr(&out));
    }
    let out = sadic(&["verify", "--checks", "no_such_check"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn short_oracle_prefix_warns_but_exits_0() {
    let out = sadic(&[
        "verify", "--family", "mini", "--checks", "oracle_equivalence", "--max-n", "100", "--prefix-len", "3000",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    assert!(stderr(&out).contains("WARN oracle_equivalence"));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["checks"][0]["status"], "unsaturated");
}

#[test]
fn config_file_drives_the_suite() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("suite.toml");
    std::fs::write(
        &cfg,
        "checks = [\"hypotheses\", \"recurrence\"]\n\n[family]\nkind = \"custom\"\nname = \"small\"\nl = [2, 3, 5]\nm = [8, 64, 4096]\nn = [32, 2048, \"2^20\"]\n",
    )
    .unwrap();
    let out = sadic(&["verify", "--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines[0], "check,status,summary");
    assert!(lines[1].starts_with("hypotheses,pass,"));
    assert!(lines[2].starts_with("recurrence,pass,"));
}

#[test]
fn gen_words_and_sidecars() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("u1.txt");
    let out = sadic(&["gen", "--family", "paper", "--which", "u", "--rank", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<_> = text.lines().collect();
    assert_eq!(lines.iter().map(|l| l.len()).collect::<Vec<_>>(), vec![120, 120, 80]);
    assert_eq!(lines.concat(), "0".repeat(256) + &"1".repeat(64));
    let meta = read_json(&dir.path().join("u1.txt.json"));
    assert_eq!(meta["length"], 320);
    assert_eq!(meta["parikh"]["zeros"], "256");
    assert_eq!(meta["parikh"]["ones"], "64");

    let empty = dir.path().join("empty.txt");
    let out = sadic(&["gen", "--which", "prefix", "--length", "0", "--out", empty.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(std::fs::read_to_string(&empty).unwrap(), "");
    assert_eq!(read_json(&dir.path().join("empty.txt.json"))["length"], 0);

    let v2 = dir.path().join("v2.txt");
    let out = sadic(&["gen", "--family", "mini", "--which", "v", "--rank", "2", "--out", v2.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert_eq!(read_json(&dir.path().join("v2.txt.json"))["length"], 82560);
}

#[test]
fn resource_limits_exit_3() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("big.txt");
    let out = sadic(&["gen", "--which", "u", "--rank", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
    let out = Command::new(env!("CARGO_BIN_EXE_sadic"))
        .args(["gen", "--family", "mini", "--which", "prefix", "--length", "1000", "--out", path.to_str().unwrap()])
        .env("SADIC_MAX_LETTERS", "100")
        .output()
        .unwrap();
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("cap of 100"));
}

#[test]
fn frequency_report_excess_at_least_three_halves() {
    let out = sadic(&["report", "--kind", "frequency", "--max-rank", "12", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 13);
    for r in rows {
        let excess = r["excess"].as_str().unwrap();
        let (num, den) = excess.split_once('/').unwrap_or((excess, "1"));
        let (num, den): (BigUint, BigUint) = (num.parse().unwrap(), den.parse().unwrap());
        assert!(num * 2u32 >= den * 3u32, "i = {}", r["i"]);
        assert_eq!(r["floor_ok"], true);
    }
}

#[test]
fn bispecial_report_chain_increases() {
    let out = sadic(&["report", "--kind", "bispecial", "--max-rank", "10"]);
    assert_eq!(code(&out), 0);
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut values: Vec<BigUint> = Vec::new();
    for line in csv.lines().skip(1) {
        values.extend(line.split(',').skip(1).map(|x| x.parse::<BigUint>().unwrap()));
    }
    assert_eq!(values.len(), 44);
    assert!(values.windows(2).all(|w| w[0] < w[1]));
}

#[test]
fn complexity_report_matches_oracle_on_saturated_rows() {
    let out = sadic(&[
        "report", "--family", "mini", "--kind", "complexity", "--max-n", "2000", "--prefix-len", "4000000",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let csv = String::from_utf8(out.stdout).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "n,s_symbolic,p_symbolic,s_hat,p_hat,saturated");
    let mut saturated = 0;
    for line in lines {
        let f: Vec<_> = line.split(',').collect();
        if f[5] == "true" {
            saturated += 1;
            assert_eq!(f[1], f[3], "row {line}");
            assert_eq!(f[2], f[4], "row {line}");
        }
    }
    assert_eq!(saturated, 2001);
}
