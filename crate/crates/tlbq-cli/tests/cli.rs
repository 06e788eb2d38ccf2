use std::process::{Command, Output};

fn tlbq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tlbq")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn enumerate_counts_lines() {
    let o = tlbq(&["enumerate", "0", "4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 6);
    assert_eq!(stdout(&tlbq(&["enumerate", "1", "1"])).lines().count(), 2);
    let bad = tlbq(&["enumerate", "1", "2"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("cannot be perfectly matched"));
}

#[test]
fn enumerate_json() {
    let o = tlbq(&["enumerate", "2", "2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["count"], 6);
    assert!(v["diagrams"].as_array().unwrap().iter().any(|d| d == "2->2 : b1-b2*, t1-t2"));
}

#[test]
fn mult_tables() {
    let one = stdout(&tlbq(&["mult-table", "1"]));
    assert_eq!(one.lines().count(), 3);
    assert!(one.lines().nth(2).unwrap().ends_with("(-Q - Q^-1)*d1"));
    assert_eq!(stdout(&tlbq(&["mult-table", "0"])).lines().count(), 2);
    let two = tlbq(&["mult-table", "2"]);
    assert_eq!(stdout(&two).lines().count(), 7);
    assert_eq!(two.stdout, tlbq(&["mult-table", "2"]).stdout);
}

#[test]
fn gram_determinants() {
    assert!(stdout(&tlbq(&["gram", "1", "-1"])).ends_with("det = (-Q - Q^-1)\n"));
    assert!(stdout(&tlbq(&["gram", "1", "-1", "--Q", "i"])).ends_with("det = (0)\n"));
    assert!(stdout(&tlbq(&["gram", "1", "1"])).ends_with("det = (1)\n"));
    assert_eq!(tlbq(&["gram", "2", "1"]).status.code(), Some(2));
    assert_eq!(tlbq(&["gram", "1", "-1", "--Q", "(("]).status.code(), Some(2));
}

#[test]
fn verify_duality_passes_with_dimension_six() {
    let o = tlbq(&["verify-duality", "--ell", "1", "--r", "2"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["status"], "pass");
    assert_eq!(v["witness"]["dimension"][0], 6);
    assert_eq!(v["params"]["ell"], 1);
    assert_eq!(v["params"]["D"], 4);
    assert_eq!(v["elapsed_ms"], 0);
    let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
    assert_eq!(keys, ["check", "params", "status", "witness", "elapsed_ms"]);
}

#[test]
fn check_relations_and_depth_validation() {
    let o = tlbq(&["check-relations", "--ell", "0", "--r", "2", "--format", "text"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("pass")).count(), 2);
    let shallow = tlbq(&["check-relations", "--ell", "0", "--r", "2", "--depth", "2"]);
    assert_eq!(shallow.status.code(), Some(2));
}

#[test]
fn scan_matches_rule_and_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.json");
    let o = tlbq(&["scan", "--ell", "-1..3", "--rmax", "4", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = v["witness"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    for row in rows {
        let (ell, r) = (row["ell"].as_i64().unwrap(), row["r"].as_i64().unwrap());
        assert_eq!(row["verdict"], ell >= 0 && r <= ell + 1, "ell={ell} r={r}");
        assert_eq!(row["verdict"], row["predicted"]);
    }
    let again = tlbq(&["scan", "--ell", "-1..3", "--rmax", "4"]);
    assert_eq!(again.stdout, text.as_bytes());
}

#[test]
fn timing_flag_records_time() {
    let o = tlbq(&["scan", "--ell", "2", "--rmax", "5", "--timing"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v["elapsed_ms"].as_u64().unwrap() > 0);
}

#[test]
fn thread_variable_is_validated() {
    let o = Command::new(env!("CARGO_BIN_EXE_tlbq"))
        .args(["enumerate", "0", "2"])
        .env("TLBQ_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    let ok = Command::new(env!("CARGO_BIN_EXE_tlbq"))
        .args(["enumerate", "0", "2"])
        .env("TLBQ_THREADS", "2")
        .output()
        .unwrap();
    assert!(ok.status.success());
}
