use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures/smartphone.json")
}

fn hfgraph(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfgraph")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn run_with_published_similarities_ranks_every_row_alike() {
    let f = fixture();
    let o = hfgraph(&[
        "run",
        f.to_str().unwrap(),
        "--mode",
        "energy",
        "--eta",
        "0.5",
        "--gamma",
        "0,0.3,0.5,0.7,1.0",
        "--override-similarity",
        "published",
        "--format",
        "json",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let records = v["run"]["records"].as_array().unwrap();
    assert_eq!(records.len(), 5);
    for r in records {
        assert_eq!(r["ranking"], serde_json::json!(["t1", "t2", "t4", "t3"]));
    }
    let ca: Vec<f64> = serde_json::from_value(v["run"]["ca"].clone()).unwrap();
    for (g, w) in ca.iter().zip([0.3274, 0.3392, 0.3334]) {
        assert!((g - w).abs() < 1e-3);
    }
}

#[test]
fn laplacian_run_matches_last_table_row() {
    let f = fixture();
    let o = hfgraph(&["run", f.to_str().unwrap(), "--mode", "laplacian", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let last = v["run"]["records"].as_array().unwrap().last().unwrap().clone();
    let f: Vec<f64> = serde_json::from_value(last["f"].clone()).unwrap();
    for (g, w) in f.iter().zip([0.4532, 0.4376, 0.4142, 0.4203]) {
        assert!((g - w).abs() < 2e-3, "{f:?}");
    }
}

#[test]
fn run_without_overrides_reports_discrepancies() {
    let f = fixture();
    let o = hfgraph(&["run", f.to_str().unwrap(), "--similarity-blend", "broadcast", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let ca: Vec<f64> = serde_json::from_value(v["run"]["ca"].clone()).unwrap();
    for (g, w) in ca.iter().zip([0.3384, 0.3343, 0.3273]) {
        assert!((g - w).abs() < 1e-3);
    }
    let ds = v["discrepancies"].as_array().unwrap();
    assert!(ds.iter().any(|d| d["stage"] == "pair_similarity" && d["within_tolerance"] == false));
}

#[test]
fn json_floats_have_seventeen_significant_digits() {
    let f = fixture();
    let o = hfgraph(&["energy", f.to_str().unwrap(), "--format", "json"]);
    assert!(stdout(&o).contains("2.1114877048604002e0"));
}

#[test]
fn table_output_uses_four_decimals() {
    let f = fixture();
    let o = hfgraph(&["energy", f.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("(2.1115, 2.2435, 1.3062)"));
    assert!(text.contains("(1.6000, 2.0000, 2.4000)"));
}

#[test]
fn energy_of_zero_relation_is_zero() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("zero.json");
    std::fs::write(
        &path,
        r#"{"alternatives": ["a", "b", "c"], "experts": [{"id": "e1", "hfpr": [[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]],[[0,0,0],[0,0,0],[0,0,0]]]}]}"#,
    )
    .unwrap();
    let o = hfgraph(&["energy", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["experts"][0]["energy"], serde_json::json!([0.0, 0.0, 0.0]));
}

#[test]
fn invalid_input_exits_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let text = std::fs::read_to_string(fixture())
        .unwrap()
        .replacen("[0.4000, 0.2000, 0.3000]", "[0.6000, 0.3000, 0.2000]", 1);
    std::fs::write(&path, text).unwrap();
    let o = hfgraph(&["run", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("e1"));

    let missing = dir.path().join("missing.json");
    assert_eq!(hfgraph(&["run", missing.to_str().unwrap()]).status.code(), Some(2));
    let f = fixture();
    assert_eq!(hfgraph(&["run", f.to_str().unwrap(), "--eta", "2"]).status.code(), Some(2));
}

#[test]
fn similarity_overrides_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("pairs.json");
    std::fs::write(&path, r#"{"e1:e2": 0.9, "e1:e3": 0.9, "e2:e3": 0.9}"#).unwrap();
    let f = fixture();
    let o = hfgraph(&["run", f.to_str().unwrap(), "--override-similarity", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let ca: Vec<f64> = serde_json::from_value(json(&o)["run"]["ca"].clone()).unwrap();
    for w in ca {
        assert!((w - 1.0 / 3.0).abs() < 1e-12);
    }
    std::fs::write(&path, r#"{"e1:e2": 0.9}"#).unwrap();
    let o = hfgraph(&["run", f.to_str().unwrap(), "--override-similarity", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn verify_bounds_on_fixtures_passes() {
    let o = hfgraph(&["verify-bounds", "--fixtures"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("seed,n,channel,quantity,value,bound_lo,bound_hi,satisfied\n"));
    assert!(text.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn verify_bounds_smoke_run() {
    let o = hfgraph(&["verify-bounds", "--count", "1", "--n", "2", "--seed", "7"]);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 1 + 3 * 9);
    assert!(text.lines().skip(1).all(|l| l.starts_with("7,2,")));
    // the Koolen-Moulton-type energy bound fails on weighted edges
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_bounds_is_deterministic_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for p in [&a, &b] {
        hfgraph(&["verify-bounds", "--seed", "5", "--count", "25", "--output", p.to_str().unwrap()]);
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert!(!std::fs::read(&a).unwrap().is_empty());
}

#[test]
fn generate_round_trips_and_is_deterministic() {
    let first = hfgraph(&["generate", "--seed", "1", "--n", "4", "--experts", "3"]);
    let second = hfgraph(&["generate", "--seed", "1", "--n", "4", "--experts", "3"]);
    assert_eq!(first.status.code(), Some(0));
    assert_eq!(first.stdout, second.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("gen.json");
    std::fs::write(&path, &first.stdout).unwrap();
    let o = hfgraph(&["energy", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    for e in v["experts"].as_array().unwrap() {
        for row in e["hfpr"].as_array().unwrap() {
            for t in row.as_array().unwrap() {
                let s: f64 = t.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).sum();
                assert!(s <= 1.0 + 1e-12);
            }
        }
    }
    assert_eq!(hfgraph(&["generate", "--n", "1"]).status.code(), Some(2));
}
