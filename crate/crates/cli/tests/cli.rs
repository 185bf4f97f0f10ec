use std::path::PathBuf;
use std::process::{Command, Output};

fn chowglue(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chowglue"))
        .args(args)
        .env_remove("CHOWGLUE_MAX_DEGREE")
        .output()
        .expect("binary runs")
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("chowglue-{}-{name}", std::process::id()))
}

#[test]
fn verify_matches_golden_report() {
    let out = tmp("report.json");
    let o = chowglue(&["verify", "--report", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("0 failed"));
    let got = std::fs::read_to_string(&out).unwrap();
    let want = std::fs::read_to_string(data("verify_report.json")).unwrap();
    assert_eq!(got, want);
    let _ = std::fs::remove_file(out);
}

#[test]
fn corrupted_stratum_value_is_a_verification_failure() {
    let out = tmp("corrupt-strata.json");
    let strata = data("strata_corrupt.txt");
    let o = chowglue(&["verify", "--strata", strata.to_str().unwrap(), "--report", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("FAIL c9"), "{s}");
    assert!(s.contains("PASS D1"), "{s}");
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let c9 = report["claims"].as_array().unwrap().iter().find(|c| c["name"] == "c9").unwrap();
    assert_eq!(c9["status"], "FAIL");
    assert!(c9["expected"].as_str().unwrap().contains("+ 385*l2^4*xi1"));
    assert!(c9["computed"].as_str().unwrap().contains("+ 384*l2^4*xi1"));
    let _ = std::fs::remove_file(out);
}

#[test]
fn corrupted_relation_list_is_a_verification_failure() {
    let rel = data("relations_corrupt.txt");
    let o = chowglue(&["verify", "--relations", rel.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let s = stdout(&o);
    assert!(s.contains("FAIL reference relations in the glued ideal (missing: k111_4)"), "{s}");
    assert!(s.contains("FAIL glued relations in the reference ideal"), "{s}");
    assert!(s.contains("PASS c9"), "{s}");
}

#[test]
fn trivial_membership_passes() {
    let o = chowglue(&["ideal", "member", "--poly", "0", "--gens", "[]"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "PASS");
}

#[test]
fn membership_failure_exits_one() {
    let o = chowglue(&["ideal", "member", "--poly", "x", "--gens", "[\"x*y\"]"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL"));
}

#[test]
fn chern_of_symmetric_square() {
    let o = chowglue(&["chern", "--expr", "sym2(E{c1,c2})", "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "3*c1");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["ideal", "member", "--poly", "x", "--gens", "[not json"],
        vec!["ideal", "member", "--poly", "x + z", "--gens", "[\"x\"]", "--vars", "x:1"],
        vec!["ideal", "member", "--poly", "x^20", "--gens", "[\"x\"]"],
        vec!["verify", "--max-degree", "5"],
        vec!["derive", "nowhere"],
        vec!["glue", "--datum", "/nonexistent/pipeline.json"],
        vec!["frobnicate"],
    ] {
        let o = chowglue(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn max_degree_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_chowglue"))
        .args(["ideal", "member", "--poly", "x^5", "--gens", "[\"x\"]"])
        .env("CHOWGLUE_MAX_DEGREE", "4")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn derive_single_strata() {
    for s in ["hyperelliptic", "open", "delta1", "delta11", "delta111"] {
        let o = chowglue(&["derive", s]);
        assert_eq!(o.status.code(), Some(0), "{s}");
        assert!(stdout(&o).contains(&format!("PASS {s}")));
    }
    let o = chowglue(&["derive", "hyperelliptic", "--strata", data("strata_corrupt.txt").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn glue_explicit_datum() {
    // a line whose open part kills x, glued to a point with normal class a
    let datum = r#"{
        "open": {"vars": [{"name": "x", "degree": 1}], "relations": ["x"]},
        "steps": [{
            "name": "point",
            "zsym": "z",
            "degree": 1,
            "closed": {"vars": [{"name": "a", "degree": 1}]},
            "images": {"x": "a", "z": "a"},
            "c_top": "a"
        }]
    }"#;
    let path = tmp("datum.json");
    std::fs::write(&path, datum).unwrap();
    let o = chowglue(&["glue", "--datum", path.to_str().unwrap()]);
    let _ = std::fs::remove_file(&path);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(stdout(&o).contains("PASS point"));
}

#[test]
fn invariant_subring_and_localization() {
    let o = chowglue(&["invariants", "--group", "swap:a,b", "--gens", "[\"a+b\",\"a*b\"]"]);
    assert_eq!(o.status.code(), Some(0));
    let o = chowglue(&["invariants", "--group", "swap:a,b", "--gens", "[\"a+b\"]"]);
    assert_eq!(o.status.code(), Some(1));
    // ∫_{P^1} h = 1
    let o = chowglue(&["localize", "--weights", "[\"a\",\"b\"]", "--values", "[\"h\",\"h\"]"]);
    assert_eq!(stdout(&o).trim(), "1");
}
