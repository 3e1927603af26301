use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn ppav(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ppav"))
        .args(args)
        .output()
        .expect("the ppav binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn cover_fixture(name: &str, g: &str, m: &str) -> String {
    let path = scratch(name);
    let out = ppav(&["cover", "--g", g, "--m", m, "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    path.to_str().unwrap().to_string()
}

#[test]
fn quotient_counts_and_principality() {
    for (g, m, count) in [("1", "2", 3), ("2", "2", 15), ("1", "3", 4)] {
        let out = ppav(&["quotient", "--g", g, "--m", m, "--mode", "all"]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["schema"], "ppav-lattice/1");
        assert_eq!(v["count"], count);
        assert_eq!(v["all_principal"], true);
        for s in v["subgroups"].as_array().unwrap() {
            assert_eq!(s["polarization_type"].as_str().unwrap().matches('1').count(), g.parse::<usize>().unwrap());
        }
    }
    let one = json(&ppav(&["quotient", "--g", "2", "--m", "2"]));
    assert_eq!(one["count"], 1);
}

#[test]
fn cover_certificate() {
    let v = json(&ppav(&["cover", "--g", "2", "--m", "2"]));
    assert_eq!(v["total_genus"], 3);
    let cert = &v["certificate"];
    assert_eq!(cert["ker_mu_invariants"], serde_json::json!(["2", "2"]));
    assert_eq!(cert["component_group_order"], "2");
    let birational: Vec<(String, bool)> = cert["subgroups"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| (s["label"].as_str().unwrap().to_string(), s["birational"].as_bool().unwrap()))
        .collect();
    assert_eq!(
        birational,
        vec![("1:0".into(), true), ("1:1".into(), true), ("0:1".into(), false)]
    );
    assert!(cert["identities"].as_array().unwrap().iter().all(|i| i["passed"] == true));

    let v = json(&ppav(&["cover", "--g", "2", "--m", "3"]));
    assert_eq!(v["total_genus"], 4);
    assert_eq!(v["certificate"]["subgroups"].as_array().unwrap().len(), 4);
}

#[test]
fn welters_on_fixture() {
    let fixture = cover_fixture("welters-2-2.json", "2", "2");
    let v = json(&ppav(&["welters", &fixture]));
    assert_eq!(v["preset"], "pullback_quotient");
    assert_eq!(v["report"]["passed"], true);

    let out = ppav(&["welters", &fixture, "--k", "0:1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["birational"], false);
    assert_eq!(v["label"], "0:1");

    let v = json(&ppav(&["welters", &fixture, "--k", "1:1"]));
    assert_eq!(v["birational"], true);

    for preset in ["jacobian_quotient", "prym_quotient"] {
        let out = ppav(&["welters", &fixture, "--preset", preset]);
        assert_eq!(out.status.code(), Some(0), "{preset}");
        assert_eq!(json(&out)["report"]["passed"], true);
    }
}

#[test]
fn dims_tables() {
    let v = json(&ppav(&["dims", "--g", "5", "--m", "2"]));
    assert_eq!(v["report"]["dim_ag"], 15);
    let v = json(&ppav(&["dims", "--g", "6", "--m", "2"]));
    assert_eq!(v["report"]["dim_r_gmr"], 15);
    assert_eq!(v["report"]["cover_genus"], 11);
    let v = json(&ppav(&["dims", "--g", "4", "--m", "3"]));
    assert_eq!(v["report"]["genus_welters_upper"], "unknown");

    let out = ppav(&["--format", "text", "dims", "--g", "2", "--m", "3"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("cover_genus") && l.ends_with(" 4")));
}

#[test]
fn text_format() {
    let out = ppav(&["--format", "text", "cover", "--g", "2", "--m", "2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("cover g=2 m=2: g'=3"));
    assert!(!text.contains("FAIL"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}

#[test]
fn exit_codes() {
    assert_eq!(ppav(&["dims", "--g", "2", "--m", "2", "--r", "3"]).status.code(), Some(3));
    assert_eq!(ppav(&["dims", "--g", "1", "--m", "2"]).status.code(), Some(3));
    assert_eq!(ppav(&["frobnicate"]).status.code(), Some(3));
    assert_eq!(ppav(&["--help"]).status.code(), Some(0));
    assert_eq!(
        ppav(&["--budget", "80", "quotient", "--g", "2", "--m", "3", "--mode", "all"]).status.code(),
        Some(2)
    );

    let bad = scratch("bad.json");
    std::fs::write(&bad, "{\"schema\": \"ppav-lattice/1\"}").unwrap();
    assert_eq!(ppav(&["welters", bad.to_str().unwrap()]).status.code(), Some(3));
    assert_eq!(ppav(&["welters", "/nonexistent/fixture.json"]).status.code(), Some(3));

    let fixture = cover_fixture("labels-2-2.json", "2", "2");
    assert_eq!(ppav(&["welters", &fixture, "--k", "x"]).status.code(), Some(3));
    assert_eq!(ppav(&["welters", &fixture, "--preset", "nonsense"]).status.code(), Some(3));
}

#[test]
fn tampered_fixture_is_rejected() {
    let fixture = cover_fixture("tampered-2-2.json", "2", "2");
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&fixture).unwrap()).unwrap();
    v["fixture"]["sigma"]["entries"][0][0] = Value::String("5".into());
    let path = scratch("tampered-edited.json");
    std::fs::write(&path, serde_json::to_string(&v).unwrap()).unwrap();
    let out = ppav(&["welters", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8(out.stderr).unwrap().contains("do not match"));
}

#[test]
fn repeated_runs_are_byte_identical() {
    for args in [
        vec!["quotient", "--g", "2", "--m", "2", "--mode", "all"],
        vec!["cover", "--g", "2", "--m", "3"],
        vec!["--format", "text", "dims", "--g", "3", "--m", "4", "--r", "2"],
    ] {
        let (a, b) = (ppav(&args), ppav(&args));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn library_entry_point_matches_binary() {
    let args = ["dims", "--g", "4", "--m", "2"];
    let run = ppav_lattice_cli::invoke(args);
    assert_eq!(run.code, 0);
    assert_eq!(run.stdout, ppav(&args).stdout);
    let bad = ppav_lattice_cli::invoke(["dims", "--g", "1", "--m", "2"]);
    assert_eq!(bad.code, ppav_lattice_cli::EXIT_VALIDATION);
    assert!(bad.stderr.starts_with("error:"));
}
