use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use birkhoff_core::flows::{fiber_curves, hopf_fiber_starts};
use birkhoff_core::{CurveFile, FlowField, Integrator, Tolerances};
use serde_json::Value;

fn birkhoff(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_birkhoff"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn hopf_fibers(dir: &Path, m: usize, vertices: usize) -> PathBuf {
    let f = FlowField::hopf();
    let curves = fiber_curves(
        &f,
        &hopf_fiber_starts(m),
        vertices,
        &Integrator::default(),
        &Tolerances::default(),
    )
    .unwrap();
    let path = dir.join(format!("fibers{m}.json"));
    std::fs::write(&path, CurveFile::from_curves(curves).unwrap().to_json()).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn two_fibers_link_once() {
    let dir = tempfile::tempdir().unwrap();
    let file = hopf_fibers(dir.path(), 2, 128);
    let o = birkhoff(&["link", "--curves", s(&file)]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o), "1\n");

    let o = birkhoff(&["link", "--curves", s(&file), "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["names"], serde_json::json!(["fiber0", "fiber1"]));

    let o = birkhoff(&["link", "--curves", s(&file), "--format", "csv"]);
    assert_eq!(stdout(&o), "name,fiber0,fiber1\nfiber0,-,1\nfiber1,1,-\n");
}

#[test]
fn three_fibers_print_a_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let file = hopf_fibers(dir.path(), 3, 96);
    let o = birkhoff(&["link", "--curves", s(&file)]);
    assert_eq!(stdout(&o), "- 1 1\n1 - 1\n1 1 -\n");
}

#[test]
fn self_linking_of_fibers_against_zeta() {
    let dir = tempfile::tempdir().unwrap();
    let file = hopf_fibers(dir.path(), 2, 128);
    let o = birkhoff(&["slk", "--curves", s(&file), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    for entry in v.as_array().unwrap() {
        assert_eq!(entry["slk"], -1);
        assert_eq!(entry["k_f"], 1);
    }
}

#[test]
fn section_reports_chi_genus_and_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let file = hopf_fibers(dir.path(), 2, 128);
    let o = birkhoff(&["section", "--curves", s(&file), "--mult", "1,1", "--framing", "zeta"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["chi"], 0);
    assert_eq!(v["genus"], 0);
    assert_eq!(v["slopes"], serde_json::json!([[-1, 1], [-1, 1]]));
    assert_eq!(v["circles"], serde_json::json!([1, 1]));
}

#[test]
fn all_zero_multiplicities_are_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let file = hopf_fibers(dir.path(), 2, 96);
    let o = birkhoff(&["section", "--curves", s(&file), "--mult", "0,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error: Invalid"), "{}", stderr(&o));
}

#[test]
fn multiplicity_count_must_match() {
    let dir = tempfile::tempdir().unwrap();
    let file = hopf_fibers(dir.path(), 2, 96);
    let o = birkhoff(&["section", "--curves", s(&file), "--mult", "1,-1,2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn malformed_json_exits_one_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"ambient\": \"S3\", \"curves\": [").unwrap();
    let out = dir.path().join("out.json");
    let o = birkhoff(&["link", "--curves", s(&bad), "--out", s(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(birkhoff(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(birkhoff(&["helicity"]).status.code(), Some(1));
    assert_eq!(birkhoff(&["helicity", "--T", "1", "--field", "lorenz"]).status.code(), Some(1));
    assert_eq!(birkhoff(&["asymptotic", "--family", "other"]).status.code(), Some(1));
    assert_eq!(birkhoff(&["helicity", "--T", "1", "--eps-int", "-1"]).status.code(), Some(1));
    assert_eq!(birkhoff(&["--help"]).status.code(), Some(0));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "seed = 3\nsed = 4\n").unwrap();
    let o = birkhoff(&["helicity", "--T", "6.283185307179586", "--pairs", "2", "--config", s(&cfg)]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_seed_is_used_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    std::fs::write(&cfg, "seed = 3\n").unwrap();
    let base = ["helicity", "--field", "seifert:2,3", "--T", "3", "--pairs", "4"];
    let mut a = base.to_vec();
    a.extend(["--config", s(&cfg)]);
    let v: Value = serde_json::from_slice(&birkhoff(&a).stdout).unwrap();
    assert_eq!(v["seed"], 3);
    a.extend(["--seed", "11"]);
    let v: Value = serde_json::from_slice(&birkhoff(&a).stdout).unwrap();
    assert_eq!(v["seed"], 11);
}

#[test]
fn step_cap_is_a_domain_error() {
    let o = birkhoff(&["helicity", "--T", "1e9", "--pairs", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("StepCapExceeded"), "{}", stderr(&o));
}

#[test]
fn hopf_helicity_is_exact() {
    let o = birkhoff(&["helicity", "--field", "hopf", "--T", "6.283185307179586", "--pairs", "20", "--seed", "42"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let value = v["value"].as_f64().unwrap();
    assert!((value - 1.0 / (4.0 * std::f64::consts::PI.powi(2))).abs() < 1e-9);
    assert_eq!(v["stderr"], 0.0);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let o = birkhoff(&[
            "helicity", "--field", "seifert:2,3", "--T", "4", "--pairs", "8", "--seed", "7", "--out", s(out),
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn verify_hopf_reproduces_the_table() {
    let o = birkhoff(&["verify-hopf", "--max-m", "4", "--vertices", "128", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "m,chi,genus,expected_chi,expected_genus,ok\n\
         1,1,0,1,0,true\n\
         2,0,0,0,0,true\n\
         3,-3,1,-3,1,true\n\
         4,-8,3,-8,3,true\n"
    );
}

#[test]
fn asymptotic_table_has_the_documented_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("t.csv");
    let o = birkhoff(&[
        "asymptotic", "--depth", "2", "--pairs", "2", "--helicity-step", "0.05", "--out", s(&out),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("p,q,t_n,genus,g_over_t2,hel_ref,rel_dev"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("1,2,"));
    assert!(rows[1].starts_with("2,3,"));
}
