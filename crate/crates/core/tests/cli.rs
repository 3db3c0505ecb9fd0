use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_deformkit")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn check_galilei_passes() {
    let o = run(&["check", "galilei"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("8/8 closed"));
}

#[test]
fn json_is_byte_identical() {
    let a = run(&["--format", "json", "rep", "nh-deformed", "--seed", "11"]);
    let b = run(&["--format", "json", "rep", "nh-deformed", "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["schema"], 1);
    assert!(v["sections"]["representations"].as_array().unwrap().iter().all(|i| i["status"] == "closed"));
}

#[test]
fn broken_file_reports_jacobi_witness() {
    let src = stdout(&run(&["catalog", "export", "galilei"]));
    let broken = src.replace("bracket [H,K1] = -P1;", "bracket [H,K1] = -P2;");
    assert_ne!(src, broken);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.alg");
    std::fs::write(&path, broken).unwrap();
    let o = run(&["--format", "json", "check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let jacobi = v["sections"]["checks"].as_array().unwrap().iter().find(|i| i["name"] == "jacobi").unwrap().clone();
    assert_eq!(jacobi["status"], "failed");
    assert!(jacobi["witness"].as_str().unwrap().starts_with("at ("));
}

#[test]
fn parse_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.alg");
    std::fs::write(&path, "gens [A;").unwrap();
    let o = run(&["check", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1:1"));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["deform", "poincare", "galilei"]).status.code(), Some(2));
}

#[test]
fn plain_galilei_to_newton_hooke_fails() {
    let o = run(&["deform", "galilei", "nh-plus"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("do not span"));
}

#[test]
fn extended_galilei_to_newton_hooke_closes() {
    let o = run(&["--format", "json", "deform", "galilei-extended", "nh", "--kappa-sign", "+"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["name"], "galilei-extended → nh-plus");
    let rel: Vec<_> = v["sections"]["constraints"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|i| i["name"] == "relation")
        .map(|i| i["value"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(rel, ["α1^2 = -λ̂^2/(4*m^2*ξ^2)"]);
}

#[test]
fn large_spin_needs_numeric_mode() {
    let o = run(&["rep", "poincare-massive", "--spin", "7/2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--numeric"));
    let o = run(&["rep", "poincare-massive", "--spin", "7/2", "--numeric", "--points", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[numeric-fallback]"));
}

#[test]
fn catalog_list_names_every_entry() {
    let o = run(&["catalog", "list"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    for n in ["galilei", "so41-euclidean-chain", "nh-plus", "ads"] {
        assert!(text.contains(n), "{n}");
    }
}
