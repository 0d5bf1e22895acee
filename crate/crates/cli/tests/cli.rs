use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn ionjw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ionjw"))
        .args(args)
        .env_remove("IONJW_TOL")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn compile_to(path: &Path, args: &[&str]) {
    let mut all = vec!["compile"];
    all.extend_from_slice(args);
    all.extend_from_slice(&["-o", path.to_str().unwrap()]);
    let o = ionjw(&all);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
}

#[test]
fn every_op_compiles_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.txt");
    let cases: &[&[&str]] = &[
        &["--op", "single", "--orbitals", "0,3", "--theta", "0.7"],
        &["--op", "single", "--orbitals", "1,4", "--theta", "-0.3", "--axis", "yy"],
        &["--op", "single", "--orbitals", "0,2", "--theta", "0.7", "--symmetrized"],
        &["--op", "double", "--orbitals", "0,1,3,5", "--theta", "-0.4"],
        &["--op", "double", "--orbitals", "0,2,3,4", "--theta", "0.4", "--symmetrized"],
        &["--op", "coupled", "--orbitals", "0,1,2,3", "--theta", "0.3"],
        &["--op", "mixed", "--orbitals", "0,2,3,5", "--theta", "0.3"],
        &["--op", "controlled", "--orbitals", "0,2", "--control", "4", "--theta", "0.5"],
        &["--op", "controlled", "--orbitals", "1,4", "--control", "2", "--theta", "0.5", "--variant", "b"],
        &["--op", "controlled", "--orbitals", "0,2", "--control", "1", "--theta", "0.5", "--symmetrized"],
        &["--op", "higher", "--orbitals", "0,1,2,3,4,5", "--theta", "0.2"],
        &["--op", "rotation", "--pauli", "-XIYZ", "--theta", "0.9"],
        &["--op", "double", "--orbitals", "0,1,3,5", "--theta", "0.4", "--forward-only"],
    ];
    for args in cases {
        compile_to(&f, args);
        let o = ionjw(&["verify", "--circuit", f.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{args:?}: {}{}", stdout(&o), stderr(&o));
        assert!(stdout(&o).contains("ok"));
    }
}

#[test]
fn forward_only_has_no_backward_gates() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.txt");
    compile_to(&f, &["--op", "double", "--orbitals", "0,1,3,5", "--theta", "0.4", "--forward-only"]);
    let o = ionjw(&["count", "--circuit", f.to_str().unwrap(), "--format", "json"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["ms_backward"], 0);
    assert_eq!(r["ms_forward"], 4);
}

#[test]
fn tampered_metadata_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.txt");
    compile_to(&f, &["--op", "single", "--orbitals", "0,2", "--theta", "0.7", "--symmetrized"]);
    let text = fs::read_to_string(&f).unwrap();
    fs::write(&f, text.replace("meta symmetrized true\n", "")).unwrap();
    let o = ionjw(&["verify", "--circuit", f.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FAILED"));

    compile_to(&f, &["--op", "double", "--orbitals", "0,1,3,5", "--theta", "0.4"]);
    let text = fs::read_to_string(&f).unwrap();
    fs::write(&f, text.replace("meta theta 0.4", "meta theta 0.41")).unwrap();
    assert_eq!(code(&ionjw(&["verify", "--circuit", f.to_str().unwrap()])), 1);
    // a loose tolerance accepts the small change
    let o = ionjw(&["verify", "--circuit", f.to_str().unwrap(), "--tol", "1.0"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn tolerance_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.txt");
    compile_to(&f, &["--op", "single", "--orbitals", "0,2", "--theta", "0.7"]);
    let text = fs::read_to_string(&f).unwrap();
    fs::write(&f, text.replace("meta theta 0.7", "meta theta 0.7001")).unwrap();
    let run = |tol: &str| {
        Command::new(env!("CARGO_BIN_EXE_ionjw"))
            .args(["verify", "--circuit", f.to_str().unwrap()])
            .env("IONJW_TOL", tol)
            .output()
            .unwrap()
    };
    assert_eq!(code(&run("1e-9")), 1);
    assert_eq!(code(&run("1e-2")), 0);
    assert_eq!(code(&run("lots")), 2);
}

#[test]
fn phase_mode_ignores_global_phase() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.txt");
    compile_to(&f, &["--op", "single", "--orbitals", "0,2", "--theta", "0.7"]);
    let mut text = fs::read_to_string(&f).unwrap();
    text.push_str("gphase angle=0.3\n");
    fs::write(&f, &text).unwrap();
    let p = f.to_str().unwrap();
    let exact = ionjw(&["verify", "--circuit", p]);
    assert_eq!(code(&exact), 1, "{}", stderr(&exact));
    assert_eq!(code(&ionjw(&["verify", "--circuit", p, "--mode", "phase"])), 0);
}

#[test]
fn usage_errors_exit_two() {
    let o = ionjw(&["compile", "--op", "single", "--orbitals", "2,1", "--theta", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("strictly increasing"), "{}", stderr(&o));
    let o = ionjw(&["compile", "--op", "double", "--orbitals", "0,3,1,5", "--theta", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("strictly increasing"));
    let bad: &[&[&str]] = &[
        &["compile", "--op", "single", "--orbitals", "0,1,2", "--theta", "1"],
        &["compile", "--op", "controlled", "--orbitals", "0,2", "--theta", "1"],
        &["compile", "--op", "controlled", "--orbitals", "0,2", "--control", "2", "--theta", "1"],
        &["compile", "--op", "single", "--orbitals", "0,1", "--theta", "1", "--variant", "b"],
        &["compile", "--op", "single", "--orbitals", "0,5", "--theta", "1", "--qubits", "4"],
        &["compile", "--op", "rotation", "--pauli", "III", "--theta", "1"],
        &["compile", "--op", "single", "--orbitals", "0,1"],
        &["compile", "--op", "sextuple", "--orbitals", "0,1", "--theta", "1"],
        &["trotter", "--builtin", "h2o", "--dt", "0.1"],
        &["trotter", "--builtin", "h3plus", "--dt", "0.1", "--reality", "complex"],
        &["uccsd", "--modes", "6", "--occupied", "0,1", "--params", "0.1"],
        &["demo", "h2"],
        &["nonsense"],
    ];
    for args in bad {
        let o = ionjw(args);
        assert_eq!(code(&o), 2, "{args:?}: {}", stderr(&o));
    }
}

#[test]
fn input_errors_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    fs::write(&f, "ionjw-circuit 1\nqubits 2\nms axis=XX dir=forward qubits=0,7\n").unwrap();
    let o = ionjw(&["count", "--circuit", f.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));

    let missing = dir.path().join("missing.txt");
    let o = ionjw(&["verify", "--circuit", missing.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("missing.txt"));

    let ints = dir.path().join("h.int");
    fs::write(&ints, "norb 2 reality real\n0.5 1 2 0 0\n0.7 2 1 0 0\n").unwrap();
    let o = ionjw(&["trotter", "--integrals", ints.to_str().unwrap(), "--dt", "0.1"]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));
    assert!(stderr(&o).contains("h.int"));

    // a compiled file with no declared generator cannot be verified
    let plain = dir.path().join("plain.txt");
    fs::write(&plain, "ionjw-circuit 1\nqubits 1\nrz qubits=0 angle=0.1\n").unwrap();
    let o = ionjw(&["verify", "--circuit", plain.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("op"));
}

#[test]
fn uccsd_and_trotter_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let u = dir.path().join("u.txt");
    let o = ionjw(&[
        "uccsd", "--modes", "6", "--occupied", "0,1", "--params", "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8", "-o",
        u.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&ionjw(&["verify", "--circuit", u.to_str().unwrap()])), 0);
    let o = ionjw(&["count", "--circuit", u.to_str().unwrap(), "--format", "json"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["ms_forward"].as_u64().unwrap() + r["ms_backward"].as_u64().unwrap(), 24);

    let t = dir.path().join("t.txt");
    for extra in [&[][..], &["--non-local"][..], &["--scheduling", "naive"][..]] {
        let mut args = vec!["trotter", "--builtin", "h3plus", "--dt", "0.05", "-o", t.to_str().unwrap()];
        args.extend_from_slice(extra);
        assert_eq!(code(&ionjw(&args)), 0);
        let o = ionjw(&["verify", "--circuit", t.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{extra:?}: {}{}", stdout(&o), stderr(&o));
    }

    let ints = dir.path().join("h.int");
    fs::write(&ints, ionjw::ham::H3PLUS_INTEGRALS).unwrap();
    let o = ionjw(&["trotter", "--integrals", ints.to_str().unwrap(), "--dt", "0.05", "-o", t.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(code(&ionjw(&["verify", "--circuit", t.to_str().unwrap()])), 0);
}

#[test]
fn demo_tables() {
    let o = ionjw(&["demo", "h3plus", "--uccsd"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("MS: 24 (baseline 80, factor 3.3)"), "{}", stdout(&o));
    let o = ionjw(&["demo", "h3plus", "--trotter", "--dt", "0.1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert!(stdout(&o).contains("MS: 26 (string-by-string 56, naive 176)"), "{}", stdout(&o));
    let o = ionjw(&["demo", "h3plus", "--trotter", "--format", "json"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r["ms"], 26);
    assert_eq!(r["oracle_pass"], true);
}

#[test]
fn cost_reports_ms_time() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("c.txt");
    compile_to(&f, &["--op", "single", "--orbitals", "0,1", "--theta", "0.7"]);
    let o = ionjw(&["cost", "--circuit", f.to_str().unwrap(), "--tau", "2", "--format", "json"]);
    let r: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let t = r["total_ms_time"].as_f64().unwrap();
    assert!((t - 2.0 * 2.0 * 2f64.sqrt()).abs() < 1e-12, "{t}");
    assert_eq!(code(&ionjw(&["cost", "--circuit", f.to_str().unwrap(), "--tau", "0"])), 2);
}
