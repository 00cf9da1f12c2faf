use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_chain-disks"));
    c.env_remove("CHAIN_DISKS_THREADS");
    c
}

fn run(args: &[&str], out: &Path) -> Output {
    bin().args(args).arg("--out").arg(out).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn solve_writes_curve_and_is_deterministic() {
    let d = tempfile::tempdir().unwrap();
    let (a, b) = (d.path().join("a"), d.path().join("b"));
    assert_eq!(code(&run(&["solve", "--h-order", "4"], &a)), 0);
    assert_eq!(code(&run(&["solve", "--h-order", "4"], &b)), 0);
    let ta = fs::read(a.join("curve.json")).unwrap();
    assert_eq!(ta, fs::read(b.join("curve.json")).unwrap());
    let v: Value = serde_json::from_slice(&ta).unwrap();
    assert_eq!(v["h_order"], 4);
    assert_eq!(v["domain"], "poly");
}

#[test]
fn zero_truncation_warns() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["solve", "--h-order", "0"], d.path());
    assert_eq!(code(&o), 0);
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
}

#[test]
fn float_in_config_is_a_config_error() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("bad.json");
    fs::write(
        &cfg,
        r#"{"model": {"potentials": [["1", "g1"], ["1.5", "g2"]], "c": ["1"]}}"#,
    )
    .unwrap();
    let o = run(&["solve", "--config", cfg.to_str().unwrap()], d.path());
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("position 1"), "{}", stderr(&o));
}

#[test]
fn bad_flags_are_config_errors() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["solve", "--mode", "float"], d.path())), 2);
    assert_eq!(
        code(&run(
            &["solve", "--mode", "num", "--couplings", "g1=1/3"],
            d.path()
        )),
        2
    );
    assert_eq!(code(&run(&["solve", "--couplings", "g1=1/3"], d.path())), 2);
    assert_eq!(code(&run(&["solve", "--bogus"], d.path())), 2);
    assert_eq!(code(&run(&["compare"], d.path())), 2);
    let o = bin()
        .args(["solve", "--out"])
        .arg(d.path())
        .env("CHAIN_DISKS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn pipelines_agree_and_compare_cleanly() {
    let d = tempfile::tempdir().unwrap();
    let (r, o) = (d.path().join("rec"), d.path().join("ora"));
    let small = ["--nmax", "3", "--vmax", "2"];
    let out = bin()
        .args(["moments"])
        .args(small)
        .arg("--out")
        .arg(&r)
        .env("CHAIN_DISKS_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let mut args = vec!["oracle"];
    args.extend(small);
    assert_eq!(code(&run(&args, &o)), 0);
    let csv = fs::read_to_string(r.join("moments.csv")).unwrap();
    assert!(csv.starts_with("n1,n2,n3,v,coefficient,pipeline,calibration\n"));
    assert!(r.join("amplitude.json").exists());
    let (rp, op) = (r.join("moments.csv"), o.join("moments.csv"));
    let c = run(
        &["compare", rp.to_str().unwrap(), op.to_str().unwrap()],
        d.path(),
    );
    assert_eq!(code(&c), 0, "{}", stdout(&c));
    assert!(stdout(&c).contains("mismatch 0"));
}

#[test]
fn published_comparison_lists_typos_and_fails_on_mismatch() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["oracle"], d.path())), 0);
    let t = d.path().join("moments.csv");
    let o = run(
        &["compare", "--against-paper", t.to_str().unwrap()],
        d.path(),
    );
    let text = stdout(&o);
    assert!(
        text.contains("[1, 0, 0] v=2 [table] paper-typo-suspected"),
        "{text}"
    );
    assert!(text.contains("[2, 0, 0] v=2 [table] match"), "{text}");
    assert_eq!(code(&o), 1);
    let v: Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("comparison.json")).unwrap())
            .unwrap();
    assert_eq!(v["summary"]["not-computed"], 0);
}

fn corrupt(curve: &mut Value) {
    for t in curve["z"][0].as_array_mut().unwrap() {
        if t["p"] == -1 {
            for term in t["h"]["terms"].as_array_mut().unwrap() {
                if term[0] == 3 {
                    term[1] = Value::String(format!("{} + 1/11", term[1].as_str().unwrap()));
                }
            }
        }
    }
}

#[test]
fn verify_flags_a_corrupted_curve() {
    let d = tempfile::tempdir().unwrap();
    assert_eq!(code(&run(&["solve", "--h-order", "8"], d.path())), 0);
    let path = d.path().join("curve.json");
    let clean = run(
        &["verify", "--skip-tables", "--curve", path.to_str().unwrap()],
        d.path(),
    );
    assert_eq!(code(&clean), 0, "{}", stdout(&clean));

    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    corrupt(&mut v);
    let bad = d.path().join("bad.json");
    fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    let o = run(
        &["verify", "--skip-tables", "--curve", bad.to_str().unwrap()],
        d.path(),
    );
    assert_eq!(code(&o), 1);
    assert!(
        stdout(&o).contains("fail     loop equation"),
        "{}",
        stdout(&o)
    );
    let rep: Value =
        serde_json::from_str(&fs::read_to_string(d.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(rep["pass"], false);
}

#[test]
fn two_matrix_verify_skips_recursion() {
    let d = tempfile::tempdir().unwrap();
    let cfg = d.path().join("n2.json");
    fs::write(
        &cfg,
        r#"{"model": {"potentials": [["1", "g1"], ["2", "g2"]], "c": ["1"]}, "truncation": {"nmax": 4, "vmax": 2}}"#,
    )
    .unwrap();
    let o = run(&["verify", "--config", cfg.to_str().unwrap()], d.path());
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    let text = stdout(&o);
    assert!(text.contains("skipped  loop equation"), "{text}");
    assert!(text.contains("pass     base case vs oracle"), "{text}");
}
