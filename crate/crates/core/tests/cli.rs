use std::path::PathBuf;
use std::process::{Command, Output};

use num_rational::Ratio;
use rhopf::cli::parse_rspec;
use rhopf::rmatrix::instances;
use rhopf::symfield::Var;
use rhopf::Error;

fn rhopf(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rhopf")).args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("rhopf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

const EX1: &str = "n=1; var=x; name=ex1;\nR[1,1;1,1] = (x - q^2)/(x*q^2 - 1)\n";

const EX2: &str = "\
# diagonal n = 2 matrix
n=2; var=x; name=ex2
R[1,1;1,1] = (x - q^2)/(x*q^2 - 1)
R[1,2;1,2] = (x - q^-1)/(x*q^-1 - 1)
R[2,1;2,1] = (x - q^-1)/(x*q^-1 - 1)
R[2,2;2,2] = (x - q^2)/(x*q^2 - 1)
";

#[test]
fn spec_files_match_builtin_instances() {
    let s1 = parse_rspec(EX1).unwrap();
    assert_eq!(s1.name.as_deref(), Some("ex1"));
    assert_eq!(s1.rmatrix, instances::example1());
    let s2 = parse_rspec(EX2).unwrap();
    assert_eq!(s2.rmatrix, instances::example2(2));
    let id = parse_rspec("n=2; var=x\nR[1,1;1,1]=1\nR[1,2;1,2]=1\nR[2,1;2,1]=1\nR[2,2;2,2]=1").unwrap();
    assert_eq!(id.rmatrix, instances::identity(2));
}

#[test]
fn spec_entry_evaluates_by_hand() {
    // x = 3, s = 2 (q = 4): (3 - 16) / (48 - 1)
    let s = parse_rspec(EX1).unwrap();
    let pt = [(Var::X, Ratio::from_integer(3)), (Var::S, Ratio::from_integer(2))];
    assert_eq!(s.rmatrix.get(0, 0, 0, 0).eval_i128(&pt), Some(Ratio::new(-13, 47)));
}

#[test]
fn spec_errors_are_located() {
    match parse_rspec("n=1; var=x\nR[1,1;1,2] = 1") {
        Err(Error::Index(m)) => assert!(m.contains("line 2"), "{m}"),
        other => panic!("expected index error, got {other:?}"),
    }
    match parse_rspec("n=1; var=x\nR[1,1;1,1] = (x - 1") {
        Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected parse error, got {other:?}"),
    }
    match parse_rspec("n=1; var=x\n  R[1;1] = 1") {
        Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 5)),
        other => panic!("expected parse error, got {other:?}"),
    }
    assert!(matches!(parse_rspec("n=1; var=x\nR[1,1;1,1]=1\nR[1,1;1,1]=2"), Err(Error::Parse { line: 3, .. })));
    assert!(matches!(parse_rspec("var=x\n"), Err(Error::Parse { .. })));
    assert!(matches!(parse_rspec("n=1; var=x; colour=red"), Err(Error::Parse { .. })));
}

#[test]
fn exit_codes() {
    assert_eq!(code(&rhopf(&["check-r", "--instance", "example1"])), 0);
    assert_eq!(code(&rhopf(&["check-r", "--instance", "broken-nonunitary"])), 1);
    assert_eq!(code(&rhopf(&["check-r", "--instance", "no-such"])), 2);
    let bad = temp_file("bad.rspec", "n=1; var=x\nR[1,1;1,1] = (x");
    assert_eq!(code(&rhopf(&["check-r", "--spec", bad.to_str().unwrap()])), 2);
    assert_eq!(code(&rhopf(&["verify-hopf", "--instance", "example1", "--toggle", "nonsense=1"])), 2);
}

#[test]
fn spec_file_runs_like_instance() {
    let f = temp_file("ex2.rspec", EX2);
    let o = rhopf(&["check-r", "--spec", f.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn literal_toggles_fail_verification() {
    let o = rhopf(&["verify-hopf", "--instance", "example1", "--toggle", "llstar=literal"]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
}

#[test]
fn normal_order_prints_exchanged_word() {
    let o = rhopf(&["normal-order", "--instance", "identity", "Phi1(z2)*Phi2(z1)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("((1) * Phi2(z1)*Phi1(z2))"), "{}", stdout(&o));
    // example1: the exchange factor is R(z1/z2) = (z1 - q^2 z2)/(z1 q^2 - z2)
    let o = rhopf(&["normal-order", "--instance", "example1", "Phi1(z2)*Phi1(z1)"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("(((z2*q^2 - z1)/(z2 - z1*q^2)) * Phi1(z1)*Phi1(z2))"), "{}", stdout(&o));
    assert_eq!(code(&rhopf(&["normal-order", "--instance", "identity", "Phi1(z2"])), 2);
}

#[test]
fn json_report_written() {
    let dir = std::env::temp_dir().join(format!("rhopf-json-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("r.json");
    let o = rhopf(&["check-r", "--instance", "example1", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["passed"], serde_json::Value::Bool(true));
    assert!(v["checks"].as_array().is_some_and(|c| !c.is_empty()));
}
