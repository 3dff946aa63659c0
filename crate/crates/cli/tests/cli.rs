use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_algebroid"))
}

fn sqrt_spec() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data/sqrt_z.toml")
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin().args(args).current_dir(dir).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn counts() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(stdout(&run(&["count", "--q", "2", "--s", "1"], dir.path())).trim(), "3");
    assert_eq!(stdout(&run(&["stable-s", "--q", "3", "--epsilon", "0.5"], dir.path())).trim(), "4");
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(run(&["frobnicate"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["count", "--q", "x", "--s", "1"], dir.path()).status.code(), Some(1));
    assert_eq!(run(&["--help"], dir.path()).status.code(), Some(0));
}

#[test]
fn malformed_spec_exits_1_and_names_key() {
    let dir = tempfile::tempdir().unwrap();
    let text = std::fs::read_to_string(sqrt_spec()).unwrap().replace("points = 10", "points = \"ten\"");
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, text).unwrap();
    let o = run(&["verify", "smt", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("points") && err.contains("line"), "{err}");
}

#[test]
fn passing_and_falsified_suites() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["verify", "smt", sqrt_spec().to_str().unwrap(), "--out", "ok"], dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(dir.path().join("ok.json").exists() && dir.path().join("ok.csv").exists());
    let json: serde_json::Value = serde_json::from_slice(&std::fs::read(dir.path().join("ok.json")).unwrap()).unwrap();
    assert_eq!(json["verdict"], "pass");

    let text = std::fs::read_to_string(sqrt_spec()).unwrap().replace("epsilon = 0.1", "epsilon = -100.0");
    let path = dir.path().join("falsified.toml");
    std::fs::write(&path, text).unwrap();
    let o = run(&["verify", "smt", path.to_str().unwrap()], dir.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(dir.path().join("falsified.smt.json").exists());
}

#[test]
fn characteristic_is_bit_stable() {
    let dir = tempfile::tempdir().unwrap();
    let spec = sqrt_spec();
    for name in ["a.csv", "b.csv"] {
        let o = run(&["--seed", "7", "characteristic", spec.to_str().unwrap(), "--out", name], dir.path());
        assert!(o.status.success());
    }
    let a = std::fs::read(dir.path().join("a.csv")).unwrap();
    assert_eq!(a, std::fs::read(dir.path().join("b.csv")).unwrap());
    let text = String::from_utf8(a).unwrap();
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    let l = 2f64.ln();
    for (got, want) in row.iter().zip([4.0, l, 0.0, l, l]) {
        assert!((got - want).abs() < 1e-4);
    }
}

#[test]
fn invert_twice_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let once = run(&["op", "invert", sqrt_spec().to_str().unwrap()], dir.path());
    assert!(once.status.success());
    std::fs::write(dir.path().join("once.json"), &once.stdout).unwrap();
    let twice = run(&["op", "invert", "once.json"], dir.path());
    assert!(twice.status.success());
    let twice: serde_json::Value = serde_json::from_slice(&twice.stdout).unwrap();
    let original = algebroid::Equation::from_real(&[&[0.0, -1.0], &[], &[1.0]]).unwrap();
    assert!(equation_of(&twice).is_identical(&original).identical);
    let once: serde_json::Value = serde_json::from_slice(&once.stdout).unwrap();
    assert!(!equation_of(&once).is_identical(&original).identical);
}

fn equation_of(v: &serde_json::Value) -> algebroid::Equation {
    let coeffs = v["function"]["coefficients"]
        .as_array()
        .unwrap()
        .iter()
        .map(|row| {
            let c = row
                .as_array()
                .unwrap()
                .iter()
                .map(|p| algebroid::C64::new(p[0].as_f64().unwrap(), p[1].as_f64().unwrap()))
                .collect();
            algebroid::Poly::new(c)
        })
        .collect();
    algebroid::Equation::new(coeffs).unwrap()
}

#[test]
fn monodromy_cycles() {
    let dir = tempfile::tempdir().unwrap();
    let spec = sqrt_spec();
    let o = run(&["monodromy", spec.to_str().unwrap(), "--center", "0", "--radius", "1"], dir.path());
    assert!(stdout(&o).contains("cycles: (1 2)"));
    let o = run(&["monodromy", spec.to_str().unwrap(), "--center", "3+1i", "--radius", "1"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["monodromy", spec.to_str().unwrap(), "--center", "3+1i", "--radius", "1", "--any-center"], dir.path());
    assert!(stdout(&o).contains("cycles: (1) (2)"));
}

#[test]
fn pushforward_needs_known_map() {
    let dir = tempfile::tempdir().unwrap();
    let spec = sqrt_spec();
    let o = run(&["op", "pushforward", spec.to_str().unwrap(), "--map", "nope"], dir.path());
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["op", "pushforward", spec.to_str().unwrap(), "--map", "reciprocal"], dir.path());
    assert!(o.status.success());
}
