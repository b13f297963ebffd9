use std::process::{Command, Output};

fn sln(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sln")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

#[test]
fn verify_reports_every_check() {
    let out = sln(&["verify", "--suite", "kernel", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert!(v["checks"].as_array().unwrap().len() > 10);
}

#[test]
fn config_errors_exit_with_two() {
    assert_eq!(sln(&["sweep", "--n", "4", "--temp", "1:0.5:3log"]).status.code(), Some(2));
    assert_eq!(sln(&["solve", "--n", "4", "--temp", "1", "--mu", "0,0,0"]).status.code(), Some(2));
    assert_eq!(sln(&["verify", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn solve_writes_a_reloadable_state() {
    let dir = std::env::temp_dir().join(format!("sln-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("state.json");
    let out = sln(&["solve", "--n", "4", "--temp", "1", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let state: sln_thermo::NlieState = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!((state.f + 1.5550604594016058).abs() < 1e-8);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn sweep_prints_csv() {
    let out = sln(&["sweep", "--n", "4", "--temp", "1:2:2lin", "--no-densities"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 3);
    assert!(text.starts_with("T,"));
}

#[test]
fn oracles_answer_in_json() {
    let ybe = json(&sln(&["oracle", "ybe", "--n", "3", "--draws", "5", "--seed", "1"]));
    assert!(ybe["residual"].as_f64().unwrap() < 1e-13);
    let spin2 = json(&sln(&["oracle", "spin2"]));
    assert!((spin2["constant"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    let ed = json(&sln(&["oracle", "ed", "--n", "3", "--sites", "2", "--temp", "1"]));
    let want = -0.5 * (6.0 * (-1.0f64).exp() + 3.0 * 1.0f64.exp()).ln();
    assert!((ed["free_energy"].as_f64().unwrap() - want).abs() < 1e-12);
}

#[test]
fn kernel_dump_has_requested_rows() {
    let out = sln(&["dump-kernel", "--n", "4", "--kmin", "-1", "--kmax", "1", "--count", "5"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);
}
