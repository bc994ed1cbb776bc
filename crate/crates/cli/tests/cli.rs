use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nielsen-forge"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn a4_report_has_both_components() {
    let o = run(&["report", "--group", "A(4)", "--classes", "3+:2,3-:2", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let degrees: Vec<u64> = v["components"].as_array().unwrap().iter().map(|c| c["degree"].as_u64().unwrap()).collect();
    assert_eq!(degrees, vec![9, 6]);
    assert_eq!(v["schema"], "v1");
}

#[test]
fn dihedral_nine_has_one_component() {
    let o = run(&["orbits", "--group", "D(9)", "--classes", "2:4"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("1 braid orbits"), "{}", stdout(&o));
}

#[test]
fn empty_classes_is_a_usage_error() {
    let o = run(&["report", "--group", "A(4)", "--classes", ""]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).starts_with("error[NF"));
}

#[test]
fn verify_suite_passes_and_unknown_fails() {
    assert!(run(&["verify", "--suite", "a4-level0"]).status.success());
    let o = run(&["verify", "--suite", "bogus"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("NF028"));
}

#[test]
fn report_is_deterministic_across_thread_counts() {
    let args = ["report", "--group", "A(5)", "--classes", "5+:1,5-:1,3:1", "--format", "json"];
    let a = run(&[&["--jobs", "1"][..], &args[..]].concat());
    let b = run(&[&["--jobs", "4"][..], &args[..]].concat());
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn toml_config_matches_flags() {
    let dir = std::env::temp_dir().join(format!("nf-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.toml");
    std::fs::write(&cfg, "group = \"A(4)\"\nclasses = \"3+:2,3-:2\"\nformats = [\"csv\"]\n").unwrap();
    let a = run(&["report", "--config", cfg.to_str().unwrap()]);
    let b = run(&["report", "--group", "A(4)", "--classes", "3+:2,3-:2", "--format", "csv"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    std::fs::write(&cfg, "group = \"A(4)\"\nclasses = \"3+:2\"\ncolour = 1\n").unwrap();
    assert!(!run(&["report", "--config", cfg.to_str().unwrap()]).status.success());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn cap_rejects_large_groups() {
    let o = bin().args(["orbits", "--group", "A(5)", "--classes", "3:4"]).env("NIELSEN_FORGE_CAP", "20").output().unwrap();
    assert!(!o.status.success());
}

#[test]
fn jennings_is_palindromic() {
    let o = run(&["jennings", "--p", "3", "--n", "2"]);
    assert_eq!(stdout(&o).trim(), "1 2 3 2 1");
}
