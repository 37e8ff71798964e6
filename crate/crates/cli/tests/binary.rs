use std::io::Write;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cf-forge")).args(args).output().expect("binary runs")
}

fn corpus(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

#[test]
fn verify_exit_codes() {
    let ok = corpus(r#"[{"id":"sq","f":"n^2","g":"n+1","closed_form":"zeta(3)-zeta(2)+1"}]"#);
    let out = run(&["verify", "--corpus", ok.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let line = String::from_utf8(out.stdout).unwrap();
    let v: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(v["status"], "proved_symbolic");

    let bad = corpus(r#"[{"id":"sq","f":"n^2","g":"n+1","closed_form":"zeta(3)-zeta(2)+1.001"}]"#);
    assert_eq!(run(&["verify", "--corpus", bad.path().to_str().unwrap()]).status.code(), Some(1));

    assert_eq!(run(&["verify", "--corpus", "/nonexistent/corpus.json"]).status.code(), Some(2));
    let junk = corpus("{not json");
    assert_eq!(run(&["verify", "--corpus", junk.path().to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&[]).status.code(), Some(2));
    assert_eq!(run(&["recognize", "--value", "pi", "--basis", "4"]).status.code(), Some(2));
    assert_eq!(run(&["sum", "--f", "n^2+", "--g", "n+1"]).status.code(), Some(2));
}

#[test]
fn prove_and_recognize_exit_codes() {
    let out = run(&["prove", "--a", "-n^8", "--b", "n^4+(n+1)^4+2*(n^2+(n+1)^2)"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["g"], "2*n+1");
    assert_eq!(run(&["prove", "--a", "-n^8", "--b", "n^4"]).status.code(), Some(1));
    assert_eq!(run(&["recognize", "--f", "n*(n^2+2)", "--g", "n+2", "--basis", "1"]).status.code(), Some(1));
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_cf-forge"))
        .args(["sum", "--f", "n^2", "--g", "n+1"])
        .env("CF_FORGE_PRECISION", "20")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let digits = v["series_value"].as_str().unwrap().trim_start_matches("0.").len();
    assert!(digits <= 21, "{v}");
}
