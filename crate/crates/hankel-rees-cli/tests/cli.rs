use std::io::Write;
use std::process::{Command, Output, Stdio};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_hankel-rees"))
}

fn run_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = bin()
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn");
    child.stdin.as_mut().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().expect("wait")
}

const TWO_ROW: &str = r#"{"ambient":30,"rows":[{"label":[1,30],"chain":[1,4,18,24,30]},{"label":[2,29],"chain":[5,7,11,15,17,19,22,28]}]}"#;
const TWO_ROW_STANDARD: &str = r#"{"ambient":30,"rows":[{"label":[1,30],"chain":[1,5,11,18,30]},{"label":[2,29],"chain":[4,7,15,17,19,22,24,28]}]}"#;

#[test]
fn reduce_tabel_reaches_the_standard_form() {
    let out = run_with_stdin(&["reduce-tabel"], TWO_ROW);
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), TWO_ROW_STANDARD);
}

#[test]
fn reduce_tabel_rejects_malformed_input() {
    let out = run_with_stdin(&["reduce-tabel"], "{not json");
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn golden_replay_passes() {
    let out = bin().arg("golden").output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn counterexample_reports_a_witness_and_passes() {
    let out = bin().args(["counterexample", "--n", "6"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_slice(&out.stdout).expect("report is JSON");
    assert_eq!(report["status"], "pass");
    let witness = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "witness-outside-leading-term-product")
        .expect("witness check present");
    assert_eq!(witness["status"], "pass");
}

#[test]
fn check_gb_is_deterministic_across_worker_counts() {
    let run = |workers: &str| {
        let out = bin()
            .args([
                "check-gb",
                "--n",
                "6",
                "--ideal",
                "1,6:2",
                "--ideal",
                "2,6:2",
                "--canonical",
                "--workers",
                workers,
            ])
            .output()
            .unwrap();
        assert_eq!(out.status.code(), Some(0));
        String::from_utf8(out.stdout).unwrap()
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn straighten_passes_on_a_two_term_example() {
    let out = bin()
        .args(["straighten", "--n", "9", "(1,9)|2,4", "(1,9)|1,5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bad_selector_is_a_usage_error() {
    let out = bin().args(["check-gb", "--n", "6", "--ideal", "bogus"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn exhausted_budget_is_inconclusive() {
    let out = bin()
        .args(["check-gb", "--n", "6", "--ideal", "1,6:2", "--ideal", "2,6:2", "--max-spairs", "5"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn gen_g_emits_marked_binomials() {
    let out = bin().args(["gen-g", "--n", "6", "--max-len", "2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let set: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(set.as_array().unwrap().len(), 229 + 79);
}
