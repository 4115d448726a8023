use std::process::{Command, Stdio};

use ptc_cli::report::{Envelope, TableBody};
use ptc_cli::{run, EXIT_FAIL, EXIT_PASS, EXIT_USAGE};

fn ptc(args: &[&str]) -> ptc_cli::Outcome {
    run(std::iter::once("ptc").chain(args.iter().copied()))
}

fn json(args: &[&str]) -> serde_json::Value {
    let mut all = args.to_vec();
    all.push("--json");
    serde_json::from_str(&ptc(&all).output).expect("valid json")
}

#[test]
fn selftest_passes_and_fails_on_impossible_tolerance() {
    assert_eq!(ptc(&["selftest"]).code, EXIT_PASS);
    let strict = ptc(&["selftest", "--tol", "1e-30"]);
    assert_eq!(strict.code, EXIT_FAIL);
    assert!(strict.output.contains("FAIL"));
}

#[test]
fn rep1_row() {
    let v = json(&["table", "--rep", "rep1"]);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["matches_paper"], true);
    let row = &v["tables"]["rep1"];
    for op in ["C", "Mx", "Mt", "P1T2"] {
        assert_eq!(row[op]["verdict"], "invariant", "{op}");
    }
    for op in ["P1", "P2", "T2", "M"] {
        assert_eq!(row[op]["verdict"], "noninvariant", "{op}");
    }
    assert_eq!(row["T1"]["paper_expectation"], "unstated");
    assert!(row["C"]["witness"].is_array());
    assert!(row["C"]["involution_scale"].is_array());
}

#[test]
fn table_all_has_three_rows_and_canonical() {
    let out = ptc(&["table", "--rep", "all", "--json"]);
    assert_eq!(out.code, EXIT_PASS);
    let parsed: Envelope<TableBody> = serde_json::from_str(&out.output).unwrap();
    let keys: Vec<_> = parsed.body.tables.0.iter().map(|(k, _)| k.as_str()).collect();
    assert_eq!(keys, ["rep1", "rep2", "rep3", "canonical8"]);
    let canonical = parsed.body.tables.get("canonical8").unwrap();
    assert!(canonical.0.iter().all(|(_, e)| e.paper_expectation == poincare_ptc::symmetry::Expectation::Unstated));

    // parse(emit(x)) = x, and re-emitting is byte-identical.
    assert_eq!(serde_json::to_string_pretty(&parsed).unwrap() + "\n", out.output);
}

#[test]
fn output_is_deterministic_and_seed_stable() {
    let a = ptc(&["table", "--rep", "rep2", "--json"]);
    assert_eq!(a, ptc(&["table", "--rep", "rep2", "--json"]));
    let verdicts = |v: &serde_json::Value| {
        v["tables"]["rep2"].as_object().unwrap().iter().map(|(k, e)| (k.clone(), e["verdict"].clone())).collect::<Vec<_>>()
    };
    let base = json(&["table", "--rep", "rep2"]);
    let other = json(&["table", "--rep", "rep2", "--seed", "12345"]);
    assert_eq!(other["config"]["seed"], 12345);
    assert_eq!(verdicts(&base), verdicts(&other));
}

#[test]
fn classify_and_algebra() {
    let out = ptc(&["classify", "--rep", "rep2", "--op", "p2"]);
    assert_eq!(out.code, EXIT_PASS);
    assert!(out.output.contains("invariant"));
    let v = json(&["classify", "--rep", "rep3", "--op", "T1"]);
    assert_eq!(v["result"]["verdict"], "noninvariant");
    assert!(v["result"].get("witness").is_none());

    let v = json(&["algebra", "--rep", "rep1"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["reps"]["rep1"]["brackets"].as_object().unwrap().len(), 45);
}

#[test]
fn massless_summary() {
    let v = json(&["massless"]);
    assert_eq!(v["passed"], true);
    assert_eq!(v["labels"].as_array().unwrap().len(), 8);
    assert_eq!(v["pair_count"], 28);
}

#[test]
fn ptc_examples() {
    assert_eq!(json(&["ptc", "--labels", "D+(1/2,1/2)+D-(1/2,1/2)"])["complete"], true);
    let single = ptc(&["ptc", "--labels", "D+(1/2,0)"]);
    assert_eq!(single.code, EXIT_FAIL);
    assert!(single.output.contains("complete: no"));
    assert_eq!(json(&["ptc", "--labels", "D+(1,0)+D-(1,0)+D+(0,1)+D-(0,1)"])["complete"], true);

    let bad = ptc(&["ptc", "--labels", "D+(1/3,0)"]);
    assert_eq!(bad.code, EXIT_USAGE);
    assert!(bad.output.contains("position 3"), "{}", bad.output);
}

#[test]
fn usage_errors() {
    assert_eq!(ptc(&["frobnicate"]).code, EXIT_USAGE);
    assert_eq!(ptc(&["table", "--rep", "rep9"]).code, EXIT_USAGE);
    assert_eq!(ptc(&["classify", "--rep", "rep1", "--op", "Q"]).code, EXIT_USAGE);
    assert_eq!(ptc(&["selftest", "--samples", "0"]).code, EXIT_USAGE);
    assert_eq!(ptc(&["--help"]).code, EXIT_PASS);
}

#[test]
fn binary_exit_codes_and_seed_env() {
    let bin = env!("CARGO_BIN_EXE_ptc");
    let status = Command::new(bin).arg("bogus").stderr(Stdio::null()).status().unwrap();
    assert_eq!(status.code(), Some(EXIT_USAGE));

    let out = Command::new(bin).args(["ptc", "--labels", "D+(0,0)+D-(0,0)", "--json"]).env("PTC_SEED", "0x10").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_PASS));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["config"]["seed"], 16);

    let out = Command::new(bin).args(["ptc", "--labels", "D+(0,0)", "--seed", "3"]).env("PTC_SEED", "0x10").output().unwrap();
    assert_eq!(out.status.code(), Some(EXIT_FAIL));
}
