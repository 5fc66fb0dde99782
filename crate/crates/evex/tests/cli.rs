//! Black-box tests of the `evex` binary: subcommands, formats, exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(relative: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join(relative)
        .display()
        .to_string()
}

fn evex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_evex"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn extract_args(output: &str, extra: &[&str]) -> Vec<String> {
    let mut args = vec![
        "extract".to_string(),
        "--schema".into(),
        data("data/management_change.schema"),
        "--rules".into(),
        data("data/management_change.rules"),
        "--gazetteers".into(),
        data("data/gazetteers"),
    ];
    args.extend(extra.iter().map(|s| s.to_string()));
    args.push("--output".into());
    args.push(output.to_string());
    args
}

#[test]
fn extract_then_eval_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.jsonl");
    let report = dir.path().join("report.csv");

    let mut inputs = Vec::new();
    for i in 1..=10 {
        inputs.push("--input".to_string());
        inputs.push(data(&format!("data/mini_corpus/f{i:02}.txt")));
    }
    let input_refs: Vec<&str> = inputs.iter().map(String::as_str).collect();
    let out = evex(
        &extract_args(pred.to_str().unwrap(), &input_refs)
            .iter()
            .map(String::as_str)
            .collect::<Vec<_>>(),
    );
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(pred.exists());

    let out = evex(&[
        "eval",
        "--pred",
        pred.to_str().unwrap(),
        "--gold",
        &data("data/mini_corpus/gold.tsv"),
        "--report",
        report.to_str().unwrap(),
        "--schema",
        &data("data/management_change.schema"),
    ]);
    assert!(out.status.success());
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("Total"), "{stdout}");
    let csv = std::fs::read_to_string(report).unwrap();
    assert!(csv.starts_with("file,tp,fp,fn,precision,recall,f"));
    assert!(csv.lines().last().unwrap().starts_with("TOTAL,26,0,0"));
}

#[test]
fn triples_ingestion_and_tsv_format() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.tsv");
    let args = extract_args(
        pred.to_str().unwrap(),
        &[
            "--triples",
            &data("data/samples/board_change.triples"),
            "--format",
            "tsv",
        ],
    );
    let out = evex(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let tsv = std::fs::read_to_string(pred).unwrap();
    assert!(tsv.starts_with("document\t"));
    assert!(tsv.contains("Hang Zhihua\tPerson\tLeaving_person"));
    assert!(tsv.contains("ingested"));
}

#[test]
fn trace_adaptation_emits_json_lines() {
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.jsonl");
    let args = extract_args(
        pred.to_str().unwrap(),
        &[
            "--triples",
            &data("data/samples/board_change.triples"),
            "--trace-adaptation",
        ],
    );
    let out = evex(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    let trace_line = stderr
        .lines()
        .find(|l| l.starts_with('{'))
        .expect("one trace line");
    let parsed: serde_json::Value = serde_json::from_str(trace_line).unwrap();
    assert_eq!(parsed["accepted"], serde_json::Value::Bool(true));
    assert_eq!(parsed["reason"], "ok");
}

#[test]
fn validate_accepts_the_bundled_pair() {
    let out = evex(&[
        "validate",
        "--schema",
        &data("data/management_change.schema"),
        "--rules",
        &data("data/management_change.rules"),
    ]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("ok:"));
}

#[test]
fn config_errors_exit_one() {
    // Neither --input nor --triples.
    let dir = tempfile::tempdir().unwrap();
    let pred = dir.path().join("pred.jsonl");
    let args = extract_args(pred.to_str().unwrap(), &[]);
    let out = evex(&args.iter().map(String::as_str).collect::<Vec<_>>());
    assert_eq!(out.status.code(), Some(1));

    // Missing file.
    let out = evex(&[
        "eval",
        "--pred",
        "/nonexistent/pred.jsonl",
        "--gold",
        "/nonexistent/gold.tsv",
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn parse_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad_gold = dir.path().join("gold.tsv");
    std::fs::write(&bad_gold, "not a gold line\n").unwrap();
    let pred = dir.path().join("pred.jsonl");
    std::fs::write(&pred, "").unwrap();
    let out = evex(&[
        "eval",
        "--pred",
        pred.to_str().unwrap(),
        "--gold",
        bad_gold.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    let bad_rules = dir.path().join("bad.rules");
    std::fs::write(&bad_rules, "rule broken: Person(?x -> X(?x)\n").unwrap();
    let out = evex(&[
        "validate",
        "--schema",
        &data("data/management_change.schema"),
        "--rules",
        bad_rules.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));

    // A rule naming an unknown predicate also fails validation.
    let unknown = dir.path().join("unknown.rules");
    std::fs::write(&unknown, "rule r: Person(?x) ^ hired(?o,?x) -> Coming_person(?x)\n").unwrap();
    let out = evex(&[
        "validate",
        "--schema",
        &data("data/management_change.schema"),
        "--rules",
        unknown.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
}
