mod common;

use std::fs;
use std::process::Command;

use common::*;
use stance_cli::{cmd_stats, OutputFormat};
use stance_core::StanceLabel;

fn run(args: &[&str]) -> std::process::Output {
    Command::new(stance_bin()).args(args).output().unwrap()
}

fn s(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn train_then_predict() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write(dir.path(), "train.tsv", &separable_tsv(10, 1));
    let config = write(
        dir.path(),
        "pipeline.conf",
        &format!("topic = {TOPIC}\nuse_initial_ngrams = true\nuse_length = true\nuse_lexicon = true\nlexicon = lex.tsv\n"),
    );
    write(
        dir.path(),
        "lex.tsv",
        "výborně\tpositive\nnesmysl\tnegative\n",
    );
    let model = dir.path().join("model.txt");

    let out = run(&[
        "train",
        "--corpus",
        s(&corpus),
        "--config",
        s(&config),
        "--model",
        s(&model),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(model.exists());
    assert!(dir.path().join("model.txt.space").exists());
    let summary = String::from_utf8(out.stdout).unwrap();
    assert!(summary.contains("dimension\t"), "{summary}");

    let unlabeled = write(
        dir.path(),
        "new.tsv",
        &tsv(&[
            (
                "a".into(),
                "výborně souhlasím, zákon pro restaurace a hospoda večer".into(),
                None,
            ),
            (
                "b".into(),
                "nesmysl, nesouhlasím se zákon pro restaurace a hospoda večer".into(),
                None,
            ),
            ("c".into(), "".into(), None),
        ]),
    );
    let out = run(&["predict", "--model", s(&model), "--corpus", s(&unlabeled)]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "ID\tPredicted\tP_FAVOR\tP_AGAINST\tP_NONE");
    assert_eq!(lines.len(), 4);
    for line in &lines[1..] {
        let f: Vec<&str> = line.split('\t').collect();
        let p: f64 = f[2..].iter().map(|v| v.parse::<f64>().unwrap()).sum();
        assert!((p - 1.0).abs() < 1e-9);
    }
    assert!(lines[1].starts_with("a\tFAVOR\t"));
    assert!(lines[2].starts_with("b\tAGAINST\t"), "{text}");
}

#[test]
fn zero_iteration_model_is_uniform() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write(dir.path(), "train.tsv", &separable_tsv(5, 2));
    let config = write(
        dir.path(),
        "c.conf",
        &format!("topic = {TOPIC}\nmax_iterations = 0\n"),
    );
    let model = dir.path().join("m");
    assert!(run(&[
        "train",
        "--corpus",
        s(&corpus),
        "--config",
        s(&config),
        "--model",
        s(&model)
    ])
    .status
    .success());
    let out = run(&["predict", "--model", s(&model), "--corpus", s(&corpus)]);
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split('\t').collect();
        assert_eq!(f[1], "FAVOR");
        for p in &f[2..] {
            assert!((p.parse::<f64>().unwrap() - 1.0 / 3.0).abs() < 1e-15);
        }
    }
}

#[test]
fn single_favor_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let corpus = write(
        dir.path(),
        "one.tsv",
        &tsv(&[("1".into(), "ať žije Zeman".into(), Some(StanceLabel::Favor))]),
    );
    let config = default_config(dir.path());
    let model = dir.path().join("m");
    assert!(run(&[
        "train",
        "--corpus",
        s(&corpus),
        "--config",
        s(&config),
        "--model",
        s(&model)
    ])
    .status
    .success());
    let out = run(&["predict", "--model", s(&model), "--corpus", s(&corpus)]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().nth(1).unwrap().starts_with("1\tFAVOR\t"));
}

#[test]
fn train_errors() {
    let dir = tempfile::tempdir().unwrap();
    let config = default_config(dir.path());
    let bad = write(
        dir.path(),
        "bad.tsv",
        &format!("{HEADER}1\t{TOPIC}\tahoj\tMAYBE\n"),
    );
    let out = run(&[
        "train",
        "--corpus",
        s(&bad),
        "--config",
        s(&config),
        "--model",
        s(&dir.path().join("m")),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("MAYBE"));

    let good = write(dir.path(), "good.tsv", &separable_tsv(3, 1));
    let unwritable = dir.path().join("missing-dir").join("m");
    let out = run(&[
        "train",
        "--corpus",
        s(&good),
        "--config",
        s(&config),
        "--model",
        s(&unwritable),
    ]);
    assert!(!out.status.success());
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    let other = write(dir.path(), "other.conf", "topic = Miloš Zeman\n");
    let out = run(&[
        "train",
        "--corpus",
        s(&good),
        "--config",
        s(&other),
        "--model",
        s(&dir.path().join("m")),
    ]);
    assert!(!out.status.success());
}

#[test]
fn predict_rejects_mismatched_space() {
    let dir = tempfile::tempdir().unwrap();
    let config = default_config(dir.path());
    let a = write(dir.path(), "a.tsv", &separable_tsv(5, 1));
    let b = write(
        dir.path(),
        "b.tsv",
        &tsv(&[("1".into(), "jedno slovo".into(), Some(StanceLabel::None))]),
    );
    let (ma, mb) = (dir.path().join("ma"), dir.path().join("mb"));
    assert!(run(&[
        "train",
        "--corpus",
        s(&a),
        "--config",
        s(&config),
        "--model",
        s(&ma)
    ])
    .status
    .success());
    assert!(run(&[
        "train",
        "--corpus",
        s(&b),
        "--config",
        s(&config),
        "--model",
        s(&mb)
    ])
    .status
    .success());
    let space_b = dir.path().join("mb.space");
    let out = run(&[
        "predict",
        "--model",
        s(&ma),
        "--space",
        s(&space_b),
        "--corpus",
        s(&a),
    ]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("dimension"));

    let tampered = fs::read_to_string(&ma)
        .unwrap()
        .replace("stance-maxent 1", "stance-maxent 7");
    fs::write(&ma, tampered).unwrap();
    let out = run(&["predict", "--model", s(&ma), "--corpus", s(&a)]);
    assert!(!out.status.success());
}

#[test]
fn crossval_report_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let config = default_config(dir.path());
    let corpus = write(dir.path(), "c.tsv", &separable_tsv(20, 4));
    let out = run(&[
        "crossval",
        "--corpus",
        s(&corpus),
        "--config",
        s(&config),
        "--folds",
        "5",
        "--seed",
        "3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "folds\t5\tseed\t3");
    assert_eq!(
        lines[1],
        "TOPIC\tF1 (FAVOR/AGAINST)\tF1 (FAVOR/AGAINST/NONE)"
    );
    let row: Vec<&str> = lines[2].split('\t').collect();
    assert_eq!(row[0], TOPIC);
    assert!(row[1].parse::<f64>().unwrap() >= 0.95);
    assert!(text.contains("GOLD\\PRED\tFAVOR\tAGAINST\tNONE"));

    let out = run(&[
        "crossval",
        "--corpus",
        s(&corpus),
        "--config",
        s(&config),
        "--folds",
        "5",
        "--format",
        "json",
    ]);
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["semeval_f1"].as_f64().unwrap() >= 0.95);
    assert_eq!(doc["n_scored"], 60);

    let partly = write(
        dir.path(),
        "p.tsv",
        &tsv(&[
            ("1".into(), "a".into(), Some(StanceLabel::Favor)),
            ("2".into(), "b".into(), None),
        ]),
    );
    let out = run(&[
        "crossval",
        "--corpus",
        s(&partly),
        "--config",
        s(&config),
        "--folds",
        "2",
    ]);
    assert!(!out.status.success());
}

#[test]
fn stats_command() {
    let dir = tempfile::tempdir().unwrap();
    let mut text = counts_tsv(2, 1, 0);
    text.push_str(&format!("u1\t{TOPIC}\tnevím\t?\nu2\t{TOPIC}\tasi\t?\n"));
    let corpus = write(dir.path(), "c.tsv", &text);
    let out = run(&["stats", "--corpus", s(&corpus)]);
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        format!("TOPIC\tFAVOR\tAGAINST\tNONE\tUNLABELED\tTOTAL\n{TOPIC}\t2\t1\t0\t2\t5\n")
    );

    let mut buf = Vec::new();
    cmd_stats(&corpus, OutputFormat::Json, &mut buf).unwrap();
    let doc: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(doc["records"][3]["label"], "UNLABELED");
    assert_eq!(doc["records"][3]["count"], 2);
    assert_eq!(doc["total"], 5);

    let empty = write(dir.path(), "empty.tsv", HEADER);
    let out = run(&["stats", "--corpus", s(&empty)]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty"));
}
