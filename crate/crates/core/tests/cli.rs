//! End-to-end checks against the built binary.

use std::process::{Command, Output};

use torsionpoly::cli::OutputRecord;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_torsionpoly"));
    c.env_remove("TORSIONPOLY_PRECISION");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn exit_0_on_success() {
    let o = run(&["compute", "--p", "2", "--q", "3", "--n", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "4t^2 - 6t + 1\n");
    let o = run(&["compute", "--p", "4", "--q", "3", "--n", "0"]);
    assert_eq!(stdout(&o), "1\n");
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn exit_1_on_verification_failure() {
    let o = run(&[
        "verify",
        "--suite",
        "oracle",
        "--p",
        "2",
        "--q",
        "3",
        "--rel-tol",
        "1e-60",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL oracle"));
}

#[test]
fn exit_2_on_invalid_input() {
    for args in [
        &["compute", "--p", "4", "--q", "6", "--n", "1"][..],
        &["compute", "--p", "1", "--q", "3", "--n", "1"],
        &["compute", "--p", "-4", "--q", "3", "--n", "1"],
        &["reps", "--p", "6", "--q", "4", "--n", "1"],
        &["verify", "--suite", "bogus"],
        &["verify", "--grid", "7,7,x"],
        &[],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    let o = bin()
        .args(["compute", "--p", "2", "--q", "3", "--n", "1"])
        .env("TORSIONPOLY_PRECISION", "lots")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_round_trips_byte_identical() {
    for args in [
        &["compute", "--p", "4", "--q", "3", "--n", "-1", "--json"][..],
        &[
            "compute", "--p", "3", "--q", "5", "--n", "1", "--json", "--scaled",
        ],
        &[
            "compute",
            "--p",
            "2",
            "--q",
            "3",
            "--n",
            "2",
            "--json",
            "--scaled",
            "--classes",
        ],
        &["compute", "--p", "4", "--q", "3", "--n", "0", "--json"],
    ] {
        let text = stdout(&run(args));
        let line = text.trim_end();
        let rec: OutputRecord = serde_json::from_str(line).unwrap();
        assert_eq!(serde_json::to_string(&rec).unwrap(), line);
        assert_eq!(rec.coefficients.len(), rec.degree + 1);
        let first = if rec.normalization == 1 { "+1" } else { "-1" };
        assert_eq!(rec.coefficients[0], first);
    }
}

#[test]
fn json_field_order_is_canonical() {
    let text = stdout(&run(&[
        "compute",
        "--p",
        "2",
        "--q",
        "3",
        "--n",
        "1",
        "--json",
        "--scaled",
        "--classes",
    ]));
    let keys = [
        "\"p\"",
        "\"q\"",
        "\"n\"",
        "\"N\"",
        "\"degree\"",
        "\"normalization\"",
        "\"sign_corrected\"",
        "\"coefficients\"",
        "\"scaled_coefficients\"",
        "\"acyclic_classes\"",
    ];
    let positions: Vec<usize> = keys.iter().map(|k| text.find(k).unwrap()).collect();
    assert!(positions.windows(2).all(|w| w[0] < w[1]), "{text}");
}

#[test]
fn cache_appends_ndjson() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.ndjson");
    let p = path.to_str().unwrap();
    for n in ["-1", "1"] {
        let o = run(&["compute", "--p", "4", "--q", "3", "--n", n, "--cache", p]);
        assert_eq!(o.status.code(), Some(0));
    }
    let text = std::fs::read_to_string(&path).unwrap();
    let recs: Vec<OutputRecord> = text
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(recs.len(), 2);
    assert_eq!((recs[0].n, recs[1].n), (-1, 1));
    assert_eq!(recs[1].degree, 12);
}

#[test]
fn precision_from_environment() {
    let get = |prec: &str| {
        let o = bin()
            .args(["reps", "--p", "2", "--q", "3", "--n", "-1", "--json"])
            .env("TORSIONPOLY_PRECISION", prec)
            .output()
            .unwrap();
        assert_eq!(o.status.code(), Some(0));
        let v: serde_json::Value = serde_json::from_str(stdout(&o).trim_end()).unwrap();
        v["classes"][0]["inv_torsion"].as_str().unwrap().to_string()
    };
    let low = get("64");
    let high = get("512");
    assert!(high.len() > low.len() + 50, "{low} vs {high}");
    assert!(high.starts_with(&low[..12]));
}

#[test]
fn scaled_matches_published_table() {
    let text = stdout(&run(&[
        "compute", "--p", "4", "--q", "3", "--n", "-1", "--scaled", "--json",
    ]));
    let rec: OutputRecord = serde_json::from_str(text.trim_end()).unwrap();
    let scaled = rec.scaled_coefficients.unwrap();
    assert_eq!(scaled[0], "+1");
    assert_eq!(scaled[1], "-480");
    assert_eq!(scaled[10], "+34359738368");
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "--suite", "fixtures"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify", "--suite", "relation", "--p", "3", "--q", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("5 checks, 0 failed"));
}

#[test]
fn verify_full_grid() {
    let o = run(&["verify", "--suite", "all", "--grid", "7,7,2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}
