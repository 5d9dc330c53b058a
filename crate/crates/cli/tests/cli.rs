//! End-to-end checks of the binary: JSON outputs, exit codes, error text.

use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_parabolic");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("utf-8 output")
}

const DOUBLE_COVER: &str = r#"{
  "curves": [
    {"name": "X", "genus": 0, "points": ["b1", "b2"]},
    {"name": "Y", "genus": 0, "points": ["b1y1", "b2y1"]}
  ],
  "coverings": [
    {"name": "f", "source": "Y", "target": "X", "degree": 2,
     "fibers": [
       {"base": "b1", "above": [{"point": "b1y1", "e": 2}]},
       {"base": "b2", "above": [{"point": "b2y1", "e": 2}]}
     ],
     "monodromy": [[2, 1], [2, 1]]}
  ],
  "bundles": [
    {"name": "O", "curve": "Y", "atoms": [{"rank": 1, "degree": 0}]},
    {"name": "L3", "curve": "X", "atoms": [{"rank": 1, "degree": 3}]}
  ]
}"#;

fn write_double_cover(dir: &Path) -> String {
    let path = dir.join("ws.json");
    std::fs::write(&path, DOUBLE_COVER).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn pardeg_prints_a_lowest_terms_rational() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_double_cover(dir.path());
    let out = run(&["--workspace", &ws, "pardeg", "--bundle", "L3"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{\"par_deg\":\"3/1\"}\n");
}

#[test]
fn pushforward_emits_a_loadable_workspace() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_double_cover(dir.path());
    let result = dir.path().join("push.json");
    let out = run(&[
        "--workspace",
        &ws,
        "--output",
        result.to_str().unwrap(),
        "pushforward",
        "--covering",
        "f",
        "--bundle",
        "O",
        "--name",
        "W",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));

    // the emitted document loads on its own and answers questions
    let out = run(&[
        "--workspace",
        result.to_str().unwrap(),
        "pardeg",
        "--bundle",
        "W",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "{\"par_deg\":\"0/1\"}\n");

    let out = run(&[
        "--workspace",
        result.to_str().unwrap(),
        "classify",
        "--bundle",
        "W",
    ]);
    let text = stdout(&out);
    assert!(text.contains("\"nef\":true"));
    assert!(text.contains("\"ample\":false"));
    assert!(text.contains("\"mu_min\":\"0/1\""));
}

#[test]
fn hn_lists_the_spectrum_with_slopes() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_double_cover(dir.path());
    let out = run(&["--workspace", &ws, "hn", "--bundle", "L3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("\"rank\":1"));
    assert!(text.contains("\"par_degree\":\"3/1\""));
    assert!(text.contains("\"mu_min\":\"3/1\""));
}

#[test]
fn galois_reports_the_closure_and_the_decomposition() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_double_cover(dir.path());
    let out = run(&[
        "--workspace",
        &ws,
        "galois",
        "--covering",
        "f",
        "--bundle",
        "O",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("\"galois\":true"));
    assert!(text.contains("\"group_order\":2"));
    assert!(text.contains("\"decomposition\""));
    assert!(text.contains("\"ok\":true"));
}

#[test]
fn tiny_group_cap_from_the_environment_is_respected() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_double_cover(dir.path());
    let out = Command::new(BIN)
        .args(["--workspace", &ws, "galois", "--covering", "f"])
        .env("PARABOLIC_CAP", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("cap"));
}

#[test]
fn out_of_range_weights_are_domain_errors() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{
  "curves": [{"name": "X", "genus": 0, "points": ["p"]}],
  "bundles": [
    {"name": "E", "curve": "X",
     "atoms": [{"rank": 1, "degree": 0, "weights": {"p": [{"w": "3/2", "m": 1}]}}]}
  ]
}"#,
    )
    .unwrap();
    let out = run(&[
        "--workspace",
        path.to_str().unwrap(),
        "pardeg",
        "--bundle",
        "E",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("outside [0,1)"));
}

#[test]
fn fiber_degree_mismatches_quote_the_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{
  "curves": [
    {"name": "X", "genus": 0, "points": ["b1"]},
    {"name": "Y", "genus": 0, "points": ["a"]}
  ],
  "coverings": [
    {"name": "f", "source": "Y", "target": "X", "degree": 2,
     "fibers": [{"base": "b1", "above": [{"point": "a", "e": 3}]}]}
  ]
}"#,
    )
    .unwrap();
    let out = run(&[
        "--workspace",
        path.to_str().unwrap(),
        "pardeg",
        "--bundle",
        "E",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = stderr(&out);
    assert!(err.contains("sums to 3"), "stderr: {err}");
    assert!(err.contains("degree 2"), "stderr: {err}");
}

#[test]
fn usage_problems_exit_two() {
    // unknown flag
    let out = run(&["pardeg", "--no-such-flag"]);
    assert_eq!(out.status.code(), Some(2));

    // missing workspace
    let out = run(&["pardeg", "--bundle", "E"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("--workspace"));

    // sum needs two operands
    let dir = tempfile::tempdir().unwrap();
    let ws = write_double_cover(dir.path());
    let out = run(&["--workspace", &ws, "sum", "--bundle", "O"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("twice"));
}

#[test]
fn verify_runs_suites_and_rejects_unknown_names() {
    let out = run(&["verify", "--suite", "tensor-degree", "--trials", "3", "--seed", "5"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("\"ok\":true"));
    assert!(text.contains("\"passed\":3"));

    let out = run(&["verify", "--suite", "no-such-suite", "--trials", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("unknown verification suite"));
}

#[test]
fn verify_all_covers_every_suite() {
    let out = run(&["verify", "--suite", "all", "--trials", "2", "--seed", "11"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    for suite in [
        "tensor-degree",
        "dual-involution",
        "pullback-ample",
        "pushforward-ample",
        "dual-commutation",
        "quotient-bound",
        "nef-harness",
        "galois-decomposition",
    ] {
        assert!(text.contains(suite), "missing suite {suite}");
    }
    assert!(text.contains("\"ok\":true"));
}

#[test]
fn generate_is_deterministic_and_loadable() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for path in [&a, &b] {
        let out = run(&[
            "--seed",
            "7",
            "--output",
            path.to_str().unwrap(),
            "generate",
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
    }
    let bytes_a = std::fs::read(&a).unwrap();
    let bytes_b = std::fs::read(&b).unwrap();
    assert!(!bytes_a.is_empty());
    assert_eq!(bytes_a, bytes_b);

    // the generated document answers a question without further setup
    let out = run(&["--workspace", a.to_str().unwrap(), "slope", "--bundle", "V"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).starts_with("{\"par_slope\":\""));
}

#[test]
fn operations_chain_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let ws = write_double_cover(dir.path());
    let dualed = dir.path().join("dual.json");
    let out = run(&[
        "--workspace",
        &ws,
        "--output",
        dualed.to_str().unwrap(),
        "dual",
        "--bundle",
        "L3",
        "--name",
        "M",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(&[
        "--workspace",
        dualed.to_str().unwrap(),
        "pardeg",
        "--bundle",
        "M",
    ]);
    assert_eq!(stdout(&out), "{\"par_deg\":\"-3/1\"}\n");

    // sym of the pullback: (f* L3)^{sym 2} has degree 12
    let pulled = dir.path().join("pulled.json");
    let out = run(&[
        "--workspace",
        &ws,
        "--output",
        pulled.to_str().unwrap(),
        "pullback",
        "--covering",
        "f",
        "--bundle",
        "L3",
        "--name",
        "P",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let symmed = dir.path().join("sym.json");
    let out = run(&[
        "--workspace",
        pulled.to_str().unwrap(),
        "--output",
        symmed.to_str().unwrap(),
        "sym",
        "--bundle",
        "P",
        "-k",
        "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let out = run(&[
        "--workspace",
        symmed.to_str().unwrap(),
        "pardeg",
        "--bundle",
        "P_sym2",
    ]);
    assert_eq!(stdout(&out), "{\"par_deg\":\"12/1\"}\n");
}
