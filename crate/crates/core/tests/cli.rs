use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn write(name: &str, body: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn permwold(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_permwold"))
        .args(args)
        .output()
        .unwrap()
}

fn run_on(args: &[&str], file: &Path) -> (i32, String, String) {
    let mut all: Vec<&str> = args.to_vec();
    all.push(file.to_str().unwrap());
    let out = permwold(&all);
    (
        out.status.code().unwrap(),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

const CYCLE_AND_FREE: &str = r#"{
  "m": 1,
  "base": ["a", "b", "c"],
  "s_edges": [["a", 1, "b"], ["b", 1, "a"]]
}"#;

const NO_DECOMPOSITION: &str = r#"{
  "m": 1, "n": 2,
  "theta": [[1, 1, 1, 1], [1, 2, 1, 2]],
  "base": ["v0", "v1", "v2"],
  "s_edges": [["v0", 1, "v2"]],
  "t_edges": [["v1", 1, "v1"], ["v1", 2, "v2"]]
}"#;

const NOT_COMMUTING: &str = r#"{
  "m": 1, "n": 1,
  "theta": [[1, 1, 1, 1]],
  "base": ["a", "b"],
  "s_edges": [["a", 1, "b"]],
  "t_edges": [["a", 1, "a"]]
}"#;

#[test]
fn validate_exit_codes() {
    let ok = write("ok.json", CYCLE_AND_FREE);
    let (code, out, _) = run_on(&["validate"], &ok);
    assert_eq!((code, out.as_str()), (0, "single presentation: valid\n"));

    let dup = write(
        "dup.json",
        r#"{"m": 2, "base": ["a", "b"], "s_edges": [["a", 1, "b"], ["b", 2, "b"]]}"#,
    );
    let (code, out, _) = run_on(&["validate"], &dup);
    assert_eq!(code, 2);
    assert!(out.contains("invalid"), "{out}");
}

#[test]
fn parse_errors_report_position() {
    let bad = write("bad.json", "{\n  \"m\": 1,\n  \"base\": [\"a\",]\n}");
    let (code, _, err) = run_on(&["wold"], &bad);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");

    let unknown = write("unknown.json", r#"{"m": 1, "base": [], "s_edges": [], "extra": 0}"#);
    let (code, _, err) = run_on(&["validate"], &unknown);
    assert_eq!(code, 2);
    assert!(err.contains("extra"), "{err}");

    let half = write("half.json", r#"{"m": 1, "n": 1, "base": [], "s_edges": []}"#);
    assert_eq!(run_on(&["validate"], &half).0, 2);
}

#[test]
fn json_errors_carry_the_exit_code() {
    let bad = write("bad_json.json", "{");
    let (code, out, _) = run_on(&["--json", "wold"], &bad);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exit_code"], 2);
}

#[test]
fn wold_reports_parts() {
    let f = write("wold.json", CYCLE_AND_FREE);
    let (code, out, _) = run_on(&["--json", "wold"], &f);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["multiplicity"], 1);
    assert_eq!(v["wandering"][0], "(∅, c)");
    assert_eq!(v["row_unitary"], false);
}

#[test]
fn commutation_verdicts() {
    let bad = write("noncomm.json", NOT_COMMUTING);
    assert_eq!(run_on(&["check-commute"], &bad).0, 1);
    // decompositions refuse non-commuting pairs
    assert_eq!(run_on(&["slocinski"], &bad).0, 1);

    let f = write("nodec.json", NO_DECOMPOSITION);
    let (code, out, _) = run_on(&["check-commute"], &f);
    assert_eq!((code, out.as_str()), (0, "commuting: yes\n"));
    assert_eq!(run_on(&["check-doubly"], &f).0, 1);
}

#[test]
fn slocinski_failure_has_a_witness() {
    let f = write("sloc.json", NO_DECOMPOSITION);
    let (code, out, _) = run_on(&["--json", "slocinski"], &f);
    assert_eq!(code, 1);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["exists"], false);
    assert!(v["witness"].as_str().unwrap().starts_with("SecondUnitaryNotReducing"));

    let (code, out, _) = run_on(&["--json", "oracle", "--depth", "5"], &f);
    assert_eq!(code, 0, "{out}");
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["relations_hold"], true);
    assert_eq!(v["doubly_displays_hold"], false);
}

#[test]
fn slocinski_orders() {
    let f = write(
        "free_pair.json",
        r#"{"m": 2, "n": 2, "theta": [[1,1,2,2],[1,2,1,2],[2,1,2,1],[2,2,1,1]], "base": ["b"], "s_edges": [["b", 1, "b"]]}"#,
    );
    for order in ["st", "ts"] {
        let (code, out, _) = run_on(&["slocinski", "--order", order], &f);
        assert_eq!(code, 0, "{out}");
        assert!(out.contains("exists: yes"));
    }
}

#[test]
fn budget_exceeded_exits_three() {
    let f = write("deep.json", r#"{"m": 3, "base": ["b"], "s_edges": []}"#);
    assert_eq!(run_on(&["oracle", "--depth", "40"], &f).0, 3);
    let out = permwold(&[
        "search",
        "--max-base",
        "5",
        "--m",
        "3",
        "--n",
        "3",
        "--theta-all",
        "--property",
        "commuting",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn search_finds_the_small_counterexamples() {
    let out = permwold(&[
        "--json",
        "search",
        "--max-base",
        "3",
        "--m",
        "1",
        "--n",
        "2",
        "--property",
        "no-slocinski",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["matches"].as_u64().unwrap() > 0);
    let bad = permwold(&[
        "search",
        "--max-base",
        "1",
        "--m",
        "1",
        "--n",
        "1",
        "--property",
        "nonsense",
    ]);
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let f = write("det.json", NO_DECOMPOSITION);
    for cmd in [&["--json", "oracle"][..], &["wold"], &["classify"], &["export-dot"]] {
        let (_, a, _) = run_on(cmd, &f);
        let (_, b, _) = run_on(cmd, &f);
        assert_eq!(a, b);
    }
    let args = [
        "search",
        "--max-base",
        "2",
        "--m",
        "2",
        "--n",
        "1",
        "--theta-all",
        "--property",
        "doubly-commuting",
    ];
    assert_eq!(permwold(&args).stdout, permwold(&args).stdout);
}

#[test]
fn dot_export_styles_families() {
    let f = write("dot.json", NO_DECOMPOSITION);
    let (code, out, _) = run_on(&["export-dot"], &f);
    assert_eq!(code, 0);
    assert!(out.starts_with("digraph"));
    assert!(out.contains("\"v0\" -> \"v2\" [label=\"s 1\", style=solid];"));
    assert!(out.contains("\"v1\" -> \"v2\" [label=\"t 2\", style=dashed];"));
}
