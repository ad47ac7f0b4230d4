//! End-to-end checks of the `trihalf` binary: exit codes, formats, and the
//! documented example invocations.

use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_trihalf"));
    c.env_remove("TRIHALF_PRECISION");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn arith_test_example_is_nearly_arithmetic() {
    let o = run(&[
        "arith", "test", "--field", "t^2+2", "--rho0", "t", "--rho1", "t", "--rho2", "t",
    ]);
    assert_eq!(o.status.code(), Some(0), "stderr: {:?}", o.stderr);
    assert!(stdout(&o).contains("nearly_arithmetic_candidate"));
}

#[test]
fn rep_build_degenerate_is_domain_error() {
    let o = run(&["rep", "build", "--rho0", "2", "--rho1", "2", "--rho2", "2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn bounds_reports_k_7056() {
    let o = run(&["bounds"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("1764/25") || text.contains("70.56"), "{text}");
}

#[test]
fn usage_error_exits_2() {
    // clap-level usage error
    let o = run(&["rep", "build", "--no-such-flag"]);
    assert_eq!(o.status.code(), Some(2));
    // domain parse error of a malformed rho
    let o = run(&["rep", "build", "--rho0", "1+?i"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn json_report_has_stable_top_level_keys() {
    let o = run(&["--format", "json", "klein", "constants"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).expect("valid JSON");
    for key in ["command", "config", "results", "timestamp_unix"] {
        assert!(v.get(key).is_some(), "missing key {key}");
    }
    assert_eq!(v["config"]["precision_bits"], 128);
}

#[test]
fn markdown_enumeration_uses_reference_columns() {
    let o = run(&["--format", "markdown", "enumerate", "regular", "--bound", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.lines().next().unwrap().contains("| N | \u{03c1} | Field |"),
        "{text}"
    );
}

#[test]
fn plot_circles_writes_wellformed_svg() {
    let dir = std::env::temp_dir().join("trihalf-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("circles.svg");
    let o = run(&[
        "plot",
        "circles",
        "--rho0",
        "-7",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let doc = std::fs::read_to_string(&path).unwrap();
    assert!(doc.starts_with("<?xml"));
    assert!(doc.contains("<svg") && doc.trim_end().ends_with("</svg>"));
    // stdout emission is the same raw document
    let o = run(&["plot", "circles", "--rho0", "-7"]);
    assert!(stdout(&o).starts_with("<?xml"));
}

#[test]
fn env_var_sets_default_precision() {
    let o = bin()
        .env("TRIHALF_PRECISION", "192")
        .args(["--format", "json", "klein", "constants"])
        .output()
        .unwrap();
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["precision_bits"], 192);
}

#[test]
fn klein_check_figure5_parameter_intersects() {
    let o = run(&[
        "--format",
        "json",
        "klein",
        "check",
        "--field",
        "t^2+3",
        "--rho0",
        "(-1+t)/2",
    ]);
    assert_eq!(o.status.code(), Some(0), "stderr: {:?}", o.stderr);
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"]["status"], "certified_intersecting");
}

#[test]
fn relators_verify_figure5_holds_as_cube() {
    let o = run(&["--format", "json", "relators", "verify", "--figure", "5"]);
    assert_eq!(o.status.code(), Some(0), "stderr: {:?}", o.stderr);
    let text = stdout(&o);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert!(text.contains("holds"), "{text}");
    // every variant of figure 5 holds as a power relator
    let pres = v["results"]["presentations"].as_array().unwrap();
    assert!(!pres.is_empty());
}

#[test]
fn csv_output_has_header() {
    let o = run(&["--format", "csv", "enumerate", "regular", "--bound", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("n,rho,field"));
}
