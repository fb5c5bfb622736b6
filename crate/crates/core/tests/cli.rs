//! Golden reports for the command-line front end. Set `UPDATE_GOLDEN=1` to
//! rewrite the files under `tests/golden/`.

use std::fs;
use std::path::PathBuf;

use contractible::io::serialize_graph;
use contractible::random::{generate_random, RandomSpec};

fn root() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> String {
    root().join("fixtures").join(name).display().to_string()
}

fn data(name: &str) -> String {
    root().join("tests/data").join(name).display().to_string()
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("contractible").chain(args.iter().copied());
    let code = contractible::cli::run(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn golden(name: &str, actual: &str) {
    let path = root().join("tests/golden").join(format!("{name}.txt"));
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).unwrap();
        return;
    }
    let want = fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, want, "{name} differs from its golden file");
}

fn check_golden(name: &str, args: &[&str], code: i32) {
    let (got, out, err) = run(args);
    assert_eq!(got, code, "{name}: stderr {err}");
    golden(name, &out);
}

#[test]
fn check_reports() {
    let vi_e = fixture("fix_vi_e.graph");
    let vi_f = fixture("fix_vi_f.graph");
    let b2 = fixture("fix_b2.graph");
    let lp = fixture("fix_loop.graph");
    check_golden("check_vi_e", &["check", &vi_e, "--g0", "v,w"], 1);
    check_golden(
        "check_vi_f_json",
        &["--json", "check", &vi_f, "--g0", "v,w"],
        1,
    );
    check_golden("check_b2", &["check", &b2, "--g0", "v,w"], 0);
    check_golden("check_loop_empty", &["check", &lp, "--g0", ""], 1);
}

#[test]
fn contract_reports() {
    let b2 = fixture("fix_b2.graph");
    let vi_e = fixture("fix_vi_e.graph");
    check_golden("contract_b2", &["contract", &b2, "--g0", "v,w"], 0);
    check_golden(
        "contract_vi_e_refused",
        &["contract", &vi_e, "--g0", "v,w"],
        1,
    );
    check_golden(
        "contract_vi_e_unchecked",
        &["contract", &vi_e, "--g0", "v,w", "--unchecked", "--json"],
        0,
    );
}

#[test]
fn ideal_reports() {
    let vi_e = fixture("fix_vi_e.graph");
    let b2 = fixture("fix_b2.graph");
    check_golden("closure_vi_e", &["closure", &vi_e, "--set", "w"], 0);
    check_golden("ideals_vi_e", &["ideals", &vi_e], 0);
    check_golden(
        "ideals_vi_f_json",
        &["--json", "ideals", &fixture("fix_vi_f.graph")],
        0,
    );
    check_golden("ideals_b2_dot", &["ideals", &b2, "--dot"], 0);
}

#[test]
fn move_reports() {
    let lp = fixture("fix_loop.graph");
    check_golden("ktheory_esse", &["ktheory", &fixture("fix_esse.graph")], 0);
    check_golden(
        "desingularize_inf",
        &["desingularize", &fixture("fix_inf.graph")],
        0,
    );
    check_golden(
        "delay_out_loop",
        &["delay-out", &lp, "--plan", &data("loop_plan.json")],
        0,
    );
    check_golden(
        "delay_in_loop",
        &["delay-in", &lp, "--plan", &data("loop_plan.json")],
        0,
    );
    check_golden(
        "skew_loop",
        &[
            "skew",
            &lp,
            "--p",
            "3",
            "--labels",
            &data("loop_labels.json"),
        ],
        0,
    );
    check_golden(
        "skew_loop_backward",
        &[
            "skew",
            &lp,
            "--p",
            "3",
            "--labels",
            &data("loop_labels.json"),
            "--backward",
        ],
        0,
    );
    check_golden(
        "skew_three_loops",
        &[
            "skew",
            &data("three_loops.graph"),
            "--p",
            "2",
            "--labels",
            &data("three_labels.json"),
        ],
        0,
    );
    check_golden(
        "esse_split",
        &["esse", &fixture("fix_esse.graph"), "--v1", "a", "--v2", "x"],
        0,
    );
    check_golden(
        "tails_to_sinks",
        &["tails-to-sinks", &data("tail.graph")],
        0,
    );
    check_golden(
        "check_tail",
        &["check", &data("tail.graph"), "--g0", "v,w"],
        1,
    );
    check_golden(
        "export_dot_vi_e",
        &["export-dot", &fixture("fix_vi_e.graph"), "--depth", "1"],
        0,
    );
}

#[test]
fn input_errors_exit_two() {
    let (code, out, err) = run(&["check", "/nonexistent.graph", "--g0", "v"]);
    assert_eq!((code, out.as_str()), (2, ""));
    assert!(err.starts_with("error[IO_ERROR]"), "{err}");

    let (code, _, err) = run(&["ideals", &data("bad.graph")]);
    assert_eq!(code, 2);
    assert!(err.starts_with("error["), "{err}");

    let (code, out, _) = run(&["--json", "ideals", &data("bad.graph")]);
    assert_eq!(code, 2);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["error"].is_string());

    let (code, _, _) = run(&["contract", &fixture("fix_b2.graph")]);
    assert_eq!(code, 1, "an empty G0 fails the conditions");

    let (code, _, err) = run(&["frobnicate"]);
    assert_eq!(code, 2);
    assert!(!err.is_empty());

    let (code, _, _) = run(&["skew", &fixture("fix_loop.graph"), "--p", "0"]);
    assert_eq!(code, 2);
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for cmd in [
        "check",
        "contract",
        "closure",
        "ideals",
        "ktheory",
        "desingularize",
        "delay-out",
        "delay-in",
        "skew",
        "esse",
        "tails-to-sinks",
        "export-dot",
    ] {
        assert!(out.contains(cmd), "{cmd} missing from help");
    }
}

#[test]
fn random_seed_one_is_stable() {
    let (g, g0) = generate_random(&RandomSpec::default());
    golden(
        "random_seed1",
        &format!("{}G0 = {g0}\n", serialize_graph(&g)),
    );
}
