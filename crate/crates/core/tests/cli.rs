// In-process CLI tests: exit codes, row counts, config precedence, schema.

use std::path::PathBuf;

use hypoheat::cli::{run_cli, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, OUTPUT_SCHEMA};
use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("fixtures")
        .join(name)
        .display()
        .to_string()
}

struct Run {
    code: i32,
    out: String,
    err: String,
}

fn hypoheat(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("hypoheat").chain(args.iter().copied());
    let code = run_cli(argv, &mut out, &mut err);
    Run {
        code,
        out: String::from_utf8(out).unwrap(),
        err: String::from_utf8(err).unwrap(),
    }
}

fn validate(doc: &str) {
    let schema: Value = serde_json::from_str(OUTPUT_SCHEMA).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let instance: Value = serde_json::from_str(doc).unwrap();
    let errors: Vec<String> = validator.iter_errors(&instance).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{errors:?}\n{doc}");
}

fn csv_cell(line: &str, header: &str, col: &str) -> f64 {
    let idx = header.split(',').position(|h| h == col).unwrap();
    line.split(',').nth(idx).unwrap().parse().unwrap()
}

#[test]
fn grid_emits_one_row_per_lattice_point() {
    let r = hypoheat(&[
        "grid",
        "--group",
        "h2",
        "--time",
        "0.5",
        "--point",
        "0,0,0.1",
        "--range",
        "x:-1:1:4",
        "--range",
        "2:-0.5:0.5:3",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let lines: Vec<&str> = r.out.lines().collect();
    assert_eq!(lines.len(), 4 * 3 + 1);
    assert_eq!(lines[0], "group,x,y,z,t,value,tail_estimate");
    // first range is the slow index
    assert_eq!(csv_cell(lines[1], lines[0], "x"), -1.0);
    assert_eq!(csv_cell(lines[2], lines[0], "y"), 0.0);
    assert_eq!(csv_cell(lines[12], lines[0], "x"), 1.0);
    assert!(lines[1..].iter().all(|l| csv_cell(l, lines[0], "z") == 0.1));
}

#[test]
fn grid_with_several_times_multiplies_rows() {
    let r = hypoheat(&[
        "grid", "--group", "su2", "--time", "0.5,1", "--point", "0,0,0", "--range", "1:0:1:3",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().count(), 2 * 3 + 1);
}

#[test]
fn verify_with_zero_tolerance_exits_nonzero() {
    let r = hypoheat(&["verify", "--tol", "0"]);
    assert_eq!(r.code, EXIT_NUMERIC);
    let doc: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(doc["passed"], Value::Bool(false));
    validate(&r.out);
}

#[test]
fn verify_default_passes() {
    let r = hypoheat(&["verify"]);
    assert_eq!(r.code, EXIT_OK, "{}", r.out);
    validate(&r.out);
}

#[test]
fn popp_martinet_fixture() {
    let r = hypoheat(&["popp", "--frame-file", &fixture("martinet.frame")]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    let coeff = r
        .out
        .lines()
        .find(|l| l.starts_with("coefficient,2,"))
        .and_then(|l| l.rsplit(',').next())
        .map(|v| v.parse::<f64>().unwrap())
        .unwrap();
    assert!((coeff + 0.5).abs() < 1e-10, "{coeff}");
    assert!(r.out.contains("growth,1,2\ngrowth,2,3\n"));
}

#[test]
fn popp_point_flag_overrides_file() {
    let r = hypoheat(&[
        "popp",
        "--frame-file",
        &fixture("martinet.frame"),
        "--point",
        "0,-4,1",
        "--format",
        "json",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    validate(&r.out);
    let doc: Value = serde_json::from_str(&r.out).unwrap();
    let c = doc["first_order_coefficients"][1].as_f64().unwrap();
    assert!((c - 0.25).abs() < 1e-10, "{c}");
}

#[test]
fn popp_on_algebra_document() {
    let r = hypoheat(&[
        "popp",
        "--frame-file",
        &fixture("aff_plus_r.algebra"),
        "--format",
        "json",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    validate(&r.out);
    let doc: Value = serde_json::from_str(&r.out).unwrap();
    assert_eq!(doc["unimodular"], Value::Bool(false));
    assert_eq!(doc["first_order_coefficients"][0].as_f64(), Some(1.0));
}

#[test]
fn popp_grushin_and_heisenberg() {
    let r = hypoheat(&[
        "popp",
        "--frame-file",
        &fixture("grushin.frame"),
        "--format",
        "json",
    ]);
    let doc: Value = serde_json::from_str(&r.out).unwrap();
    let c = doc["first_order_coefficients"][0].as_f64().unwrap();
    assert!((c + 1.0 / 1.5).abs() < 1e-10, "{c}");
    let r = hypoheat(&[
        "popp",
        "--frame-file",
        &fixture("heisenberg.frame"),
        "--format",
        "json",
    ]);
    let doc: Value = serde_json::from_str(&r.out).unwrap();
    for c in doc["first_order_coefficients"].as_array().unwrap() {
        assert!(c.as_f64().unwrap().abs() < 1e-10);
    }
}

#[test]
fn config_file_with_flags_winning() {
    let dir = std::env::temp_dir().join(format!("hypoheat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.cfg");
    std::fs::write(
        &cfg,
        "# eval from a file\ncommand = eval\ngroup = h2\npoint = 0.1, 0.2, 0.3\ntime = 0.5\n",
    )
    .unwrap();
    let cfg = cfg.display().to_string();

    let base = hypoheat(&["--config", &cfg]);
    assert_eq!(base.code, EXIT_OK, "{}", base.err);
    let header = base.out.lines().next().unwrap();
    assert_eq!(csv_cell(base.out.lines().nth(1).unwrap(), header, "t"), 0.5);

    let over = hypoheat(&["--config", &cfg, "--time", "0.25"]);
    assert_eq!(over.code, EXIT_OK, "{}", over.err);
    assert_eq!(csv_cell(over.out.lines().nth(1).unwrap(), header, "t"), 0.25);
    assert_ne!(base.out, over.out);

    // an explicit subcommand beats `command = eval`
    let grid = hypoheat(&["grid", "--config", &cfg, "--range", "x:0:1:2"]);
    assert_eq!(grid.code, EXIT_OK, "{}", grid.err);
    assert_eq!(grid.out.lines().count(), 3);

    let out_file = dir.join("out.csv");
    let to_file = hypoheat(&["--config", &cfg, "--out", &out_file.display().to_string()]);
    assert_eq!(to_file.code, EXIT_OK);
    assert!(to_file.out.is_empty());
    assert_eq!(std::fs::read_to_string(&out_file).unwrap(), base.out);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn bundled_grid_config_runs() {
    let r = hypoheat(&["--config", &fixture("se2_grid.cfg")]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    assert_eq!(r.out.lines().count(), 4 * 3 + 1);
    assert!(r.out.starts_with("group,angle,x1,x2,t,value,tail_estimate\n"));
}

#[test]
fn usage_errors_exit_two_with_json_on_stderr() {
    for args in [
        &["eval", "--group", "xx", "--time", "1", "--point", "0,0,0"][..],
        &["eval", "--group", "h2", "--time", "-1", "--point", "0,0,0"][..],
        &["eval", "--group", "h2", "--time", "1"][..],
        &["eval", "--group", "h2", "--time", "1", "--point", "0,0"][..],
        &[
            "grid", "--group", "h2", "--time", "1", "--point", "0,0,0", "--range", "x:0:1:0",
        ][..],
        &["popp", "--frame-file", "/nonexistent/file.frame"][..],
        &["verify", "--tol", "-1"][..],
    ] {
        let r = hypoheat(args);
        assert_eq!(r.code, EXIT_USAGE, "{args:?}: {}", r.err);
        let first = r.err.lines().next().unwrap();
        validate(first);
        assert!(r.err.to_lowercase().contains("usage:"), "{args:?}");
        assert!(r.out.is_empty());
    }
}

#[test]
fn clap_errors_and_help() {
    assert_eq!(hypoheat(&["--no-such-flag"]).code, EXIT_USAGE);
    assert_eq!(hypoheat(&["frobnicate"]).code, EXIT_USAGE);
    let bad = hypoheat(&[
        "eval", "--group", "h2", "--point", "0,0,0", "--time", "1", "--bogus",
    ]);
    assert_eq!(bad.code, EXIT_USAGE);
    validate(bad.err.lines().next().unwrap());
    let help = hypoheat(&["--help"]);
    assert_eq!(help.code, EXIT_OK);
    assert!(help.out.contains("--frame-file"));
}

#[test]
fn eval_json_matches_schema_for_every_group() {
    for (group, point) in [
        ("h2", "0.1,0.2,0.3"),
        ("su2", "0.1,0.2,0.3"),
        ("so3", "0.1,0.2,0.3"),
        ("sl2", "0.1,0.2,0.3"),
        ("se2", "0.3,0.2,0.1"),
    ] {
        let r = hypoheat(&[
            "eval", "--group", group, "--point", point, "--time", "0.5", "--format", "json",
        ]);
        assert_eq!(r.code, EXIT_OK, "{group}: {}", r.err);
        validate(&r.out);
        let doc: Value = serde_json::from_str(&r.out).unwrap();
        assert!(doc["result"]["value"].as_f64().unwrap() > 0.0, "{group}");
    }
}

#[test]
fn grid_and_info_json_match_schema() {
    let r = hypoheat(&[
        "grid", "--group", "so3", "--time", "0.5", "--point", "0,0,0", "--range", "1:0:1:2", "--format",
        "json",
    ]);
    assert_eq!(r.code, EXIT_OK, "{}", r.err);
    validate(&r.out);
    for group in ["h2", "su2", "so3", "sl2", "se2"] {
        let r = hypoheat(&["info", "--group", group, "--format", "json"]);
        assert_eq!(r.code, EXIT_OK, "{}", r.err);
        validate(&r.out);
    }
}

#[test]
fn csv_floats_round_trip() {
    let csv = hypoheat(&[
        "eval",
        "--group",
        "su2",
        "--point",
        "0.1,0.2,0.3",
        "--time",
        "0.5",
    ]);
    let json = hypoheat(&[
        "eval",
        "--group",
        "su2",
        "--point",
        "0.1,0.2,0.3",
        "--time",
        "0.5",
        "--format",
        "json",
    ]);
    let header = csv.out.lines().next().unwrap();
    let from_csv = csv_cell(csv.out.lines().nth(1).unwrap(), header, "value");
    let doc: Value = serde_json::from_str(&json.out).unwrap();
    assert_eq!(
        from_csv.to_bits(),
        doc["result"]["value"].as_f64().unwrap().to_bits()
    );
}
