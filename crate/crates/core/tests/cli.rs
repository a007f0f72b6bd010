use serde_json::Value;

use roughforms::cli::{run_with, EXIT_BUDGET, EXIT_NONCONVERGENT, EXIT_OK, EXIT_USAGE};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("roughforms").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (
        code,
        String::from_utf8(out).unwrap(),
        String::from_utf8(err).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, EXIT_OK, "{err}");
    serde_json::from_str(&out).unwrap()
}

#[test]
fn young_polynomial() {
    let v = json(&["young", "--f", "x", "--g", "x^2", "--simplex", "0;1"]);
    assert_eq!(v["schema"], "roughforms/1");
    assert_eq!(v["command"], "young");
    assert_eq!(v["ok"], true);
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - 2.0 / 3.0).abs() < 1e-6, "{value}");
}

#[test]
fn schema_key_comes_first() {
    let (_, out, _) = run(&["young", "--f", "1", "--g", "x", "--simplex", "0;2"]);
    let first = out.lines().nth(1).unwrap().trim();
    assert!(first.starts_with("\"schema\""), "{first}");
}

#[test]
fn negative_coordinates_are_not_flags() {
    let v = json(&["young", "--f", "1", "--g", "x", "--simplex", "-1;1"]);
    assert!((v["result"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn zust_signed_area() {
    let v = json(&[
        "zust",
        "--f",
        "1",
        "--g1",
        "x",
        "--g2",
        "y",
        "--simplex",
        "0,0;1,0;0,1",
    ]);
    assert!((v["result"]["value"].as_f64().unwrap() - 0.5).abs() < 1e-10);
}

#[test]
fn stokes_holds_on_a_polynomial_pair() {
    let (code, out, err) = run(&["stokes", "--f", "x", "--g", "y", "--simplex", "0,0;1,0;0,1"]);
    assert_eq!(code, EXIT_OK, "{err}");
    assert!(out.contains("\"holds\": true"), "{out}");
}

#[test]
fn csv_table_columns() {
    let (code, out, _) = run(&[
        "young",
        "--f",
        "x",
        "--g",
        "x",
        "--simplex",
        "0;1",
        "--format",
        "csv",
    ]);
    assert_eq!(code, EXIT_OK);
    let mut lines = out.lines();
    assert_eq!(
        lines.next().unwrap(),
        "level,n_leaves,partial_sum,increment,rate_estimate"
    );
    let second = lines.nth(1).unwrap();
    assert!(second.starts_with("1,2,"), "{second}");
}

#[test]
fn json_table_rows() {
    let v = json(&[
        "young",
        "--f",
        "x",
        "--g",
        "x",
        "--simplex",
        "0;1",
        "--table",
    ]);
    let rows = v["tables"][0]["rows"].as_array().unwrap();
    assert_eq!(rows[0]["level"], 0);
    assert_eq!(rows[3]["n_leaves"], 8);
}

#[test]
fn repeated_runs_are_byte_identical() {
    let args = [
        "gauge",
        "--germ",
        "abs-increment",
        "--coboundary",
        "--light",
    ];
    let (c1, a, _) = run(&args);
    let (c2, b, _) = run(&args);
    assert_eq!(c1, c2);
    assert_eq!(a, b);
}

#[test]
fn usage_errors() {
    assert_eq!(
        run(&["young", "--f", "x +", "--g", "x", "--simplex", "0;1"]).0,
        EXIT_USAGE
    );
    assert_eq!(
        run(&["young", "--f", "x", "--g", "x", "--simplex", "0,0;1,0;0,1"]).0,
        EXIT_USAGE
    );
    assert_eq!(run(&["nonsense"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn budget_exit_code() {
    let (code, _, err) = run(&[
        "young",
        "--f",
        "x",
        "--g",
        "x",
        "--simplex",
        "0;1",
        "--max-level",
        "40",
    ]);
    assert_eq!(code, EXIT_BUDGET);
    assert!(err.contains("budget"), "{err}");
}

#[test]
fn non_sewable_germ_is_flagged() {
    let (code, out, _) = run(&[
        "young",
        "--f",
        "1",
        "--g",
        "x",
        "--germ",
        "abs-increment",
        "--simplex",
        "0;1",
    ]);
    assert_eq!(code, EXIT_NONCONVERGENT);
    assert!(out.contains("0;1"), "{out}");
}

#[test]
fn non_convergence_exit_code() {
    let (code, _, err) = run(&[
        "young",
        "--f",
        "x",
        "--g",
        "sin(1000*x)",
        "--simplex",
        "0;1",
        "--max-level",
        "3",
    ]);
    assert_eq!(code, EXIT_NONCONVERGENT);
    assert!(err.contains("level"), "{err}");
}

#[test]
fn pure_area_one_dimensional_table() {
    let (code, out, err) = run(&[
        "pure-area",
        "--dim",
        "1",
        "--n-list",
        "10,100",
        "--format",
        "csv",
    ]);
    assert_eq!(code, EXIT_OK, "{err}");
    let lines: Vec<&str> = out.lines().collect();
    assert!(lines[0].starts_with("n,value"), "{out}");
    assert_eq!(lines.len(), 3, "{out}");
}
