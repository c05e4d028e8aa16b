//! End-to-end checks of the command-line interface: exit codes, output
//! formats, reproducibility, and the documented subcommand surface.

use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_matcensus"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

#[test]
fn count_discr_emits_json_with_count() {
    let out = run(&["count-discr", "--n", "2", "--H", "1", "--d", "0"]);
    let json = stdout_json(&out);
    assert_eq!(json["counters"]["count"], serde_json::json!("19"));
    assert_eq!(json["matrices_visited"], serde_json::json!("81"));
}

#[test]
fn count_discr_histogram_csv() {
    let out = run(&["count-discr", "--n", "2", "--H", "1", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("key,count\n"));
    assert!(text.contains("0,19\n"));
    assert!(text.contains("1,20\n"));
}

#[test]
fn delta_subcommand_prints_value() {
    let out = run(&["delta", "--n", "10"]);
    let json = stdout_json(&out);
    assert_eq!(json["delta_n"], serde_json::json!(4));
    let out = run(&["delta", "--n", "10", "--format", "csv"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout), "n,delta_n\n10,4\n");
}

#[test]
fn slope_subcommand_fits_r2_series() {
    let out = run(&["slope", "--series", "r2", "--d", "0", "--H", "10,100,1000"]);
    let json = stdout_json(&out);
    let slope = json["slope"].as_f64().unwrap();
    assert!((1.8..=2.3).contains(&slope), "slope {slope}");
}

#[test]
fn slope_subcommand_writes_data_file() {
    let dir = std::env::temp_dir().join("matcensus-cli-test");
    std::fs::create_dir_all(&dir).unwrap();
    let data = dir.join("witness.dat");
    let out = run(&[
        "slope",
        "--series",
        "witness",
        "--n",
        "3",
        "--H",
        "10,100,1000",
        "--data-out",
        data.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&data).unwrap();
    let lines: Vec<&str> = body.lines().collect();
    assert_eq!(lines.len(), 3);
    assert!(lines[0].starts_with("10 "));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn ff_subcommands() {
    let out = run(&["ff-carlitz", "--p", "5", "--n", "3"]);
    let json = stdout_json(&out);
    assert_eq!(json["count"], serde_json::json!("25"));

    let out = run(&["ff-discr0", "--p", "3", "--n", "2"]);
    let json = stdout_json(&out);
    assert_eq!(json["count"], serde_json::json!("27"));

    let out = run(&["ff-census", "--p", "2", "--n", "2", "--format", "csv"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("poly_encoding,poly_display,count,ratio_to_pn2n\n"));
    assert_eq!(text.lines().count(), 5);

    let out = run(&["ff-gsq", "--p", "2", "--n", "4", "--r", "1"]);
    let json = stdout_json(&out);
    assert!(json["count"].as_str().unwrap().parse::<u64>().unwrap() > 0);
}

#[test]
fn witness_subcommand_counts_and_samples() {
    let out = run(&["witness", "--n", "3", "--H", "1"]);
    let json = stdout_json(&out);
    assert_eq!(json["count"], serde_json::json!("108"));
    assert_eq!(json["exponent"], serde_json::json!(5));

    let out = run(&["witness", "--n", "2", "--H", "1", "--sample", "3", "--seed", "5"]);
    let json = stdout_json(&out);
    assert_eq!(json["sample"].as_array().unwrap().len(), 3);
}

#[test]
fn sample_subcommand_is_reproducible() {
    let args = [
        "sample", "--n", "2", "--H", "1", "--event", "discr=0", "--N", "20000", "--seed", "7",
    ];
    let a = run(&args);
    let b = run(&args);
    let ja = stdout_json(&a);
    let jb = stdout_json(&b);
    assert_eq!(ja["counters"], jb["counters"]);
    let est = ja["counters"]["estimate"].as_f64().unwrap();
    assert!((est - 19.0 / 81.0).abs() < 0.02, "estimate {est}");
}

#[test]
fn exponents_table_csv() {
    let out = run(&["exponents", "--n-max", "10", "--format", "csv"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("n,delta_n,thm_d0,thm_dnz,conj,lower\n"));
    assert!(text.contains("5,2,21,23,17,14\n"));
    assert!(text.contains("10,4,96,98,82,54\n"));
}

#[test]
fn cond_tail_csv_columns() {
    let out = run(&[
        "cond-tail", "--n", "2", "--H", "10", "--L", "10,100", "--N", "2000", "--seed", "3",
        "--format", "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("L,tail_fraction,ci_low,ci_high,singular_count\n"));
    assert_eq!(text.lines().count(), 3);
}

#[test]
fn validation_errors_exit_2() {
    // Bad polynomial degree for the box dimension.
    let out = run(&["count-charpoly", "--n", "2", "--H", "1", "--f", "1,1"]);
    assert_eq!(out.status.code(), Some(2));
    // Lift residue outside [0, q).
    let out = run(&["count-lift", "--n", "2", "--H", "1", "--q", "2", "--B", "2:3,0,0,1", "--d", "1"]);
    assert_eq!(out.status.code(), Some(2));
    // Unknown sample event.
    let out = run(&["sample", "--n", "2", "--H", "1", "--event", "nonsense", "--N", "10"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn budget_exceeded_exits_3() {
    let out = run(&["count-discr", "--n", "2", "--H", "2", "--d", "0", "--budget", "100"]);
    assert_eq!(out.status.code(), Some(3));
    // The environment variable supplies the default budget.
    let out = bin()
        .args(["count-discr", "--n", "2", "--H", "2", "--d", "0"])
        .env("MATCENSUS_BUDGET", "100")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    // An explicit flag overrides the environment.
    let out = bin()
        .args(["count-discr", "--n", "2", "--H", "2", "--d", "0", "--budget", "1000"])
        .env("MATCENSUS_BUDGET", "100")
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn outputs_identical_apart_from_timing() {
    let args = ["count-nondiag", "--n", "2", "--H", "2", "--workers", "2"];
    let mut a = stdout_json(&run(&args));
    let mut b = stdout_json(&run(&args));
    a.as_object_mut().unwrap().remove("wall_time_ms");
    b.as_object_mut().unwrap().remove("wall_time_ms");
    assert_eq!(a, b);
}

#[test]
fn output_flag_writes_file() {
    let dir = std::env::temp_dir().join("matcensus-cli-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("r2.json");
    let out = run(&["r2", "--d", "0", "--H", "1,2", "--output", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let json: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(json["series"][0], serde_json::json!(["1", "19"]));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("checks passed"));
    assert!(!text.contains("FAIL"));
    // Stable across runs.
    let again = run(&["selftest"]);
    assert_eq!(out.stdout, again.stdout);
}

#[test]
fn help_documents_parameter_bounds() {
    let out = run(&["count-lowdeg", "--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("n <= 6"));
    assert!(text.contains("r >= 1"));
    let out = run(&["count-discr", "--help"]);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("10^9"));
}