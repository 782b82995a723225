use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_penrose-virial")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn verify_partition_reports_cover() {
    let o = run(&["verify-partition", "--n", "4"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).ends_with("38/38 covered, 0 violations\n"));
    let json = run(&["verify-partition", "--n", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v["connected_count"], 4);
}

#[test]
fn coeffs_route_agreement() {
    let o = run(&["coeffs", "--model", "onepoint", "--nmax", "5", "--route", "all"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.ends_with("routes agree: yes\n"));
    let betas: Vec<&str> = text.lines().skip(2).take(5).map(|l| l.split_whitespace().nth(2).unwrap()).collect();
    assert_eq!(betas, ["1", "1", "2", "6", "24"]);
    let json = run(&["coeffs", "--model", "lattice:a=2", "--nmax", "3", "--route", "trees", "--format", "json"]);
    assert_eq!(code(&json), 0);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v[0]["beta"], serde_json::json!(["1", "3", "14"]));
}

#[test]
fn bounds_single_point() {
    let o = run(&["bounds", "--u", "1", "--tol", "1e-13"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 4);
    assert!(text.contains("): pass"));
    assert!(text.contains("0.237961") && text.contains("0.144766998"));
}

#[test]
fn negative_self_tests_fail() {
    for args in [
        &["--self-test-negative", "verify-partition", "--n", "4"][..],
        &["--self-test-negative", "count-splittable", "--n", "5"],
        &["--self-test-negative", "identities", "--order", "6"],
        &["--self-test-negative", "coeffs", "--nmax", "4"],
        &["--self-test-negative", "coeffs", "--nmax", "4", "--route", "bell"],
        &["--self-test-negative", "bounds", "--u", "2"],
    ] {
        assert_eq!(code(&run(args)), 1, "{args:?}");
    }
}

#[test]
fn usage_and_cap_errors() {
    assert_eq!(code(&run(&["verify-partition", "--n", "4", "--bogus"])), 2);
    assert_eq!(code(&run(&["frobnicate"])), 2);
    assert_eq!(code(&run(&["coeffs", "--model", "hardrod"])), 2);
    assert_eq!(code(&run(&["bounds", "--u", "-1"])), 2);
    assert_eq!(code(&run(&["verify-partition", "--n", "7"])), 3);
    assert_eq!(code(&run(&["count-splittable", "--n", "10"])), 3);
    assert_eq!(code(&run(&["coeffs", "--nmax", "8"])), 3);
    let help = run(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("verify-partition"));
}

#[test]
fn output_is_deterministic_and_parallel_invariant() {
    for args in [
        &["verify-partition", "--n", "5"][..],
        &["count-splittable", "--n", "6"],
        &["coeffs", "--model", "lattice:a=2", "--nmax", "4", "--format", "csv"],
        &["identities", "--order", "8"],
    ] {
        let first = run(args);
        let again = run(args);
        let mut parallel_args = vec!["--parallel"];
        parallel_args.extend_from_slice(args);
        let parallel = run(&parallel_args);
        assert_eq!(first.stdout, again.stdout, "{args:?}");
        assert_eq!(first.stdout, parallel.stdout, "{args:?}");
        assert_eq!(code(&first), 0);
    }
}

#[test]
fn curve_files() {
    let dir = tempfile::tempdir().unwrap();
    let fig = dir.path().join("fig.csv");
    let full = dir.path().join("bounds.csv");
    let serial_fig = dir.path().join("fig_serial.csv");
    let lp = dir.path().join("lp.csv");
    std::fs::write(&lp, "u,lp_bound\n0.1,0.5\n").unwrap();
    let o = run(&[
        "--parallel",
        "curve",
        "--steps",
        "5",
        "--out",
        fig.to_str().unwrap(),
        "--bounds-out",
        full.to_str().unwrap(),
        "--lp-table",
        lp.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let figure = std::fs::read_to_string(&fig).unwrap();
    let rows: Vec<&str> = figure.lines().collect();
    assert_eq!(rows[0], "u,groeneveld_bound,lp_bound");
    assert_eq!(rows.len(), 6);
    assert!(rows[1].ends_with(",5.00000000000000e-1"));
    assert!(rows[3].starts_with("1.00000000000000e0,") && rows[3].ends_with(",1.44766998000000e-1"));
    assert!(rows[2].ends_with(','));
    let table = std::fs::read_to_string(&full).unwrap();
    assert!(table.starts_with("u,t,c,alpha,radius_coeff,residual_c,residual_alpha\n"));
    assert_eq!(table.lines().count(), 6);

    let o = run(&["curve", "--steps", "5", "--out", serial_fig.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let serial = std::fs::read_to_string(&serial_fig).unwrap();
    // Same radius column as the parallel run; only the overlay differs.
    let radius = |s: &str| s.lines().map(|l| l.split(',').take(2).collect::<Vec<_>>().join(",")).collect::<Vec<_>>();
    assert_eq!(radius(&serial), radius(&figure));
    let entries = std::fs::read_dir(dir.path()).unwrap().count();
    assert_eq!(entries, 4, "no temporary files left behind");
}
