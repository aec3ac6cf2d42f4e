use std::process::{Command, Output};

fn carlitz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_carlitz")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn compute_examples() {
    let o = carlitz(&["compute", "binomK", "--k", "2", "--m", "1", "--p", "2", "--nu", "1"]);
    assert!(o.status.success());
    // 1 + [1] with [1] = x^2 + x.
    assert_eq!(stdout(&o).trim(), "x^(2) + x^(1) + 1");
    assert_eq!(stdout(&carlitz(&["compute", "factorial", "--i", "0"])).trim(), "1");
    let o = carlitz(&["compute", "bracket", "--i", "1", "--p", "3", "--nu", "1"]);
    assert_eq!(stdout(&o).trim(), "x^(3) + 2*x^(1)");
}

#[test]
fn compute_json_round_trips_the_value() {
    let o = carlitz(&["compute", "factorial", "--i", "2", "--p", "3", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["q"], 3);
    assert_eq!(v["what"], "factorial");
    let text = v["text"].as_str().unwrap();
    let field = carlitz_core::Fq::new(3, 1).unwrap();
    let parsed = carlitz_core::PerfectRational::parse(&field, text).unwrap();
    let from_json: carlitz_core::RationalJson = serde_json::from_value(v["value"].clone()).unwrap();
    assert_eq!(carlitz_core::PerfectRational::from_json(&field, &from_json).unwrap(), parsed);
}

#[test]
fn verify_examples_and_negative_controls() {
    for args in [
        vec!["verify", "pascal", "--kmax", "8"],
        vec!["verify", "places", "--kmax", "8", "--dmax", "3"],
        vec!["verify", "pde", "--T", "8"],
        vec!["verify", "contiguous", "--pmax", "3"],
        vec!["verify", "kbinom", "--kmax", "3", "--samples", "4"],
        vec!["verify", "vandermonde", "--kmax", "5"],
        vec!["verify", "ring", "--samples", "20", "--deg", "2"],
    ] {
        let o = carlitz(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        let mut bad = args.clone();
        bad.push("--perturb");
        assert_eq!(carlitz(&bad).status.code(), Some(3), "{bad:?} passed a perturbed identity");
    }
}

#[test]
fn literal_vandermonde_fails() {
    let o = carlitz(&["verify", "vandermonde", "--form", "literal", "--kmax", "4"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("k=3 m=2 l=2"));
}

#[test]
fn gkdim_examples() {
    let o = carlitz(&["gkdim", "--function", "carlitz", "--T", "10", "--jmax", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["degree"], 2);
    assert_eq!(v["classification"], "quasi-holonomic");
    assert_eq!(v["truncation"], 10);

    let o = carlitz(&["gkdim", "--function", "diag", "--T", "10", "--jmax", "5", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["degree"], 1);
    assert_eq!(v["classification"], "degenerate");

    let o = carlitz(&["gkdim", "--function", "poly", "--spec", "s^q", "--jmax", "6", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["degree"], 1);
    assert_eq!(v["multiplicity"], 1);
}

#[test]
fn unstable_fit_exits_two() {
    let o = carlitz(&["gkdim", "--function", "binom", "--T", "5", "--jmax", "3"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stdout(&o).contains("classification unstable"));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(carlitz(&["compute", "nothing"]).status.code(), Some(1));
    assert_eq!(carlitz(&["compute", "factorial", "--p", "4"]).status.code(), Some(1));
    assert_eq!(carlitz(&["gkdim", "--function", "carlitz", "--T", "5", "--jmax", "4"]).status.code(), Some(1));
    assert_eq!(carlitz(&["--help"]).status.code(), Some(0));
}

#[test]
fn output_is_deterministic_across_runs_and_jobs() {
    let args = ["verify", "kbinom", "--kmax", "3", "--samples", "5", "--seed", "9", "--format", "json"];
    let a = carlitz(&args).stdout;
    let b = carlitz(&args).stdout;
    let mut with_jobs = args.to_vec();
    with_jobs.extend(["--jobs", "1"]);
    let c = carlitz(&with_jobs).stdout;
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn tables_to_file_in_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("binom.csv");
    let o = carlitz(&["table", "binomK", "--kmax", "3", "--dmax", "2", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let body = std::fs::read_to_string(&path).unwrap();
    let mut lines = body.lines();
    assert_eq!(lines.next(), Some("k,m,value,place,valuation"));
    // 10 pairs times 3 places of degree <= 2 over F_2.
    assert_eq!(lines.count(), 30);

    let o = carlitz(&["table", "factorial", "--kmax", "8", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    for i in 0..=8 {
        assert_eq!(v[i]["v_x_lfac"], i);
    }
}
