use std::process::{Command, Output};

fn funceq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_funceq")).args(args).output().unwrap()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn usage_errors_exit_2_without_report() {
    for args in [
        &["residual", "--equation", "gfe", "--K", "hrho:c=1,rho=2", "--grid", "0.1:5:20"][..],
        &["residual", "--equation", "bfe", "--phi", "affine:c=2", "--grid", "0.1:5:1"],
        &["residual", "--equation", "bfe", "--phi", "affine:c=2", "--g", "exp:rho=1", "--grid", "0.1:5:9"],
        &["residual", "--equation", "nope", "--phi", "affine:c=2", "--grid", "0.1:5:9"],
        &["residual", "--equation", "bfe", "--phi", "affine:c=2", "--grid", "0.1:5:9", "--tol", "0"],
        &["verify", "--suite", "lemma_b", "--f", "const:1", "--grid", "0.1:5:9"],
        &["beck", "--phi", "table:/nonexistent.csv", "--u", "1"],
    ] {
        let out = funceq(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty(), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn table_outside_range_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("t.csv");
    std::fs::write(&p, "x,value\n0.5,1.5\n1,2\n1.5,2.5\n2,3\n").unwrap();
    let lit = format!("table:{}", p.display());
    // v + u phi(v) leaves [0.5, 2].
    let out = funceq(&["residual", "--equation", "bfe", "--phi", &lit, "--grid", "0.5:2:4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("domain"));
}

#[test]
fn failing_residual_exits_1() {
    let out = funceq(&["residual", "--equation", "cfe", "--K", "affine:c=1", "--grid", "0.1:1:5"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["results"]["pass"], false);
    assert_eq!(v["command"]["command"], "residual");
}

#[test]
fn exact_mode_and_dichotomy() {
    let out = funceq(&[
        "residual", "--equation", "cfe", "--alpha", "1", "--beta", "-3", "--subgroup", "zsqrt2:N=10,X=3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["max_abs"].as_f64(), Some(0.0));

    let out = funceq(&["verify", "--suite", "dichotomy", "--N", "256", "--threshold", "100", "--pairs", "50"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["status"], "pass");
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("r.json");
    let out = funceq(&[
        "beck", "--phi", "affine:c=1", "--u", "1", "--n", "4", "--output", p.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_slice(&std::fs::read(&p).unwrap()).unwrap();
    let terms: Vec<f64> = v["results"]["sequence"]["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t.as_f64().unwrap())
        .collect();
    assert_eq!(terms, vec![0.0, 1.0, 3.0, 7.0, 15.0]);
}

#[test]
fn fit_and_other_suites() {
    let out = funceq(&["fit", "--g", "exp:rho=0.7", "--grid", "0.1:3:30"]);
    assert_eq!(out.status.code(), Some(0));
    let rho = json(&out)["results"]["exponential"]["rho"].as_f64().unwrap();
    assert!((rho - 0.7).abs() < 1e-12);

    let out = funceq(&["verify", "--suite", "monotonicity", "--f", "hrho:c=1,rho=1", "--grid", "0.05:5:100"]);
    assert_eq!(out.status.code(), Some(0));
    let out = funceq(&["verify", "--suite", "bm", "--f", "affine:c=2", "--grid", "0.5:5:10"]);
    assert_eq!(out.status.code(), Some(0));
    let out = funceq(&["verify", "--suite", "theorem_b", "--phi", "affine:c=1", "--grid", "0.1:4:20"]);
    assert_eq!(out.status.code(), Some(0));
    let out = funceq(&["verify", "--suite", "lemma_b", "--f", "affine:c=0.5", "--a", "1", "--grid", "0.5:5:10"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["results"]["status"], "vacuous_pass");
}
