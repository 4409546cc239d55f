use rankzeta::cli::run;

fn run_to_file(args: &[&str]) -> (i32, String) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out");
    let mut argv = vec!["rankzeta"];
    argv.extend_from_slice(args);
    argv.extend_from_slice(&["--output", path.to_str().unwrap()]);
    let code = run(argv);
    (code, std::fs::read_to_string(&path).unwrap_or_default())
}

#[test]
fn unknown_subcommand_is_a_usage_error() {
    assert_eq!(run(["rankzeta", "frobnicate"]), 2);
    assert_eq!(run(["rankzeta", "lattice", "rr"]), 2);
    assert_eq!(run(["rankzeta", "zeta", "fe", "--group", "SL3", "--parabolic", "P33"]), 2);
    assert_eq!(run(["rankzeta", "lattice", "rr", "--basis", "1", "0", "0", "1", "--tol=-1"]), 2);
    assert_eq!(run(["rankzeta", "check", "no-such-criterion"]), 2);
}

#[test]
fn riemann_roch_from_basis() {
    let (code, out) = run_to_file(&["lattice", "rr", "--basis", "2", "0", "0", "0.5"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["defect"].as_f64().unwrap().abs() < 1e-12);
    assert_eq!(v["pass"], true);
}

#[test]
fn failed_check_exits_one() {
    // an impossible tolerance turns a correct result into a reported failure
    let (code, out) = run_to_file(&["epstein", "rs-check", "--s", "2", "0", "--t", "2", "--tol", "1e-300"]);
    assert_eq!(code, 1);
    assert!(out.contains("\"pass\": false"));
}

#[test]
fn functional_equation_sl3() {
    let (code, out) = run_to_file(&["zeta", "fe", "--group", "SL3", "--parabolic", "P21", "--samples", "20"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(v["max_rel_dev"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["samples"].as_array().unwrap().len(), 20);
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["zeta", "fe", "--group", "G2", "--parabolic", "short", "--samples", "4", "--seed", "7"][..],
        &["truncomb", "check", "--group", "A3", "--samples", "50", "--seed", "3"][..],
        &["check", "stability", "--scale", "0.05", "--threads", "2"][..],
        &["zeta", "fe", "--group", "SL2", "--samples", "3", "--format", "csv"][..],
    ] {
        let (c1, a) = run_to_file(args);
        let (c2, b) = run_to_file(args);
        assert_eq!((c1, c2), (0, 0), "{args:?}");
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn spec_file_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("spec.json");
    let (code, out) = run_to_file(&["zeta", "calibrate", "--group", "SL3", "--parabolic", "P12"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    std::fs::write(&spec, v["spec"].to_string()).unwrap();
    let (code, a) = run_to_file(&["zeta", "eval", "--spec", spec.to_str().unwrap(), "--sigma", "0.3", "1.1"]);
    assert_eq!(code, 0);
    let (_, b) = run_to_file(&["zeta", "eval", "--group", "SL3", "--parabolic", "P12", "--sigma", "0.3", "1.1"]);
    assert_eq!(a, b);
}

#[test]
fn lattice_commands_accept_points() {
    for cmd in ["h0", "hn", "semistable"] {
        let (code, out) = run_to_file(&["lattice", cmd, "--point", "0.2", "1.3"]);
        assert_eq!(code, 0, "{cmd}");
        assert!(out.starts_with('{'));
    }
    let (code, out) = run_to_file(&["lattice", "bridge", "--g", "0.8", "0.1", "2.0", "--p", "0.3", "--t", "1.0"]);
    assert_eq!(code, 0);
    assert!(!out.contains("\"holds\": false"));
    assert_eq!(run(["rankzeta", "rootdata", "dump", "--group", "Sp4", "--output", "/dev/null"]), 0);
}
