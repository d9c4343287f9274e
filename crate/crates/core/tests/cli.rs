//! End-to-end runs of the command-line interface on the built-in fixtures.

use extensio::cli::{cli_run, CliOutcome, EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_OK};
use extensio::io::fixture_file;
use serde_json::Value;

fn fixtures(tag: &str) -> String {
    let path = std::env::temp_dir().join(format!("extensio-fixtures-{}-{tag}.json", std::process::id()));
    std::fs::write(&path, fixture_file().to_json()).unwrap();
    path.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> CliOutcome {
    cli_run(std::iter::once("extensio").chain(args.iter().copied()))
}

fn json(out: &CliOutcome) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("not JSON ({e}): {}", out.stdout))
}

#[test]
fn resolvent_on_fix_b_matches() {
    let f = fixtures("resolvent");
    let out = run(&["--report", "json", "resolvent", &f, "fixB", "--lambda", "0+1i"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = json(&out);
    for key in ["op", "inputs", "residuals", "verdict"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v["residuals"]["max_abs"].as_f64().unwrap() < 1e-10);
    let lhs = &v["data"]["lhs"]["data"][0];
    assert!((lhs[1].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn real_lambda_is_rejected() {
    let f = fixtures("real");
    let out = run(&["weyl-eval", &f, "fixBGamma", "--lambda", "1.5"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("lambda must be nonreal"));
}

#[test]
fn weyl_eval_of_fix_b() {
    let f = fixtures("weyl");
    let out = run(&["--report", "json", "weyl-eval", &f, "fixBGamma", "--lambda", "0+1i"]);
    assert_eq!(out.code, EXIT_OK);
    let v = json(&out);
    let z = &v["data"]["matrix"]["data"][0];
    assert!(z[0].as_f64().unwrap().abs() < 1e-12 && (z[1].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn unitarity_checks() {
    let f = fixtures("unitary");
    assert_eq!(run(&["check-unitary", &f, "fixBGamma"]).code, EXIT_OK);
    assert_eq!(run(&["check-unitary", &f, "fixInf"]).code, EXIT_OK);
    assert_eq!(run(&["check-unitary", &f, "fixA"]).code, EXIT_CHECK_FAILED);
}

#[test]
fn couple_then_resolvent_round_trip() {
    let f = fixtures("couple");
    let out_path = std::env::temp_dir().join(format!("extensio-coupled-{}.json", std::process::id()));
    let out_s = out_path.to_string_lossy().into_owned();
    let out = run(&["couple", &f, "idTriplet", "fixBGamma", "--out", &out_s]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let out = run(&["--report", "json", "resolvent", &out_s, "coupled", "--lambda", "-0.5+2i"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    assert!(json(&out)["residuals"]["max_abs"].as_f64().unwrap() < 1e-10);
}

#[test]
fn admissibility_of_fix_b_parameter() {
    let f = fixtures("adm");
    let out = run(&["--report", "json", "admissibility", &f, "idTriplet", "tauFixB", "--z0", "0+2i"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let v = json(&out);
    assert_eq!(v["verdict"]["admissible"], Value::Bool(true));
    assert_eq!(v["verdict"]["exact_mul_dim"], Value::from(0));
}

#[test]
fn input_errors() {
    let dir = std::env::temp_dir();
    let bad = dir.join(format!("extensio-bad-{}.json", std::process::id()));
    std::fs::write(&bad, "{\"objects\": [").unwrap();
    let out = run(&["check-unitary", bad.to_str().unwrap(), "x"]);
    assert_eq!(out.code, EXIT_INPUT);
    assert!(out.stderr.contains("malformed JSON"));
    let f = fixtures("errors");
    assert_eq!(run(&["check-unitary", &f, "missing"]).code, EXIT_INPUT);
    assert_eq!(run(&["admissibility", &f, "idTriplet", "interval"]).code, EXIT_INPUT);
    assert_eq!(run(&["resolvent", &f, "fixBMatrix", "--lambda", "0+1i"]).code, EXIT_INPUT);
}

#[test]
fn selftest_seed_1_with_30_cases() {
    let out = run(&["--report", "json", "selftest", "--seed", "1", "--cases", "30"]);
    assert_eq!(out.code, EXIT_OK, "{}", out.stdout);
    let v = json(&out);
    assert_eq!(v["op"], "selftest");
    assert_eq!(v["residuals"].as_object().unwrap().len(), 9);
}
