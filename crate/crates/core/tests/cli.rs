use std::process::Command;

fn run(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_dwork-zeta")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json(args: &[&str]) -> (i32, serde_json::Value) {
    let mut a = args.to_vec();
    a.push("--json");
    let (code, out) = run(&a);
    (code, serde_json::from_str(&out).unwrap_or(serde_json::Value::Null))
}

#[test]
fn teich_spot_value() {
    let (code, out) = run(&["teich", "--p", "5", "--precision", "3", "--a", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "57");
}

#[test]
fn direct_fermat_cubic() {
    let (code, v) = json(&["zeta-direct", "--p", "5", "--poly", "x1^3+x2^3+x3^3", "--precision", "8"]);
    assert_eq!(code, 0);
    assert_eq!(v["numerator"], serde_json::json!([1, 0, 5]));
    assert_eq!(v["counts"], serde_json::json!([[1, 6], [2, 36]]));
    assert_eq!(v["method"], "direct");
}

#[test]
fn dwork4_pipeline() {
    let (code, v) = json(&["zeta-dwork4", "--p", "13", "--gamma", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["reciprocal_roots"].as_array().unwrap().len(), 21);
    assert_eq!(v["residual_a"], -6);
    assert_eq!(v["counts"], serde_json::json!([[1, 320]]));
    assert_eq!(v["checks"]["n2_check"]["ok"], true);
    assert_eq!(v["gamma"], 2);
    assert_eq!(v["numerator_is_inverted"], true);
}

#[test]
fn gamma_routes_agree() {
    let (code, v) = json(&["gamma", "--p", "13", "--precision", "6", "--z", "1/2"]);
    assert_eq!(code, 0);
    assert_eq!(v["agree"], true);
    let (code, _) = json(&["gamma", "--p", "13", "--precision", "4", "--z", "1/13"]);
    assert_eq!(code, 1);
}

#[test]
fn newton_polygon_slopes() {
    let (code, v) = json(&["newton-polygon", "--p", "5", "--coeffs", "1,0,5"]);
    assert_eq!(code, 0);
    assert_eq!(v["slopes"], serde_json::json!(["1/2", "1/2"]));
}

#[test]
fn count_with_strata_check() {
    let (code, v) = json(&["count", "--p", "5", "--s", "2", "--poly", "x1^3+x2^3+x3^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["projective_count"], 36);
    assert_eq!(v["strata_check"], true);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["zeta-dwork4", "--p", "13", "--gamma", "5"]).0, 2);
    assert_eq!(run(&["teich", "--p", "4", "--precision", "3", "--a", "1"]).0, 2);
    assert_eq!(run(&["nonsense"]).0, 2);
    assert_eq!(run(&["zeta-direct", "--p", "5", "--poly", "x1^3+x2^3+x3^3", "--precision", "3"]).0, 1);
    assert_eq!(run(&["selftest", "--only", "1,9"]).0, 0);
    assert_eq!(run(&["selftest", "--only", "10"]).0, 1);
}
