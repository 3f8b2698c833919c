use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bohrtop"))
        .args(args)
        .env_remove("BOHRTOP_CAP")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", stdout(o)))
}

#[test]
fn examplex_reports_counts_and_flags_the_ideal_count() {
    let o = run(&["examplex"]);
    assert_eq!(code(&o), 1);
    assert_eq!(stdout(&o).trim(), "monotone Heyting algebra: 257; distributive ideals: 32");
    assert!(stderr(&o).contains("expected 72, found 32"));
}

#[test]
fn examplex_json() {
    let o = run(&["examplex", "--json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["monotone_heyting"], 257);
    assert_eq!(v["distributive_ideals"], 32);
    assert_eq!(v["expected"]["distributive_ideals"], 72);
}

#[test]
fn truth_of_sigma_z_positive_in_ket0() {
    let o = run(&[
        "truth",
        "--state",
        &fixture("ket0.json"),
        "--obs",
        &fixture("sigma_z.json"),
        "--q",
        "1/2",
        "--r",
        "2",
        "--contexts",
        &fixture("zx.json"),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o), serde_json::json!({"contexts": ["C_z"], "upper_set": true}));
}

#[test]
fn dasein_open() {
    let o = run(&[
        "dasein",
        "--obs",
        &fixture("sigma_z.json"),
        "--q",
        "1/2",
        "--r",
        "2",
        "--contexts",
        &fixture("zx.json"),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["values"]["C_z"], serde_json::json!([0]));
    assert_eq!(json(&o)["values"]["C_x"], serde_json::json!([]));
}

#[test]
fn frame_over_z_x_is_not_boolean() {
    let v = json(&run(&["frame", "--contexts", &fixture("zx.json")]));
    assert_eq!(v["opens"], 17);
    assert_eq!(v["boolean"], false);
    assert_eq!(v["distributive"], true);
    assert!(v["witness"]["values"].is_object());
}

#[test]
fn frame_cap_gives_lower_bound() {
    let o = Command::new(env!("CARGO_BIN_EXE_bohrtop"))
        .args(["frame", "--contexts", &fixture("zxy.json")])
        .env("BOHRTOP_CAP", "3")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["opens"]["cap"], 3);
    let lb = v["opens"]["at_least"].as_u64().unwrap();
    assert!(lb > 3 && lb <= 65, "{lb}");
}

#[test]
fn frame_dot() {
    let o = run(&["frame", "--contexts", &fixture("zx.json"), "--dot"]);
    assert_eq!(code(&o), 0);
    let s = stdout(&o);
    assert!(s.starts_with("digraph"));
    assert_eq!(s.matches("->").count(), 2);
}

#[test]
fn young_lists_sequences() {
    assert_eq!(json(&run(&["young", "--k", "2", "--n", "2"])), serde_json::json!([[1, 2]]));
    assert_eq!(json(&run(&["young", "--k", "2", "--n", "4"])), serde_json::json!([[2, 4], [3, 4]]));
}

#[test]
fn ctxgen_diagonal_has_all_partitions() {
    let v = json(&run(&["ctxgen", "--diagonal", "3"]));
    assert_eq!(v["contexts"].as_array().unwrap().len(), 5);
}

#[test]
fn ctxgen_random_is_seeded() {
    let a = run(&["ctxgen", "--random", "2", "--seed", "7"]);
    let b = run(&["ctxgen", "--random", "2", "--seed", "7"]);
    let c = run(&["ctxgen", "--random", "2", "--seed", "8"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn ks_results() {
    let v = json(&run(&["ks", "--cabello"]));
    assert_eq!(v["result"], "no valuation");
    assert_eq!(v["nodes"], 852);
    let v = json(&run(&["ks", "--diagonal", "3"]));
    assert_eq!(v["result"], "valuation");
}

#[test]
fn oml_validate() {
    let o = run(&["oml-validate", "--example", "x"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(json(&o)["blocks"], serde_json::json!([2, 8, 4]));
    let o = run(&["oml-validate", "--input", &fixture("hexagon.json")]);
    assert_eq!(code(&o), 1);
    assert_eq!(json(&o)["orthomodular"], false);
}

#[test]
fn bruns_lakser() {
    assert_eq!(json(&run(&["bruns-lakser", "--input", &fixture("m3.json")]))["distributive_ideals"], 8);
    assert_eq!(json(&run(&["bruns-lakser", "--example", "x"]))["distributive_ideals"], 32);
}

#[test]
fn schema_errors_exit_2_with_path() {
    let o = run(&["frame", "--contexts", &fixture("bad_atoms.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("contexts[1].atoms[1][0]"), "{}", stderr(&o));

    let o = run(&["frame", "--contexts", &fixture("bad_closure.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("closure"));

    let o = run(&[
        "truth",
        "--state",
        &fixture("not_hermitian.json"),
        "--obs",
        &fixture("sigma_z.json"),
        "--q",
        "0",
        "--r",
        "2",
        "--contexts",
        &fixture("zx.json"),
    ]);
    assert_eq!(code(&o), 2);
}

#[test]
fn usage_error_exits_2() {
    assert_eq!(code(&run(&["bogus"])), 2);
    assert_eq!(code(&run(&["frame", "--contexts", &fixture("zx.json"), "--tol-eig", "-1"])), 2);
}

#[test]
fn degenerate_overlap_exits_3() {
    let o = run(&["frame", "--contexts", &fixture("degenerate.json")]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("ambiguous"));
}
