use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn hypervol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypervol")).args(args).env_remove("HYPERVOL_SEED").output().unwrap()
}

fn json_ok(args: &[&str]) -> Value {
    let out = hypervol(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn temp_file(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("hypervol-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn bipyramid_from_points() {
    let v = json_ok(&["bipyramid", "--n", "7", "--points", &data("b5_one_class.json")]);
    assert_eq!(v["discriminant_sign"], -1);
    assert_eq!(v["classes"], 1);
    assert_eq!(v["degree"], 3);

    let v = json_ok(&["bipyramid", "--n", "7", "--points", &data("b5_three_classes.json")]);
    assert_eq!(v["discriminant_sign"], 1);
    assert_eq!(v["classes"], 3);
}

#[test]
fn bipyramid_random_has_no_sign_off_seven() {
    let v = json_ok(&["bipyramid", "--n", "8", "--seed", "3"]);
    assert_eq!(v["degree"], 4);
    assert!(v["discriminant_sign"].is_null());
    assert!(v["classes"].as_u64().unwrap() >= 2);
}

#[test]
fn bound_from_parameters() {
    let v = json_ok(&["bound", "--d", "2", "--n", "6"]);
    assert_eq!(v["upper"], 5);
    assert_eq!(v["rules"], serde_json::json!(["Eq1", "Catalan"]));
}

#[test]
fn bound_from_hypergraph_and_parts() {
    let v = json_ok(&["bound", &data("bipyramid8.json")]);
    assert_eq!(v["lower"], 2);
    assert_eq!(v["upper"], 4);

    let v = json_ok(&["bound", "--part", &data("tetrahedron.json"), "--part", &data("octahedron.json")]);
    assert_eq!(v["rules"][0], "Gluing");
    assert_eq!(v["lower"], 2);
    assert_eq!(v["upper"], 2);
}

#[test]
fn rigid_verdict() {
    let v = json_ok(&["rigid", &data("bipyramid8.json")]);
    assert_eq!(v["rigid"], true);
    assert_eq!(v["generic_rank"], 11);
    let t = temp_file("flexible.json", r#"{"d":2,"n":5,"hyperedges":[[1,2,3],[1,2,4],[3,4,5]]}"#);
    assert_eq!(json_ok(&["rigid", &t])["rigid"], false);
}

#[test]
fn check_s2_reports_homology() {
    let v = json_ok(&["check-s2", &data("octahedron.json")]);
    assert_eq!(v["triangulation"], true);
    assert_eq!(v["homology"].as_array().unwrap().len(), 8);
    let t = temp_file("disk.json", r#"{"d":2,"n":4,"hyperedges":[[1,2,3],[1,3,4]]}"#);
    let v = json_ok(&["check-s2", &t]);
    assert_eq!(v["triangulation"], false);
    assert!(v["homology"].is_null());
}

#[test]
fn rank_report() {
    let v = json_ok(&["rank", &data("octahedron_framework.json")]);
    assert_eq!(v["rank"], 7);
    assert_eq!(v["max_rank"], 7);
    assert_eq!(v["nontrivial_flex_dim"], 0);
}

#[test]
fn glue_and_split_emit_hypergraphs() {
    let v = json_ok(&["glue", &data("tetrahedron.json"), &data("octahedron.json"), "--at", "1,2,4", "1,2,3"]);
    assert_eq!((v["n"].as_u64(), v["hyperedges"].as_array().unwrap().len()), (Some(7), 10));
    let kept = json_ok(&[
        "glue",
        &data("tetrahedron.json"),
        &data("octahedron.json"),
        "--at",
        "1,2,4",
        "1,2,3",
        "--keep-common",
    ]);
    assert_eq!(kept["hyperedges"].as_array().unwrap().len(), 11);

    let v = json_ok(&["split", &data("tetrahedron.json"), "--subdivide", "1,2,3"]);
    assert_eq!(v["n"], 5);
    assert_eq!(v["hyperedges"].as_array().unwrap().len(), 6);

    let v = json_ok(&["split", &data("octahedron.json"), "--vertex", "1", "--fan", "1,2,3", "1,3,4"]);
    assert_eq!(v["n"], 7);
    assert_eq!(v["hyperedges"].as_array().unwrap().len(), 10);
}

#[test]
fn glued_output_round_trips() {
    let out = hypervol(&["glue", &data("tetrahedron.json"), &data("octahedron.json"), "--at", "1,2,4", "1,2,3"]);
    let path = temp_file("glued.json", &String::from_utf8(out.stdout.clone()).unwrap());
    let again = hypervol(&["split", &path, "--subdivide", "1,2,3"]);
    assert!(again.status.success());
    let check = json_ok(&["check-s2", &path]);
    assert_eq!(check["triangulation"], true);
}

#[test]
fn oracle_is_deterministic() {
    let args = ["oracle", &data("octahedron_framework.json"), "--starts", "40", "--seed", "5"];
    let a = hypervol(&args);
    let b = hypervol(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["count"], 2);
    assert_eq!(v["starts"], 40);
    assert!(v["residual_max"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["solutions"].as_array().unwrap().len(), 2);
}

#[test]
fn seed_flag_beats_environment() {
    let base = ["bipyramid", "--n", "9"];
    let flagged = hypervol(&[&base[..], &["--seed", "11"]].concat());
    let env = Command::new(env!("CARGO_BIN_EXE_hypervol")).args(base).env("HYPERVOL_SEED", "11").output().unwrap();
    assert_eq!(flagged.stdout, env.stdout);
    let both = Command::new(env!("CARGO_BIN_EXE_hypervol"))
        .args([&base[..], &["--seed", "11"]].concat())
        .env("HYPERVOL_SEED", "12")
        .output()
        .unwrap();
    assert_eq!(flagged.stdout, both.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_hypervol")).args(base).env("HYPERVOL_SEED", "x").output().unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn cross_validate_summary() {
    let v = json_ok(&["cross-validate", "--n", "6", "--instances", "3", "--seed", "1", "--starts", "60"]);
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
}

#[test]
fn text_format() {
    let out = hypervol(&["--format", "text", "bound", "--d", "2", "--n", "6"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("Catalan(n=6)"), "{text}");
}

#[test]
fn exit_codes() {
    let missing = hypervol(&["rank", "/nonexistent/framework.json"]);
    assert_eq!(missing.status.code(), Some(2));
    let err: Value = serde_json::from_slice(&missing.stderr).unwrap();
    assert_eq!(err["error"]["category"], "input");

    let garbage = temp_file("garbage.json", "{not json");
    assert_eq!(hypervol(&["check-s2", &garbage]).status.code(), Some(2));

    let flat = temp_file(
        "flat.json",
        r#"{"d":2,"n":4,"hyperedges":[[1,2,3],[1,2,4]],"points":[["0","0"],["1","1"],["2","2"],["3","3"]]}"#,
    );
    let out = hypervol(&["rank", &flat]);
    assert_eq!(out.status.code(), Some(3));
    let err: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"]["kind"], "flat-configuration");

    let flexible = temp_file(
        "flex.json",
        r#"{"d":2,"n":5,"hyperedges":[[1,2,3],[1,2,4],[3,4,5]],"points":[["0","0"],["1","0"],["0","1"],["2","3"],["5","7"]]}"#,
    );
    assert_eq!(hypervol(&["oracle", &flexible]).status.code(), Some(3));

    assert_eq!(hypervol(&["split", &data("octahedron.json"), "--subdivide", "1,2,9"]).status.code(), Some(2));
    assert_eq!(hypervol(&["bipyramid", "--n", "3"]).status.code(), Some(2));
}
