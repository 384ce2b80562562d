use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_strathom")).args(args).output().expect("binary runs")
}

fn report(args: &[&str], code: i32) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("JSON report")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn comparisons(r: &Value) -> &Vec<Value> {
    r["result"]["comparisons"].as_array().unwrap()
}

#[test]
fn manifold_sanity_case() {
    let r = report(&["verify", "main-theorem", "--space", "sphere-3", "--perversity", "zero"], 0);
    let c = &comparisons(&r)[0];
    assert_eq!(c["equal"], true);
    assert_eq!(c["hypercohomology"], serde_json::json!({"0": 1, "3": 1}));
    assert_eq!(r["verdict"], "pass");
}

#[test]
fn suspended_torus_tables_depend_on_perversity() {
    let zero = report(&["verify", "main-theorem", "--space", "sigma-t2", "--perversity", "zero"], 0);
    let top = report(&["verify", "main-theorem", "--space", "sigma-t2", "--perversity", "top"], 0);
    let (z, t) = (&comparisons(&zero)[0], &comparisons(&top)[0]);
    assert_eq!(z["equal"], true);
    assert_eq!(t["equal"], true);
    assert_ne!(z["hypercohomology"], t["hypercohomology"]);
}

#[test]
fn pinched_torus_and_all_presets() {
    let r = report(&["verify", "main-theorem", "--space", "pinched-torus"], 0);
    assert_eq!(comparisons(&r).len(), 4);
    assert!(comparisons(&r).iter().all(|c| c["equal"] == true));
}

#[test]
fn reports_embed_versions_seed_and_convention() {
    let r = report(&["--seed", "7", "ih", "compute", "--space", "cone-s1", "--perversity", "zero"], 0);
    assert_eq!(r["seed"], 7);
    assert_eq!(r["versions"]["library"], env!("CARGO_PKG_VERSION"));
    assert!(r["convention"].as_str().unwrap().contains("IH_{n-i}"));
    assert_eq!(r["config"]["args"]["perversity"], "zero");
}

#[test]
fn keyed_perversity_matches_positional() {
    let a = report(&["ih", "compute", "--space", "sigma-t2", "--perversity", "k2=0,k3=1"], 0);
    let b = report(&["ih", "compute", "--space", "sigma-t2", "--perversity", "0,1"], 0);
    let c = report(&["ih", "compute", "--space", "sigma-t2", "--perversity", "top"], 0);
    assert_eq!(a["result"]["ih"], b["result"]["ih"]);
    assert_eq!(a["result"]["ih"], c["result"]["ih"]);
}

#[test]
fn degree_bounds_crop_tables() {
    let r = report(&["--degrees", "1:2", "ih", "compute", "--space", "sigma-t2", "--perversity", "top"], 0);
    let keys: Vec<&String> = r["result"]["ih"].as_object().unwrap().keys().collect();
    assert!(keys.iter().all(|k| *k == "1" || *k == "2"), "{keys:?}");
}

#[test]
fn selftest_tiny_passes_and_echoes_counterexamples() {
    let r = report(&["props", "selftest", "--sizes", "tiny"], 0);
    let rep = &r["result"]["report"];
    assert_eq!(rep["exhaustive"], true);
    let names: Vec<&str> = rep["counterexamples"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.iter().any(|n| n.contains("Morgan")), "{names:?}");
    assert!(rep["counterexamples"].as_array().unwrap().iter().all(|c| c["reproduced"] == true));
    assert!(r["result"]["failing"].as_array().unwrap().is_empty());
}

#[test]
fn fixed_seed_gives_identical_bytes() {
    let args = ["--seed", "11", "props", "selftest", "--instances", "150", "--no-exhaustive"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let other = run(&["--seed", "12", "props", "selftest", "--instances", "150", "--no-exhaustive"]);
    assert_ne!(a.stdout, other.stdout);
}

#[test]
fn built_sheaf_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p.json");
    let path = path.to_str().unwrap();
    let built = report(&["deligne", "build", "--space", "sigma-t2", "--perversity", "zero", "--out", path, "--dump-stalks"], 0);
    assert!(!built["result"]["stalks"].as_object().unwrap().is_empty());
    let ok = report(&["deligne", "check", "--space", "sigma-t2", "--perversity", "zero", "--sheaf", path], 0);
    assert_eq!(ok["result"]["failing_stages"], serde_json::json!([]));
    // the zero fold truncates the T² link too early for the top perversity
    let bad = report(&["deligne", "check", "--space", "sigma-t2", "--perversity", "top", "--sheaf", path], 1);
    assert_eq!(bad["verdict"], "mismatch");
    assert_eq!(bad["result"]["failing_stages"], serde_json::json!([3]));
    let h = report(&["hyper", "--space", "sigma-t2", "--sheaf", path], 0);
    assert_eq!(h["result"]["hypercohomology"], built["result"]["hypercohomology"]);
}

#[test]
fn constant_sheaf_hypercohomology_is_ordinary_cohomology() {
    let r = report(&["hyper", "--space", "pinched-torus"], 0);
    assert_eq!(r["result"]["hypercohomology"], r["result"]["homology"]);
    assert_eq!(r["result"]["homology"], serde_json::json!({"0": 1, "1": 1, "2": 1}));
}

#[test]
fn delta_subtraction_double_complement() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tri.json", r#"{"vertices":["a","b","c"],"maximal_simplices":[["a","b","c"]]}"#);
    let r = report(&["complex", "op", "minus", "--file", &f, "--y", "a,b,c", "--z", "a,b;b,c;a,c"], 0);
    assert_eq!(r["result"]["simplices"], 0);
    let r = report(&["complex", "op", "minus", "--file", &f, "--y", "a,b,c", "--z", "a"], 0);
    assert_eq!(r["result"]["maximal"], serde_json::json!([["b", "c"]]));
    let r = report(&["complex", "op", "sd", "--file", &f], 0);
    assert_eq!(r["result"]["summary"]["f_vector"], serde_json::json!([7, 12, 6]));
}

#[test]
fn file_inputs_for_a_stratified_space() {
    let dir = tempfile::tempdir().unwrap();
    let k = write(
        dir.path(),
        "cone.json",
        r#"{"vertices":["a","b","c","o"],"maximal_simplices":[["a","b","o"],["b","c","o"],["a","c","o"]]}"#,
    );
    let s = write(dir.path(), "cone.strata.json", r#"{"filtration":[["o"],["o"]],"n":2}"#);
    let r = report(&["strata", "check", "--complex", &k, "--strata", &s], 0);
    assert_eq!(r["result"]["has_boundary"], true);
    assert_eq!(r["result"]["euler_failures"], serde_json::json!([]));
    let v = report(&["verify", "main-theorem", "--complex", &k, "--strata", &s], 0);
    assert!(comparisons(&v).iter().all(|c| c["equal"] == true));
}

#[test]
fn topology_dot_dump() {
    let out = run(&["topology", "basis", "--space", "cone-s1", "--dot"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("// strathom"));
    assert!(text.contains("digraph basis"));
    let r = report(&["topology", "basis", "--space", "cone-s1"], 0);
    assert_eq!(r["result"]["open_chain"].as_array().unwrap().len(), 2);
}

#[test]
fn text_format_renders_tables_inline() {
    let out = run(&["--format", "text", "hyper", "--space", "sphere-2"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("hypercohomology: 0:1 2:1"), "{text}");
    assert!(text.contains("verdict: pass"));
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"vertices\": [\"a\"],\n \"maximal_simplices\": [[\"a\",]]}");
    let out = run(&["complex", "info", "--file", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("line 2"), "{err}");
    assert_eq!(run(&["ih", "compute", "--space", "klein-bottle", "--perversity", "zero"]).status.code(), Some(2));
    assert_eq!(run(&["ih", "compute", "--space", "sigma-t2", "--perversity", "k2=1,k3=1"]).status.code(), Some(2));
    assert_eq!(run(&["ih", "compute", "--perversity", "zero"]).status.code(), Some(2));
    let capped = Command::new(env!("CARGO_BIN_EXE_strathom"))
        .args(["complex", "info", "--space", "cone-s1"])
        .env("STRATHOM_THREADS", "none")
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(2));
}

#[test]
fn thread_cap_does_not_change_results() {
    let args = ["verify", "main-theorem", "--space", "cone-s2", "--perversity", "top"];
    let one = Command::new(env!("CARGO_BIN_EXE_strathom")).args(args).env("STRATHOM_THREADS", "1").output().unwrap();
    let free = run(&args);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, free.stdout);
}
