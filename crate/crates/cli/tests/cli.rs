//! End-to-end tests of the binary: document dispatch, exit codes,
//! deterministic output, and the machine-readable error field.

use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_graphact"))
}

fn write(dir: &Path, name: &str, contents: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path.to_str().unwrap().to_owned()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stdout_json(output: &Output) -> Value {
    assert!(
        !output.stdout.is_empty(),
        "expected JSON on stdout, stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).unwrap()
}

const TWO_CYCLE: &str = r#"{"vertices":["0","1"],"edges":[{"id":"e0","src":"0","rng":"1"},{"id":"e1","src":"1","rng":"0"}]}"#;
const BOUQUET_ONE: &str = r#"{"vertices":["v"],"edges":[{"id":"e","src":"v","rng":"v"}]}"#;
const BOUQUET_TWO: &str =
    r#"{"vertices":["v"],"edges":[{"id":"e","src":"v","rng":"v"},{"id":"f","src":"v","rng":"v"}]}"#;
const COCYCLE_Z2: &str = r#"{"group":{"kind":"cyclic","order":2},"label":{"e":"1"}}"#;
const SWAP_ACTION: &str = r#"{"group":{"kind":"cyclic","order":2},"act_v":{"1":{"0":"1","1":"0"}},"act_e":{"1":{"e0":"e1","e1":"e0"}}}"#;

#[test]
fn validate_roundtrip_is_byte_identical() {
    let dir = TempDir::new().unwrap();
    // scrambled input: unsorted ids
    let scrambled = r#"{"vertices":["b","a"],"edges":[{"id":"f","src":"b","rng":"a"},{"id":"e","src":"a","rng":"b"}]}"#;
    let input = write(dir.path(), "g.json", scrambled);
    let first = run(&["validate", "--in", &input]);
    assert!(first.status.success());
    let canonical = write(
        dir.path(),
        "canon.json",
        &serde_json::to_string(&stdout_json(&first)["graph"]).unwrap(),
    );
    let second = run(&["validate", "--in", &canonical]);
    assert!(second.status.success());
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn skew_of_one_loop_by_z2_is_the_two_cycle() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "b1.json", BOUQUET_ONE);
    let cocycle = write(dir.path(), "c.json", COCYCLE_Z2);
    let output = run(&["skew", "--in", &graph, "--in", &cocycle]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(doc["graph"]["edges"].as_array().unwrap().len(), 2);
    assert!(doc["action"]["act_v"].is_object());
    // each skew edge projects back to the base loop
    assert_eq!(doc["projection"]["e_map"]["e|0"], "e");
}

#[test]
fn quotient_and_extraction_of_the_swap_action() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "g.json", TWO_CYCLE);
    let action = write(dir.path(), "a.json", SWAP_ACTION);
    let output = run(&["quotient", "--in", &graph, "--in", &action]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 1);
    assert_eq!(doc["graph"]["edges"].as_array().unwrap().len(), 1);

    let output = run(&["extract-cocycle", "--in", &graph, "--in", &action]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["cocycle"]["label"]["e0"], "1");
    assert_eq!(doc["quotient"]["vertices"][0], "0");
    assert!(doc["iso"]["v_map"].is_object());
}

#[test]
fn pi1_of_the_bouquet_has_rank_two() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "b2.json", BOUQUET_TWO);
    let output = run(&["pi1", "--in", &graph]);
    assert!(output.status.success());
    assert_eq!(stdout_json(&output)["rank"], 2);
}

#[test]
fn cayley_and_cover_subcommands() {
    let dir = TempDir::new().unwrap();
    let gens = write(
        dir.path(),
        "gens.json",
        r#"{"group":{"kind":"cyclic","order":3},"generators":["1"]}"#,
    );
    let output = run(&["cayley", "--in", &gens]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 3);

    let graph = write(dir.path(), "b2.json", BOUQUET_TWO);
    let output = run(&["cover", "--in", &graph, "--radius", "1"]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 5);
    assert_eq!(doc["boundary"].as_array().unwrap().len(), 4);
    assert_eq!(doc["basepoint"], "v");

    // cover without --radius is a usage error
    let output = run(&["cover", "--in", &graph]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn derived_cover_with_regular_fiber() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "b1.json", BOUQUET_ONE);
    let cocycle = write(dir.path(), "c.json", COCYCLE_Z2);
    let perm = write(
        dir.path(),
        "sigma.json",
        r#"{"group":{"kind":"cyclic","order":2},"perms":"regular"}"#,
    );
    let output = run(&[
        "derived-cover",
        "--in",
        &graph,
        "--in",
        &cocycle,
        "--in",
        &perm,
    ]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(doc["graph"]["edges"].as_array().unwrap().len(), 2);
}

#[test]
fn circle_and_bs_tree() {
    let dir = TempDir::new().unwrap();
    let circle = write(dir.path(), "c23.json", r#"{"n":2,"m":3}"#);
    let output = run(&["circle", "--in", &circle]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["pi1"]["relators"][0], "a*b^2*a^-1*b^-3");
    assert_eq!(doc["pi1"]["tags"]["amenability"], "non-amenable");
    assert_eq!(doc["algebra"]["simple"], true);
    assert_eq!(doc["universal_cover"]["vertex_space"], "T0 x R");

    let output = run(&["bs-tree", "--in", &circle, "--radius", "1"]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["graph"]["vertices"].as_array().unwrap().len(), 6);
    assert_eq!(doc["graph"]["edges"].as_array().unwrap().len(), 5);
}

#[test]
fn ktheory_on_graphs_and_matrices() {
    let dir = TempDir::new().unwrap();
    let graph = write(
        dir.path(),
        "b3.json",
        r#"{"vertices":["v"],"edges":[{"id":"e0","src":"v","rng":"v"},{"id":"e1","src":"v","rng":"v"},{"id":"e2","src":"v","rng":"v"}]}"#,
    );
    let output = run(&["ktheory", "--in", &graph]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["k0_free_rank"], 0);
    assert_eq!(doc["k0_torsion"][0], "2");
    assert_eq!(doc["k1_free_rank"], 0);

    let matrix = write(
        dir.path(),
        "m.json",
        r#"{"rows":2,"cols":2,"entries":[["1","-2"],["-2","1"]]}"#,
    );
    let output = run(&["ktheory", "--in", &matrix]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["d"]["entries"][0][0], "1");
    assert_eq!(doc["d"]["entries"][1][1], "3");
}

#[test]
fn morita_verdicts() {
    let dir = TempDir::new().unwrap();
    let two_cycle = write(dir.path(), "tc.json", TWO_CYCLE);
    let loop_graph = write(dir.path(), "b1.json", BOUQUET_ONE);
    let output = run(&["morita", "--in", &two_cycle, "--in", &loop_graph]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["verdict"], "consistent");
    assert!(doc["note"]
        .as_str()
        .unwrap()
        .contains("necessary condition"));

    let bouquet2 = write(dir.path(), "b2.json", BOUQUET_TWO);
    let bouquet3 = write(
        dir.path(),
        "b3.json",
        r#"{"vertices":["v"],"edges":[{"id":"e0","src":"v","rng":"v"},{"id":"e1","src":"v","rng":"v"},{"id":"e2","src":"v","rng":"v"}]}"#,
    );
    let output = run(&["morita", "--in", &bouquet2, "--in", &bouquet3]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    assert_eq!(doc["verdict"], "refuted");
    assert!(doc["component"].as_str().unwrap().contains("k0_torsion"));
}

#[test]
fn check_reports_pass_lines() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "g.json", TWO_CYCLE);
    let action = write(dir.path(), "a.json", SWAP_ACTION);
    let cocycle = write(
        dir.path(),
        "c.json",
        r#"{"group":{"kind":"cyclic","order":2},"label":{"e0":"1","e1":"0"}}"#,
    );
    let output = run(&["check", "--in", &graph, "--in", &action, "--in", &cocycle]);
    assert!(output.status.success());
    let doc = stdout_json(&output);
    let checks = doc["checks"].as_array().unwrap();
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    assert!(names.contains(&"pi1_rank_formula"));
    assert!(names.contains(&"cover_ball_tree"));
    assert!(names.contains(&"gross_tucker_roundtrip"));
    assert!(names.contains(&"fiber_bound"));
    assert!(names.contains(&"quotient_of_skew_roundtrip"));
    for check in checks {
        assert_eq!(check["status"], "pass", "{check}");
    }
}

#[test]
fn dot_export_is_stable() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "g.json", TWO_CYCLE);
    let expected = "digraph G {\n  \"0\";\n  \"1\";\n  \"0\" -> \"1\" [label=\"e0\"];\n  \"1\" -> \"0\" [label=\"e1\"];\n}\n";
    let first = run(&["export-dot", "--in", &graph]);
    assert!(first.status.success());
    assert_eq!(String::from_utf8(first.stdout).unwrap(), expected);
    // --format dot on a graph-valued result gives the same text
    let via_flag = run(&["validate", "--in", &graph, "--format", "dot"]);
    assert_eq!(String::from_utf8(via_flag.stdout).unwrap(), expected);

    let empty = write(dir.path(), "empty.json", r#"{"vertices":[],"edges":[]}"#);
    let output = run(&["export-dot", "--in", &empty]);
    assert_eq!(
        String::from_utf8(output.stdout).unwrap(),
        "digraph G {\n}\n"
    );
}

#[test]
fn exit_codes_and_error_fields() {
    let dir = TempDir::new().unwrap();
    // domain error: dangling endpoint, machine-readable name, exit 1
    let bad = write(
        dir.path(),
        "bad.json",
        r#"{"vertices":["v"],"edges":[{"id":"e","src":"v","rng":"w"}]}"#,
    );
    let output = run(&["validate", "--in", &bad]);
    assert_eq!(output.status.code(), Some(1));
    let doc = stdout_json(&output);
    assert_eq!(doc["error"], "DanglingEndpoint");
    assert!(doc["message"]
        .as_str()
        .unwrap()
        .contains("missing vertex w"));

    // domain error passthrough: non-free action
    let graph = write(dir.path(), "g.json", r#"{"vertices":["v"],"edges":[]}"#);
    let trivial_action = write(
        dir.path(),
        "a.json",
        r#"{"group":{"kind":"cyclic","order":2},"act_v":{"1":{"v":"v"}},"act_e":{"1":{}}}"#,
    );
    let output = run(&["quotient", "--in", &graph, "--in", &trivial_action]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(stdout_json(&output)["error"], "NotFree");

    // usage errors: unknown subcommand, unknown flag, wrong dot target
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["pi1", "--nope"]).status.code(), Some(2));
    let b2 = write(dir.path(), "b2.json", BOUQUET_TWO);
    assert_eq!(
        run(&["pi1", "--in", &b2, "--format", "dot"]).status.code(),
        Some(2)
    );

    // truncation required for an infinite group
    let f2gens = write(
        dir.path(),
        "f2.json",
        r#"{"group":{"kind":"free","rank":2},"generators":["a","b"]}"#,
    );
    let output = run(&["cayley", "--in", &f2gens]);
    assert_eq!(output.status.code(), Some(1));
    assert_eq!(stdout_json(&output)["error"], "TruncationRequired");
    let output = run(&["cayley", "--in", &f2gens, "--radius", "1"]);
    assert!(output.status.success());
    assert_eq!(
        stdout_json(&output)["graph"]["vertices"]
            .as_array()
            .unwrap()
            .len(),
        5
    );
}

#[test]
fn out_flag_writes_the_file() {
    let dir = TempDir::new().unwrap();
    let graph = write(dir.path(), "g.json", TWO_CYCLE);
    let out = dir.path().join("result.json");
    let output = run(&["classes", "--in", &graph, "--out", out.to_str().unwrap()]);
    assert!(output.status.success());
    assert!(output.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["sources"].as_array().unwrap().len(), 0);
    assert_eq!(doc["regular"].as_array().unwrap().len(), 2);
}
