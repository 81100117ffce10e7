use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(format!("{name}.json"))
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_graphstore"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn status(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Builds a code for `graph` into `dir` and returns its path.
fn constructed(dir: &TempDir, graph: &str) -> PathBuf {
    let out = dir.path().join(format!("{graph}.code.json"));
    let res = run(&[
        "construct",
        path(&fixture(graph)),
        "--seed",
        "1",
        "-o",
        path(&out),
    ]);
    assert_eq!(status(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    out
}

const TOY_GRAPH: &str = r#"{"K": 2, "nodes": ["a", "b", "c"],
  "edges": [{"u": "a", "v": "b", "w": 1}, {"u": "b", "v": "c", "w": 2}]}"#;

fn toy_code(c_row: [u8; 2]) -> String {
    format!(
        r#"{{"p": 2, "K": 2, "lw": 1, "lv": 1,
  "nodes": {{"a": [[1, 0]], "b": [[1, 1]], "c": [[{}, {}]]}}}}"#,
        c_row[0], c_row[1]
    )
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, text).unwrap();
    p
}

#[test]
fn analyze_reports_internal_edges() {
    let out = run(&["analyze", path(&fixture("fig1"))]);
    assert_eq!(status(&out), 0);
    let report = json(&out);
    let internal = report["internal_edges"].as_array().unwrap();
    assert!(internal
        .iter()
        .any(|e| e["u"] == "V2" && e["v"] == "V6" && e["w"] == 2));
}

#[test]
fn analyze_fig3a_has_only_one_color_nodes() {
    let out = run(&["analyze", path(&fixture("fig3a"))]);
    assert_eq!(status(&out), 0);
    let report = json(&out);
    assert!(report["nodes"]
        .as_array()
        .unwrap()
        .iter()
        .all(|n| n["colors"] == 1));
}

#[test]
fn missing_or_malformed_input_exits_2() {
    let dir = TempDir::new().unwrap();
    assert_eq!(status(&run(&["analyze", "/definitely/not/here.json"])), 2);
    let bad = write(
        &dir,
        "bad.json",
        r#"{"K": 2, "nodes": ["a"], "edges": [], "x": 0}"#,
    );
    assert_eq!(status(&run(&["classify", path(&bad), "--seed", "0"])), 2);
    let looped = write(
        &dir,
        "loop.json",
        r#"{"K": 1, "nodes": ["a"], "edges": [{"u": "a", "v": "a", "w": 1}]}"#,
    );
    assert_eq!(status(&run(&["analyze", path(&looped)])), 2);
    assert_eq!(status(&run(&["frobnicate"])), 2);
    let out = run(&[
        "construct",
        path(&fixture("fig5a")),
        "--rate",
        "5/4",
        "--seed",
        "0",
    ]);
    assert_eq!(status(&out), 2);
}

#[test]
fn analyze_overflow_exits_3() {
    let out = run(&["analyze", path(&fixture("fig1")), "--path-limit", "0"]);
    assert_eq!(status(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("limit"));
}

#[test]
fn classify_fixtures() {
    for (name, class, value) in [
        ("fig1", "exact", "4/3"),
        ("fig3b", "exact", "3/2"),
        ("fig3a", "exact", "2/1"),
    ] {
        let out = run(&["classify", path(&fixture(name)), "--seed", "0"]);
        assert_eq!(status(&out), 0, "{name}");
        let v = json(&out);
        assert_eq!(v["class"], class, "{name}");
        assert_eq!(v["capacity"], value, "{name}");
    }
    let out = run(&["classify", path(&fixture("fig6")), "--seed", "0"]);
    assert_eq!(status(&out), 0);
    let v = json(&out);
    assert_eq!(v["upper"], "4/3");
    assert_eq!(v["strict_upper"], true);
    assert!(v["rules"].as_array().unwrap().iter().any(|r| r == "thm3"));
}

#[test]
fn classify_overflow_still_emits_unknown_and_exits_3() {
    let out = run(&[
        "classify",
        path(&fixture("fig6")),
        "--seed",
        "0",
        "--path-limit",
        "0",
    ]);
    assert_eq!(status(&out), 3);
    let v = json(&out);
    assert_eq!(v["class"], "unknown");
    assert_eq!(v["limit_exceeded"], true);
}

#[test]
fn classify_warns_about_default_seed() {
    let out = run(&["classify", path(&fixture("fig3a"))]);
    assert_eq!(status(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed 0"));
    let quiet = run(&["classify", path(&fixture("fig3a")), "--seed", "0"]);
    assert!(!String::from_utf8_lossy(&quiet.stderr).contains("warning"));
}

#[test]
fn construct_reports_rule_and_verifies() {
    let dir = TempDir::new().unwrap();
    let out_path = dir.path().join("fig7.code.json");
    let out = run(&[
        "construct",
        path(&fixture("fig7")),
        "--rate",
        "4/3",
        "--seed",
        "1",
        "-o",
        path(&out_path),
    ]);
    assert_eq!(status(&out), 0);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(
        msg.contains("rule thm4") && msg.contains("attempt"),
        "{msg}"
    );
    assert!(out.stdout.is_empty());
    let verified = run(&["verify", path(&fixture("fig7")), path(&out_path)]);
    assert_eq!(status(&verified), 0);

    let out = run(&["construct", path(&fixture("fig3a")), "--seed", "0"]);
    assert_eq!(status(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("rule thm1"));
    let code = json(&out);
    assert_eq!(
        (code["lw"].as_u64(), code["lv"].as_u64()),
        (Some(2), Some(1))
    );
}

#[test]
fn construct_without_applicable_rule_exits_4() {
    let out = run(&[
        "construct",
        path(&fixture("fig8")),
        "--rate",
        "4/3",
        "--seed",
        "0",
    ]);
    assert_eq!(status(&out), 4);
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("thm2") && msg.contains("thm4"), "{msg}");
}

#[test]
fn verify_exit_codes() {
    let dir = TempDir::new().unwrap();
    let code = constructed(&dir, "fig5a");
    let out = run(&["verify", path(&fixture("fig5a")), path(&code)]);
    assert_eq!(status(&out), 0);
    assert_eq!(json(&out)["pass"], true);

    let mut zeroed: Value = serde_json::from_str(&fs::read_to_string(&code).unwrap()).unwrap();
    for rows in zeroed["nodes"].as_object_mut().unwrap().values_mut() {
        for row in rows.as_array_mut().unwrap() {
            for x in row.as_array_mut().unwrap() {
                *x = 0.into();
            }
        }
    }
    let zeroed = write(&dir, "zero.json", &zeroed.to_string());
    let out = run(&["verify", path(&fixture("fig5a")), path(&zeroed)]);
    assert_eq!(status(&out), 1);
    assert_eq!(json(&out)["pass"], false);

    let other = constructed(&dir, "fig7");
    assert_eq!(
        status(&run(&["verify", path(&fixture("fig5a")), path(&other)])),
        2
    );
}

#[test]
fn verify_emits_decoders_and_ignores_job_count() {
    let dir = TempDir::new().unwrap();
    let code = constructed(&dir, "fig5a");
    let graph = fixture("fig5a");
    let serial = run(&["verify", path(&graph), path(&code)]);
    let parallel = run(&["verify", path(&graph), path(&code), "--jobs", "4"]);
    assert_eq!(serial.stdout, parallel.stdout);

    let out = run(&["verify", path(&graph), path(&code), "--emit-decoder"]);
    assert_eq!(status(&out), 0);
    let report = json(&out);
    let decoders = report["decoders"].as_array().unwrap();
    assert_eq!(
        decoders.len(),
        report["edge_count"].as_u64().unwrap() as usize
    );
    // Each decoder maps the 6 stored symbols of an edge to 4 source symbols.
    let d = decoders[0]["decoder"].as_array().unwrap();
    assert_eq!(d.len(), 4);
    assert_eq!(d[0].as_array().unwrap().len(), 6);
}

#[test]
fn oracle_agrees_on_toy_codes() {
    let dir = TempDir::new().unwrap();
    let graph = write(&dir, "toy.json", TOY_GRAPH);
    let good = write(&dir, "good.json", &toy_code([0, 1]));
    let out = run(&["oracle", path(&graph), path(&good)]);
    assert_eq!(status(&out), 0);
    let report = json(&out);
    assert_eq!(report["agree"], true);
    assert!(report["edges"]
        .as_array()
        .unwrap()
        .iter()
        .all(|e| e["oracle"] == true && e["rank_criterion"] == true));

    // c stores the same symbol as b, so W_2 is lost on {b, c}.
    let bad = write(&dir, "bad.json", &toy_code([1, 1]));
    let out = run(&["oracle", path(&graph), path(&bad)]);
    assert_eq!(status(&out), 0);
    let edge = &json(&out)["edges"][1];
    assert_eq!(
        (edge["oracle"].clone(), edge["rank_criterion"].clone()),
        (false.into(), false.into())
    );
    assert_eq!(status(&run(&["verify", path(&graph), path(&bad)])), 1);
}

#[test]
fn oracle_cap_exits_3() {
    let dir = TempDir::new().unwrap();
    let code = constructed(&dir, "fig5a");
    let out = run(&["oracle", path(&fixture("fig5a")), path(&code)]);
    assert_eq!(status(&out), 3);
    let toy_graph = write(&dir, "toy.json", TOY_GRAPH);
    let toy = write(&dir, "toy.code.json", &toy_code([0, 1]));
    let out = run(&["oracle", path(&toy_graph), path(&toy), "--oracle-cap", "2"]);
    assert_eq!(status(&out), 3);
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        vec!["classify", "fig7", "--seed", "9"],
        vec!["construct", "fig9", "--seed", "9"],
        vec!["analyze", "fig1"],
    ] {
        let graph = fixture(args[1]);
        let mut argv = args.clone();
        argv[1] = path(&graph);
        let a = run(&argv);
        let b = run(&argv);
        assert_eq!(status(&a), 0);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert_eq!(a.stderr, b.stderr, "{args:?}");
    }
}
