//! End-to-end runs of the binary against the fixture documents.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.pop();
    p.pop();
    p.push("fixtures");
    p.push(name);
    p.display().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_trusskit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON ({e}): {}",
            String::from_utf8_lossy(&out.stdout)
        )
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn validate_passes_on_the_fixture_corpus() {
    for name in [
        "wire.json",
        "crossing.json",
        "vertex.json",
        "nf-line.json",
        "horizontal-wire.json",
        "collapse-ghost.json",
        "collapse-marked.json",
    ] {
        let out = run(&["validate", &fixture(name)]);
        assert_eq!(code(&out), 0, "{name}: {}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(report(&out)["pass"], Value::Bool(true), "{name}");
    }
}

#[test]
fn validate_reports_broken_functoriality() {
    let out = run(&["validate", &fixture("broken.json")]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["pass"], Value::Bool(false));
    assert!(!r["issues"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_input_exits_2() {
    let out = run(&["validate", "/no/such/file.json"]);
    assert_eq!(code(&out), 2);
    assert!(report(&out)["error"].is_string());

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn normalize_shrinks_the_marked_line() {
    let dir = tempfile::tempdir().unwrap();
    let nf = dir.path().join("nf.json");
    let out = run(&["normalize", &fixture("nf-line.json"), "--out", nf.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    let lines: Vec<Value> = String::from_utf8_lossy(&out.stdout)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines[0]["steps"], Value::from(1));
    assert_eq!(lines[0]["degeneracy"], Value::Bool(true));
    assert_eq!(lines[0]["nf"]["levels"][0]["fibers"][""], Value::from(2));

    let again = run(&["normalize", nf.to_str().unwrap()]);
    assert_eq!(code(&again), 0);
    assert_eq!(report(&again)["steps"], Value::from(0));
}

#[test]
fn grid_dualize_compactify_round_trip_through_files() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.json");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    assert_eq!(code(&run(&["grid", "2,1", "--flavor", "closed", "--out", g.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["dualize", g.to_str().unwrap(), "--out", a.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["dualize", a.to_str().unwrap(), "--out", b.to_str().unwrap()])), 0);
    let load = |p: &PathBuf| -> Value {
        serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
    };
    assert_eq!(load(&g), load(&b));
    assert_eq!(load(&a)["kind"], Value::from("open"));

    let l = dir.path().join("l.json");
    let c = dir.path().join("c.json");
    assert_eq!(code(&run(&["grid", "2", "--out", l.to_str().unwrap()])), 0);
    assert_eq!(code(&run(&["compactify", l.to_str().unwrap(), "--out", c.to_str().unwrap()])), 0);
    assert_eq!(load(&c)["kind"], Value::from("closed"));
    assert_eq!(code(&run(&["validate", c.to_str().unwrap()])), 0);
}

#[test]
fn atoms_and_stype_describe_the_crossing() {
    let out = run(&["atoms", &fixture("crossing.json")]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["is_atom"], Value::Bool(true));
    let entries = r["atoms"].as_array().unwrap();
    assert_eq!(entries.len(), 9);
    let center = entries
        .iter()
        .find(|e| e["element"] == Value::from("s0/s0"))
        .unwrap();
    assert_eq!(center["members"].as_array().unwrap().len(), 9);

    let out = run(&["stype", &fixture("wire.json")]);
    let r = report(&out);
    assert_eq!(r["stype"], serde_json::json!([1, 0]));
    assert_eq!(r["sdepth"], Value::from(1));
}

#[test]
fn factorize_then_compose_recovers_the_bordism() {
    let out = run(&["factorize", &fixture("collapse-ghost.json")]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    let dir = tempfile::tempdir().unwrap();
    let active = dir.path().join("active.json");
    let inert = dir.path().join("inert.json");
    std::fs::write(&active, r["active"].to_string()).unwrap();
    std::fs::write(&inert, r["inert"].to_string()).unwrap();
    let composed = run(&[
        "compose",
        active.to_str().unwrap(),
        inert.to_str().unwrap(),
    ]);
    assert_eq!(code(&composed), 0);
    let original: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("collapse-ghost.json")).unwrap())
            .unwrap();
    assert_eq!(report(&composed), original);
}

#[test]
fn diagrammatic_and_submersive_checks_split_the_fixtures() {
    assert_eq!(code(&run(&["check-diagrammatic", &fixture("wire.json")])), 0);
    assert_eq!(
        code(&run(&["check-diagrammatic", &fixture("horizontal-wire.json")])),
        1
    );
    assert_eq!(code(&run(&["check-submersive", &fixture("collapse-ghost.json")])), 0);
    assert_eq!(
        code(&run(&[
            "check-submersive",
            &fixture("collapse-ghost.json"),
            "--exhaustive",
            "--bound",
            "32",
        ])),
        0
    );
    assert_eq!(
        code(&run(&["check-submersive", &fixture("collapse-marked.json")])),
        1
    );
}

#[test]
fn canonicalize_fixes_the_cube_frame_once() {
    let dir = tempfile::tempdir().unwrap();
    let c = dir.path().join("c.json");
    let out = run(&[
        "canonicalize",
        &fixture("cube-diagram.json"),
        "--out",
        c.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let first: Value = serde_json::from_str(
        String::from_utf8_lossy(&out.stdout).lines().next().unwrap(),
    )
    .unwrap();
    assert_eq!(first["was_canonical"], Value::Bool(false));
    assert_eq!(
        first["diagram"]["diagram"]["labels"].as_object().unwrap().len(),
        9
    );
    let again = run(&["canonicalize", c.to_str().unwrap()]);
    assert_eq!(code(&again), 0);
    let r: Value = serde_json::from_str(
        String::from_utf8_lossy(&again.stdout).lines().next().unwrap(),
    )
    .unwrap();
    assert_eq!(r["was_canonical"], Value::Bool(true));
}

#[test]
fn typecheck_accepts_the_derived_labelling() {
    for sig in ["free:2", &fixture("signature-free-2.json")] {
        let out = run(&["typecheck", &fixture("crossing.json"), "--signature", sig]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
        assert_eq!(report(&out)["pass"], Value::Bool(true));
    }

    let mut doc: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("crossing.json")).unwrap()).unwrap();
    doc["generators"]["s0/s0"] = Value::from("g[0,0]");
    let dir = tempfile::tempdir().unwrap();
    let wrong = dir.path().join("wrong.json");
    std::fs::write(&wrong, doc.to_string()).unwrap();
    let out = run(&["typecheck", wrong.to_str().unwrap(), "--signature", "free:2"]);
    assert_eq!(code(&out), 1);
    let r = report(&out);
    assert_eq!(r["violations"].as_array().unwrap().len(), 1);
    assert_eq!(r["violations"][0]["element"], Value::from("s0/s0"));
}

#[test]
fn render_is_byte_stable_and_slices_write_files() {
    let a = run(&["render", &fixture("wire.json")]);
    let b = run(&["render", &fixture("wire.json")]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(a.stdout.starts_with(b"<svg "));

    let out = run(&["render", &fixture("wire.json"), "--format", "json"]);
    let r = report(&out);
    assert_eq!(r["vertices"].as_array().unwrap().len(), 0);
    assert_eq!(r["wires"].as_array().unwrap().len(), 1);
    assert_eq!(r["regions"].as_array().unwrap().len(), 2);

    let dir = tempfile::tempdir().unwrap();
    let g3 = dir.path().join("g3.json");
    assert_eq!(code(&run(&["grid", "1,1,1", "--out", g3.to_str().unwrap()])), 0);
    let prefix = dir.path().join("slice.svg");
    let out = run(&["render", g3.to_str().unwrap(), "--out", prefix.to_str().unwrap()]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let written = report(&out)["written"].as_array().unwrap().len();
    assert_eq!(written, 3);
    assert!(dir.path().join("slice-0-r0.svg").exists());
}

#[test]
fn homs_enumerates_monotone_maps_with_relations() {
    let out = run(&["homs", "1", "1"]);
    assert_eq!(code(&out), 0);
    let r = report(&out);
    assert_eq!(r["count"], Value::from(3));
    let ident = r["maps"]
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["values"] == serde_json::json!([0, 1]))
        .unwrap();
    let rels = ident["relations"].as_array().unwrap();
    assert!(rels.contains(&Value::from("s0->s0")));
    assert!(rels.contains(&Value::from("s0->r0")));
    assert!(!rels.contains(&Value::from("r0->s0")));

    let out = run(&["homs", "2", "1", "--flavor", "closed"]);
    assert_eq!(report(&out)["count"], Value::from(4));
}
