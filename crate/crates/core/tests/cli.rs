use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const CUBIC_UNIT: &str = "1->213 2->4 3->5 4->1 5->21";

fn run(args: &[&str], threads: Option<&str>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_subst-spectra"));
    c.args(args);
    match threads {
        Some(t) => c.env("SUBST_SPECTRA_THREADS", t),
        None => c.env_remove("SUBST_SPECTRA_THREADS"),
    };
    c.output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("JSON on stdout")
}

fn overlap(dir: &Path, file: &str) -> f64 {
    let v: Value = serde_json::from_str(&std::fs::read_to_string(dir.join(file)).unwrap()).unwrap();
    v["stats"]["exchange"]["overlap"].as_f64().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(
        run(&["analyze", "--rules", "a->ab b->"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["analyze", "--rules", "a->ab b->c"], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["render", "--mode", "bogus", "--rules", CUBIC_UNIT], None)
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        run(&["analyze", "--rules", CUBIC_UNIT], Some("zero"))
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["analyze"], None).status.code(), Some(2));

    // Reducible: the report is still printed.
    let o = run(&["analyze", "--rules", "a->ab b->b", "--json"], None);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["primitive"], Value::Bool(false));
    assert_eq!(
        run(&["spectrum", "--rules", "a->ab b->b"], None)
            .status
            .code(),
        Some(3)
    );

    assert_eq!(
        run(&["analyze", "--rules", CUBIC_UNIT], None).status.code(),
        Some(0)
    );
}

#[test]
fn reports_are_deterministic() {
    for cmd in ["analyze", "proprify", "spectrum", "classify"] {
        let a = run(&[cmd, "--rules", CUBIC_UNIT, "--json"], Some("1"));
        let b = run(&[cmd, "--rules", CUBIC_UNIT, "--json"], Some("3"));
        assert!(a.status.success(), "{cmd}");
        assert_eq!(a.stdout, b.stdout, "{cmd}");
    }
    let c = json(&run(&["classify", "--rules", CUBIC_UNIT, "--json"], None));
    assert_eq!(c["label"], "FINITE_EXTENSION");
    let p = json(&run(&["proprify", "--rules", CUBIC_UNIT, "--json"], None));
    assert_eq!(p["left_proper_power"], 2);
}

#[test]
fn render_writes_files_and_proprification_reduces_overlap() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let common = ["--rules", CUBIC_UNIT, "--points", "20000", "--out", out];

    let o = run(
        &[&["render", "--mode", "fractal", "--csv"][..], &common].concat(),
        Some("1"),
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    for f in [
        "fractal-proprified.svg",
        "fractal-proprified.json",
        "fractal-proprified.csv",
    ] {
        assert!(dir.path().join(f).is_file(), "{f}");
    }
    let svg = std::fs::read(dir.path().join("fractal-proprified.svg")).unwrap();
    let json1 = std::fs::read(dir.path().join("fractal-proprified.json")).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("fractal-proprified.csv")).unwrap();
    assert_eq!(csv.lines().count(), 20_001);

    let o = run(
        &[&["render", "--mode", "fractal", "--csv"][..], &common].concat(),
        Some("4"),
    );
    assert!(o.status.success());
    assert_eq!(
        std::fs::read(dir.path().join("fractal-proprified.svg")).unwrap(),
        svg
    );
    assert_eq!(
        std::fs::read(dir.path().join("fractal-proprified.json")).unwrap(),
        json1
    );

    let o = run(
        &[
            &["render", "--mode", "fractal", "--no-proprify"][..],
            &common,
        ]
        .concat(),
        None,
    );
    assert!(o.status.success());
    let with = overlap(dir.path(), "fractal-proprified.json");
    let without = overlap(dir.path(), "fractal.json");
    assert!(with < without, "overlap {with} vs {without}");

    for mode in ["exchange", "torus", "psi"] {
        let o = run(&[&["render", "--mode", mode][..], &common].concat(), None);
        assert!(
            o.status.success(),
            "{mode}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        assert!(
            dir.path().join(format!("{mode}-proprified.svg")).is_file(),
            "{mode}"
        );
    }
}

#[test]
fn reads_rules_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("rules.txt");
    std::fs::write(&f, "a->ab\nb->a\n").unwrap();
    let o = run(&["spectrum", "--file", f.to_str().unwrap(), "--json"], None);
    assert!(o.status.success());
    assert_eq!(json(&o)["lattice"]["rank"], 2);
}
