use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn icc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_icc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn check(file: &str, extra: &[&str]) -> Output {
    let path = data(file);
    let mut args = vec!["check", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    icc(&args)
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn validator() -> jsonschema::Validator {
    let text =
        std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("schema/report.schema.json")).unwrap();
    let schema: Value = serde_json::from_str(&text).unwrap();
    jsonschema::validator_for(&schema).expect("schema compiles")
}

#[test]
fn klein_json_has_the_two_element_class() {
    let out = check("klein.ext", &["--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["verdict"], "not_icc");
    assert_eq!(j["witness"]["kind"], "kernel_vector");
    assert_eq!(j["witness"]["vector"], serde_json::json!([1]));
    assert_eq!(j["witness"]["orbit"], serde_json::json!([[1], [-1]]));
    assert_eq!(j["oracle_crosscheck"], Value::Null);
}

#[test]
fn sol_is_icc_on_the_abelian_path() {
    let out = check("sol.ext", &["--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["verdict"], "icc");
    assert_eq!(j["theorem_path"], "abelian_kernel");
    assert_eq!(j["witness"], Value::Null);
}

#[test]
fn bad_file_gets_a_located_diagnostic() {
    let out = check("bad.ext", &["--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.ext:4:13: validation error"), "{err}");
    assert!(err.contains("non-unimodular matrix, det=4"), "{err}");
}

#[test]
fn syntax_errors_exit_two() {
    let dir = std::env::temp_dir().join(format!("icc-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("broken.ext");
    std::fs::write(&p, "kernel: Z^2\nquotient Z\n").unwrap();
    let out = icc(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains(":2:10: syntax error: expected ':'"), "{err}");
}

#[test]
fn trivial_group_is_unsupported() {
    let dir = std::env::temp_dir().join(format!("icc-cli-trivial-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join("trivial.ext");
    std::fs::write(&p, "kernel: trivial\nquotient: trivial\n").unwrap();
    let out = icc(&["check", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn assert_flag_sets_exit_code() {
    assert_eq!(check("sol.ext", &["--assert", "icc"]).status.code(), Some(0));
    assert_eq!(check("sol.ext", &["--assert", "not-icc"]).status.code(), Some(1));
    assert_eq!(check("klein.ext", &["--assert", "not-icc"]).status.code(), Some(0));
}

#[test]
fn every_data_file_validates_and_is_deterministic() {
    let v = validator();
    for f in [
        "klein.ext",
        "sol.ext",
        "swap.ext",
        "f2xz.ext",
        "rotation.ext",
        "torsion.ext",
        "finite.ext",
    ] {
        let a = check(f, &["--format", "json", "--oracle-radius", "3"]);
        let b = check(f, &["--format", "json", "--oracle-radius", "3"]);
        assert_eq!(a.status.code(), Some(0), "{f}");
        assert_eq!(a.stdout, b.stdout, "{f}");
        let j = json(&a);
        let errors: Vec<String> = v.iter_errors(&j).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{f}: {errors:?}");
        assert_ne!(j["oracle_crosscheck"]["status"], "inconsistent", "{f}");
    }
}

#[test]
fn expected_verdicts_of_the_data_files() {
    let expect = [
        ("swap.ext", "icc", "free_kernel"),
        ("f2xz.ext", "not_icc", "free_kernel"),
        ("rotation.ext", "not_icc", "abelian_kernel"),
        ("torsion.ext", "not_icc", "abelian_kernel"),
        ("finite.ext", "not_icc", "finite_kernel"),
    ];
    for (f, verdict, path) in expect {
        let j = json(&check(f, &["--format", "json"]));
        assert_eq!(j["verdict"], verdict, "{f}");
        assert_eq!(j["theorem_path"], path, "{f}");
    }
}

#[test]
fn growth_curve_csv() {
    let dir = std::env::temp_dir().join(format!("icc-cli-growth-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let csv = dir.join("klein.csv");
    let out = check(
        "klein.ext",
        &["--oracle-radius", "4", "--emit-growth", csv.to_str().unwrap()],
    );
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        std::fs::read_to_string(&csv).unwrap(),
        "radius,size,status\n0,1,growing\n1,2,closed\n"
    );
    // the curve needs the cross-check
    let out = check("klein.ext", &["--emit-growth", csv.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn text_output_names_the_witness() {
    let out = check("rotation.ext", &[]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("verdict: not_icc\n"), "{s}");
    assert!(s.contains("quotient element t^4 acts as the identity matrix"), "{s}");
}

#[test]
fn small_caps_reach_unknown() {
    let out = check("rotation.ext", &["--format", "json", "--orbit-cap", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let j = json(&out);
    assert_eq!(j["verdict"], "unknown");
    assert_eq!(j["obstruction"], "orbit-cap");
    assert!(validator().is_valid(&j));
}
