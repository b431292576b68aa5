use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Stdio};

use jsonschema::JSONSchema;
use serde_json::{json, Value};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(args: &[&str]) -> Run {
    run_with_stdin(args, None)
}

fn run_with_stdin(args: &[&str], stdin: Option<&str>) -> Run {
    let mut child = Command::new(env!("CARGO_BIN_EXE_projsimple"))
        .args(args)
        .env("NO_COLOR", "1")
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn projsimple");
    if let Some(text) = stdin {
        child
            .stdin
            .take()
            .unwrap()
            .write_all(text.as_bytes())
            .unwrap();
    } else {
        drop(child.stdin.take());
    }
    let out = child.wait_with_output().unwrap();
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn json_ok(args: &[&str]) -> Value {
    let r = run(args);
    assert_eq!(r.code, 0, "args {args:?}, stderr: {}", r.stderr);
    serde_json::from_str(&r.stdout).expect("stdout is JSON")
}

fn schema_doc() -> Value {
    let p: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "schemas",
        "v1.schema.json",
    ]
    .iter()
    .collect();
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

/// Validates against one named definition and against the top-level schema.
fn assert_valid(definition: &str, instance: &Value) {
    let doc = schema_doc();
    let mut specific = doc.clone();
    let obj = specific.as_object_mut().unwrap();
    obj.remove("anyOf");
    obj.insert("$ref".into(), json!(format!("#/definitions/{definition}")));
    for schema in [specific, doc] {
        let compiled = JSONSchema::compile(&schema).expect("schema compiles");
        let msgs: Vec<String> = match compiled.validate(instance) {
            Ok(()) => Vec::new(),
            Err(errors) => errors
                .map(|e| format!("{} at {}", e, e.instance_path))
                .collect(),
        };
        assert!(
            msgs.is_empty(),
            "{definition} invalid: {msgs:?}\n{instance:#}"
        );
    }
}

fn assert_invalid(definition: &str, instance: &Value) {
    let mut schema = schema_doc();
    let obj = schema.as_object_mut().unwrap();
    obj.remove("anyOf");
    obj.insert("$ref".into(), json!(format!("#/definitions/{definition}")));
    assert!(!JSONSchema::compile(&schema).unwrap().is_valid(instance));
}

#[test]
fn analyze_curve_translation() {
    let v = json_ok(&["analyze", "--input", &fixture("curve_translation.json")]);
    assert_valid("analysis_report", &v);
    assert_eq!(v["wild"]["wild"], true);
    assert_eq!(v["projectively_simple"]["verdict"], "yes");
    assert_eq!(v["gk"]["exact"], "2");
    assert_eq!(v["j"], "0");
    assert_eq!(v["classification_label"], "gk2-translation-dim1");
}

#[test]
fn analyze_shear_surface() {
    let v = json_ok(&["analyze", "--input", &fixture("shear_surface.json")]);
    assert_valid("analysis_report", &v);
    assert_eq!(v["wild"]["wild"], true);
    assert_eq!(v["gk"]["exact"], "5");
    assert_eq!(v["j"], "2");
    assert_eq!(
        v["num_action"]["matrix"],
        json!([["0", "0", "-1"], ["0", "1", "2"], ["1", "0", "2"]])
    );
    assert_eq!(v["classification_label"], "gk5-unipotent-dim2");
}

#[test]
fn analyze_rotation_surface() {
    let v = json_ok(&["analyze", "--input", &fixture("rotation_surface.json")]);
    assert_valid("analysis_report", &v);
    assert_eq!(v["wild"]["wild"], false);
    assert_eq!(v["wild"]["certificate"]["kind"], "non_unipotent_factor");
    assert_eq!(v["wild"]["certificate"]["factor"]["text"], "x^2 + 1");
    assert_eq!(v["projectively_simple"]["verdict"], "no");
    assert!(v["classification_label"].is_null());
}

#[test]
fn analyze_hyperbolic_and_torsion() {
    let v = json_ok(&["analyze", "--input", &fixture("hyperbolic_surface.json")]);
    assert_valid("analysis_report", &v);
    assert_eq!(v["sigma_ample_verdict"], "no_sigma_ample_exists");
    assert_eq!(v["projectively_simple"]["verdict"], "not_applicable");
    assert_eq!(v["gk"]["status"], "no_sigma_ample");

    let v = json_ok(&["analyze", "--input", &fixture("torsion_threefold.json")]);
    assert_valid("analysis_report", &v);
    assert_eq!(v["wild"]["wild"], false);
    assert_eq!(v["wild"]["certificate"]["kind"], "relation_vector");
    assert_eq!(v["gk"]["exact"], "4");
}

#[test]
fn output_is_deterministic() {
    let args = ["analyze", "--input", &fixture("torsion_threefold.json")];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["quasiunipotent", "--matrix", r#"[["0","-1"],["1","0"]]"#];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn human_format_renders_same_report() {
    let r = run(&[
        "analyze",
        "--input",
        &fixture("shear_surface.json"),
        "--format",
        "human",
    ]);
    assert_eq!(r.code, 0);
    assert!(r
        .stdout
        .contains("classification_label: gk5-unipotent-dim2"));
    assert!(r.stdout.contains("wild: true"));
    assert!(!r.stdout.contains('\x1b'));
}

#[test]
fn stdin_and_output_file() {
    let text = std::fs::read_to_string(fixture("curve_translation.json")).unwrap();
    let r = run_with_stdin(&["analyze", "--input", "-"], Some(&text));
    assert_eq!(r.code, 0, "{}", r.stderr);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let r = run(&[
        "analyze",
        "--input",
        &fixture("curve_translation.json"),
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(r.code, 0);
    assert!(r.stdout.is_empty());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(
        written,
        serde_json::from_str::<Value>(
            &run_with_stdin(&["analyze", "--input", "-"], Some(&text)).stdout
        )
        .unwrap()
    );
}

#[test]
fn num_action_shear() {
    let v = json_ok(&["num-action", "--matrix", r#"[["1","1"],["0","1"]]"#]);
    assert_valid("num_action_report", &v);
    assert_eq!(
        v["p_matrix"],
        json!([["0", "0", "-1"], ["0", "1", "2"], ["1", "0", "2"]])
    );
    assert_eq!(v["j"], "2");
    assert_eq!(v["gk"]["exact"], "5");
}

#[test]
fn matrix_commands() {
    let v = json_ok(&[
        "snf",
        "--matrix",
        r#"[["2","4","4"],["-6","6","12"],["10","-4","-16"]]"#,
    ]);
    assert_valid("smith_decomposition", &v);
    assert_eq!(
        v["d"],
        json!([["2", "0", "0"], ["0", "6", "0"], ["0", "0", "12"]])
    );
    assert_eq!(v["rank"], 3);

    let v = json_ok(&["charpoly", "--matrix", r#"[["0","-1"],["1","0"]]"#]);
    assert_valid("poly", &v);
    assert_eq!(v["coefficients"], json!(["1", "0", "1"]));

    let v = json_ok(&["quasiunipotent", "--matrix", r#"[["0","-1"],["1","-1"]]"#]);
    assert_valid("quasiunipotent_report", &v);
    assert_eq!(
        v["verdict"]["status"],
        json!({"kind": "quasi_unipotent", "order": "3"})
    );

    let v = json_ok(&[
        "quasiunipotent",
        "--matrix",
        r#"[["0","-1"],["1","0"]]"#,
        "--bound",
        "8",
    ]);
    assert_eq!(v["power_conjugacy_witness"], json!({"p": "1", "q": "3"}));

    let v = json_ok(&["quasiunipotent", "--matrix", r#"[["2","1"],["1","1"]]"#]);
    assert_valid("quasiunipotent_report", &v);
    assert_eq!(v["verdict"]["witness"]["text"], "x^2 - 3x + 1");
    assert!(v["power_conjugacy_witness"].is_null());
}

#[test]
fn gk_and_generates() {
    let v = json_ok(&["gk", "--input", &fixture("shear_surface.json")]);
    assert_valid("gk_report", &v);
    assert_eq!(v["gk"]["exact"], "5");

    let v = json_ok(&["generates", "--input", &fixture("generates.json")]);
    assert_valid("generation_verdict", &v);
    assert_eq!(v["generates"], false);
    assert_eq!(v["certificate"]["theta"], json!(["2", "-1"]));
}

#[test]
fn fixtures_match_input_schema() {
    for f in [
        "curve_translation",
        "shear_surface",
        "rotation_surface",
        "hyperbolic_surface",
        "torsion_threefold",
        "cm_factor",
        "singular_alpha",
    ] {
        let v: Value =
            serde_json::from_str(&std::fs::read_to_string(fixture(&format!("{f}.json"))).unwrap())
                .unwrap();
        assert_valid("analysis_input", &v);
    }
    let v: Value =
        serde_json::from_str(&std::fs::read_to_string(fixture("generates.json")).unwrap()).unwrap();
    assert_valid("generation_input", &v);
    assert_invalid("analysis_report", &json!({"schema_version": "1"}));
    assert_invalid(
        "poly",
        &json!({"coefficients": [1, 0, 1], "text": "x^2 + 1"}),
    );
}

#[test]
fn selfcheck_passes_and_validates() {
    let r = run(&["selfcheck", "--seed", "42", "--trials", "1"]);
    assert_eq!(r.code, 0, "{}", r.stdout);
    let v: Value = serde_json::from_str(&r.stdout).unwrap();
    assert_valid("selfcheck_report", &v);
    assert_eq!(v["checks"].as_array().unwrap().len(), 13);
    assert_eq!(v["passed"], true);
    assert_eq!(
        r.stdout,
        run(&["selfcheck", "--seed", "42", "--trials", "1"]).stdout
    );
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["frobnicate"]).code, 2);
    assert_eq!(run(&[]).code, 2);
    assert_eq!(run(&["charpoly"]).code, 2);
    assert_eq!(run(&["charpoly", "--matrix", "[[1,"]).code, 2);
    assert_eq!(run(&["charpoly", "--matrix", r#"[["1","2"]]"#]).code, 1);
    assert_eq!(
        run(&["num-action", "--matrix", r#"[["2","0"],["0","1"]]"#]).code,
        1
    );
    assert_eq!(run(&["selfcheck", "--trials", "0"]).code, 2);
    assert_eq!(
        run(&["analyze", "--input", "/nonexistent/model.json"]).code,
        2
    );

    let r = run(&["analyze", "--input", &fixture("singular_alpha.json")]);
    assert_eq!(r.code, 1);
    assert!(r.stderr.contains("determinant"));
    let r = run(&["analyze", "--input", &fixture("cm_factor.json")]);
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("complex multiplication"));

    let text = std::fs::read_to_string(fixture("curve_translation.json"))
        .unwrap()
        .replace("\"1\",\n", "\"2\",\n");
    let r = run_with_stdin(&["analyze", "--input", "-"], Some(&text));
    assert_eq!(r.code, 2);
    assert!(r.stderr.contains("schema_version"));
    assert_eq!(run(&["--help"]).code, 0);
}
