//! End-to-end tests of the command line interface.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../morseq/data")
        .join(name)
}

fn morseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_morseq"))
        .args(args)
        .output()
        .expect("the binary runs")
}

fn stdout_json(output: &Output) -> serde_json::Value {
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("stdout is one JSON document")
}

fn exit_code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn betti_reports_three_way_agreement_on_the_torus() {
    let output = morseq(&["betti", data("torus.cplx").to_str().unwrap()]);
    let report = stdout_json(&output);
    assert_eq!(report["betti"], serde_json::json!([1, 2, 1]));
    assert_eq!(report["critical_complex"], serde_json::json!([1, 2, 1]));
    assert_eq!(report["extension_complex"], serde_json::json!([1, 2, 1]));
    assert_eq!(report["agree"], serde_json::json!(true));
}

#[test]
fn betti_of_an_empty_complex_is_empty() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("void.cplx");
    std::fs::write(&path, "# no facets\n").unwrap();
    let output = morseq(&["betti", path.to_str().unwrap()]);
    let report = stdout_json(&output);
    assert_eq!(report["betti"], serde_json::json!([]));
    assert_eq!(report["agree"], serde_json::json!(true));
}

#[test]
fn morse_writes_a_replayable_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("triangle.seq.jsonl");
    let output = morseq(&[
        "morse",
        data("triangle.cplx").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    let report = stdout_json(&output);
    assert_eq!(report["critical_counts"], serde_json::json!([1, 0, 0]));
    assert_eq!(report["morse_inequalities"], serde_json::json!(true));
    let check = morseq(&[
        "check",
        data("triangle.cplx").to_str().unwrap(),
        "--sequence",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&check), 0);
}

#[test]
fn morse_on_the_torus_respects_the_betti_bounds() {
    let output = morseq(&[
        "morse",
        data("torus.cplx").to_str().unwrap(),
        "--scheme",
        "dec-max",
    ]);
    let report = stdout_json(&output);
    let counts: Vec<u64> = report["critical_counts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_u64().unwrap())
        .collect();
    assert!(counts[0] >= 1 && counts[1] >= 2 && counts[2] >= 1, "{counts:?}");
}

#[test]
fn morse_on_a_single_vertex_has_one_critical_face() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("point.cplx");
    std::fs::write(&path, "1\n").unwrap();
    let output = morseq(&["morse", path.to_str().unwrap()]);
    let report = stdout_json(&output);
    assert_eq!(report["critical_counts"], serde_json::json!([1]));
}

#[test]
fn check_passes_on_every_bundled_complex() {
    for name in [
        "triangle.cplx",
        "tetrahedron_boundary.cplx",
        "torus.cplx",
        "dunce_hat.cplx",
        "figure_eight.cplx",
        "double_path.cplx",
    ] {
        let output = morseq(&[
            "check",
            data(name).to_str().unwrap(),
            "--scheme",
            "dec-max",
        ]);
        let report = stdout_json(&output);
        assert_eq!(report["status"], serde_json::json!("pass"), "{name}");
    }
}

#[test]
fn a_corrupted_sequence_fails_the_check_with_the_clause() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.jsonl");
    let output = morseq(&[
        "morse",
        data("triangle.cplx").to_str().unwrap(),
        "--output",
        seq.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 0);
    let text = std::fs::read_to_string(&seq).unwrap();
    let corrupted: Vec<&str> = text.lines().skip(1).collect();
    std::fs::write(&seq, corrupted.join("\n")).unwrap();
    let output = morseq(&[
        "check",
        data("triangle.cplx").to_str().unwrap(),
        "--sequence",
        seq.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 1);
    let report: serde_json::Value = serde_json::from_slice(&output.stdout).unwrap();
    assert_eq!(report["status"], serde_json::json!("fail"));
    assert_eq!(report["checks"][0]["status"], serde_json::json!("fail"));
    let detail = report["checks"][0]["detail"].as_str().unwrap();
    assert!(detail.contains("item 0"), "{detail}");
}

#[test]
fn convert_vf_round_trips_a_field() {
    let dir = tempfile::tempdir().unwrap();
    let seq = dir.path().join("seq.jsonl");
    let field = dir.path().join("field.json");
    morseq(&[
        "morse",
        data("double_path.cplx").to_str().unwrap(),
        "--output",
        seq.to_str().unwrap(),
    ]);
    let to_field = morseq(&[
        "convert-vf",
        data("double_path.cplx").to_str().unwrap(),
        "--sequence",
        seq.to_str().unwrap(),
        "--output",
        field.to_str().unwrap(),
    ]);
    let report = stdout_json(&to_field);
    assert_eq!(report["converted"], serde_json::json!("sequence to field"));
    let back = morseq(&[
        "convert-vf",
        data("double_path.cplx").to_str().unwrap(),
        "--field",
        field.to_str().unwrap(),
    ]);
    let report_back = stdout_json(&back);
    assert_eq!(
        report_back["critical_counts"],
        report["critical_counts"],
        "conversion preserves the critical counts"
    );
}

#[test]
fn a_cyclic_field_is_a_domain_failure() {
    let dir = tempfile::tempdir().unwrap();
    let circle = dir.path().join("circle.cplx");
    std::fs::write(&circle, "1 2\n1 3\n2 3\n").unwrap();
    let field = dir.path().join("cyclic.json");
    std::fs::write(
        &field,
        r#"[{"sigma":[1],"tau":[1,2]},{"sigma":[2],"tau":[2,3]},{"sigma":[3],"tau":[1,3]}]"#,
    )
    .unwrap();
    let output = morseq(&[
        "convert-vf",
        circle.to_str().unwrap(),
        "--field",
        field.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&output), 1);
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains("closed gradient path"), "{stderr}");
}

#[test]
fn identical_invocations_are_byte_identical() {
    let torus = data("torus.cplx");
    let args = [
        "morse",
        torus.to_str().unwrap(),
        "--scheme",
        "inc-max",
        "--tiebreak",
        "seeded",
        "--seed",
        "42",
    ];
    let first = morseq(&args);
    let second = morseq(&args);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
    let dunce = data("dunce_hat.cplx");
    let reference = [
        "reference",
        dunce.to_str().unwrap(),
        "--scheme",
        "dec-max",
    ];
    let first = morseq(&reference);
    let second = morseq(&reference);
    assert_eq!(exit_code(&first), 0);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn usage_errors_exit_with_two() {
    let missing_seed = morseq(&[
        "morse",
        data("triangle.cplx").to_str().unwrap(),
        "--tiebreak",
        "seeded",
    ]);
    assert_eq!(exit_code(&missing_seed), 2);
    let stray_seed = morseq(&[
        "morse",
        data("triangle.cplx").to_str().unwrap(),
        "--seed",
        "7",
    ]);
    assert_eq!(exit_code(&stray_seed), 2);
    let unknown_flag = morseq(&["morse", "--no-such-flag"]);
    assert_eq!(exit_code(&unknown_flag), 2);
    let missing_file = morseq(&["betti", "/no/such/file.cplx"]);
    assert_eq!(exit_code(&missing_file), 2);
    let no_direction = morseq(&["convert-vf", data("triangle.cplx").to_str().unwrap()]);
    assert_eq!(exit_code(&no_direction), 2);
}

#[test]
fn export_produces_dot_json_and_text() {
    let dot = morseq(&[
        "export",
        data("triangle.cplx").to_str().unwrap(),
        "--format",
        "dot",
    ]);
    assert_eq!(exit_code(&dot), 0);
    let text = String::from_utf8(dot.stdout).unwrap();
    assert!(text.starts_with("digraph gradient {"), "{text}");
    assert!(text.contains("doublecircle"), "{text}");

    let json = morseq(&[
        "export",
        data("figure_eight.cplx").to_str().unwrap(),
        "--format",
        "json",
    ]);
    let tables = stdout_json(&json);
    assert!(tables["extension"].is_object());
    assert!(tables["coextension"].is_object());

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("normalized.cplx");
    let text_export = morseq(&[
        "export",
        data("torus.cplx").to_str().unwrap(),
        "--format",
        "text",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&text_export), 0);
    assert!(text_export.stdout.is_empty());
    let normalized = std::fs::read_to_string(&out).unwrap();
    assert_eq!(normalized.lines().count(), 14, "the torus has 14 facets");
}

#[test]
fn reference_reports_the_collapsible_tables() {
    let output = morseq(&["reference", data("triangle.cplx").to_str().unwrap()]);
    let report = stdout_json(&output);
    assert_eq!(report["critical_counts"], serde_json::json!([1, 0, 0]));
    assert_eq!(report["reference"]["{2}"], serde_json::json!([[1]]));
    assert_eq!(report["reference"]["{1,2}"], serde_json::json!([]));
    assert_eq!(report["coreference"]["{1}"], serde_json::json!([[1]]));
    assert_eq!(report["coreference"]["{2}"], serde_json::json!([]));
    assert!(report["critical_complex"]["bases"].is_array());
}

#[test]
fn flow_pushes_every_vertex_to_the_critical_one() {
    let output = morseq(&["flow", data("triangle.cplx").to_str().unwrap()]);
    let report = stdout_json(&output);
    assert_eq!(report["decomposition_defects"], serde_json::json!(0));
    for vertex in ["{1}", "{2}", "{3}"] {
        assert_eq!(
            report["flow"][vertex]["stable"],
            serde_json::json!([[1]]),
            "{vertex}"
        );
    }
}

#[test]
fn build_reports_and_normalizes() {
    let dir = tempfile::tempdir().unwrap();
    let scrambled = dir.path().join("scrambled.cplx");
    std::fs::write(&scrambled, "# comment\n3 2 1\n\n4 3\n").unwrap();
    let out = dir.path().join("normal.cplx");
    let output = morseq(&[
        "build",
        scrambled.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
    ]);
    let report = stdout_json(&output);
    assert_eq!(report["dimension"], serde_json::json!(2));
    assert_eq!(report["face_counts"], serde_json::json!([4, 4, 1]));
    assert_eq!(report["facets"], serde_json::json!(2));
    assert_eq!(report["euler_characteristic"], serde_json::json!(1));
    assert_eq!(std::fs::read_to_string(&out).unwrap(), "3 4\n1 2 3\n");
}
