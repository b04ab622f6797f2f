//! End-to-end tests of the `ellchar` binary: worked examples with frozen
//! documents, the exit-code contract, and byte-stability across parallelism
//! settings.

use std::path::Path;
use std::process::{Command, Output};

fn ellchar(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellchar"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

fn json_of(out: &Output) -> serde_json::Value {
    serde_json::from_str(&stdout(out)).expect("json document")
}

#[test]
fn sections_k_s3_zero_even_document_is_frozen() {
    let out = ellchar(&["sections", "k", "--group", "S3", "--twist", "zero", "--parity", "even", "--format", "json"]);
    assert!(out.status.success());
    let expected = r#"{
  "command": "sections k",
  "diagnostics": {
    "regular_classes": [
      "e",
      "(0 1)",
      "(0 1 2)"
    ]
  },
  "inputs": {
    "coefficients": "point",
    "group": "S3",
    "parity": "even",
    "twist": "zero"
  },
  "results": {
    "basis": [
      "[e]",
      "[(0 1)]",
      "[(0 1 2)]"
    ],
    "degree": 0,
    "dimension": 3,
    "modular_weight": 0,
    "weight": 0
  }
}
"#;
    assert_eq!(stdout(&out), expected);
}

#[test]
fn algebra_center_klein_document_is_frozen() {
    let out = ellchar(&["algebra", "center", "--group", "Z2xZ2", "--twist", "klein", "--format", "json"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["results"]["dimension"], 1);
    assert_eq!(doc["results"]["regular_classes"], serde_json::json!(["(0,0)"]));
    assert_eq!(doc["diagnostics"]["routes_agree"], true);
}

#[test]
fn table_format_is_default() {
    let out = ellchar(&["sections", "k", "--group", "S3", "--twist", "zero", "--parity", "even"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("command: sections k\n"), "{text}");
    assert!(text.contains("dimension: 3"), "{text}");
}

#[test]
fn cocycle_check_rejects_perturbed_table_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    // The Klein cocycle with one flipped entry is no longer a cocycle.
    std::fs::write(&path, "1,1,1,2\n1,2,1,3\n").unwrap();
    let out = ellchar(&[
        "cocycle", "check", "--group", "Z2xZ2", "--degree", "2",
        "--twist", &format!("file:{}", path.display()), "--format", "json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let doc = json_of(&out);
    assert_eq!(doc["results"]["is_cocycle"], false);
    assert!(doc["results"]["witness"]["at"].is_array());
    assert!(doc["results"]["witness"]["off_by"].is_string());
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("cocycle condition fails"), "{err}");
}

#[test]
fn malformed_file_is_a_validation_error_with_location() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.csv");
    std::fs::write(&path, "0,0,0\n1,1,not_a_number,2\n").unwrap();
    let out = ellchar(&[
        "cocycle", "check", "--group", "Z2", "--degree", "2",
        "--twist", &format!("file:{}", path.display()),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("bad.csv:1"), "location missing: {err}");
}

#[test]
fn unknown_twist_is_a_usage_error() {
    let out = ellchar(&["sections", "k", "--group", "S3", "--twist", "nope", "--parity", "even"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn group_info_reports_q8_classes() {
    let out = ellchar(&["group", "info", "--group", "Q8", "--format", "json"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["results"]["class_count"], 5);
    assert_eq!(doc["results"]["commuting_pairs"], 40);
    assert_eq!(doc["results"]["order"], 8);
}

#[test]
fn output_is_byte_identical_across_thread_counts() {
    for sub in [
        vec!["sections", "ell", "--group", "S3", "--twist", "zero", "--format", "json"],
        vec!["transgress", "--group", "Z4", "--degree", "3", "--twist", "cyclic:1", "--format", "json"],
        vec!["group", "info", "--group", "S4", "--format", "json"],
    ] {
        let mut one = sub.clone();
        one.extend(["--threads", "1"]);
        let mut four = sub.clone();
        four.extend(["--threads", "4"]);
        let a = ellchar(&one);
        let b = ellchar(&four);
        assert!(a.status.success() && b.status.success());
        assert_eq!(a.stdout, b.stdout, "parallelism changed output of {sub:?}");
    }
}

#[test]
fn cocycle_gen_round_trips_through_check() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("klein.csv");
    let out = ellchar(&[
        "cocycle", "gen", "--group", "Z2xZ2", "--degree", "2", "--twist", "klein",
        "--out", path.to_str().unwrap(), "--format", "json",
    ]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["results"]["nonzero_entries"], 4);
    let check = ellchar(&[
        "cocycle", "check", "--group", "Z2xZ2", "--degree", "2",
        "--twist", &format!("file:{}", path.display()), "--format", "json",
    ]);
    assert!(check.status.success());
    assert_eq!(json_of(&check)["results"]["is_cocycle"], true);
}

#[test]
fn induce_emits_the_classical_induced_character() {
    let dir = tempfile::tempdir().unwrap();
    let hom = dir.path().join("incl.json");
    // Z/2 onto the subgroup {e, (0 1)} of S3 (element 1 is a transposition).
    std::fs::write(&hom, r#"{"map":[0,1]}"#).unwrap();
    let section = dir.path().join("triv.csv");
    // The trivial character of Z/2 as a section over single loops.
    std::fs::write(&section, "0,1,0\n1,1,0\n").unwrap();
    let out = ellchar(&[
        "induce", "--source", "Z2", "--target", "S3",
        "--hom", &format!("file:{}", hom.display()),
        "--degree", "2", "--twist", "zero",
        "--section", section.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    // Induced values: 3 at the identity, 1 at each transposition (elements
    // 1, 3, 5), 0 at the 3-cycles.
    let expected = "# g,re,im (omitted rows are zero)\n0,3,0\n1,1,0\n3,1,0\n5,1,0\n";
    assert_eq!(stdout(&out), expected);

    // The fiber route emits the same bytes.
    let fib = ellchar(&[
        "induce", "--source", "Z2", "--target", "S3",
        "--hom", &format!("file:{}", hom.display()),
        "--degree", "2", "--twist", "zero",
        "--section", section.to_str().unwrap(),
        "--via", "fibers",
    ]);
    assert!(fib.status.success());
    assert_eq!(stdout(&fib), expected);
}

#[test]
fn sections_accept_gset_coefficients() {
    let dir = tempfile::tempdir().unwrap();
    let gset = dir.path().join("three.json");
    // The defining S3-set written as a full action table.
    std::fs::write(
        &gset,
        r#"{"size":3,"action":[[0,1,2],[1,0,2],[1,2,0],[0,2,1],[2,0,1],[2,1,0]]}"#,
    )
    .unwrap();
    let out = ellchar(&[
        "sections", "k", "--group", "S3", "--twist", "zero", "--parity", "even",
        "--gset", gset.to_str().unwrap(), "--format", "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_of(&out)["results"]["dimension"], 2);
}

#[test]
fn input_path_flags_accept_an_optional_file_prefix() {
    let dir = tempfile::tempdir().unwrap();
    let gset = dir.path().join("three.json");
    std::fs::write(
        &gset,
        r#"{"size":3,"action":[[0,1,2],[1,0,2],[1,2,0],[0,2,1],[2,0,1],[2,1,0]]}"#,
    )
    .unwrap();
    let prefixed = format!("file:{}", gset.to_str().unwrap());
    let out = ellchar(&[
        "sections", "k", "--group", "S3", "--twist", "zero", "--parity", "even",
        "--gset", &prefixed, "--format", "json",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(json_of(&out)["results"]["dimension"], 2);

    let hom = dir.path().join("incl.json");
    std::fs::write(&hom, r#"{"map":[0,1]}"#).unwrap();
    let section = dir.path().join("triv.csv");
    std::fs::write(&section, "0,1,0\n1,1,0\n").unwrap();
    let out = ellchar(&[
        "induce", "--source", "Z2", "--target", "S3",
        "--hom", &format!("file:{}", hom.to_str().unwrap()),
        "--degree", "2", "--twist", "zero",
        "--section", &format!("file:{}", section.to_str().unwrap()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(stdout(&out).contains("0,3,0"), "induced character present");
}

#[test]
fn superlaw_check_passes() {
    let out = ellchar(&["superlaw", "check", "--format", "json"]);
    assert!(out.status.success());
    let doc = json_of(&out);
    assert_eq!(doc["results"]["all_passed"], true);
    // Both odd-coordinate projections are multiplicative; both
    // even-coordinate projections are not.
    let facts = doc["results"]["facts"].as_array().unwrap();
    assert_eq!(facts.len(), 4);
    for fact in facts {
        let name = fact["name"].as_str().unwrap();
        let holds = fact["holds"].as_bool().unwrap();
        assert_eq!(holds, name.starts_with("odd"), "{name}");
    }
}

#[test]
fn transgress_dumps_phase_tables() {
    let dir = tempfile::tempdir().unwrap();
    let dump = dir.path().join("tau.csv");
    let out = ellchar(&[
        "transgress", "--group", "Z2xZ2", "--degree", "2", "--twist", "klein",
        "--dump", dump.to_str().unwrap(), "--format", "json",
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&dump).unwrap();
    assert!(text.starts_with("# h,g,num,den"), "{text}");
    // tau(h; g) = a(h g h^-1, h) - a(h, g) is nonzero somewhere for the
    // pairing twist.
    assert!(text.lines().count() > 1, "{text}");
    assert_eq!(json_of(&out)["diagnostics"]["matches_minus_char"], true);
}

#[test]
fn help_and_usage_errors_follow_the_exit_contract() {
    let help = ellchar(&["--help"]);
    assert_eq!(help.status.code(), Some(0));
    let bad = ellchar(&["sections", "k", "--group", "S3"]);
    assert_eq!(bad.status.code(), Some(1), "missing required flags are usage errors");
    let nonsense = ellchar(&["frobnicate"]);
    assert_eq!(nonsense.status.code(), Some(1));
}

#[test]
fn group_documents_load_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s3.json");
    std::fs::write(&path, r#"{"type":"permutation","degree":3,"generators":[[1,2,0],[1,0,2]]}"#)
        .unwrap();
    let spec = format!("file:{}", path.display());
    let out = ellchar(&["group", "info", "--group", &spec, "--format", "json"]);
    assert!(out.status.success());
    assert_eq!(json_of(&out)["results"]["class_count"], 3);
    assert!(Path::new(&path).exists());
}
