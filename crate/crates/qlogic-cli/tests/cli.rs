//! End-to-end CLI checks against the committed model files (acceptance
//! criterion 10): outputs, exit codes, determinism, and total runtime.

use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::Instant;

fn model(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../models")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn qlogic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qlogic"))
        .args(args)
        .env_remove("QLOGIC_TOLERANCE")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON on stdout")
}

fn close(v: &serde_json::Value, expected: f64) -> bool {
    (v.as_f64().expect("number") - expected).abs() <= 1e-10
}

#[test]
fn criterion_10_cli_end_to_end() {
    let start = Instant::now();
    let mut ok = true;

    // Single-qubit model: Z <= 0 fails with certainty in the ground state.
    let out = json_of(&qlogic(&[
        "eval",
        "Z <= 0",
        "--model",
        &model("single_qubit.json"),
        "--state",
        "ground",
    ]));
    ok &= close(&out["probability"], 0.0)
        && out["holds"] == serde_json::json!(false)
        && out["well_formed"] == serde_json::json!(true)
        && out["rank"] == serde_json::json!(1);

    // Bell model: the two Z readings agree with certainty.
    let out = json_of(&qlogic(&[
        "eval",
        "eq(ZI, IZ)",
        "--model",
        &model("bell.json"),
        "--state",
        "bell",
    ]));
    ok &= close(&out["probability"], 1.0) && out["holds"] == serde_json::json!(true);

    // Syntax error exits 1.
    let out = qlogic(&["eval", "Z <= 0 |", "--model", &model("single_qubit.json")]);
    ok &= out.status.code() == Some(1);

    // Unknown observable exits 2.
    let out = qlogic(&["eval", "W <= 0", "--model", &model("single_qubit.json")]);
    ok &= out.status.code() == Some(2);

    // Z and X have no joint distribution in an eigenstate of Z.
    let out = json_of(&qlogic(&[
        "jpd",
        "Z",
        "X",
        "--model",
        &model("single_qubit.json"),
        "--state",
        "ground",
    ]));
    ok &= out["exists"] == serde_json::json!(false) && close(&out["com_probability"], 0.0);

    // Bell JPD: half/half on the diagonal.
    let out = json_of(&qlogic(&[
        "jpd",
        "ZI",
        "IZ",
        "--model",
        &model("bell.json"),
        "--state",
        "bell",
    ]));
    ok &= out["exists"] == serde_json::json!(true);
    for mass in out["masses"].as_array().expect("masses") {
        let point: Vec<f64> = mass["point"]
            .as_array()
            .expect("point")
            .iter()
            .map(|v| v.as_f64().expect("number"))
            .collect();
        let expected = if point[0] == point[1] { 0.5 } else { 0.0 };
        ok &= close(&mass["p"], expected);
    }

    // Single-axis JPD is the Born distribution.
    let out = json_of(&qlogic(&[
        "jpd",
        "Z",
        "--model",
        &model("single_qubit.json"),
        "--state",
        "mixed",
    ]));
    for mass in out["masses"].as_array().expect("masses") {
        ok &= close(&mass["p"], 0.5);
    }

    // CNOT POVM is the spectral family of Z: Pi(0) = diag(0,1).
    let out = json_of(&qlogic(&[
        "measure",
        "cnot",
        "povm",
        "--model",
        &model("cnot.json"),
    ]));
    ok &= out["cuts"] == serde_json::json!([-1.0, 1.0]);
    ok &= out["operators"][0]["re"] == serde_json::json!([[0.0, 0.0], [0.0, 1.0]]);
    ok &= out["operators"][1]["re"] == serde_json::json!([[1.0, 0.0], [0.0, 1.0]]);

    // Equivalence triple: Z in ground all true, X in mixed all false.
    let out = json_of(&qlogic(&[
        "measure",
        "cnot",
        "check",
        "--observable",
        "Z",
        "--model",
        &model("cnot.json"),
        "--state",
        "ground",
    ]));
    ok &= out == serde_json::json!({"measures": true, "weak": true, "bsf": true});
    let out = json_of(&qlogic(&[
        "measure",
        "cnot",
        "check",
        "--observable",
        "X",
        "--model",
        &model("cnot.json"),
        "--state",
        "mixed",
    ]));
    ok &= out == serde_json::json!({"measures": false, "weak": false, "bsf": false});

    // Determinism: identical invocations emit identical bytes.
    let a = qlogic(&[
        "eval",
        "Z <= 0",
        "--model",
        &model("single_qubit.json"),
        "--state",
        "mixed",
    ]);
    let b = qlogic(&[
        "eval",
        "Z <= 0",
        "--model",
        &model("single_qubit.json"),
        "--state",
        "mixed",
    ]);
    ok &= a.stdout == b.stdout;

    ok &= start.elapsed().as_secs_f64() < 5.0;
    println!(
        "criterion 10 (CLI end-to-end on committed models): {}",
        if ok { "pass" } else { "fail" }
    );
    assert!(ok, "criterion 10 failed");
}

#[test]
fn emitted_matrices_round_trip_through_loader() {
    // The truth projection emitted by eval parses back as an operator.
    let out = json_of(&qlogic(&[
        "eval",
        "Z <= 0",
        "--model",
        &model("single_qubit.json"),
    ]));
    let dir = std::env::temp_dir().join("qlogic-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("model.json");
    let file = serde_json::json!({
        "dimension": 2,
        "operators": {"P": out["truth_projection"]},
        "states": {"mixed": {"re": [[0.5, 0.0], [0.0, 0.5]], "im": [[0.0, 0.0], [0.0, 0.0]]}}
    });
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    let out = json_of(&qlogic(&[
        "eval",
        "P = 1",
        "--model",
        path.to_str().unwrap(),
        "--state",
        "mixed",
    ]));
    assert!(close(&out["probability"], 0.5));
}

#[test]
fn tolerance_flag_and_env() {
    let out = qlogic(&[
        "eval",
        "Z <= 0",
        "--model",
        &model("single_qubit.json"),
        "--tolerance",
        "1e-6",
    ]);
    assert!(out.status.success());
    let out = qlogic(&[
        "eval",
        "Z <= 0",
        "--model",
        &model("single_qubit.json"),
        "--tolerance",
        "5.0",
    ]);
    assert_eq!(
        out.status.code(),
        Some(2),
        "out-of-range tolerance rejected"
    );

    let out = Command::new(env!("CARGO_BIN_EXE_qlogic"))
        .args(["eval", "Z <= 0", "--model", &model("single_qubit.json")])
        .env("QLOGIC_TOLERANCE", "5.0")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "env tolerance applies");
}

#[test]
fn pretty_output_is_valid_json() {
    let out = qlogic(&[
        "eval",
        "Z <= 0",
        "--model",
        &model("single_qubit.json"),
        "--output",
        "pretty",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains('\n'), "pretty output is indented");
    let _: serde_json::Value = serde_json::from_str(&text).unwrap();
}
