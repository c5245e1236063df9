//! Every command's JSON output validates against its committed schema.
//!
//! The schemas under `schemas/` describe the output contract in a small,
//! self-contained subset of JSON Schema draft-07: `type` (single name or
//! list), `properties`, `required`, `additionalProperties: false`,
//! `items`, `enum`, and `oneOf`. This test implements a validator for
//! exactly that subset, runs each of the eleven subcommands against the
//! real binary, and checks the parsed output — so a schema drifting out
//! of sync with the serializers fails loudly instead of rotting.

use std::path::Path;
use std::process::Command;

use serde_json::Value;

/// Validates `value` against the supported schema subset, appending one
/// message per violation to `errors`. Paths are JSON-pointer-ish strings
/// rooted at `$`.
fn validate(schema: &Value, value: &Value, path: &str, errors: &mut Vec<String>) {
    let schema = match schema.as_object() {
        Some(map) => map,
        None => {
            errors.push(format!("{path}: schema node is not an object"));
            return;
        }
    };

    if let Some(one_of) = schema.get("oneOf") {
        let branches = one_of.as_array().expect("oneOf holds an array");
        let mut matching = 0usize;
        for branch in branches {
            let mut branch_errors = Vec::new();
            validate(branch, value, path, &mut branch_errors);
            if branch_errors.is_empty() {
                matching += 1;
            }
        }
        if matching != 1 {
            errors.push(format!(
                "{path}: value matches {matching} of {} oneOf branches, expected exactly 1",
                branches.len()
            ));
        }
        return;
    }

    if let Some(expected) = schema.get("type") {
        let names: Vec<&str> = match expected {
            Value::String(name) => vec![name.as_str()],
            Value::Array(names) => names
                .iter()
                .map(|n| n.as_str().expect("type list holds strings"))
                .collect(),
            other => {
                errors.push(format!("{path}: malformed type constraint {other}"));
                return;
            }
        };
        if !names.iter().any(|name| type_matches(name, value)) {
            errors.push(format!(
                "{path}: value {value} does not have type {}",
                names.join(" or ")
            ));
            return;
        }
    }

    if let Some(allowed) = schema.get("enum") {
        let allowed = allowed.as_array().expect("enum holds an array");
        if !allowed.contains(value) {
            errors.push(format!("{path}: value {value} is not one of the enum values"));
        }
    }

    if let (Some(object), Some(properties)) = (value.as_object(), schema.get("properties")) {
        let properties = properties.as_object().expect("properties holds an object");
        if let Some(required) = schema.get("required") {
            for name in required.as_array().expect("required holds an array") {
                let name = name.as_str().expect("required holds strings");
                if !object.contains_key(name) {
                    errors.push(format!("{path}: missing required property {name:?}"));
                }
            }
        }
        if schema.get("additionalProperties") == Some(&Value::Bool(false)) {
            for name in object.keys() {
                if !properties.contains_key(name) {
                    errors.push(format!("{path}: unexpected property {name:?}"));
                }
            }
        }
        for (name, subschema) in properties {
            if let Some(subvalue) = object.get(name) {
                validate(subschema, subvalue, &format!("{path}.{name}"), errors);
            }
        }
    }

    if let (Some(array), Some(items)) = (value.as_array(), schema.get("items")) {
        for (index, element) in array.iter().enumerate() {
            validate(items, element, &format!("{path}[{index}]"), errors);
        }
    }
}

fn type_matches(name: &str, value: &Value) -> bool {
    match name {
        "object" => value.is_object(),
        "array" => value.is_array(),
        "string" => value.is_string(),
        "number" => value.is_number(),
        "integer" => value.is_i64() || value.is_u64(),
        "boolean" => value.is_boolean(),
        "null" => value.is_null(),
        other => panic!("unsupported type name {other:?} in schema"),
    }
}

fn schema_for(name: &str) -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schemas")
        .join(name);
    let text = std::fs::read_to_string(&path)
        .unwrap_or_else(|err| panic!("cannot read {}: {err}", path.display()));
    serde_json::from_str(&text).expect("schema file is valid JSON")
}

/// Runs the binary, requires exit code 0, and parses stdout as JSON.
fn run_json(args: &[&str]) -> Value {
    let output = Command::new(env!("CARGO_BIN_EXE_qriccati"))
        .args(args)
        .output()
        .expect("binary runs");
    assert_eq!(
        output.status.code(),
        Some(0),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    serde_json::from_slice(&output.stdout).expect("output is valid JSON")
}

fn assert_valid(schema_name: &str, args: &[&str]) -> Value {
    let value = run_json(args);
    let schema = schema_for(schema_name);
    let mut errors = Vec::new();
    validate(&schema, &value, "$", &mut errors);
    assert!(
        errors.is_empty(),
        "output of {args:?} violates {schema_name}:\n{}",
        errors.join("\n")
    );
    value
}

#[test]
fn verify_riccati_output_validates() {
    let value = assert_valid(
        "verify-riccati.json",
        &["verify-riccati", "--q", "1/2", "--A", "z^3+6*z^2+7*z", "--f", "2*z+4"],
    );
    assert_eq!(value["is_solution"], Value::Bool(true));
}

#[test]
fn reduce_output_validates() {
    assert_valid(
        "reduce.json",
        &["reduce", "--q", "1/2", "--A", "z^3+6*z^2+7*z", "--f0", "2*z+4"],
    );
}

#[test]
fn find_rational_linear_output_validates() {
    let value = assert_valid(
        "find-rational-linear.json",
        &[
            "find-rational-linear",
            "--q",
            "1/2",
            "--a1",
            "1",
            "--a0",
            "-1",
            "--c",
            "-z/2",
            "--bound",
            "8",
        ],
    );
    assert!(value["particular"].is_string());
    assert!(!value["basis"].as_array().expect("basis is an array").is_empty());
}

#[test]
fn search_riccati_output_validates() {
    let value = assert_valid(
        "search-riccati.json",
        &["search-riccati", "--q", "1/2", "--A", "z^3+6*z^2+7*z", "--bound", "2"],
    );
    assert!(!value["solutions"]
        .as_array()
        .expect("solutions is an array")
        .is_empty());
}

#[test]
fn family_output_validates() {
    let value = assert_valid(
        "family.json",
        &[
            "family",
            "--q",
            "1/2",
            "--A",
            "0",
            "--f0",
            "-1/z",
            "--f1",
            "-1/(z+1)",
            "--f2",
            "-1/(z-1)",
            "--phi",
            "1/3",
        ],
    );
    assert_eq!(value["is_solution"], Value::Bool(true));
}

#[test]
fn linearize_output_validates() {
    let value = assert_valid(
        "linearize.json",
        &[
            "linearize",
            "--q",
            "-1/2",
            "--A",
            "-6*z/((z+1)*(z-2))",
            "--f1",
            "1/(z+1)",
            "--f2",
            "-2/(z+1)",
        ],
    );
    assert_eq!(value["meromorphic"], Value::Bool(true));
}

#[test]
fn eval_gamma_q_output_validates() {
    let regular = assert_valid(
        "eval-gamma-q.json",
        &["eval-gamma-q", "--q", "1/2", "--z", "7/10"],
    );
    assert!(regular["value"].is_object());

    // z = 2 = q^-1 sits on the pole lattice, so the value is the marker.
    let pole = assert_valid("eval-gamma-q.json", &["eval-gamma-q", "--q", "1/2", "--z", "2"]);
    assert_eq!(pole["value"], Value::String("pole".into()));
}

#[test]
fn eval_closed_form_output_validates() {
    assert_valid(
        "eval-closed-form.json",
        &[
            "eval-closed-form",
            "--q",
            "-1/2",
            "--a",
            "(1+5/2*z)/(1-2*z)",
            "--z",
            "3/10",
        ],
    );
}

#[test]
fn second_order_output_validates() {
    assert_valid("second-order.json", &["second-order", "--q", "1/2", "--A", "0"]);
}

#[test]
fn orbit_verify_output_validates() {
    let value = assert_valid(
        "orbit-verify.json",
        &[
            "orbit-verify",
            "--q",
            "1/2",
            "--A",
            "z^3+6*z^2+7*z",
            "--f",
            "2*z+4",
            "--z0",
            "7/10",
            "--depth",
            "5",
        ],
    );
    assert_eq!(value["rows"].as_array().expect("rows is an array").len(), 5);
}

#[test]
fn census_output_validates() {
    let value = assert_valid(
        "census.json",
        &[
            "census",
            "--q",
            "1/2",
            "--a",
            "(1+5/2*z)/(1-2*z)",
            "--radii",
            "1..1e4x13",
        ],
    );
    assert_eq!(value["radii"].as_array().expect("radii is an array").len(), 13);
}

#[test]
fn validator_rejects_mismatched_output() {
    // Negative control: a verify result must not satisfy the reduce
    // schema, proving the validator actually discriminates.
    let value = run_json(&["verify-riccati", "--q", "1/2", "--A", "z^3+6*z^2+7*z", "--f", "2*z+4"]);
    let schema = schema_for("reduce.json");
    let mut errors = Vec::new();
    validate(&schema, &value, "$", &mut errors);
    assert!(!errors.is_empty(), "mismatched output should fail validation");
}
