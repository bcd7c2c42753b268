//! Command output conforms to the JSON schemas under `docs/schema`.
//!
//! The validator covers the keywords those schemas use: `type`, `const`,
//! `properties`, `required`, `additionalProperties: false`, `items`,
//! `prefixItems`, `minItems`, `maxItems`, `oneOf` and local `$ref`.

use qmanifold::cli::{run, EXIT_OK};
use serde_json::Value;
use std::path::PathBuf;

fn schema(name: &str) -> Value {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schema").join(name);
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn type_matches(t: &str, v: &Value) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_u64() || v.is_i64(),
        other => panic!("unsupported type {other}"),
    }
}

fn check(root: &Value, s: &Value, v: &Value, path: &str) -> Result<(), String> {
    if let Some(r) = s.get("$ref").and_then(Value::as_str) {
        let name = r.strip_prefix("#/$defs/").expect("local reference");
        return check(root, &root["$defs"][name], v, path);
    }
    if let Some(alts) = s.get("oneOf").and_then(Value::as_array) {
        let ok = alts.iter().filter(|a| check(root, a, v, path).is_ok()).count();
        return if ok == 1 { Ok(()) } else { Err(format!("{path}: {ok} oneOf branches match")) };
    }
    if let Some(c) = s.get("const") {
        if c != v {
            return Err(format!("{path}: expected {c}, got {v}"));
        }
    }
    match s.get("type") {
        Some(Value::String(t)) if !type_matches(t, v) => return Err(format!("{path}: not {t}")),
        Some(Value::Array(ts)) if !ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)) => {
            return Err(format!("{path}: not any of {ts:?}"))
        }
        _ => {}
    }
    if let (Some(props), Some(o)) = (s.get("properties").and_then(Value::as_object), v.as_object()) {
        for req in s.get("required").and_then(Value::as_array).into_iter().flatten() {
            if !o.contains_key(req.as_str().unwrap()) {
                return Err(format!("{path}: missing {req}"));
            }
        }
        for (k, x) in o {
            match props.get(k) {
                Some(ps) => check(root, ps, x, &format!("{path}.{k}"))?,
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{path}: unexpected key {k}"))
                }
                None => {}
            }
        }
    }
    if let Some(a) = v.as_array() {
        let len = a.len() as u64;
        if s.get("minItems").and_then(Value::as_u64).is_some_and(|n| len < n)
            || s.get("maxItems").and_then(Value::as_u64).is_some_and(|n| len > n)
        {
            return Err(format!("{path}: wrong length {len}"));
        }
        let prefix = s.get("prefixItems").and_then(Value::as_array);
        for (i, x) in a.iter().enumerate() {
            let item = prefix.and_then(|p| p.get(i)).or_else(|| s.get("items"));
            if let Some(item) = item {
                check(root, item, x, &format!("{path}[{i}]"))?;
            }
        }
    }
    Ok(())
}

fn validate(schema_name: &str, output: &str) {
    let root = schema(schema_name);
    let v: Value = serde_json::from_str(output).unwrap();
    if let Err(e) = check(&root, &root, &v, "$") {
        panic!("{schema_name}: {e}");
    }
}

const MANIFEST: &str = r#"
points = [[1.0, 0.3, 0.7], [0.1, 0.2, 0.3]]
[metric]
A = "cosh(x1)^2 + x3^2"
B = "x1^2 + 1"
[options]
tol_curv = 1e-7
[basis]
x = [1.0, 1.0, 1.0]
"#;

#[test]
fn outputs_match_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("m.toml");
    std::fs::write(&m, MANIFEST).unwrap();
    let m = m.to_str().unwrap();
    let flat = dir.path().join("flat.toml");
    std::fs::write(&flat, "points = [[0, 0, 0]]\n[metric]\nA = \"1\"\nB = \"1\"\n").unwrap();
    let flat = flat.to_str().unwrap();
    let s2 = dir.path().join("s2.toml");
    std::fs::write(&s2, "points = [[0.1, 0.2, 0.3]]\n[metric]\nA = \"4/(1 + x1^2 + x2^2)^2\"\nB = \"1\"\n").unwrap();
    let s2 = s2.to_str().unwrap();

    let cases: Vec<(&str, Vec<&str>)> = vec![
        ("report.schema.json", vec!["analyze", m]),
        ("report.schema.json", vec!["analyze", flat, "--x", "1,0,1"]),
        ("report.schema.json", vec!["analyze", s2, "--x", "0.4,0.9,0.7"]),
        ("basis.schema.json", vec!["basis", m]),
        ("verify.schema.json", vec!["verify", "--count", "5", "--json"]),
        ("catenoid.schema.json", vec!["catenoid", "--u", "0.5,-2", "--json"]),
    ];
    for (schema_name, args) in cases {
        let o = run(std::iter::once("qmanifold").chain(args.iter().copied()), None);
        assert_eq!(o.code, EXIT_OK, "{args:?}: {}", o.stderr);
        validate(schema_name, &o.stdout);
    }
}

#[test]
fn validator_rejects_drift() {
    let root = schema("verify.schema.json");
    let bad = serde_json::json!({"seed": 1, "count": 1, "sample_box": [0.0, 1.0], "identities": [], "errors": [], "extra": 1});
    assert!(check(&root, &root, &bad, "$").is_err());
    let short = serde_json::json!({"seed": 1, "count": 1, "sample_box": [0.0], "identities": [], "errors": []});
    assert!(check(&root, &root, &short, "$").is_err());
}
