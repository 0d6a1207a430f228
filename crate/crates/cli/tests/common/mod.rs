#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

pub fn crate_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
}

/// Runs `ifp` from the crate directory so fixture paths in reports are stable.
pub fn ifp(args: &[&str]) -> Output {
    ifp_env(args, &[])
}

pub fn ifp_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_ifp"));
    cmd.current_dir(crate_dir()).args(args).env_remove("IFP_ENUM_CAP");
    for (k, v) in env {
        cmd.env(k, v);
    }
    cmd.output().expect("ifp runs")
}

pub fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

pub fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

pub struct GoldenCase {
    pub name: &'static str,
    pub args: &'static [&'static str],
    pub exit: i32,
}

macro_rules! case {
    ($name:literal, $exit:literal, [$($a:literal),* $(,)?]) => {
        GoldenCase { name: $name, exit: $exit, args: &[$($a),*, "--no-meta"] }
    };
}

pub const GOLDEN_CASES: &[GoldenCase] = &[
    case!("check_axioms_u3", 0, ["check-axioms", "tests/fixtures/u3.json"]),
    case!("check_axioms_e3", 0, ["check-axioms", "tests/fixtures/e3.json"]),
    case!("check_axioms_s5", 0, ["check-axioms", "tests/fixtures/s5.json", "--t-grid", "0.25,1,4"]),
    case!("check_axioms_mu_zero", 1, ["check-axioms", "tests/fixtures/u3_mu_zero.json"]),
    case!("check_axioms_e3_min_max", 1, ["check-axioms", "tests/fixtures/e3_min_max.json"]),
    case!("check_axioms_u3_strict_xii", 0, ["check-axioms", "tests/fixtures/u3.json", "--strict-xii"]),
    case!("certify_u3_constant", 0, ["certify", "tests/fixtures/u3.json", "--kind", "ts-if", "--k", "0.5"]),
    case!("certify_u3_identity", 1, ["certify", "tests/fixtures/u3_identity.json", "--kind", "ts-if", "--k", "0.9"]),
    case!("certify_u3_identity_local", 1, ["certify", "tests/fixtures/u3_identity.json", "--kind", "local", "--eps", "0.4", "--lambda", "0.9"]),
    case!("certify_u4_auto_k", 1, ["certify", "tests/fixtures/u4.json", "--auto-k"]),
    case!("certify_e3_auto_k_isometric_pair", 1, ["certify", "tests/fixtures/e3.json", "--auto-k"]),
    case!("solve_u3_picard", 0, ["solve", "tests/fixtures/u3.json", "--mode", "picard", "--x0", "c"]),
    case!("solve_u3_ball", 0, ["solve", "tests/fixtures/u3.json", "--mode", "ball", "--center", "a", "--r", "0.6", "--t", "1", "--k", "0.5"]),
    case!("solve_u3_ball_refused", 1, ["solve", "tests/fixtures/u3.json", "--mode", "ball", "--center", "a", "--r", "0.3", "--t", "1"]),
    case!("solve_u4_power", 0, ["solve", "tests/fixtures/u4.json", "--mode", "power", "--m", "2", "--x0", "d"]),
    case!("solve_u4_picard_refused", 1, ["solve", "tests/fixtures/u4.json", "--mode", "picard", "--k", "0.5"]),
    case!("solve_s5_chain", 0, ["solve", "tests/fixtures/s5_constant.json", "--mode", "chain", "--eps", "0.5", "--lambda", "0.9", "--t", "1", "--x0", "2"]),
    case!("solve_one_point", 0, ["solve", "tests/fixtures/one_point.json"]),
    case!("chain_s5", 0, ["chain", "tests/fixtures/s5.json", "--from", "0", "--to", "2", "--eta", "0.5", "--t", "1"]),
    case!("chain_s5_broken", 1, ["chain", "tests/fixtures/s5.json", "--from", "0", "--to", "2", "--eta", "0.7", "--t", "1"]),
    case!("chain_s5_singleton", 0, ["chain", "tests/fixtures/s5.json", "--from", "1", "--to", "1", "--eta", "0.5", "--t", "1"]),
    case!("chain_u3_all_grid", 0, ["chain", "tests/fixtures/u3.json", "--from", "a", "--to", "c", "--eta", "0.4", "--all-grid"]),
    case!("enumerate_u3", 0, ["enumerate", "tests/fixtures/u3.json", "--k", "0.5"]),
    case!("enumerate_u3_empty", 0, ["enumerate", "tests/fixtures/u3.json", "--k", "0.4"]),
    case!("enumerate_one_point", 0, ["enumerate", "tests/fixtures/one_point.json", "--k", "0.5"]),
];

/// Inputs that must be rejected with exit code 2, and a fragment of the
/// expected diagnostic.
pub const MALFORMED_CASES: &[(&[&str], &str)] = &[
    (&["check-axioms", "tests/fixtures/truncated.json"], "invalid document"),
    (&["check-axioms", "tests/fixtures/bad_field.json"], "profile.mu[0][1]"),
    (&["check-axioms", "tests/fixtures/missing.json"], "cannot read"),
    (&["certify", "tests/fixtures/u3_no_map.json", "--k", "0.5"], "no `map`"),
    (&["certify", "tests/fixtures/u3.json"], "--k is required"),
    (&["solve", "tests/fixtures/u3.json", "--mode", "ball", "--t", "1"], "--r is required"),
    (&["solve", "tests/fixtures/u3.json", "--x0", "z"], "unknown point `z`"),
    (&["chain", "tests/fixtures/s5.json", "--from", "0", "--to", "2", "--eta", "1.5", "--t", "1"], "eta"),
    (&["check-axioms", "tests/fixtures/u3.json", "--tol=-1"], "--tol"),
    (&["check-axioms", "tests/fixtures/u3.json", "--t-grid", "1,-2"], "t"),
    (&["enumerate", "tests/fixtures/u3.json"], "--k"),
    (&["frobnicate"], "unrecognized subcommand"),
];

pub fn golden_path(name: &str) -> PathBuf {
    crate_dir().join("tests/golden").join(format!("{name}.json"))
}

pub fn schema_for(command: &str) -> Value {
    let path = crate_dir().join("schemas").join(format!("{command}.v1.schema.json"));
    serde_json::from_str(&fs::read_to_string(path).expect("schema file")).expect("schema json")
}

/// Compares a report against its golden file. With `IFP_UPDATE_GOLDEN` set
/// the golden file is rewritten instead.
pub fn check_golden(case: &GoldenCase, actual: &str) -> Result<(), String> {
    let path = golden_path(case.name);
    if std::env::var_os("IFP_UPDATE_GOLDEN").is_some() {
        fs::write(&path, actual).map_err(|e| e.to_string())?;
        return Ok(());
    }
    let expected = fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
    if expected == actual {
        Ok(())
    } else {
        Err(format!("{} differs from golden file {}", case.name, path.display()))
    }
}

/// Runs one golden case end to end: exit code, golden bytes, schema.
pub fn run_golden(case: &GoldenCase) -> Result<(), String> {
    let out = ifp(case.args);
    if code(&out) != case.exit {
        return Err(format!(
            "{}: exit {} (expected {}); stderr: {}",
            case.name,
            code(&out),
            case.exit,
            stderr(&out)
        ));
    }
    let text = stdout(&out);
    check_golden(case, &text)?;
    let report: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", case.name))?;
    validate(&schema_for(case.args[0]), &report).map_err(|e| format!("{}: {e}", case.name))?;
    if report["manifest"]["exit_code"] != case.exit {
        return Err(format!("{}: manifest exit code disagrees", case.name));
    }
    Ok(())
}

pub fn run_malformed(args: &[&str], fragment: &str) -> Result<(), String> {
    let out = ifp(args);
    if code(&out) != 2 {
        return Err(format!("{args:?}: exit {} (expected 2)", code(&out)));
    }
    if !out.stdout.is_empty() {
        return Err(format!("{args:?}: wrote a report on malformed input"));
    }
    let err = stderr(&out);
    if !err.contains(fragment) {
        return Err(format!("{args:?}: diagnostic lacks `{fragment}`: {err}"));
    }
    Ok(())
}

/// Validates against the subset of JSON Schema the shipped schemas use.
pub fn validate(schema: &Value, value: &Value) -> Result<(), String> {
    validate_at(schema, value, "$")
}

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        "number" => v.is_number(),
        "integer" => v.is_i64() || v.is_u64(),
        other => panic!("unsupported schema type {other}"),
    }
}

fn validate_at(schema: &Value, v: &Value, at: &str) -> Result<(), String> {
    let s = schema.as_object().ok_or_else(|| format!("{at}: schema is not an object"))?;
    for key in s.keys() {
        let known = [
            "$schema", "$id", "title", "type", "properties", "required", "additionalProperties",
            "items", "enum", "const", "oneOf", "minimum", "minItems", "maxItems",
        ];
        if !known.contains(&key.as_str()) {
            return Err(format!("{at}: unsupported schema keyword `{key}`"));
        }
    }
    if let Some(ty) = s.get("type") {
        let ok = match ty {
            Value::String(t) => type_matches(t, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
            _ => false,
        };
        if !ok {
            return Err(format!("{at}: expected type {ty}, got {v}"));
        }
    }
    if let Some(c) = s.get("const") {
        if c != v {
            return Err(format!("{at}: expected {c}, got {v}"));
        }
    }
    if let Some(Value::Array(options)) = s.get("enum") {
        if !options.contains(v) {
            return Err(format!("{at}: {v} not in {options:?}"));
        }
    }
    if let (Some(min), Some(x)) = (s.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            return Err(format!("{at}: {x} < minimum {min}"));
        }
    }
    if let Some(Value::Array(options)) = s.get("oneOf") {
        let matched = options.iter().filter(|o| validate_at(o, v, at).is_ok()).count();
        if matched != 1 {
            return Err(format!("{at}: matched {matched} oneOf branches"));
        }
    }
    if let Value::Object(map) = v {
        let props = s.get("properties").and_then(Value::as_object);
        if let Some(Value::Array(required)) = s.get("required") {
            for r in required {
                let r = r.as_str().unwrap();
                if !map.contains_key(r) {
                    return Err(format!("{at}: missing required `{r}`"));
                }
            }
        }
        for (k, child) in map {
            match props.and_then(|p| p.get(k)) {
                Some(sub) => validate_at(sub, child, &format!("{at}.{k}"))?,
                None if s.get("additionalProperties") == Some(&Value::Bool(false)) => {
                    return Err(format!("{at}: unexpected property `{k}`"));
                }
                None => {}
            }
        }
    }
    if let Value::Array(items) = v {
        if let Some(n) = s.get("minItems").and_then(Value::as_u64) {
            if (items.len() as u64) < n {
                return Err(format!("{at}: fewer than {n} items"));
            }
        }
        if let Some(n) = s.get("maxItems").and_then(Value::as_u64) {
            if items.len() as u64 > n {
                return Err(format!("{at}: more than {n} items"));
            }
        }
        if let Some(item) = s.get("items") {
            for (i, child) in items.iter().enumerate() {
                validate_at(item, child, &format!("{at}[{i}]"))?;
            }
        }
    }
    Ok(())
}

pub fn read(path: &Path) -> String {
    fs::read_to_string(path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}
