#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use jsonschema::JSONSchema;
use serde_json::Value;

pub fn osg(args: &[&str]) -> Output {
    osg_env(args, None)
}

/// Runs the binary with `OSG_CACHE_DIR` set to `cache` (or cleared).
pub fn osg_env(args: &[&str], cache: Option<&Path>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_osg"));
    cmd.args(args);
    match cache {
        Some(dir) => cmd.env("OSG_CACHE_DIR", dir),
        None => cmd.env_remove("OSG_CACHE_DIR"),
    };
    cmd.output().expect("binary runs")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

pub fn schema_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("schemas").join(format!("{name}.schema.json"))
}

/// Errors from validating `doc` against the named shipped schema.
pub fn schema_errors(name: &str, doc: &Value) -> Vec<String> {
    let src = std::fs::read_to_string(schema_path(name)).expect("schema file");
    let schema: Value = serde_json::from_str(&src).expect("schema parses");
    let compiled = JSONSchema::compile(&schema).expect("schema compiles");
    let errors = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errs) => errs.map(|e| format!("{} at {}", e, e.instance_path)).collect(),
    };
    errors
}

/// Runs a subcommand in JSON mode, returning exit code and parsed output.
pub fn json_run(args: &[&str]) -> (i32, Value) {
    let mut full = args.to_vec();
    full.extend(["--format", "json"]);
    let o = osg(&full);
    let text = stdout(&o);
    let v = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{args:?}: {e}\n{text}\n{}", String::from_utf8_lossy(&o.stderr)));
    (o.status.code().expect("exit code"), v)
}
