#![allow(dead_code)]

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

pub struct Run {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Runs the built binary with a clean `GMDE_MAX_STATES`.
pub fn gmde(args: &[&str], env: &[(&str, &str)]) -> Run {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_gmde"));
    cmd.args(args).env_remove("GMDE_MAX_STATES");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("spawn gmde");
    Run {
        code: out.status.code().unwrap_or(-1),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

pub fn fixture(name: &str) -> String {
    gmde_testkit::fixtures_dir().join(name).to_str().unwrap().to_string()
}

pub fn docs(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs").join(name)
}

pub fn json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

/// Schema errors of `instance` against a file under `docs/`.
pub fn schema_errors(schema: &str, instance: &serde_json::Value) -> Vec<String> {
    let schema = json(&docs(schema));
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let result = compiled.validate(instance);
    match result {
        Ok(()) => Vec::new(),
        Err(errs) => errs.map(|e| format!("{}: {e}", e.instance_path)).collect(),
    }
}

/// Every file under `dir` with its bytes.
pub fn snapshot(dir: &Path) -> BTreeMap<PathBuf, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.insert(p.strip_prefix(dir).unwrap().to_path_buf(), fs::read(&p).unwrap());
            }
        }
    }
    out
}

pub fn load(path: &Path) -> gmde_core::Architecture {
    gmde::commands::load_architecture(path).unwrap_or_else(|f| panic!("{}", f.message))
}

/// Node and edge statements of a DOT graph.
pub fn dot_counts(dot: &str) -> (usize, usize) {
    let stmts: Vec<&str> = dot.lines().map(str::trim).filter(|l| l.contains("[label=")).collect();
    let edges = stmts.iter().filter(|l| l.contains(" -> ")).count();
    (stmts.len() - edges, edges)
}
