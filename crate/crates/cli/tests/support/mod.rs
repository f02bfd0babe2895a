use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

pub fn spmat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spmat"))
        .args(args)
        .env_remove("SPMAT_WORKERS")
        .output()
        .expect("spawn spmat")
}

pub fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

pub fn schema_errors(doc: &Value) -> Vec<String> {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("schema/output.schema.json");
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    let errors = match compiled.validate(doc) {
        Ok(()) => Vec::new(),
        Err(errs) => errs.map(|e| e.to_string()).collect(),
    };
    errors
}
