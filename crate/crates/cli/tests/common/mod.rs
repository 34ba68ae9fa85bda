#![allow(dead_code)]

pub mod oracle;

use std::path::PathBuf;

pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/academic-demo")
}

pub fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_graphcot")
}
