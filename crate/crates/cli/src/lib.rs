//! Command-line front end: graph parsing, reports, the census harness and
//! fixture loading.

pub mod census;
pub mod parse;
pub mod report;

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, std::io::Error),
    #[error("{0}: {1}")]
    Parse(String, parse::ParseError),
    #[error(transparent)]
    Core(#[from] outraag::Error),
    #[error("usage: {0}")]
    Usage(String),
}

/// Directory holding the example graphs.
pub fn fixture_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn load_fixture(name: &str) -> Result<outraag::SimplicialGraph, CliError> {
    parse::read_graph(&fixture_dir().join(name), Some(parse::Format::EdgeList))
}
