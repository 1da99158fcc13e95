use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph has no edges; modularity is undefined")]
    Empty,
    #[error("node {node} out of range for a graph on {n} nodes")]
    NodeOutOfRange { node: u64, n: usize },
    #[error("graph with {n} nodes exceeds the supported size")]
    TooLarge { n: usize },
    #[error(transparent)]
    Io(#[from] io::Error),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ModularityError {
    #[error("partition labels {labelled} nodes but the graph has {nodes}")]
    PartitionSize { labelled: usize, nodes: usize },
    #[error("{m} edges exceeds the exact-arithmetic bound of {max}")]
    TooManyEdges { m: usize, max: usize },
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error(transparent)]
    Modularity(#[from] ModularityError),
    #[error("pair ({lo}, {hi}) is stale: community {dead} is no longer live")]
    StalePair { lo: u32, hi: u32, dead: u32 },
    #[error("pair ({lo}, {hi}) is not present")]
    MissingPair { lo: u32, hi: u32 },
    #[error("invariant violated: {0}")]
    Invariant(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("merge log is empty")]
    EmptyLog,
    #[error("{0}")]
    Degenerate(String),
}

/// Errors reading or writing the CSV artifacts.
#[derive(Debug, Error)]
pub enum FormatError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("missing column {0:?}")]
    MissingColumn(String),
    #[error("{0}")]
    Invalid(String),
}
