// SPDX-License-Identifier: Apache-2.0
//! Error type shared by every module of the crate.

use thiserror::Error;

use crate::graph::Node;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("node {0} is not in the graph")]
    UnknownNode(Node),
    #[error("self-loop on node {0}")]
    SelfLoop(Node),
    #[error("duplicate node {0}")]
    DuplicateNode(Node),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Node, Node),
    #[error("non-output node {0} has no measurement label")]
    MissingLabel(Node),
    #[error("output node {0} carries a measurement label")]
    LabeledOutput(Node),
    #[error("label on node {0} is malformed: {1}")]
    BadLabel(Node, String),
    #[error("X measurement of node {0} needs a neighbor b0, got {1:?}")]
    BadB0(Node, Option<Node>),
    #[error("node {0} is an input")]
    InputNode(Node),
    #[error("{found} non-output nodes exceed the brute-force cap of {cap}")]
    CapExceeded { found: usize, cap: usize },
    #[error("{need} qubits exceed the simulator cap of {cap}")]
    QubitCap { need: usize, cap: usize },
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("flow candidate is malformed: {0}")]
    MalformedCandidate(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("pattern error: {0}")]
    Pattern(String),
    #[error("branch with outcome {outcome} on node {node} has zero probability")]
    ZeroProbability { node: Node, outcome: u8 },
    #[error("pattern is not deterministic: {0}")]
    Nondeterministic(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
