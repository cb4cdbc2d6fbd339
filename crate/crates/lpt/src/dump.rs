//! JSON forms of tracking state.

use lpt_core::{format, signature, EngineState, Status};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeInfo {
    pub index: usize,
    pub formula_text: String,
    #[serde(rename = "type")]
    pub kind: String,
    pub parent: Option<usize>,
}

/// Snapshot of an engine: the tree listing and every node's vector.
/// `time` is `null` before the first step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrackingDump {
    pub formula: String,
    pub nodes: Vec<NodeInfo>,
    pub time: Option<usize>,
    pub vectors: Vec<Vec<i8>>,
    pub finalized: bool,
    pub eval_count: u64,
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum DumpError {
    #[error("dump lists {found} vectors for a tree of {expected} nodes")]
    NodeCount { expected: usize, found: usize },
    #[error("vector of node {node} has {found} entries, expected {expected}")]
    Length {
        node: usize,
        expected: usize,
        found: usize,
    },
    #[error("vector of node {node} holds {value}; entries must be -1, 0 or 1")]
    Value { node: usize, value: i8 },
}

impl TrackingDump {
    pub fn from_state(state: &EngineState) -> Self {
        let nodes = state
            .tree()
            .nodes()
            .iter()
            .enumerate()
            .map(|(index, n)| NodeInfo {
                index,
                formula_text: format(&n.formula),
                kind: n.kind.name().to_string(),
                parent: n.parent,
            })
            .collect();
        TrackingDump {
            formula: format(&state.tree().root().formula),
            nodes,
            time: state.current_time(),
            vectors: state.vectors().iter().map(|v| v.to_i8()).collect(),
            finalized: state.is_finalized(),
            eval_count: state.evaluation_count(),
        }
    }

    /// The vectors as statuses, checked against `nodes` tree nodes and
    /// `steps` trace steps.
    pub fn statuses(&self, nodes: usize, steps: usize) -> Result<Vec<Vec<Status>>, DumpError> {
        if self.vectors.len() != nodes {
            return Err(DumpError::NodeCount {
                expected: nodes,
                found: self.vectors.len(),
            });
        }
        self.vectors
            .iter()
            .enumerate()
            .map(|(node, v)| {
                if v.len() != steps {
                    return Err(DumpError::Length {
                        node,
                        expected: steps,
                        found: v.len(),
                    });
                }
                v.iter()
                    .map(|&value| Status::from_i8(value).ok_or(DumpError::Value { node, value }))
                    .collect()
            })
            .collect()
    }
}

/// One line of `track` output.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub dump: TrackingDump,
    /// `null` before the first step.
    pub signature: Option<Vec<Vec<i8>>>,
    pub eval_count: u64,
    pub bound_value: u64,
    pub within_bound: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunReport {
    pub fn from_state(state: &EngineState) -> Self {
        let bound = state.complexity_bound();
        RunReport {
            dump: TrackingDump::from_state(state),
            signature: signature(state).ok().map(|s| s.to_i8()),
            eval_count: state.evaluation_count(),
            bound_value: bound,
            within_bound: state.evaluation_count() <= bound,
            wall_time_ms: None,
        }
    }
}
