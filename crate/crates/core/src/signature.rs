//! Behavioral signatures: tracking vectors with timing erased.
//!
//! A node's vector is merged by collapsing runs of equal adjacent values, so
//! `[0, 0, 1, -1, -1]` becomes `[0, 1, -1]`. The signature of a state lists
//! the merged vectors in level order. Two rollouts of the same formula with
//! equal signatures went through the same sequence of status changes, even
//! if at different times.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::{self, Write};

use crate::engine::EngineState;
use crate::status::Status;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignatureError {
    EmptyState,
    ShapeMismatch { left: usize, right: usize },
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::EmptyState => f.write_str("no step taken yet; the signature is undefined"),
            SignatureError::ShapeMismatch { left, right } => {
                write!(f, "signatures over {left} and {right} nodes are not comparable")
            }
        }
    }
}

impl core::error::Error for SignatureError {}

/// Collapse runs of equal adjacent values.
pub fn merge(values: &[Status]) -> Vec<Status> {
    let mut out: Vec<Status> = Vec::with_capacity(values.len());
    for &v in values {
        if out.last() != Some(&v) {
            out.push(v);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Signature(Vec<Vec<Status>>);

impl Signature {
    /// Merge each vector; does not require a step to have been taken.
    pub fn from_vectors<V: AsRef<[Status]>>(vectors: &[V]) -> Self {
        Signature(vectors.iter().map(|v| merge(v.as_ref())).collect())
    }

    pub fn nodes(&self) -> &[Vec<Status>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_i8(&self) -> Vec<Vec<i8>> {
        self.0
            .iter()
            .map(|n| n.iter().map(|s| s.to_i8()).collect())
            .collect()
    }

    pub fn from_i8(values: &[Vec<i8>]) -> Option<Self> {
        let nodes = values
            .iter()
            .map(|n| n.iter().map(|&v| Status::from_i8(v)).collect::<Option<Vec<_>>>())
            .collect::<Option<Vec<_>>>()?;
        Some(Signature::from_vectors(&nodes))
    }

    /// Compact JSON: an array of integer arrays without whitespace.
    pub fn to_json(&self) -> String {
        let mut out = String::new();
        write_nested(&mut out, &self.0);
        out
    }

    /// Sum over nodes of the edit distance between merged sequences.
    ///
    /// This is an extension for novelty scoring, not part of the tracking
    /// semantics.
    pub fn distance(&self, other: &Signature) -> Result<usize, SignatureError> {
        check_shape(self, other)?;
        Ok(self
            .0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| edit_distance(a, b))
            .sum())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_json())
    }
}

pub(crate) fn write_nested(out: &mut String, rows: &[impl AsRef<[Status]>]) {
    out.push('[');
    for (i, row) in rows.iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for (j, s) in row.as_ref().iter().enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}", s.to_i8());
        }
        out.push(']');
    }
    out.push(']');
}

/// The signature of `state` at its current time.
pub fn signature(state: &EngineState) -> Result<Signature, SignatureError> {
    if state.trace().is_empty() {
        return Err(SignatureError::EmptyState);
    }
    Ok(Signature::from_vectors(state.vectors()))
}

pub fn signatures_equal(a: &Signature, b: &Signature) -> Result<bool, SignatureError> {
    check_shape(a, b)?;
    Ok(a == b)
}

fn check_shape(a: &Signature, b: &Signature) -> Result<(), SignatureError> {
    if a.len() != b.len() {
        return Err(SignatureError::ShapeMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    Ok(())
}

fn edit_distance(a: &[Status], b: &[Status]) -> usize {
    let mut row: Vec<usize> = (0..=b.len()).collect();
    for (i, x) in a.iter().enumerate() {
        let mut diagonal = row[0];
        row[0] = i + 1;
        for (j, y) in b.iter().enumerate() {
            let substitute = diagonal + usize::from(x != y);
            diagonal = row[j + 1];
            row[j + 1] = substitute.min(row[j] + 1).min(diagonal + 1);
        }
    }
    row[b.len()]
}
