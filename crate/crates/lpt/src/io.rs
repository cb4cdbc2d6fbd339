//! Specification and trace files.
//!
//! A specification file holds one formula. Lines starting with `#` are
//! comments; the remaining lines are joined with spaces.
//!
//! A trace file is JSON Lines: one array of label strings per step, with an
//! optional first line `{"vocabulary":[...]}`. When a vocabulary is
//! declared every label must belong to it. Duplicate labels within a step
//! collapse. Blank lines are rejected; an empty step is written `[]`.

use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use lpt_core::{parse_with_vocabulary, Formula, LabelSet, ParseError, Trace, TraceError, Vocabulary};
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum InputError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("line {line}: label `{label}` is not in the declared vocabulary")]
    UnknownLabel { line: usize, label: String },
    #[error("line {line}: {source}")]
    Vocabulary {
        line: usize,
        #[source]
        source: TraceError,
    },
    #[error("a trace needs at least one step")]
    EmptyTrace,
    #[error("specification is empty")]
    EmptySpec,
    #[error("{line}:{column}: {source}")]
    Spec {
        line: usize,
        column: usize,
        #[source]
        source: ParseError,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct Header {
    vocabulary: Vec<String>,
}

pub fn read_file(path: &Path) -> Result<String, InputError> {
    fs::read_to_string(path).map_err(|source| InputError::Io {
        path: path.to_owned(),
        source,
    })
}

/// Parse a specification, rejecting atoms outside `vocabulary` if given.
/// Error positions are reported as 1-based line and column.
pub fn read_spec(text: &str, vocabulary: Option<&Vocabulary>) -> Result<Formula, InputError> {
    // keep the byte offset of every retained line to map positions back
    let mut joined = String::new();
    let mut origins: Vec<(usize, usize)> = Vec::new();
    for (number, line) in text.lines().enumerate() {
        if line.trim_start().starts_with('#') || line.trim().is_empty() {
            continue;
        }
        if !joined.is_empty() {
            joined.push(' ');
        }
        origins.push((joined.len(), number + 1));
        joined.push_str(line.trim_end());
    }
    if joined.trim().is_empty() {
        return Err(InputError::EmptySpec);
    }
    let result = match vocabulary {
        Some(v) => parse_with_vocabulary(&joined, v),
        None => lpt_core::parse(&joined),
    };
    result.map_err(|source| {
        let position = source.position();
        let &(start, line) = origins
            .iter()
            .rev()
            .find(|(start, _)| *start <= position)
            .unwrap_or(&origins[0]);
        InputError::Spec {
            line,
            column: position - start + 1,
            source,
        }
    })
}

pub fn load_spec(path: &Path, vocabulary: Option<&Vocabulary>) -> Result<Formula, InputError> {
    read_spec(&read_file(path)?, vocabulary)
}

/// Parse a JSON Lines trace.
pub fn read_trace<R: BufRead>(reader: R) -> Result<Trace, InputError> {
    let mut trace = Trace::new();
    for (index, line) in reader.lines().enumerate() {
        let number = index + 1;
        let line = line.map_err(|e| InputError::Format {
            line: number,
            message: e.to_string(),
        })?;
        let value: serde_json::Value = serde_json::from_str(&line).map_err(|e| InputError::Format {
            line: number,
            message: e.to_string(),
        })?;
        if value.is_object() {
            if index > 0 {
                return Err(InputError::Format {
                    line: number,
                    message: "the vocabulary header must be the first line".into(),
                });
            }
            let header: Header = serde_json::from_value(value).map_err(|e| InputError::Format {
                line: number,
                message: e.to_string(),
            })?;
            let vocabulary = Vocabulary::new(header.vocabulary)
                .map_err(|source| InputError::Vocabulary { line: number, source })?;
            trace = Trace::with_vocabulary(vocabulary);
            continue;
        }
        let labels: Vec<String> = serde_json::from_value(value).map_err(|_| InputError::Format {
            line: number,
            message: "expected a JSON array of label strings".into(),
        })?;
        trace.push(labels.into_iter().collect()).map_err(|e| match e {
            TraceError::UnknownLabel { label, .. } => InputError::UnknownLabel { line: number, label },
            other => InputError::Vocabulary {
                line: number,
                source: other,
            },
        })?;
    }
    if trace.is_empty() {
        return Err(InputError::EmptyTrace);
    }
    Ok(trace)
}

pub fn read_trace_str(text: &str) -> Result<Trace, InputError> {
    read_trace(text.as_bytes())
}

pub fn load_trace(path: &Path) -> Result<Trace, InputError> {
    read_trace_str(&read_file(path)?)
}

/// Write `trace` in the format [`read_trace`] accepts.
pub fn write_trace<W: Write>(trace: &Trace, mut out: W) -> std::io::Result<()> {
    if let Some(vocabulary) = trace.vocabulary() {
        let header = Header {
            vocabulary: vocabulary.labels().to_vec(),
        };
        writeln!(out, "{}", serde_json::to_string(&header)?)?;
    }
    for step in trace.steps() {
        writeln!(out, "{}", label_json(step))?;
    }
    Ok(())
}

pub fn label_json(labels: &LabelSet) -> String {
    serde_json::to_string(&labels.iter().collect::<Vec<_>>()).expect("strings serialize")
}

/// The declared vocabulary, or else the formula's atoms and every label
/// seen in the trace, sorted.
pub fn effective_vocabulary(formula: &Formula, trace: &Trace) -> Vocabulary {
    if let Some(v) = trace.vocabulary() {
        return v.clone();
    }
    let mut labels: std::collections::BTreeSet<String> =
        formula.atoms().into_iter().map(String::from).collect();
    for step in trace.steps() {
        labels.extend(step.iter().map(String::from));
    }
    Vocabulary::new(labels).expect("distinct nonempty labels")
}
