//! Label vocabularies, label sets and finite traces.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

/// The label set `P`, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Vocabulary {
    labels: Vec<String>,
}

impl Vocabulary {
    pub fn new<I, S>(labels: I) -> Result<Self, TraceError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Vocabulary::default();
        for label in labels {
            out.push(label.into())?;
        }
        Ok(out)
    }

    pub fn push(&mut self, label: String) -> Result<(), TraceError> {
        if label.is_empty() {
            return Err(TraceError::InvalidVocabulary { label });
        }
        if self.contains(&label) {
            return Err(TraceError::DuplicateLabel { label });
        }
        self.labels.push(label);
        Ok(())
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// The label set selecting the labels whose bit is set in `mask`
    /// (bit `i` is `labels()[i]`).
    pub fn subset(&self, mask: u64) -> LabelSet {
        self.labels
            .iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, l)| l.clone())
            .collect()
    }

    /// All `2^|P|` label sets, ordered by bitmask.
    pub fn power_set(&self) -> Vec<LabelSet> {
        assert!(
            self.labels.len() < 32,
            "power set of {} labels",
            self.labels.len()
        );
        (0..1u64 << self.labels.len()).map(|m| self.subset(m)).collect()
    }
}

/// One observation `L_t`: the labels holding at a single time step.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct LabelSet(BTreeSet<String>);

impl LabelSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.0.contains(label)
    }

    pub fn insert(&mut self, label: impl Into<String>) -> bool {
        self.0.insert(label.into())
    }

    pub fn iter(&self) -> impl Iterator<Item = &str> {
        self.0.iter().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// First member not in `vocabulary`, if any.
    pub fn unknown_label<'a>(&'a self, vocabulary: &Vocabulary) -> Option<&'a str> {
        self.iter().find(|l| !vocabulary.contains(l))
    }
}

impl<S: Into<String>> FromIterator<S> for LabelSet {
    fn from_iter<I: IntoIterator<Item = S>>(iter: I) -> Self {
        LabelSet(iter.into_iter().map(Into::into).collect())
    }
}

impl<S: Into<String>, const N: usize> From<[S; N]> for LabelSet {
    fn from(labels: [S; N]) -> Self {
        labels.into_iter().collect()
    }
}

/// A finite trace `(L_T0, ..., L_t)`. Append-only while a rollout is live.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Trace {
    origin: usize,
    steps: Vec<LabelSet>,
    vocabulary: Option<Vocabulary>,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    /// A trace whose first step is at time `origin` instead of 0.
    pub fn with_origin(origin: usize) -> Self {
        Trace {
            origin,
            ..Self::default()
        }
    }

    /// A trace restricted to `vocabulary`; `push` rejects foreign labels.
    pub fn with_vocabulary(vocabulary: Vocabulary) -> Self {
        Trace {
            vocabulary: Some(vocabulary),
            ..Self::default()
        }
    }

    pub fn from_steps<I>(steps: I) -> Self
    where
        I: IntoIterator,
        I::Item: Into<LabelSet>,
    {
        Trace {
            steps: steps.into_iter().map(Into::into).collect(),
            ..Self::default()
        }
    }

    pub fn push(&mut self, labels: LabelSet) -> Result<(), TraceError> {
        if let Some(vocabulary) = &self.vocabulary {
            if let Some(label) = labels.unknown_label(vocabulary) {
                return Err(TraceError::UnknownLabel {
                    label: label.into(),
                    step: self.steps.len(),
                });
            }
        }
        self.steps.push(labels);
        Ok(())
    }

    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn vocabulary(&self) -> Option<&Vocabulary> {
        self.vocabulary.as_ref()
    }

    pub fn steps(&self) -> &[LabelSet] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    /// Time of the newest step, `None` while empty.
    pub fn last_time(&self) -> Option<usize> {
        self.steps.len().checked_sub(1).map(|i| self.origin + i)
    }

    /// The label set at absolute time `t`.
    pub fn at(&self, t: usize) -> Option<&LabelSet> {
        t.checked_sub(self.origin).and_then(|i| self.steps.get(i))
    }

    /// The suffix `(L_t, ..., L_last)` as a borrowed view.
    pub fn suffix(&self, t: usize) -> Result<TraceView<'_>, TraceError> {
        match (t.checked_sub(self.origin), self.last_time()) {
            (Some(i), Some(last)) if t <= last => Ok(TraceView {
                origin: t,
                steps: &self.steps[i..],
            }),
            _ => Err(TraceError::Index {
                time: t,
                origin: self.origin,
                len: self.steps.len(),
            }),
        }
    }

    pub fn view(&self) -> TraceView<'_> {
        TraceView {
            origin: self.origin,
            steps: &self.steps,
        }
    }
}

/// A borrowed, contiguous window of a trace keeping absolute time indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TraceView<'a> {
    origin: usize,
    steps: &'a [LabelSet],
}

impl<'a> TraceView<'a> {
    pub fn origin(&self) -> usize {
        self.origin
    }

    pub fn steps(&self) -> &'a [LabelSet] {
        self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn to_trace(&self) -> Trace {
        Trace {
            origin: self.origin,
            steps: self.steps.to_vec(),
            vocabulary: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceError {
    InvalidVocabulary { label: String },
    DuplicateLabel { label: String },
    UnknownLabel { label: String, step: usize },
    Index { time: usize, origin: usize, len: usize },
}

impl fmt::Display for TraceError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceError::InvalidVocabulary { label } => write!(f, "invalid vocabulary label {label:?}"),
            TraceError::DuplicateLabel { label } => write!(f, "duplicate vocabulary label `{label}`"),
            TraceError::UnknownLabel { label, step } => {
                write!(f, "label `{label}` at step {step} is not in the vocabulary")
            }
            TraceError::Index { time, origin, len } => {
                write!(f, "time {time} outside trace of {len} steps starting at {origin}")
            }
        }
    }
}

impl core::error::Error for TraceError {}
