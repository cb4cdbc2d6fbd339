//! Oracle cross-checks of a single formula and trace.
//!
//! Three suites run against the brute-force semantics:
//!
//! * soundness: after every update, no locked entry is contradicted by any
//!   continuation of up to `horizon` further steps;
//! * lock-in: no entry leaves `0` or `1` at a later update or at finalize;
//! * completeness: after finalize, every entry equals whole-trace truth.

use lpt_core::oracle::{self, Counterexample, OracleError};
use lpt_core::{format, EngineState, Formula, FormulaTree, Status, Trace, Vocabulary};
use serde::Serialize;

use crate::dump::{DumpError, TrackingDump};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "suite", rename_all = "lowercase")]
pub enum Violation {
    Soundness {
        node: usize,
        formula_text: String,
        time: usize,
        update: usize,
        value: i8,
        continuation: Vec<Vec<String>>,
    },
    #[serde(rename = "lock_in")]
    LockIn {
        node: usize,
        formula_text: String,
        time: usize,
        update: Option<usize>,
        before: i8,
        after: i8,
    },
    Completeness {
        node: usize,
        formula_text: String,
        time: usize,
        value: i8,
        expected: i8,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub formula: String,
    pub steps: usize,
    pub horizon: usize,
    pub vocabulary: Vec<String>,
    pub soundness: Outcome,
    pub lock_in: Outcome,
    pub completeness: Outcome,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CheckError {
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Dump(#[from] DumpError),
    #[error("dump is for `{found}`, not `{expected}`")]
    FormulaMismatch { expected: String, found: String },
    #[error("dump time {time:?} does not fit a trace of {len} steps")]
    Time { time: Option<usize>, len: usize },
}

fn text(tree: &FormulaTree, node: usize) -> String {
    format(&tree.node(node).formula)
}

fn soundness_violation(tree: &FormulaTree, cex: Counterexample) -> Violation {
    Violation::Soundness {
        node: cex.node,
        formula_text: text(tree, cex.node),
        time: cex.time,
        update: cex.update,
        value: cex.value.to_i8(),
        continuation: cex
            .continuation
            .iter()
            .map(|s| s.iter().map(String::from).collect())
            .collect(),
    }
}

fn completeness_violations(tree: &FormulaTree, vectors: &[Vec<Status>], trace: &Trace) -> Vec<Violation> {
    let mut out = Vec::new();
    for (node, vector) in vectors.iter().enumerate() {
        let truth = oracle::oracle_tracking_vector(&tree.node(node).formula, trace);
        for (t, (&value, &expected)) in vector.iter().zip(&truth).enumerate() {
            if value != Status::from_bool(expected) {
                out.push(Violation::Completeness {
                    node,
                    formula_text: text(tree, node),
                    time: t,
                    value: value.to_i8(),
                    expected: i8::from(expected),
                });
            }
        }
    }
    out
}

fn snapshot(state: &EngineState) -> Vec<Vec<Status>> {
    state.vectors().iter().map(|v| v.to_vec()).collect()
}

fn outcome(failed: bool) -> Outcome {
    if failed {
        Outcome::Fail
    } else {
        Outcome::Pass
    }
}

/// Track `trace` with the engine and run all three suites. Each suite
/// reports at most its first violation, in update order.
pub fn check_run(
    formula: &Formula,
    trace: &Trace,
    vocabulary: &Vocabulary,
    horizon: usize,
    cap: u64,
) -> Result<CheckReport, CheckError> {
    let mut state = EngineState::for_formula(formula);
    let mut soundness = None;
    let mut lock_in = None;
    let mut previous: Vec<Vec<Status>> = vec![Vec::new(); state.tree().len()];
    for labels in trace.steps() {
        state
            .step(labels.clone())
            .expect("fresh engine accepts every step");
        if soundness.is_none() {
            let cex = oracle::find_invalid_entry(
                state.tree(),
                state.vectors(),
                state.trace(),
                vocabulary,
                horizon,
                cap,
            )?;
            soundness = cex.map(|c| soundness_violation(state.tree(), c));
        }
        let current = snapshot(&state);
        if lock_in.is_none() {
            lock_in = first_unlock(state.tree(), &previous, &current, state.current_time());
        }
        previous = current;
    }
    state.finalize().expect("trace has at least one step");
    let finalized = snapshot(&state);
    if lock_in.is_none() {
        lock_in = first_unlock(state.tree(), &previous, &finalized, None);
    }
    let completeness = completeness_violations(state.tree(), &finalized, trace)
        .into_iter()
        .next();

    let report = CheckReport {
        formula: format(formula),
        steps: trace.len(),
        horizon,
        vocabulary: vocabulary.labels().to_vec(),
        soundness: outcome(soundness.is_some()),
        lock_in: outcome(lock_in.is_some()),
        completeness: outcome(completeness.is_some()),
        violations: [soundness, lock_in, completeness].into_iter().flatten().collect(),
    };
    Ok(report)
}

fn first_unlock(
    tree: &FormulaTree,
    before: &[Vec<Status>],
    after: &[Vec<Status>],
    update: Option<usize>,
) -> Option<Violation> {
    for (node, (b, a)) in before.iter().zip(after).enumerate() {
        for (t, (&old, &new)) in b.iter().zip(a).enumerate() {
            if old.is_locked() && old != new {
                return Some(Violation::LockIn {
                    node,
                    formula_text: text(tree, node),
                    time: t,
                    update,
                    before: old.to_i8(),
                    after: new.to_i8(),
                });
            }
        }
    }
    None
}

/// Validate a supplied dump instead of the engine's own vectors: locked
/// entries must survive every continuation of the trace prefix up to the
/// dump's time, and a finalized dump must match whole-trace truth.
pub fn check_dump(
    formula: &Formula,
    trace: &Trace,
    dump: &TrackingDump,
    vocabulary: &Vocabulary,
    horizon: usize,
    cap: u64,
) -> Result<CheckReport, CheckError> {
    let tree = FormulaTree::build(formula);
    let expected = format(formula);
    if dump.formula != expected {
        return Err(CheckError::FormulaMismatch {
            expected,
            found: dump.formula.clone(),
        });
    }
    let len = match dump.time {
        Some(t) if t < trace.len() => t + 1,
        time => {
            return Err(CheckError::Time {
                time,
                len: trace.len(),
            })
        }
    };
    let vectors = dump.statuses(tree.len(), len)?;
    let prefix = Trace::from_steps(trace.steps()[..len].iter().cloned());
    let soundness = oracle::find_invalid_entry(&tree, &vectors, &prefix, vocabulary, horizon, cap)?
        .map(|c| soundness_violation(&tree, c));
    let completeness = if dump.finalized {
        if len == trace.len() {
            completeness_violations(&tree, &vectors, trace).into_iter().next()
        } else {
            return Err(CheckError::Time {
                time: dump.time,
                len: trace.len(),
            });
        }
    } else {
        None
    };
    Ok(CheckReport {
        formula: expected,
        steps: len,
        horizon,
        vocabulary: vocabulary.labels().to_vec(),
        soundness: outcome(soundness.is_some()),
        lock_in: Outcome::Skipped,
        completeness: if dump.finalized {
            outcome(completeness.is_some())
        } else {
            Outcome::Skipped
        },
        violations: [soundness, completeness].into_iter().flatten().collect(),
    })
}
