//! Brute-force LTL_f semantics.
//!
//! Everything here evaluates formulas straight from the satisfaction clauses
//! on complete traces. It is the ground truth for terminal evaluation and the
//! reference the incremental engine is tested against, so it stays naive:
//! [`holds`] recurses without memoization, and [`truth_table`] only caches
//! whole per-subformula tables.
//!
//! Release uses `∀i ≥ t0: φ2@i ∨ ∃k ∈ [t0, i): φ1@k`, the dual of until.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::ControlFlow;

use crate::status::Status;
use crate::syntax::{BinaryOp, Formula, Kind, UnaryOp};
use crate::trace::{LabelSet, Trace, Vocabulary};
use crate::tree::FormulaTree;

/// Default bound on the number of continuations one query may enumerate.
pub const DEFAULT_ENUMERATION_CAP: u64 = 1 << 20;

/// Three-valued answer of a bounded continuation query.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Verdict {
    True,
    False,
    Open,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleError {
    Index { time: usize, origin: usize, len: usize },
    BudgetExceeded { required: Option<u64>, cap: u64 },
    ShapeMismatch { expected: usize, found: usize },
}

impl fmt::Display for OracleError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleError::Index { time, origin, len } => {
                write!(f, "time {time} outside trace of {len} steps starting at {origin}")
            }
            OracleError::BudgetExceeded {
                required: Some(n),
                cap,
            } => {
                write!(f, "{n} continuations exceed the enumeration cap of {cap}")
            }
            OracleError::BudgetExceeded { required: None, cap } => {
                write!(f, "continuation count overflows; cap is {cap}")
            }
            OracleError::ShapeMismatch { expected, found } => {
                write!(f, "expected {expected} tracking vectors, found {found}")
            }
        }
    }
}

impl core::error::Error for OracleError {}

fn relative(trace: &Trace, t: usize) -> Result<usize, OracleError> {
    match t.checked_sub(trace.origin()) {
        Some(i) if i < trace.len() => Ok(i),
        _ => Err(OracleError::Index {
            time: t,
            origin: trace.origin(),
            len: trace.len(),
        }),
    }
}

/// `ρ^{t0...} ⊨ f` on the complete trace.
pub fn holds(f: &Formula, trace: &Trace, t0: usize) -> Result<bool, OracleError> {
    let i = relative(trace, t0)?;
    Ok(sat(f, trace.steps(), i))
}

fn sat(f: &Formula, steps: &[LabelSet], t: usize) -> bool {
    let last = steps.len() - 1;
    match f {
        Formula::True => true,
        Formula::Atom(name) => steps[t].contains(name),
        Formula::Unary(op, a) => match op {
            UnaryOp::Not => !sat(a, steps, t),
            UnaryOp::Next => t < last && sat(a, steps, t + 1),
            UnaryOp::Eventually => (t..=last).any(|i| sat(a, steps, i)),
            UnaryOp::Globally => (t..=last).all(|i| sat(a, steps, i)),
        },
        Formula::Binary(op, a, b) => match op {
            BinaryOp::And => sat(a, steps, t) && sat(b, steps, t),
            BinaryOp::Or => sat(a, steps, t) || sat(b, steps, t),
            BinaryOp::Implies => !sat(a, steps, t) || sat(b, steps, t),
            BinaryOp::Until => until(steps, t, |i| sat(a, steps, i), |i| sat(b, steps, i)),
            BinaryOp::WeakUntil => {
                until(steps, t, |i| sat(a, steps, i), |i| sat(b, steps, i))
                    || (t..=last).all(|i| sat(a, steps, i))
            }
            BinaryOp::Release => (t..=last).all(|i| sat(b, steps, i) || (t..i).any(|k| sat(a, steps, k))),
            BinaryOp::StrongRelease => {
                (t..=last).any(|i| sat(a, steps, i) && sat(b, steps, i) && (t..i).all(|k| sat(b, steps, k)))
            }
        },
    }
}

fn until(steps: &[LabelSet], t: usize, lhs: impl Fn(usize) -> bool, rhs: impl Fn(usize) -> bool) -> bool {
    (t..steps.len()).any(|i| rhs(i) && (t..i).all(&lhs))
}

/// Entry `t` of a node's table given its children's complete tables.
fn entry(kind: Kind, label: Option<&str>, steps: &[LabelSet], lhs: &[bool], rhs: &[bool], t: usize) -> bool {
    let last = steps.len() - 1;
    match kind {
        Kind::True => true,
        Kind::Atom => steps[t].contains(label.unwrap_or_default()),
        Kind::Not => !lhs[t],
        Kind::Next => t < last && lhs[t + 1],
        Kind::Eventually => lhs[t..].iter().any(|&v| v),
        Kind::Globally => lhs[t..].iter().all(|&v| v),
        Kind::And => lhs[t] && rhs[t],
        Kind::Or => lhs[t] || rhs[t],
        Kind::Implies => !lhs[t] || rhs[t],
        Kind::Until => (t..=last).any(|i| rhs[i] && lhs[t..i].iter().all(|&v| v)),
        Kind::WeakUntil => {
            (t..=last).any(|i| rhs[i] && lhs[t..i].iter().all(|&v| v)) || lhs[t..].iter().all(|&v| v)
        }
        Kind::Release => (t..=last).all(|i| rhs[i] || lhs[t..i].iter().any(|&v| v)),
        Kind::StrongRelease => (t..=last).any(|i| lhs[i] && rhs[i] && rhs[t..i].iter().all(|&v| v)),
    }
}

fn table_from(kind: Kind, label: Option<&str>, steps: &[LabelSet], lhs: &[bool], rhs: &[bool]) -> Vec<bool> {
    (0..steps.len())
        .map(|t| entry(kind, label, steps, lhs, rhs, t))
        .collect()
}

fn table_rec(f: &Formula, steps: &[LabelSet]) -> Vec<bool> {
    let args: Vec<Vec<bool>> = f.arguments().into_iter().map(|a| table_rec(a, steps)).collect();
    let empty: &[bool] = &[];
    let lhs = args.first().map_or(empty, Vec::as_slice);
    let rhs = args.get(1).map_or(empty, Vec::as_slice);
    table_from(f.kind(), f.atom_name(), steps, lhs, rhs)
}

/// `[ρ^{t...} ⊨ f for every t]`, one entry per trace step.
pub fn truth_table(f: &Formula, trace: &Trace) -> Vec<bool> {
    if trace.is_empty() {
        return Vec::new();
    }
    table_rec(f, trace.steps())
}

/// Terminal ground truth for a node: entry `t` is `holds(f, trace, t)`.
pub fn oracle_tracking_vector(f: &Formula, trace: &Trace) -> Vec<bool> {
    truth_table(f, trace)
}

/// Truth tables for every node of `tree` over `steps`, computed bottom-up.
pub fn tree_truth_tables(tree: &FormulaTree, steps: &[LabelSet]) -> Vec<Vec<bool>> {
    let mut tables: Vec<Vec<bool>> = vec![Vec::new(); tree.len()];
    if steps.is_empty() {
        return tables;
    }
    for i in (0..tree.len()).rev() {
        let node = tree.node(i);
        let empty: &[bool] = &[];
        let lhs = node.children.first().map_or(empty, |&c| tables[c].as_slice());
        let rhs = node.children.get(1).map_or(empty, |&c| tables[c].as_slice());
        tables[i] = table_from(node.kind, node.formula.atom_name(), steps, lhs, rhs);
    }
    tables
}

/// `Σ_{k=0..=horizon} (2^labels)^k`, or `None` on overflow.
pub fn continuation_count(labels: usize, horizon: usize) -> Option<u64> {
    let alphabet = 1u64.checked_shl(u32::try_from(labels).ok()?)?;
    let mut total = 0u64;
    let mut layer = 1u64;
    for k in 0..=horizon {
        if k > 0 {
            layer = layer.checked_mul(alphabet)?;
        }
        total = total.checked_add(layer)?;
    }
    Some(total)
}

fn check_budget(vocabulary: &Vocabulary, horizon: usize, cap: u64) -> Result<(), OracleError> {
    match continuation_count(vocabulary.len(), horizon) {
        Some(n) if n <= cap => Ok(()),
        required => Err(OracleError::BudgetExceeded { required, cap }),
    }
}

/// Visit `prefix` followed by every label-set sequence of length
/// `0..=horizon`, shortest first, each length in bitmask-odometer order.
/// The callback receives the full trace steps and the extension length.
pub fn for_each_continuation<B>(
    prefix: &[LabelSet],
    vocabulary: &Vocabulary,
    horizon: usize,
    mut visit: impl FnMut(&[LabelSet], usize) -> ControlFlow<B>,
) -> ControlFlow<B> {
    let alphabet = vocabulary.power_set();
    let mut buffer: Vec<LabelSet> = prefix.to_vec();
    for k in 0..=horizon {
        let mut digits = vec![0usize; k];
        buffer.truncate(prefix.len());
        buffer.extend(core::iter::repeat_n(alphabet[0].clone(), k));
        'odometer: loop {
            visit(&buffer, k)?;
            // least significant digit last
            let mut pos = k;
            while pos > 0 {
                pos -= 1;
                digits[pos] += 1;
                if digits[pos] < alphabet.len() {
                    buffer[prefix.len() + pos] = alphabet[digits[pos]].clone();
                    continue 'odometer;
                }
                digits[pos] = 0;
                buffer[prefix.len() + pos] = alphabet[0].clone();
            }
            break;
        }
    }
    ControlFlow::Continue(())
}

/// Whether `f` holds at `t` under every, no, or some continuation of
/// `prefix` by up to `horizon` further steps over `2^vocabulary`.
pub fn status_under_continuations(
    f: &Formula,
    prefix: &Trace,
    t: usize,
    vocabulary: &Vocabulary,
    horizon: usize,
    cap: u64,
) -> Result<Verdict, OracleError> {
    let start = relative(prefix, t)?;
    check_budget(vocabulary, horizon, cap)?;
    let (mut any_true, mut any_false) = (false, false);
    let _ = for_each_continuation(prefix.steps(), vocabulary, horizon, |steps, _| {
        if table_rec(f, steps)[start] {
            any_true = true;
        } else {
            any_false = true;
        }
        if any_true && any_false {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    Ok(match (any_true, any_false) {
        (true, false) => Verdict::True,
        (false, true) => Verdict::False,
        _ => Verdict::Open,
    })
}

/// A locked tracking entry contradicted by some continuation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub node: usize,
    /// Suffix start of the offending entry.
    pub time: usize,
    /// Update time at which the entry was held.
    pub update: usize,
    pub value: Status,
    /// Label sets appended after the prefix.
    pub continuation: Vec<LabelSet>,
}

/// Bounded refutation of tracking validity: every entry locked to 1 (0)
/// must be satisfied (violated) by every continuation of `prefix` of length
/// `0..=horizon`. Returns the first counterexample, shortest continuation
/// first.
pub fn find_invalid_entry<V: AsRef<[Status]>>(
    tree: &FormulaTree,
    vectors: &[V],
    prefix: &Trace,
    vocabulary: &Vocabulary,
    horizon: usize,
    cap: u64,
) -> Result<Option<Counterexample>, OracleError> {
    if vectors.len() != tree.len() {
        return Err(OracleError::ShapeMismatch {
            expected: tree.len(),
            found: vectors.len(),
        });
    }
    let Some(update) = prefix.last_time() else {
        return Ok(None);
    };
    check_budget(vocabulary, horizon, cap)?;
    let locked: Vec<(usize, usize, bool)> = vectors
        .iter()
        .enumerate()
        .flat_map(|(node, v)| {
            v.as_ref()
                .iter()
                .take(prefix.len())
                .enumerate()
                .filter_map(move |(t, s)| s.as_bool().map(|b| (node, t, b)))
        })
        .collect();
    if locked.is_empty() {
        return Ok(None);
    }
    let found = for_each_continuation(prefix.steps(), vocabulary, horizon, |steps, k| {
        let tables = tree_truth_tables(tree, steps);
        match locked.iter().find(|&&(node, t, b)| tables[node][t] != b) {
            Some(&(node, t, b)) => ControlFlow::Break(Counterexample {
                node,
                time: prefix.origin() + t,
                update,
                value: Status::from_bool(b),
                continuation: steps[steps.len() - k..].to_vec(),
            }),
            None => ControlFlow::Continue(()),
        }
    });
    Ok(match found {
        ControlFlow::Break(cex) => Some(cex),
        ControlFlow::Continue(()) => None,
    })
}
