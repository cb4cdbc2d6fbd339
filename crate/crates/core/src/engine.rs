//! Incremental tracking of a formula tree over a growing trace.
//!
//! Each node owns a [`TrackingVector`] with one entry per suffix start time
//! `t` seen so far. An entry is `1` once the node's formula is known to hold
//! on `ρ^{t...}` under every continuation, `0` once it is known to fail under
//! every continuation, and `-1` (open) otherwise. [`EngineState::step`]
//! appends one label set, grows every vector by an open entry, and runs the
//! operator modules bottom-up. Modules only ever overwrite open entries, so
//! a locked value never changes afterwards. [`EngineState::finalize`] closes
//! the rollout by resolving every remaining open entry on the complete trace.

use alloc::vec::Vec;
use core::fmt;
use core::ops::{Deref, Index};

use crate::oracle;
use crate::status::Status;
use crate::syntax::{Formula, Kind};
use crate::trace::{LabelSet, Trace, TraceError};
use crate::tree::FormulaTree;

/// Per-node vector of tracking values indexed by suffix start time.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct TrackingVector(Vec<Status>);

impl TrackingVector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn as_slice(&self) -> &[Status] {
        &self.0
    }

    pub fn to_i8(&self) -> Vec<i8> {
        self.0.iter().map(|s| s.to_i8()).collect()
    }

    fn push_open(&mut self) {
        self.0.push(Status::Open);
    }
}

impl Deref for TrackingVector {
    type Target = [Status];

    fn deref(&self) -> &[Status] {
        &self.0
    }
}

impl AsRef<[Status]> for TrackingVector {
    fn as_ref(&self) -> &[Status] {
        &self.0
    }
}

impl From<Vec<Status>> for TrackingVector {
    fn from(v: Vec<Status>) -> Self {
        TrackingVector(v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    AlreadyFinalized,
    EmptyTrace,
    Trace(TraceError),
    Invariant(&'static str),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::AlreadyFinalized => f.write_str("tracking state is already finalized"),
            EngineError::EmptyTrace => f.write_str("cannot finalize before the first step"),
            EngineError::Trace(e) => write!(f, "{e}"),
            EngineError::Invariant(what) => write!(f, "engine invariant violated: {what}"),
        }
    }
}

impl core::error::Error for EngineError {}

impl From<TraceError> for EngineError {
    fn from(e: TraceError) -> Self {
        EngineError::Trace(e)
    }
}

/// `2^L · |ρ|²` for a tree of height `L` tracked over `|ρ|` updates.
///
/// This is the asymptotic shape of the count, not a hard cap: a dense tree
/// of `N ≤ 2^{L+1} - 1` nodes reads at most `(N - 1) · w` child entries
/// plus one evaluation per distinct leaf label at window width `w`, which
/// sums to at most `3 · 2^L · |ρ|²`. Short traces over dense trees exceed
/// `2^L · |ρ|²` itself; `F a & F b` after one step takes 6 evaluations
/// against a value of 4.
pub fn complexity_bound(height: usize, trace_len: usize) -> u64 {
    let len = trace_len as u64;
    (1u64 << height).saturating_mul(len.saturating_mul(len))
}

/// The full tracking state: tree, one vector per node, and the trace so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EngineState {
    tree: FormulaTree,
    vectors: Vec<TrackingVector>,
    trace: Trace,
    eval_count: u64,
    finalized: bool,
}

impl EngineState {
    /// Fresh state before the first step: every vector is empty.
    pub fn new(tree: FormulaTree) -> Self {
        Self::with_trace(tree, Trace::new())
    }

    pub fn for_formula(formula: &Formula) -> Self {
        Self::new(FormulaTree::build(formula))
    }

    /// Start from an empty trace carrying its own origin or vocabulary.
    ///
    /// # Panics
    ///
    /// If `trace` already has steps.
    pub fn with_trace(tree: FormulaTree, trace: Trace) -> Self {
        assert!(trace.is_empty(), "engine must start from an empty trace");
        let vectors = (0..tree.len()).map(|_| TrackingVector::new()).collect();
        EngineState {
            tree,
            vectors,
            trace,
            eval_count: 0,
            finalized: false,
        }
    }

    pub fn tree(&self) -> &FormulaTree {
        &self.tree
    }

    pub fn vectors(&self) -> &[TrackingVector] {
        &self.vectors
    }

    pub fn trace(&self) -> &Trace {
        &self.trace
    }

    /// Current update time `t'`; `None` before the first step.
    pub fn current_time(&self) -> Option<usize> {
        self.trace.last_time()
    }

    pub fn is_finalized(&self) -> bool {
        self.finalized
    }

    /// Number of per-entry evaluations performed so far: one per atomic
    /// evaluation and one per child-vector entry read by a module.
    pub fn evaluation_count(&self) -> u64 {
        self.eval_count
    }

    /// `2^L · |ρ|²` for the current tree and trace length.
    pub fn complexity_bound(&self) -> u64 {
        complexity_bound(self.tree.height(), self.trace.len())
    }

    /// Append `labels` as `L_{t'+1}` and run one module pass.
    pub fn step(&mut self, labels: LabelSet) -> Result<(), EngineError> {
        if self.finalized {
            return Err(EngineError::AlreadyFinalized);
        }
        self.trace.push(labels)?;
        for v in &mut self.vectors {
            v.push_open();
        }
        self.run_modules();
        Ok(())
    }

    /// Catch up on several appended label sets, one module pass each.
    pub fn step_all<I>(&mut self, steps: I) -> Result<(), EngineError>
    where
        I: IntoIterator<Item = LabelSet>,
    {
        steps.into_iter().try_for_each(|labels| self.step(labels))
    }

    /// Run the module pass again at the same `t'` without new input. Leaves
    /// every vector unchanged; exposed so callers can check that.
    pub fn rerun_modules(&mut self) -> Result<(), EngineError> {
        if self.finalized {
            return Err(EngineError::AlreadyFinalized);
        }
        if self.trace.is_empty() {
            return Ok(());
        }
        self.run_modules();
        Ok(())
    }

    /// Terminal evaluation: resolve every open entry by evaluating its node
    /// on the complete trace. Closes the state to further steps.
    pub fn finalize(&mut self) -> Result<(), EngineError> {
        if self.finalized {
            return Err(EngineError::AlreadyFinalized);
        }
        if self.trace.is_empty() {
            return Err(EngineError::EmptyTrace);
        }
        let tables = oracle::tree_truth_tables(&self.tree, self.trace.steps());
        for (vector, table) in self.vectors.iter_mut().zip(&tables) {
            for (entry, &truth) in vector.0.iter_mut().zip(table) {
                if entry.is_open() {
                    *entry = Status::from_bool(truth);
                }
            }
        }
        self.finalized = true;
        Ok(())
    }

    pub fn check_invariants(&self) -> Result<(), EngineError> {
        if self.vectors.len() != self.tree.len() {
            return Err(EngineError::Invariant("one vector per tree node"));
        }
        if self.vectors.iter().any(|v| v.len() != self.trace.len()) {
            return Err(EngineError::Invariant("vector length equals t' - T0 + 1"));
        }
        if self.finalized && self.vectors.iter().any(|v| v.iter().any(|s| s.is_open())) {
            return Err(EngineError::Invariant("no open entry after finalize"));
        }
        Ok(())
    }

    fn run_modules(&mut self) {
        let now = self.trace.len() - 1;
        let labels = &self.trace.steps()[now];
        for group in self.tree.leaf_groups() {
            self.eval_count += 1;
            let value = match &group.label {
                Some(label) => Status::from_bool(labels.contains(label)),
                None => Status::True,
            };
            for &leaf in &group.leaves {
                lock(&mut self.vectors[leaf].0[now], value);
            }
        }
        for &index in self.tree.schedule() {
            let node = self.tree.node(index);
            // children always follow their parent in level order
            let (head, tail) = self.vectors.split_at_mut(index + 1);
            let own = &mut head[index].0;
            let child = |k: usize| -> &[Status] { &tail[node.children[k] - index - 1].0 };
            let reads = &mut self.eval_count;
            match node.kind {
                Kind::Not => module_not(own, child(0), reads),
                Kind::And => module_and(own, child(0), child(1), reads),
                Kind::Or => module_or(own, child(0), child(1), reads),
                Kind::Implies => module_implies(own, child(0), child(1), reads),
                Kind::Next => module_next(own, child(0), reads),
                Kind::Eventually => module_eventually(own, child(0), reads),
                Kind::Globally => module_globally(own, child(0), reads),
                Kind::Until | Kind::WeakUntil => module_until(own, child(0), child(1), reads),
                Kind::Release | Kind::StrongRelease => module_release(own, child(0), child(1), reads),
                Kind::True | Kind::Atom => unreachable!("leaves are not scheduled"),
            }
        }
    }
}

impl Index<usize> for EngineState {
    type Output = TrackingVector;

    fn index(&self, node: usize) -> &TrackingVector {
        &self.vectors[node]
    }
}

#[inline]
fn lock(slot: &mut Status, value: Status) {
    if slot.is_open() {
        *slot = value;
    }
}

fn lock_range(own: &mut [Status], from: usize, to: usize, value: Status) {
    for slot in &mut own[from..=to] {
        lock(slot, value);
    }
}

use Status::{False as F0, Open as O, True as T1};

fn module_not(own: &mut [Status], a: &[Status], reads: &mut u64) {
    for t in 0..own.len() {
        if own[t].is_open() {
            *reads += 1;
            match a[t] {
                F0 => own[t] = T1,
                T1 => own[t] = F0,
                O => {}
            }
        }
    }
}

fn module_and(own: &mut [Status], a: &[Status], b: &[Status], reads: &mut u64) {
    for t in 0..own.len() {
        if own[t].is_open() {
            *reads += 2;
            if a[t] == T1 && b[t] == T1 {
                own[t] = T1;
            } else if a[t] == F0 || b[t] == F0 {
                own[t] = F0;
            }
        }
    }
}

fn module_or(own: &mut [Status], a: &[Status], b: &[Status], reads: &mut u64) {
    for t in 0..own.len() {
        if own[t].is_open() {
            *reads += 2;
            if a[t] == T1 || b[t] == T1 {
                own[t] = T1;
            } else if a[t] == F0 && b[t] == F0 {
                own[t] = F0;
            }
        }
    }
}

fn module_implies(own: &mut [Status], a: &[Status], b: &[Status], reads: &mut u64) {
    for t in 0..own.len() {
        if own[t].is_open() {
            *reads += 2;
            if a[t] == F0 || b[t] == T1 {
                own[t] = T1;
            } else if a[t] == T1 && b[t] == F0 {
                own[t] = F0;
            }
        }
    }
}

/// `X φ` at `t-1` is decided by `φ` at `t`. The entry at `t'` stays open
/// until finalize.
fn module_next(own: &mut [Status], a: &[Status], reads: &mut u64) {
    for t in 1..own.len() {
        if own[t - 1].is_open() {
            *reads += 1;
            match a[t] {
                T1 => own[t - 1] = T1,
                F0 => own[t - 1] = F0,
                O => {}
            }
        }
    }
}

fn module_eventually(own: &mut [Status], a: &[Status], reads: &mut u64) {
    for (t, &value) in a.iter().enumerate().take(own.len()) {
        *reads += 1;
        if value == T1 {
            lock_range(own, 0, t, T1);
        }
    }
}

fn module_globally(own: &mut [Status], a: &[Status], reads: &mut u64) {
    for t in (0..own.len()).rev() {
        *reads += 1;
        if a[t] == F0 {
            lock_range(own, 0, t, F0);
            break;
        }
    }
}

/// Until and weak until. `start` marks the earliest suffix whose left
/// argument has held continuously up to `t`.
fn module_until(own: &mut [Status], a: &[Status], b: &[Status], reads: &mut u64) {
    let mut start = 0;
    for t in 0..own.len() {
        *reads += 2;
        if a[t] == F0 && b[t] == F0 {
            lock(&mut own[t], F0);
            start = t + 1;
        } else if b[t] == T1 {
            lock_range(own, start, t, T1);
            start = t + 1;
        } else if a[t] != T1 {
            start = t + 1;
        }
    }
}

/// Release and strong release. `start` marks the earliest suffix whose
/// right argument has held continuously up to `t`.
fn module_release(own: &mut [Status], a: &[Status], b: &[Status], reads: &mut u64) {
    let mut start = 0;
    for t in 0..own.len() {
        *reads += 2;
        if b[t] == F0 {
            lock(&mut own[t], F0);
            start = t + 1;
        } else if a[t] == T1 && b[t] == T1 {
            lock_range(own, start, t, T1);
            start = t + 1;
        } else if b[t] == O {
            start = t + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse;
    use alloc::vec;

    fn run(formula: &str, steps: &[&[&str]]) -> EngineState {
        let mut state = EngineState::for_formula(&parse(formula).unwrap());
        for labels in steps {
            state.step(labels.iter().copied().collect()).unwrap();
        }
        state
    }

    fn vectors(state: &EngineState) -> Vec<Vec<i8>> {
        state.vectors().iter().map(|v| v.to_i8()).collect()
    }

    #[test]
    fn init_has_empty_vectors() {
        let state = EngineState::for_formula(&parse("F keyA & F keyB").unwrap());
        assert_eq!(state.vectors().len(), 5);
        assert!(state.vectors().iter().all(|v| v.is_empty()));
        assert_eq!(state.current_time(), None);
        assert_eq!(state.evaluation_count(), 0);
        let single = EngineState::for_formula(&parse("a").unwrap());
        assert_eq!(single.vectors().len(), 1);
    }

    #[test]
    fn key_collection_snapshot() {
        let state = run("F keyA & F keyB", &[&[], &[], &["keyA"]]);
        assert_eq!(state.current_time(), Some(2));
        assert_eq!(
            vectors(&state),
            vec![
                vec![-1, -1, -1],
                vec![1, 1, 1],
                vec![-1, -1, -1],
                vec![0, 0, 1],
                vec![0, 0, 0]
            ]
        );
    }

    #[test]
    fn key_collection_finalized() {
        let mut state = run("F keyA & F keyB", &[&[], &[], &["keyA"]]);
        state.finalize().unwrap();
        let v = vectors(&state);
        assert_eq!(v[0], [0, 0, 0]);
        assert_eq!(v[2], [0, 0, 0]);
        assert_eq!(state.step(LabelSet::new()), Err(EngineError::AlreadyFinalized));
        assert_eq!(state.finalize(), Err(EngineError::AlreadyFinalized));
        state.check_invariants().unwrap();
    }

    #[test]
    fn atom_step() {
        assert_eq!(vectors(&run("a", &[&["a"]])), [[1]]);
        assert_eq!(vectors(&run("a", &[&[]])), [[0]]);
        let mut state = run("a", &[&["a"]]);
        state.finalize().unwrap();
        assert_eq!(vectors(&state), [[1]]);
    }

    #[test]
    fn true_literal_is_always_true() {
        assert_eq!(vectors(&run("true", &[&[], &["a"]])), [[1, 1]]);
    }

    #[test]
    fn response_formula_updates() {
        // frozen from the bounded continuation oracle (horizon 4, P = {a, b})
        let expected: [Vec<Vec<i8>>; 3] = [
            vec![vec![-1], vec![-1], vec![1], vec![-1], vec![0]],
            vec![vec![-1, -1], vec![1, 1], vec![1, 0], vec![1, -1], vec![0, 1]],
            vec![
                vec![-1, -1, -1],
                vec![1, 1, 1],
                vec![1, 0, 0],
                vec![1, 0, -1],
                vec![0, 1, 0],
            ],
        ];
        let mut state = EngineState::for_formula(&parse("G(a -> X b)").unwrap());
        let steps: [LabelSet; 3] = [["a"].into(), ["b"].into(), LabelSet::new()];
        for (labels, want) in steps.into_iter().zip(expected) {
            state.step(labels).unwrap();
            assert_eq!(vectors(&state), want);
        }
        state.finalize().unwrap();
        assert_eq!(vectors(&state)[0], [1, 1, 1]);
        assert_eq!(vectors(&state)[3], [1, 0, 0]);
    }

    #[test]
    fn until_and_weak_until_diverge_only_at_finalize() {
        for op in ["U", "W"] {
            let mut state = run(&alloc::format!("a {op} b"), &[&[]]);
            assert_eq!(state[0].to_i8(), [0]);
            state.finalize().unwrap();
            assert_eq!(state[0].to_i8(), [0]);
        }
        let mut strong = run("a U b", &[&["a"]]);
        let mut weak = run("a W b", &[&["a"]]);
        assert_eq!(vectors(&strong), vectors(&weak));
        assert_eq!(strong[0].to_i8(), [-1]);
        strong.finalize().unwrap();
        weak.finalize().unwrap();
        assert_eq!(strong[0].to_i8(), [0]);
        assert_eq!(weak[0].to_i8(), [1]);
    }

    #[test]
    fn release_and_strong_release_diverge_only_at_finalize() {
        let mut weak = run("a R b", &[&["b"], &["b"]]);
        let mut strong = run("a M b", &[&["b"], &["b"]]);
        assert_eq!(vectors(&weak), vectors(&strong));
        assert_eq!(weak[0].to_i8(), [-1, -1]);
        weak.finalize().unwrap();
        strong.finalize().unwrap();
        assert_eq!(weak[0].to_i8(), [1, 1]);
        assert_eq!(strong[0].to_i8(), [0, 0]);
    }

    #[test]
    fn until_window_resets() {
        // a a . a b : the window restarts after the gap
        let state = run("a U b", &[&["a"], &["a"], &[], &["a"], &["b"]]);
        assert_eq!(state[0].to_i8(), [-1, -1, 0, 1, 1]);
    }

    #[test]
    fn release_window() {
        let state = run("a M b", &[&["b"], &["b"], &["a", "b"], &[]]);
        assert_eq!(state[0].to_i8(), [1, 1, 1, 0]);
    }

    #[test]
    fn globally_locks_prefix_false() {
        let state = run("G a", &[&["a"], &[], &["a"]]);
        assert_eq!(state[0].to_i8(), [0, 0, -1]);
    }

    #[test]
    fn finalize_requires_a_step() {
        let mut state = EngineState::for_formula(&parse("a").unwrap());
        assert_eq!(state.finalize(), Err(EngineError::EmptyTrace));
    }

    #[test]
    fn evaluation_counts() {
        assert_eq!(run("a", &[&["a"]]).evaluation_count(), 1);
        let key = run("F keyA & F keyB", &[&[], &[], &["keyA"]]);
        assert_eq!(key.evaluation_count(), 30);
        assert!(key.evaluation_count() <= key.complexity_bound());
        assert_eq!(key.complexity_bound(), 36);
    }

    #[test]
    fn shared_atoms_evaluate_once() {
        let state = run("a & a", &[&["a"]]);
        // one atomic evaluation plus two child reads
        assert_eq!(state.evaluation_count(), 3);
        assert_eq!(vectors(&state), [[1], [1], [1]]);
    }

    #[test]
    fn rerun_is_idempotent() {
        let mut state = run("(a U X b) R !(G c | F a)", &[&["a"], &["b", "c"], &[]]);
        let before = vectors(&state);
        state.rerun_modules().unwrap();
        assert_eq!(vectors(&state), before);
    }

    #[test]
    fn vocabulary_enforced_through_trace() {
        let vocab = crate::trace::Vocabulary::new(["a"]).unwrap();
        let tree = FormulaTree::build(&parse("a").unwrap());
        let mut state = EngineState::with_trace(tree, Trace::with_vocabulary(vocab));
        assert!(matches!(state.step(["z"].into()), Err(EngineError::Trace(_))));
        assert!(state.vectors()[0].is_empty());
    }
}
