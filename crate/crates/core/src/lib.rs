//! Live progress tracking for finite-trace LTL specifications.
//!
//! The tracker keeps, for every subformula of a specification and every
//! suffix start time seen so far, whether that subformula is already known
//! to hold (`1`), already known to fail (`0`), or still depends on the
//! future (`-1`). Vectors are extended and refined one observation at a
//! time and never revise a settled value.
//!
//! ```
//! use lpt_core::{parse, EngineState, signature};
//!
//! let formula = parse("F keyA & F keyB").unwrap();
//! let mut state = EngineState::for_formula(&formula);
//! for labels in [vec![], vec![], vec!["keyA"]] {
//!     state.step(labels.into_iter().collect()).unwrap();
//! }
//! assert_eq!(signature(&state).unwrap().to_json(), "[[-1],[1],[-1],[0,1],[0]]");
//! ```
//!
//! The crate is `no_std` and only needs `alloc`.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod engine;
pub mod oracle;
pub mod reward;
pub mod signature;
pub mod status;
pub mod syntax;
pub mod trace;
pub mod tree;

pub use engine::{complexity_bound, EngineError, EngineState, TrackingVector};
pub use oracle::{OracleError, Verdict};
pub use reward::{
    reward, rm_init, rm_step, BaseReward, Digest, DigestKind, GoalTarget, RewardPolicy, RmState,
};
pub use signature::{merge, signature, signatures_equal, Signature, SignatureError};
pub use status::Status;
pub use syntax::{format, parse, parse_with_vocabulary, Formula, Kind, ParseError};
pub use trace::{LabelSet, Trace, TraceError, TraceView, Vocabulary};
pub use tree::FormulaTree;
