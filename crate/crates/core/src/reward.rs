//! Reward-machine view of the tracker.
//!
//! The machine state `u` is the full tracking state (all node vectors and
//! the current time), the state transition is one tracking step, and the
//! reward function is a pluggable [`RewardPolicy`] applied to the successor
//! state together with the environment's own base reward.
//!
//! # Digests
//!
//! Policies compare states by SHA-256 over a canonical serialization, given
//! as lowercase hex. Two serializations exist:
//!
//! * state: `{"time":T,"vectors":[[...],...]}` where `T` is the current time
//!   (`null` before the first step) and `vectors` lists every node's vector
//!   in level order;
//! * signature (default): the signature array `[[...],...]` alone, with
//!   timing erased.
//!
//! Both use sorted keys, no whitespace and integers `-1`, `0`, `1`.

use alloc::boxed::Box;
use alloc::collections::BTreeSet;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use sha2::{Digest as _, Sha256};

use crate::engine::{EngineError, EngineState};
use crate::signature::{write_nested, Signature};
use crate::syntax::Formula;
use crate::trace::LabelSet;

/// A reward-machine state: a snapshot of the tracker.
#[derive(Debug, Clone)]
pub struct RmState {
    engine: EngineState,
}

impl PartialEq for RmState {
    fn eq(&self, other: &Self) -> bool {
        self.engine.current_time() == other.engine.current_time()
            && self.engine.vectors() == other.engine.vectors()
    }
}

impl Eq for RmState {}

impl RmState {
    pub fn engine(&self) -> &EngineState {
        &self.engine
    }

    pub fn into_engine(self) -> EngineState {
        self.engine
    }

    /// Finalized states are terminal; no further transitions exist.
    pub fn is_terminal(&self) -> bool {
        self.engine.is_finalized()
    }

    pub fn signature(&self) -> Signature {
        Signature::from_vectors(self.engine.vectors())
    }

    pub fn canonical_json(&self, kind: DigestKind) -> String {
        let mut out = String::new();
        match kind {
            DigestKind::Signature => write_nested(&mut out, self.signature().nodes()),
            DigestKind::State => {
                out.push_str("{\"time\":");
                match self.engine.current_time() {
                    Some(t) => out.push_str(&alloc::format!("{t}")),
                    None => out.push_str("null"),
                }
                out.push_str(",\"vectors\":");
                write_nested(&mut out, self.engine.vectors());
                out.push('}');
            }
        }
        out
    }

    pub fn digest(&self, kind: DigestKind) -> Digest {
        Digest(Sha256::digest(self.canonical_json(kind).as_bytes()).into())
    }
}

impl From<EngineState> for RmState {
    fn from(engine: EngineState) -> Self {
        RmState { engine }
    }
}

pub fn rm_init(formula: &Formula) -> RmState {
    RmState::from(EngineState::for_formula(formula))
}

/// One machine transition; `u` itself is left untouched.
pub fn rm_step(u: &RmState, labels: LabelSet) -> Result<RmState, EngineError> {
    let mut engine = u.engine.clone();
    engine.step(labels)?;
    Ok(RmState { engine })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum DigestKind {
    State,
    #[default]
    Signature,
}

impl FromStr for DigestKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "state" => Ok(DigestKind::State),
            "signature" => Ok(DigestKind::Signature),
            other => Err(alloc::format!("unknown digest kind `{other}`")),
        }
    }
}

/// A SHA-256 digest, shown as 64 lowercase hex digits.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Digest(pub [u8; 32]);

impl fmt::Display for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for byte in self.0 {
            write!(f, "{byte:02x}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for Digest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Digest({self})")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DigestParseError;

impl fmt::Display for DigestParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("expected 64 lowercase hex digits")
    }
}

impl core::error::Error for DigestParseError {}

impl FromStr for Digest {
    type Err = DigestParseError;

    fn from_str(s: &str) -> Result<Self, DigestParseError> {
        let bytes = s.as_bytes();
        if bytes.len() != 64 {
            return Err(DigestParseError);
        }
        let nibble = |c: u8| match c {
            b'0'..=b'9' => Ok(c - b'0'),
            b'a'..=b'f' => Ok(c - b'a' + 10),
            _ => Err(DigestParseError),
        };
        let mut out = [0u8; 32];
        for (i, pair) in bytes.chunks_exact(2).enumerate() {
            out[i] = nibble(pair[0])? << 4 | nibble(pair[1])?;
        }
        Ok(Digest(out))
    }
}

/// The environment reward `R(s, a)`; never negative.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct BaseReward(f64);

impl BaseReward {
    /// `None` for negative or NaN values.
    pub fn new(value: f64) -> Option<Self> {
        (value >= 0.0).then_some(BaseReward(value))
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GoalTarget {
    Signature(Signature),
    Digest(Digest, DigestKind),
}

pub type RewardHook = Box<dyn Fn(&RmState) -> f64>;

pub enum RewardPolicy {
    /// Pay the base reward when the successor matches the goal.
    GoalState(GoalTarget),
    /// Pay the base reward when the successor's digest has not been seen.
    /// The caller owns `seen` and updates it.
    Novelty {
        seen: BTreeSet<Digest>,
        kind: DigestKind,
    },
    /// Arbitrary reward read off the successor state. Negative outputs are
    /// clamped to zero.
    Custom(RewardHook),
}

impl RewardPolicy {
    pub fn novelty(kind: DigestKind) -> Self {
        RewardPolicy::Novelty {
            seen: BTreeSet::new(),
            kind,
        }
    }

    /// Record `digest` as seen. No effect on other policies.
    pub fn record(&mut self, digest: Digest) {
        if let RewardPolicy::Novelty { seen, .. } = self {
            seen.insert(digest);
        }
    }
}

impl fmt::Debug for RewardPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RewardPolicy::GoalState(target) => f.debug_tuple("GoalState").field(target).finish(),
            RewardPolicy::Novelty { seen, kind } => f
                .debug_struct("Novelty")
                .field("seen", &seen.len())
                .field("kind", kind)
                .finish(),
            RewardPolicy::Custom(_) => f.write_str("Custom(..)"),
        }
    }
}

pub fn reward(u_next: &RmState, policy: &RewardPolicy, base: BaseReward) -> f64 {
    let pays = match policy {
        RewardPolicy::GoalState(GoalTarget::Signature(target)) => u_next.signature() == *target,
        RewardPolicy::GoalState(GoalTarget::Digest(target, kind)) => u_next.digest(*kind) == *target,
        RewardPolicy::Novelty { seen, kind } => !seen.contains(&u_next.digest(*kind)),
        RewardPolicy::Custom(hook) => {
            let value = hook(u_next);
            return if value > 0.0 { value } else { 0.0 };
        }
    };
    if pays {
        base.get()
    } else {
        0.0
    }
}
