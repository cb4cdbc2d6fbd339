//! Gridworld episodes scored by a reward machine built on the tracker.
//!
//! The agent starts in the top-left corner of an `N × N` grid. `keyA` sits
//! in the top-right corner and `keyB` in the bottom-left one; a key's label
//! fires on the step the agent moves into its cell. The environment keeps
//! no memory of collected keys. Everything the reward depends on lives in
//! the tracking state.

use std::collections::BTreeSet;

use lpt_core::{
    reward, rm_init, rm_step, BaseReward, Digest, DigestKind, Formula, GoalTarget, LabelSet, RewardPolicy,
};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Up,
    Down,
    Left,
    Right,
}

const ACTIONS: [Action; 4] = [Action::Up, Action::Down, Action::Left, Action::Right];

pub type Cell = (usize, usize);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GridWorld {
    size: usize,
}

impl GridWorld {
    pub fn new(size: usize) -> Option<Self> {
        (size >= 2).then_some(GridWorld { size })
    }

    pub fn start(&self) -> Cell {
        (0, 0)
    }

    pub fn key_cells(&self) -> [(Cell, &'static str); 2] {
        [((0, self.size - 1), "keyA"), ((self.size - 1, 0), "keyB")]
    }

    /// Move, staying put at the border.
    pub fn apply(&self, (row, col): Cell, action: Action) -> Cell {
        let last = self.size - 1;
        match action {
            Action::Up => (row.saturating_sub(1), col),
            Action::Down => ((row + 1).min(last), col),
            Action::Left => (row, col.saturating_sub(1)),
            Action::Right => (row, (col + 1).min(last)),
        }
    }

    /// Labels for moving from `from` to `to`.
    pub fn labels(&self, from: Cell, to: Cell) -> LabelSet {
        if from == to {
            return LabelSet::new();
        }
        self.key_cells()
            .iter()
            .filter(|(cell, _)| *cell == to)
            .map(|(_, key)| *key)
            .collect()
    }

    /// Straight-line moves from `from` to `to`, rows first.
    fn route(&self, from: Cell, to: Cell) -> Vec<Action> {
        let vertical = if to.0 > from.0 { Action::Down } else { Action::Up };
        let horizontal = if to.1 > from.1 {
            Action::Right
        } else {
            Action::Left
        };
        std::iter::repeat_n(vertical, from.0.abs_diff(to.0))
            .chain(std::iter::repeat_n(horizontal, from.1.abs_diff(to.1)))
            .collect()
    }

    /// Visit `first`'s key cell, then the other key, then bump into the
    /// wall until `steps` actions are used.
    pub fn scripted(&self, first: &str, steps: usize) -> Vec<Action> {
        let [a, b] = self.key_cells();
        let (first_cell, second_cell) = if first == b.1 { (b.0, a.0) } else { (a.0, b.0) };
        let mut actions = self.route(self.start(), first_cell);
        actions.extend(self.route(first_cell, second_cell));
        let bump = if second_cell.0 == 0 {
            Action::Up
        } else {
            Action::Down
        };
        actions.resize(steps.max(actions.len()), bump);
        actions.truncate(steps);
        actions
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Mode {
    /// A fresh random walk every episode.
    Random,
    /// Repeat the first episode's actions.
    Replay,
    /// After a random first episode, go for the key it did not reach first.
    Diverge,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum PolicyKind {
    Goal,
    Novelty,
}

#[derive(Debug, Clone)]
pub struct SimConfig {
    pub grid: usize,
    pub episodes: usize,
    pub steps: usize,
    pub policy: PolicyKind,
    pub goal: Option<Digest>,
    pub digest: DigestKind,
    pub mode: Mode,
    pub seed: u64,
    pub base: f64,
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum SimError {
    #[error("grid size must be at least 2, got {0}")]
    Grid(usize),
    #[error("base reward must be a non-negative number, got {0}")]
    Base(f64),
    #[error("the goal policy needs --goal-digest")]
    MissingGoal,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum LogRecord {
    Step {
        episode: usize,
        step: usize,
        pos: [usize; 2],
        labels: Vec<String>,
        digest: String,
        reward: f64,
    },
    Episode {
        episode: usize,
        total_reward: f64,
        /// Index of the first step with positive reward.
        first_reward_step: Option<usize>,
        first_key: Option<String>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpisodeSummary {
    pub total_reward: f64,
    pub first_reward_step: Option<usize>,
    pub first_key: Option<String>,
    pub digests: Vec<Digest>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimReport {
    pub records: Vec<LogRecord>,
    pub episodes: Vec<EpisodeSummary>,
}

fn first_key(world: &GridWorld, actions: &[Action]) -> Option<String> {
    let mut pos = world.start();
    for &action in actions {
        let next = world.apply(pos, action);
        if let Some(key) = world.labels(pos, next).iter().next() {
            return Some(key.to_string());
        }
        pos = next;
    }
    None
}

/// Run the episodes. Under the novelty policy every digest an episode
/// produced joins the seen set once that episode ends.
pub fn simulate(formula: &Formula, config: &SimConfig) -> Result<SimReport, SimError> {
    let world = GridWorld::new(config.grid).ok_or(SimError::Grid(config.grid))?;
    let base = BaseReward::new(config.base).ok_or(SimError::Base(config.base))?;
    let mut policy = match config.policy {
        PolicyKind::Novelty => RewardPolicy::novelty(config.digest),
        PolicyKind::Goal => RewardPolicy::GoalState(GoalTarget::Digest(
            config.goal.ok_or(SimError::MissingGoal)?,
            config.digest,
        )),
    };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut records = Vec::new();
    let mut episodes: Vec<EpisodeSummary> = Vec::new();
    let mut first_actions: Vec<Action> = Vec::new();

    for episode in 0..config.episodes {
        let actions: Vec<Action> = match (config.mode, episode) {
            (Mode::Random, _) | (_, 0) => (0..config.steps)
                .map(|_| *ACTIONS.choose(&mut rng).expect("nonempty"))
                .collect(),
            (Mode::Replay, _) => first_actions.clone(),
            (Mode::Diverge, _) => {
                let target = match first_key(&world, &first_actions).as_deref() {
                    Some("keyB") => "keyA",
                    _ => "keyB",
                };
                world.scripted(target, config.steps)
            }
        };
        if episode == 0 {
            first_actions = actions.clone();
        }

        let mut u = rm_init(formula);
        let mut pos = world.start();
        let mut total = 0.0;
        let mut first_reward_step = None;
        let mut digests = Vec::with_capacity(actions.len());
        for (step, &action) in actions.iter().enumerate() {
            let next = world.apply(pos, action);
            let labels = world.labels(pos, next);
            u = rm_step(&u, labels.clone()).expect("episodes never finalize");
            let r = reward(&u, &policy, base);
            let digest = u.digest(config.digest);
            if r > 0.0 && first_reward_step.is_none() {
                first_reward_step = Some(step);
            }
            total += r;
            records.push(LogRecord::Step {
                episode,
                step,
                pos: [next.0, next.1],
                labels: labels.iter().map(String::from).collect(),
                digest: digest.to_string(),
                reward: r,
            });
            digests.push(digest);
            pos = next;
        }
        for &digest in &digests {
            policy.record(digest);
        }
        let summary = EpisodeSummary {
            total_reward: total,
            first_reward_step,
            first_key: first_key(&world, &actions),
            digests,
        };
        records.push(LogRecord::Episode {
            episode,
            total_reward: summary.total_reward,
            first_reward_step: summary.first_reward_step,
            first_key: summary.first_key.clone(),
        });
        episodes.push(summary);
    }
    Ok(SimReport { records, episodes })
}

/// Distinct digests over all episodes, for inspection.
pub fn distinct_digests(report: &SimReport) -> BTreeSet<Digest> {
    report
        .episodes
        .iter()
        .flat_map(|e| e.digests.iter().copied())
        .collect()
}
