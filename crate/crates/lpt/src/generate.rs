//! Seeded random formulas and traces.

use lpt_core::{Formula, Kind, LabelSet};
use rand::seq::SliceRandom;
use rand::Rng;

const UNARY: [Kind; 4] = [Kind::Not, Kind::Next, Kind::Eventually, Kind::Globally];
const BINARY: [Kind; 7] = [
    Kind::And,
    Kind::Or,
    Kind::Implies,
    Kind::Until,
    Kind::WeakUntil,
    Kind::Release,
    Kind::StrongRelease,
];

fn leaf<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str]) -> Formula {
    if atoms.is_empty() || rng.gen_ratio(1, 8) {
        Formula::True
    } else {
        Formula::atom(*atoms.choose(rng).expect("nonempty"))
    }
}

fn build(kind: Kind, mut args: Vec<Formula>) -> Formula {
    let rhs = if args.len() == 2 { args.pop() } else { None };
    let lhs = args.pop().expect("at least one argument");
    match (kind, rhs) {
        (Kind::Not, None) => Formula::not(lhs),
        (Kind::Next, None) => Formula::next(lhs),
        (Kind::Eventually, None) => Formula::eventually(lhs),
        (Kind::Globally, None) => Formula::globally(lhs),
        (Kind::And, Some(r)) => Formula::and(lhs, r),
        (Kind::Or, Some(r)) => Formula::or(lhs, r),
        (Kind::Implies, Some(r)) => Formula::implies(lhs, r),
        (Kind::Until, Some(r)) => Formula::until(lhs, r),
        (Kind::WeakUntil, Some(r)) => Formula::weak_until(lhs, r),
        (Kind::Release, Some(r)) => Formula::release(lhs, r),
        (Kind::StrongRelease, Some(r)) => Formula::strong_release(lhs, r),
        _ => unreachable!("arity matches kind"),
    }
}

/// A formula of height exactly `height`: one child of every operator on the
/// longest path has height `height - 1`, the other any smaller height.
pub fn formula_of_height<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], height: usize) -> Formula {
    if height == 0 {
        return leaf(rng, atoms);
    }
    if rng.gen_ratio(UNARY.len() as u32, (UNARY.len() + BINARY.len()) as u32) {
        let kind = *UNARY.choose(rng).expect("nonempty");
        build(kind, vec![formula_of_height(rng, atoms, height - 1)])
    } else {
        let kind = *BINARY.choose(rng).expect("nonempty");
        let tall = formula_of_height(rng, atoms, height - 1);
        let other_height = rng.gen_range(0..height);
        let other = formula_of_height(rng, atoms, other_height);
        let args = if rng.gen_bool(0.5) {
            vec![tall, other]
        } else {
            vec![other, tall]
        };
        build(kind, args)
    }
}

/// A formula whose height is uniform on `0..=max_height`.
pub fn formula_up_to<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], max_height: usize) -> Formula {
    let height = rng.gen_range(0..=max_height);
    formula_of_height(rng, atoms, height)
}

/// Each label independently present with probability one half.
pub fn label_set<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str]) -> LabelSet {
    atoms.iter().copied().filter(|_| rng.gen_bool(0.5)).collect()
}

pub fn trace_steps<R: Rng + ?Sized>(rng: &mut R, atoms: &[&str], len: usize) -> Vec<LabelSet> {
    (0..len).map(|_| label_set(rng, atoms)).collect()
}
