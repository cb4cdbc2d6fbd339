#![allow(dead_code)]

use lpt_core::{Formula, LabelSet, Trace, Vocabulary};
use proptest::prelude::*;
use proptest::sample::{select, subsequence};

pub const ATOMS: [&str; 3] = ["a", "b", "c"];

/// Formulas of height at most `height` over `atoms`, all thirteen kinds.
pub fn formula(atoms: &'static [&'static str], height: u32) -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        1 => Just(Formula::True),
        6 => select(atoms).prop_map(Formula::atom),
    ];
    leaf.prop_recursive(height, 64, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            inner.clone().prop_map(Formula::next),
            inner.clone().prop_map(Formula::eventually),
            inner.clone().prop_map(Formula::globally),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::and(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::or(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::implies(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::until(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::weak_until(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::release(l, r)),
            (inner.clone(), inner).prop_map(|(l, r)| Formula::strong_release(l, r)),
        ]
    })
}

pub fn label_set(atoms: &'static [&'static str]) -> impl Strategy<Value = LabelSet> {
    subsequence(atoms, 0..=atoms.len()).prop_map(|labels| labels.into_iter().collect())
}

pub fn steps(atoms: &'static [&'static str], max_len: usize) -> impl Strategy<Value = Vec<LabelSet>> {
    proptest::collection::vec(label_set(atoms), 1..=max_len)
}

pub fn vocabulary(atoms: &[&str]) -> Vocabulary {
    Vocabulary::new(atoms.iter().copied()).unwrap()
}

pub fn trace(steps: &[LabelSet]) -> Trace {
    Trace::from_steps(steps.iter().cloned())
}
