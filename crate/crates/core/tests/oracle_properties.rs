mod common;

use common::{formula, steps, trace, vocabulary, ATOMS};
use lpt_core::oracle::{self, Verdict, DEFAULT_ENUMERATION_CAP};
use lpt_core::{Formula, FormulaTree};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn tables_agree_with_recursive_evaluation(f in formula(&ATOMS, 4), steps in steps(&ATOMS, 6)) {
        let trace = trace(&steps);
        let naive: Vec<bool> = (0..steps.len()).map(|t| oracle::holds(&f, &trace, t).unwrap()).collect();
        prop_assert_eq!(oracle::truth_table(&f, &trace), naive.clone());
        prop_assert_eq!(oracle::oracle_tracking_vector(&f, &trace), naive.clone());
        let tables = oracle::tree_truth_tables(&FormulaTree::build(&f), &steps);
        prop_assert_eq!(&tables[0], &naive);
    }

    #[test]
    fn derived_operators_follow_their_rewritings(f in formula(&ATOMS, 2), g in formula(&ATOMS, 2), steps in steps(&ATOMS, 5)) {
        let trace = trace(&steps);
        let holds = |h: &Formula, t| oracle::holds(h, &trace, t).unwrap();
        for t in 0..steps.len() {
            prop_assert_eq!(holds(&Formula::not(f.clone()), t), !holds(&f, t));
            prop_assert_eq!(holds(&Formula::eventually(f.clone()), t), holds(&Formula::until(Formula::True, f.clone()), t));
            prop_assert_eq!(holds(&Formula::globally(f.clone()), t), !holds(&Formula::eventually(Formula::not(f.clone())), t));
            prop_assert_eq!(
                holds(&Formula::weak_until(f.clone(), g.clone()), t),
                holds(&Formula::until(f.clone(), g.clone()), t) || holds(&Formula::globally(f.clone()), t)
            );
            prop_assert_eq!(
                holds(&Formula::strong_release(f.clone(), g.clone()), t),
                holds(&Formula::until(g.clone(), Formula::and(f.clone(), g.clone())), t)
            );
            prop_assert_eq!(
                holds(&Formula::release(f.clone(), g.clone()), t),
                !holds(&Formula::until(Formula::not(f.clone()), Formula::not(g.clone())), t)
            );
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn zero_horizon_is_plain_evaluation(f in formula(&ATOMS[..2], 3), steps in steps(&ATOMS[..2], 4)) {
        let vocab = vocabulary(&ATOMS[..2]);
        let trace = trace(&steps);
        for t in 0..steps.len() {
            let verdict = oracle::status_under_continuations(&f, &trace, t, &vocab, 0, DEFAULT_ENUMERATION_CAP).unwrap();
            let expected = if oracle::holds(&f, &trace, t).unwrap() { Verdict::True } else { Verdict::False };
            prop_assert_eq!(verdict, expected);
        }
    }

    #[test]
    fn larger_horizons_only_open_verdicts(f in formula(&ATOMS[..2], 2), steps in steps(&ATOMS[..2], 3)) {
        let vocab = vocabulary(&ATOMS[..2]);
        let trace = trace(&steps);
        for t in 0..steps.len() {
            let verdicts: Vec<Verdict> = (0..=3)
                .map(|k| oracle::status_under_continuations(&f, &trace, t, &vocab, k, DEFAULT_ENUMERATION_CAP).unwrap())
                .collect();
            // the continuation set only grows with the horizon
            for pair in verdicts.windows(2) {
                prop_assert!(pair[1] == Verdict::Open || pair[1] == pair[0], "{:?}", verdicts);
            }
        }
    }
}

#[test]
fn definite_verdicts_can_open_up_later() {
    let f = lpt_core::parse("X X a").unwrap();
    let vocab = vocabulary(&["a"]);
    let trace = trace(&[lpt_core::LabelSet::new()]);
    let at =
        |k| oracle::status_under_continuations(&f, &trace, 0, &vocab, k, DEFAULT_ENUMERATION_CAP).unwrap();
    assert_eq!(at(0), Verdict::False);
    assert_eq!(at(1), Verdict::False);
    assert_eq!(at(2), Verdict::Open);
}
