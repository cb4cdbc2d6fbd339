mod common;

use common::{formula, ATOMS};
use lpt_core::{format, parse, FormulaTree, Kind};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn format_round_trips(f in formula(&ATOMS, 5)) {
        let text = format(&f);
        prop_assert_eq!(parse(&text), Ok(f.clone()), "{}", text);
        prop_assert_eq!(format(&parse(&text).unwrap()), text);
    }

    #[test]
    fn arguments_match_arity(f in formula(&ATOMS, 4)) {
        let mut stack = vec![&f];
        while let Some(g) = stack.pop() {
            prop_assert_eq!(g.arguments().len(), g.kind().arity());
            stack.extend(g.arguments());
        }
    }

    #[test]
    fn trees_are_level_ordered(f in formula(&ATOMS, 4)) {
        let tree = FormulaTree::build(&f);
        prop_assert_eq!(&tree.root().formula, &f);
        prop_assert_eq!(tree.height(), f.height());
        prop_assert_eq!(tree.len(), f.size());
        let nodes = tree.nodes();
        prop_assert!(nodes.windows(2).all(|w| w[0].depth <= w[1].depth));
        for (i, node) in nodes.iter().enumerate() {
            prop_assert_eq!(node.kind, node.formula.kind());
            prop_assert_eq!(node.children.len(), node.kind.arity());
            let leaf = matches!(node.kind, Kind::True | Kind::Atom);
            prop_assert_eq!(leaf, node.children.is_empty());
            let args = node.formula.arguments();
            for (k, &c) in node.children.iter().enumerate() {
                prop_assert!(c > i);
                prop_assert_eq!(nodes[c].parent, Some(i));
                prop_assert_eq!(&nodes[c].formula, args[k]);
            }
            // siblings left to right
            prop_assert!(node.children.windows(2).all(|w| w[0] < w[1]));
        }
    }
}
