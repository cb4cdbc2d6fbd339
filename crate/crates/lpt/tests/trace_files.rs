use lpt::io::{read_trace_str, write_trace};
use lpt_core::{LabelSet, Trace, Vocabulary};
use proptest::prelude::*;

const LABELS: [&str; 4] = ["a", "b", "keyA", "door open"];

fn steps() -> impl Strategy<Value = Vec<LabelSet>> {
    let step = proptest::sample::subsequence(LABELS.to_vec(), 0..=LABELS.len())
        .prop_map(|labels| labels.into_iter().collect::<LabelSet>());
    proptest::collection::vec(step, 1..8)
}

proptest! {
    #[test]
    fn traces_round_trip(steps in steps(), declare in any::<bool>()) {
        let mut trace = if declare {
            Trace::with_vocabulary(Vocabulary::new(LABELS).unwrap())
        } else {
            Trace::new()
        };
        for s in &steps {
            trace.push(s.clone()).unwrap();
        }
        let mut out = Vec::new();
        write_trace(&trace, &mut out).unwrap();
        let back = read_trace_str(std::str::from_utf8(&out).unwrap()).unwrap();
        prop_assert_eq!(back.steps(), trace.steps());
        prop_assert_eq!(back.vocabulary(), trace.vocabulary());
    }
}

#[test]
fn malformed_lines_name_their_line() {
    let err = read_trace_str("[]\n{\"vocabulary\":[\"a\"]}\n").unwrap_err();
    assert!(err.to_string().starts_with("line 2"));
    let err = read_trace_str("[\"a\"]\n[1]\n").unwrap_err();
    assert!(err.to_string().starts_with("line 2"));
    assert!(read_trace_str("").is_err());
}
