//! The key-collection walkthrough: `F keyA & F keyB` over four rollouts.

use lpt_core::{parse, signature, signatures_equal, EngineState, LabelSet, Signature};

pub const KEY_SPEC: &str = "F keyA & F keyB";

pub struct Scenario {
    pub name: &'static str,
    /// Step index at which the key is picked up, if any.
    pub pickup: Option<(usize, &'static str)>,
    pub len: usize,
    pub expected: &'static str,
}

pub const SCENARIOS: [Scenario; 4] = [
    Scenario {
        name: "start",
        pickup: None,
        len: 1,
        expected: "[[-1],[-1],[-1],[0],[0]]",
    },
    Scenario {
        name: "keyA@t2",
        pickup: Some((2, "keyA")),
        len: 3,
        expected: "[[-1],[1],[-1],[0,1],[0]]",
    },
    Scenario {
        name: "keyA@t4",
        pickup: Some((4, "keyA")),
        len: 5,
        expected: "[[-1],[1],[-1],[0,1],[0]]",
    },
    Scenario {
        name: "keyB@t5",
        pickup: Some((5, "keyB")),
        len: 6,
        expected: "[[-1],[-1],[1],[0],[0,1]]",
    },
];

impl Scenario {
    pub fn steps(&self) -> Vec<LabelSet> {
        (0..self.len)
            .map(|t| match self.pickup {
                Some((at, key)) if at == t => LabelSet::from([key]),
                _ => LabelSet::new(),
            })
            .collect()
    }

    pub fn run(&self) -> Signature {
        let mut state = EngineState::for_formula(&parse(KEY_SPEC).expect("key spec parses"));
        state.step_all(self.steps()).expect("fresh engine");
        signature(&state).expect("at least one step")
    }
}

pub struct DemoOutcome {
    pub lines: Vec<String>,
    pub ok: bool,
}

/// Run every scenario, compare against the expected signatures, and check
/// that the two keyA rollouts compare equal and differ from keyB.
pub fn run_demo() -> DemoOutcome {
    let mut lines = Vec::new();
    let mut ok = true;
    let signatures: Vec<Signature> = SCENARIOS.iter().map(Scenario::run).collect();
    for (scenario, sig) in SCENARIOS.iter().zip(&signatures) {
        let json = sig.to_json();
        let matches = json == scenario.expected;
        ok &= matches;
        lines.push(format!(
            "{:<8} {}  {}",
            scenario.name,
            json,
            if matches { "ok" } else { "MISMATCH" }
        ));
    }
    let same = signatures_equal(&signatures[1], &signatures[2]) == Ok(true);
    let differ = signatures_equal(&signatures[1], &signatures[3]) == Ok(false);
    ok &= same && differ;
    lines.push(format!("keyA@t2 == keyA@t4: {same}"));
    lines.push(format!("keyA@t2 != keyB@t5: {differ}"));
    DemoOutcome { lines, ok }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_scenarios_match() {
        let outcome = run_demo();
        assert!(outcome.ok, "{}", outcome.lines.join("\n"));
        assert_eq!(outcome.lines.len(), 6);
    }

    #[test]
    fn scenario_traces() {
        let steps = SCENARIOS[3].steps();
        assert_eq!(steps.len(), 6);
        assert_eq!(steps[5], LabelSet::from(["keyB"]));
        assert!(steps[..5].iter().all(LabelSet::is_empty));
    }
}
