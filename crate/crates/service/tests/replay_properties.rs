use proptest::prelude::*;
use proptrace_service::session::log_line;
use proptrace_service::{replay, Service};

const TASKS: [&str; 3] = ["(-x+1)^2 = 9", "x^2-3*x = 0", "2*x+1 = 7"];
const INPUTS: [&str; 10] = [
    "(-x+1)^2 - 9 = 0",
    "1 - x = 3 or 1 - x = -3",
    "x = -2 or x = 4",
    "x = 99",
    "x*(x-3) = 0",
    "x = 0 or x = 3",
    "2*x = 6",
    "x = 3",
    "x^2 = 3*x",
    "x = (",
];

#[derive(Clone, Debug)]
enum Op {
    Step(usize),
    Hint,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![4 => (0..INPUTS.len()).prop_map(Op::Step), 1 => Just(Op::Hint)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// Cutting the log after any event, or in the middle of the next one,
    /// replays to the session as it was at that event.
    #[test]
    fn crash_replay_equality(task in 0..TASKS.len(), ops in prop::collection::vec(op(), 0..6)) {
        let dir = tempfile::tempdir().unwrap();
        let svc = Service::open(dir.path(), 5).unwrap();
        let id = svc.create_session(TASKS[task]).unwrap().id;
        let mut snapshots = vec![svc.session(&id).unwrap()];
        for op in ops {
            let before = svc.session(&id).unwrap().events.len();
            let _ = match op {
                Op::Step(i) => svc.post_step(&id, INPUTS[i]).map(|_| ()),
                Op::Hint => svc.get_hint(&id).map(|_| ()),
            };
            let s = svc.session(&id).unwrap();
            if s.events.len() > before {
                snapshots.push(s);
            }
        }
        let log = std::fs::read_to_string(dir.path().join("sessions").join(format!("{id}.jsonl"))).unwrap();
        let lines: Vec<&str> = log.split_inclusive('\n').collect();
        prop_assert_eq!(lines.len(), snapshots.len());
        for (k, snap) in snapshots.iter().enumerate() {
            let prefix: String = lines[..=k].concat();
            prop_assert_eq!(&replay(&prefix).unwrap(), snap);
            if let Some(next) = lines.get(k + 1) {
                let torn = format!("{prefix}{}", &next[..next.len() / 2]);
                prop_assert_eq!(&replay(&torn).unwrap(), snap);
            }
        }
        let full = replay(&log).unwrap();
        prop_assert_eq!(log_line(full.events.last().unwrap()), *lines.last().unwrap());
        drop(svc);
        let reopened = Service::open(dir.path(), 5).unwrap();
        prop_assert_eq!(reopened.session(&id).unwrap(), snapshots.last().unwrap().clone());
    }

    /// Every diagnosis maps to exactly one tier, green exactly for accepted steps.
    #[test]
    fn tier_mapping(task in 0..TASKS.len(), input in 0..INPUTS.len() - 1) {
        let dir = tempfile::tempdir().unwrap();
        let svc = Service::open(dir.path(), 5).unwrap();
        let id = svc.create_session(TASKS[task]).unwrap().id;
        let r = svc.post_step(&id, INPUTS[input]).unwrap();
        let accepted = svc.summary(&id).unwrap().accepted_states.len() == 2;
        prop_assert_eq!(r.tier == proptrace_service::Tier::Green, accepted);
        let expected = match r.class.as_str() {
            "correct" | "finished" => proptrace_service::Tier::Green,
            "not-equivalent" => proptrace_service::Tier::Red,
            _ => proptrace_service::Tier::Yellow,
        };
        prop_assert_eq!(r.tier, expected);
    }
}
