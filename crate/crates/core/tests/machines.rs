use std::path::PathBuf;

use nemo::fsm::{self, Decision, Fsm};
use nemo::tm::{Outcome, TuringMachine};
use proptest::prelude::*;

fn machine(name: &str) -> String {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../machines").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

#[test]
fn shipped_fsms_match_builtins() {
    assert_eq!(Fsm::parse(&machine("div3.fsm")).unwrap(), fsm::div3());
    assert_eq!(Fsm::parse(&machine("even_zeros.fsm")).unwrap(), fsm::even_zeros());
}

#[test]
fn fsm_text_roundtrips() {
    for f in [fsm::div3(), fsm::even_zeros()] {
        assert_eq!(Fsm::parse(&f.to_text()).unwrap(), f);
    }
}

#[test]
fn div3_shape_and_example() {
    let f = fsm::div3();
    assert_eq!(f.working_states().count(), 3);
    assert_eq!(f.symbols.len(), 11);
    assert_eq!(f.delta.len(), 33);
    assert_eq!(f.reference_run("30471").unwrap().decision, Decision::Accept);
    assert_eq!(f.reference_run("30472").unwrap().decision, Decision::Reject);
}

#[test]
fn unknown_symbol_is_an_error() {
    assert!(fsm::even_zeros().reference_run("012").is_err());
}

proptest! {
    #[test]
    fn div3_is_digit_sum_mod_three(s in "[0-9]{0,40}") {
        let sum: u32 = s.chars().map(|c| c.to_digit(10).unwrap()).sum();
        let want = if sum % 3 == 0 { Decision::Accept } else { Decision::Reject };
        prop_assert_eq!(fsm::div3().reference_run(&s).unwrap().decision, want);
    }

    #[test]
    fn even_zeros_counts_zeros(s in "[01]{0,40}") {
        let zeros = s.chars().filter(|&c| c == '0').count();
        let want = if zeros % 2 == 0 { Decision::Accept } else { Decision::Reject };
        prop_assert_eq!(fsm::even_zeros().reference_run(&s).unwrap().decision, want);
    }

    #[test]
    fn successor_appends_one(len in 0usize..8) {
        let tm = TuringMachine::parse(&machine("successor.tm")).unwrap();
        let input = "1".repeat(len);
        let run = tm.reference_run(&input, 100).unwrap();
        prop_assert_eq!(run.outcome, Outcome::Accept);
        prop_assert_eq!(run.tape, "1".repeat(len + 1));
        prop_assert_eq!(run.steps.len(), len + 1);
    }

    #[test]
    fn bounce_accepts_and_keeps_tape(s in "[ab]{0,8}") {
        let tm = TuringMachine::parse(&machine("bounce.tm")).unwrap();
        let run = tm.reference_run(&s, 100).unwrap();
        prop_assert_eq!(run.outcome, Outcome::Accept);
        prop_assert_eq!(run.tape, s);
    }
}

#[test]
fn accept_machine() {
    let tm = TuringMachine::parse(&machine("accept.tm")).unwrap();
    assert_eq!(tm.reference_run("", 10).unwrap().outcome, Outcome::Accept);
    assert_eq!(tm.reference_run("11", 10).unwrap().outcome, Outcome::Reject);
}

#[test]
fn tm_text_roundtrips() {
    for name in ["accept.tm", "successor.tm", "bounce.tm"] {
        let tm = TuringMachine::parse(&machine(name)).unwrap();
        assert_eq!(TuringMachine::parse(&tm.to_text()).unwrap(), tm);
    }
}
