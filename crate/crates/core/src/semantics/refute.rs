//! Randomized search for a context that tells two processes apart.

use std::fmt;

use crate::syntax::{Channel, Process, SessionType};
use crate::typecheck::InterfacePair;

use super::{decide_correct, generate_context, Correctness, Trace};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// `(left || p) || right` and `(left || q) || right` disagree on
    /// correctness. `trace` witnesses the incorrect side.
    Refuted {
        left: Process,
        right: Process,
        correct_p: bool,
        correct_q: bool,
        trace: Trace,
    },
    NoCounterexample {
        trials: usize,
    },
}

impl Refutation {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Refutation::Refuted { .. })
    }
}

impl fmt::Display for Refutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Refutation::Refuted { left, right, correct_p, correct_q, .. } => write!(
                f,
                "refuted by context {left} || [·] || {right}: first process {}, second process {}",
                verdict(*correct_p),
                verdict(*correct_q)
            ),
            Refutation::NoCounterexample { trials } => {
                write!(f, "no counterexample in {trials} contexts")
            }
        }
    }
}

fn verdict(ok: bool) -> &'static str {
    if ok {
        "correct"
    } else {
        "incorrect"
    }
}

pub fn plug(left: &Process, p: &Process, right: &Process) -> Process {
    Process::par(Process::par(left.clone(), p.clone()), right.clone())
}

/// Tries the given `(left, right)` context pairs in order.
pub fn equiv_refute_with<'a>(
    p: &Process,
    q: &Process,
    contexts: impl IntoIterator<Item = (&'a Process, &'a Process)>,
) -> Option<Refutation> {
    for (left, right) in contexts {
        let vp = decide_correct(&plug(left, p, right));
        let vq = decide_correct(&plug(left, q, right));
        let (correct_p, correct_q) = (vp.is_correct(), vq.is_correct());
        if correct_p != correct_q {
            let Correctness::Incorrect { trace, .. } = (if correct_p { vq } else { vp }) else {
                unreachable!("exactly one side is incorrect")
            };
            return Some(Refutation::Refuted {
                left: left.clone(),
                right: right.clone(),
                correct_p,
                correct_q,
                trace,
            });
        }
    }
    None
}

/// Samples `trials` contexts `L || [·] || R`, with `L` at
/// `(end, dual(iface.left))` and `R` at `(dual(iface.right), end)`, and
/// reports the first one under which exactly one of `p`, `q` is correct.
///
/// Contexts carry injected faults on their outer channel (see
/// [`generate_context`]); without them every closed typed composition is
/// correct and nothing could be observed.
pub fn equiv_refute(p: &Process, q: &Process, iface: &InterfacePair, trials: usize, seed: u64) -> Refutation {
    let left_iface = InterfacePair::new(SessionType::End, iface.left.dual());
    let right_iface = InterfacePair::new(iface.right.dual(), SessionType::End);
    for i in 0..trials as u64 {
        let s = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(2 * i);
        let budget = 2 + (i % 9) as usize;
        let left = generate_context(&left_iface, s, budget, Some(Channel::L));
        let right = generate_context(&right_iface, s + 1, budget, Some(Channel::R));
        if let Some(r) = equiv_refute_with(p, q, [(&left, &right)]) {
            return r;
        }
    }
    Refutation::NoCounterexample { trials }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_process, parse_type};

    fn p(s: &str) -> Process {
        parse_process(s).unwrap()
    }

    #[test]
    fn reflexive_pairs_never_refute() {
        let a = p("l?(x:int).r!(x).0");
        let iface = InterfacePair::new(parse_type("?int.end").unwrap(), parse_type("!int.end").unwrap());
        assert_eq!(equiv_refute(&a, &a, &iface, 100, 0), Refutation::NoCounterexample { trials: 100 });
    }

    #[test]
    fn explicit_context_refutes_made_up_value() {
        let id = p("l?(x:int).r!(x).0");
        let fake = p("l?(x:int).0 || r!(0).0");
        let left = p("r!(0 + 1).0");
        let right = p("l?(x:int).if x == 0 + 1 then {0} else {r!(false).0}");
        match equiv_refute_with(&id, &fake, [(&left, &right)]) {
            Some(Refutation::Refuted { correct_p, correct_q, trace, .. }) => {
                assert!(correct_p && !correct_q);
                assert_eq!(trace.initial, plug(&left, &fake, &right));
            }
            other => panic!("expected refutation, got {other:?}"),
        }
    }

    #[test]
    fn random_contexts_refute_made_up_value() {
        let id = p("l?(x:int).r!(x).0");
        let fake = p("l?(x:int).0 || r!(0).0");
        let iface = InterfacePair::new(parse_type("?int.end").unwrap(), parse_type("!int.end").unwrap());
        assert!(equiv_refute(&id, &fake, &iface, 300, 1).is_refuted());
    }
}
