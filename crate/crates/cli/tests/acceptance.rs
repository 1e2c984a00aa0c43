//! Acceptance criteria 1 to 9, one PASS/FAIL line each.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use proptest::strategy::Strategy;
use proptest::test_runner::{Config, RngSeed, TestCaseError, TestRunner};
use stiso_core::iso::{axiom_adapters, id_process, iso_decide, oracle_ball, synthesize, AxiomInstance, Dir, IsoDecision};
use stiso_core::semantics::{canon, decide_correct, equiv_refute, explore_edges, generate_typed, is_correct, Correctness, Refutation};
use stiso_core::symbolic::{certify_iso_witnesses, prove_identity, sr_step, verify_trace, SearchOptions, SrRule};
use stiso_core::syntax::{alpha_eq, parse_process, parse_type, BaseType, Process, SessionType};
use stiso_core::typecheck::{check_process, InterfacePair, TypeEnv};

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn ty(s: &str) -> SessionType {
    parse_type(s).expect("valid type")
}

fn pr(s: &str) -> Process {
    parse_process(s).expect("valid process")
}

fn instances() -> Vec<AxiomInstance> {
    let (t, s) = (BaseType::Int, BaseType::Bool);
    let e = SessionType::End;
    vec![
        AxiomInstance::A1 { t, s, k: e.clone() },
        AxiomInstance::A2 { t, s, k: e.clone() },
        AxiomInstance::A3 { t, a: e.clone(), b: e.clone() },
        AxiomInstance::A4 { t, a: e.clone(), b: e.clone() },
        AxiomInstance::A5 { k: e.clone() },
        AxiomInstance::A6 { k: e.clone() },
        AxiomInstance::A7 { k: e.clone() },
        AxiomInstance::A8 { k: e.clone() },
        AxiomInstance::A9 { a: e.clone(), b: e.clone() },
        AxiomInstance::A10 { a: e.clone(), b: e.clone() },
        AxiomInstance::A11 { a: e.clone(), b: e.clone(), c: e.clone() },
        AxiomInstance::A12 { a: e.clone(), b: e.clone(), c: e },
    ]
}

fn within(elapsed: Duration, limit: Duration) -> Result<(), String> {
    if elapsed < limit {
        Ok(())
    } else {
        Err(format!("took {elapsed:?}, limit {limit:?}"))
    }
}

fn adapter_typing() -> Verdict {
    let start = Instant::now();
    let mut ok = 0;
    let mut failures = Vec::new();
    for ax in instances() {
        let pair = axiom_adapters(&ax, Dir::Forward);
        let env = TypeEnv::new();
        for (which, p, iface) in [
            ("A", &pair.forward, InterfacePair::new(ax.lhs().dual(), ax.rhs())),
            ("B", &pair.backward, InterfacePair::new(ax.rhs().dual(), ax.lhs())),
        ] {
            match check_process(&env, p, &iface) {
                Ok(_) => ok += 1,
                Err(e) => failures.push(format!("{which}{}: {e}", ax.number())),
            }
        }
    }
    let time = within(start.elapsed(), Duration::from_secs(1));
    let pass = ok == 24 && time.is_ok();
    verdict(pass, format!("{ok}/24 typed in {:?} {}", start.elapsed(), failures.join("; ") + &time.err().unwrap_or_default()))
}

/// Rules of the reference derivation of each `Aᵢ || Bᵢ`.
fn reference_rules(i: u8) -> Option<&'static [&'static str]> {
    Some(match i {
        1 => &["sr-up 1", "sr-comm 1", "sr-up 4", "sr-id", "sr-swap 3"],
        2 => &["sr-up 2", "sr-comm 2", "sr-up 3", "sr-id", "sr-swap 3"],
        3 => &["sr-up 1", "sr-up 5", "sr-choice 1", "sr-comm 1", "sr-up 4", "sr-up 8", "sr-id", "sr-swap 7"],
        4 => &["sr-up 2", "sr-up 6", "sr-choice 2", "sr-comm 2", "sr-up 3", "sr-up 7", "sr-id", "sr-swap 7"],
        5 => &["sr-up 1", "sr-up 4", "sr-id", "sr-unit"],
        6 => &["sr-up 3", "sr-up 2", "sr-id", "sr-swap 3", "sr-unit"],
        7 => &["sr-up 1", "sr-up 9", "sr-choice 1", "sr-up 4", "sr-id", "sr-cond"],
        8 => &["sr-up 2", "sr-up 10", "sr-choice 2", "sr-up 3", "sr-id", "sr-cond"],
        9 => &["sr-up 5", "sr-choice 1", "sr-up 8", "sr-id"],
        10 => &["sr-up 6", "sr-choice 2", "sr-up 7", "sr-id"],
        _ => return None,
    })
}

fn composition_proofs() -> Verdict {
    let start = Instant::now();
    let opts = SearchOptions::default();
    let mut found = 0;
    let mut problems = Vec::new();
    for ax in instances() {
        let i = ax.number();
        let pair = axiom_adapters(&ax, Dir::Forward);
        let obligations = [
            ("A||B", Process::par(pair.forward.clone(), pair.backward.clone()), ax.lhs(), true),
            ("B||A", Process::par(pair.backward.clone(), pair.forward.clone()), ax.rhs(), false),
        ];
        for (name, p, target, reference) in obligations {
            match prove_identity(&p, &target, &opts) {
                Ok(trace) if verify_trace(&trace) => {
                    found += 1;
                    if let (true, Some(allowed)) = (reference, reference_rules(i)) {
                        let extra: BTreeSet<String> =
                            trace.rules().map(|r| r.name()).filter(|r| !allowed.contains(&r.as_str())).collect();
                        if !extra.is_empty() {
                            problems.push(format!("{name}{i} uses {extra:?}"));
                        }
                    }
                }
                Ok(_) => problems.push(format!("{name}{i}: trace does not replay")),
                Err(e) => problems.push(format!("{name}{i}: {e}")),
            }
        }
    }
    let time = within(start.elapsed(), Duration::from_secs(60));
    let pass = found == 24 && problems.is_empty() && time.is_ok();
    verdict(pass, format!("{found}/24 proved in {:?} {}", start.elapsed(), problems.join("; ") + &time.err().unwrap_or_default()))
}

fn example_one() -> Verdict {
    let out = Command::new(env!("CARGO_BIN_EXE_stiso"))
        .args(["iso", "!int.!bool.end", "!bool.!int.end"])
        .output()
        .expect("binary runs");
    let (t, s) = (ty("!int.!bool.end"), ty("!bool.!int.end"));
    let opts = SearchOptions::default();
    let literal = certify_iso_witnesses(
        &t,
        &s,
        &pr("l?(x:int).l?(y:bool).r!(y).r!(x).0"),
        &pr("l?(x:bool).l?(y:int).r!(y).r!(x).0"),
        &opts,
    );
    let synthesized = synthesize(&t, &s)
        .map_err(|_| "not derivable".to_string())
        .and_then(|p| certify_iso_witnesses(&t, &s, &p.forward, &p.backward, &opts).map_err(|f| f.to_string()));
    let pass = out.status.code() == Some(0) && literal.is_ok() && synthesized.is_ok();
    verdict(
        pass,
        format!(
            "cli exit {:?}, literal pair {}, synthesized pair {}",
            out.status.code(),
            literal.map(|_| "certified".to_string()).unwrap_or_else(|f| f.to_string()),
            synthesized.map(|_| "certified".to_string()).unwrap_or_else(|f| f)
        ),
    )
}

fn example_two_replay() -> Verdict {
    let context = |hole: &Process| {
        Process::par_all([
            pr("r!(0+1).0"),
            hole.clone(),
            pr("l?(x:int).if x == 0+1 then {0} else {r!(false).0}"),
        ])
    };
    let with_id = context(&id_process(&ty("!int.end")));
    let with_adapters = context(&Process::par(pr("l?(x:int).0"), pr("r!(0).0")));
    let good = is_correct(&with_id);
    let expected = canon(&pr("0 || r!(false).0"));
    let (bad, stuck) = match decide_correct(&with_adapters) {
        Correctness::Correct => (false, "correct".to_string()),
        Correctness::Incorrect { trace, .. } => {
            let end = canon(trace.last());
            (end.alpha_eq(&expected), end.to_string())
        }
    };
    verdict(good && bad, format!("C[id] correct: {good}; C[Â||B̂] stuck at {stuck}"))
}

fn non_derivable_pairs() -> Verdict {
    let cases = [
        ("!int.end", "end", "!int.end", "end"),
        ("?int.!bool.end", "!bool.?int.end", "?int.(end (+) end)", "?int.end (+) ?int.end"),
    ];
    let mut details = Vec::new();
    let mut pass = true;
    for (t, s, nt, ns) in cases {
        match iso_decide(&ty(t), &ty(s)) {
            IsoDecision::NotDerivable { nf_left, nf_right } => {
                let ok = nf_left == ty(nt) && nf_right == ty(ns);
                pass &= ok;
                details.push(format!("{nf_left} vs {nf_right}"));
            }
            IsoDecision::Derivable(_) => {
                pass = false;
                details.push(format!("{t} ≅ {s} claimed derivable"));
            }
        }
    }
    verdict(pass, details.join("; "))
}

fn visible_reordering() -> Verdict {
    let start = Instant::now();
    let p1 = pr("l?(x:int).r!(true).l?(y:unit).0");
    let p2 = pr("l?(x:int).l?(y:unit).r!(true).0");
    let iface = InterfacePair::new(ty("?int.?unit.end"), ty("!bool.end"));
    let trials = 500;
    let refutation = equiv_refute(&p1, &p2, &iface, trials, 0);
    let swaps = |from: &Process, to: &Process| {
        sr_step(from)
            .iter()
            .any(|s| matches!(s.rule, SrRule::Swap(3, _)) && alpha_eq(&s.process, to))
    };
    let convertible = swaps(&p1, &p2) && swaps(&p2, &p1);
    let time = within(start.elapsed(), Duration::from_secs(30));
    let none = matches!(refutation, Refutation::NoCounterexample { .. });
    verdict(
        none && convertible && time.is_ok(),
        format!(
            "{}; one sr-swap 3 step each way: {convertible}; {:?}",
            if none { format!("no counterexample in {trials} trials") } else { "refuted".into() },
            start.elapsed()
        ),
    )
}

fn generated_processes() -> Verdict {
    let start = Instant::now();
    let closed = InterfacePair::closed();
    let env = TypeEnv::new();
    let mut incorrect = Vec::new();
    let mut violations = 0;
    let mut edges = 0;
    for seed in 0..1000u64 {
        let p = generate_typed(&closed, seed, 6 + (seed % 12) as usize);
        if !is_correct(&p) {
            incorrect.push(seed);
        }
        let walked = explore_edges(&p, |_, step| {
            edges += 1;
            if check_process(&env, &step.process, &closed).is_err() {
                violations += 1;
            }
        });
        if walked.is_err() {
            incorrect.push(seed);
        }
    }
    let time = within(start.elapsed(), Duration::from_secs(60));
    let pass = incorrect.is_empty() && violations == 0 && time.is_ok();
    verdict(
        pass,
        format!(
            "{} of 1000 incorrect, {violations} of {edges} edges break typing, {:?}",
            incorrect.len(),
            start.elapsed()
        ),
    )
}

/// Every session type with exactly `n` nodes.
fn types_of_size(n: usize, memo: &mut HashMap<usize, Vec<SessionType>>) -> Vec<SessionType> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push(SessionType::End);
    } else {
        for k in types_of_size(n - 1, memo) {
            for t in BaseType::ALL {
                out.push(SessionType::out(t, k.clone()));
                out.push(SessionType::inp(t, k.clone()));
            }
        }
        for left in 1..n - 1 {
            let rights = types_of_size(n - 1 - left, memo);
            for a in types_of_size(left, memo) {
                for b in &rights {
                    out.push(SessionType::select(a.clone(), b.clone()));
                    out.push(SessionType::branch(a.clone(), b.clone()));
                }
            }
        }
    }
    memo.insert(n, out.clone());
    out
}

fn oracle_agreement() -> Verdict {
    let start = Instant::now();
    let mut memo = HashMap::new();
    let by_size: Vec<Vec<SessionType>> = (0..=6).map(|n| if n == 0 { Vec::new() } else { types_of_size(n, &mut memo) }).collect();
    let mut pairs = 0usize;
    let mut disagreements = Vec::new();
    // the smaller side of a pair with total size ≤ 7 has at most 3 nodes
    for small in 1..=3 {
        for t in &by_size[small] {
            let mut balls: HashMap<usize, HashSet<SessionType>> = HashMap::new();
            for big in small..=(7 - small) {
                let cap = big + 2;
                let ball = balls.entry(cap).or_insert_with(|| oracle_ball(t, 12, cap));
                for s in &by_size[big] {
                    // pairs of equal size are visited from both ends; count them once
                    if big == small && s < t {
                        continue;
                    }
                    let oracle = ball.contains(s);
                    for (a, b) in [(t, s), (s, t)] {
                        pairs += 1;
                        if iso_decide(a, b).is_derivable() != oracle {
                            disagreements.push(format!("{a} vs {b}"));
                        }
                    }
                }
            }
        }
    }
    let time = within(start.elapsed(), Duration::from_secs(600));
    let pass = disagreements.is_empty() && time.is_ok();
    disagreements.truncate(5);
    verdict(
        pass,
        format!(
            "{pairs} ordered pairs, {} disagreements in {:?} {}",
            disagreements.len(),
            start.elapsed(),
            disagreements.join("; ")
        ),
    )
}

fn property_suites() -> Verdict {
    fn run<S: Strategy>(name: &str, strategy: S, check: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
        let mut runner = TestRunner::new(Config {
            cases: 1000,
            failure_persistence: None,
            rng_seed: RngSeed::Fixed(0x5e55_10a5),
            ..Config::default()
        });
        runner.run(&strategy, check).map_err(|e| format!("{name}: {e}"))
    }
    let start = Instant::now();
    let results = [
        run("dual involution", common::session_type(16), |t| common::dual_involution(&t)),
        run("type round trip", common::session_type(16), |t| common::type_round_trip(&t)),
        run("process round trip", common::process(), |p| common::process_round_trip(&p)),
        run("normalize idempotence", common::session_type(12), |t| common::normalize_idempotent(&t)),
        run("axiom normal forms", common::axiom_instance(), |a| common::axiom_sides_share_normal_form(&a)),
        run("id typing", common::session_type(16), |t| common::identity_is_typed(&t)),
        run("synthesize then certify", common::iso_pair(), |(t, s)| common::synthesized_adapters_certify(&t, &s)),
    ];
    let failed: Vec<String> = results.into_iter().filter_map(Result::err).collect();
    verdict(
        failed.is_empty(),
        format!("7 suites x 1000 cases in {:?} {}", start.elapsed(), failed.join("; ")),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 9] = [
        ("adapter typing", adapter_typing),
        ("adapter compositions reduce to identities", composition_proofs),
        ("output reordering example", example_one),
        ("made-up value context replay", example_two_replay),
        ("non-derivable pairs and normal forms", non_derivable_pairs),
        ("reordered visible actions", visible_reordering),
        ("generated closed processes", generated_processes),
        ("normalizer against brute-force oracle", oracle_agreement),
        ("property suites", property_suites),
    ];
    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let v = check();
        if !v.pass {
            failures += 1;
        }
        println!("criterion {} ({name}): {}  {}", i + 1, if v.pass { "PASS" } else { "FAIL" }, v.detail.trim_end());
    }
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
