use std::collections::{HashMap, VecDeque};
use std::fmt;

use thiserror::Error;

use super::{sr_step, Frame, SrRule, SrStep};
use crate::iso::id_process;
use crate::syntax::{alpha_eq, alpha_normalize, Process, SessionType};

#[derive(Clone, Debug)]
pub struct SearchOptions {
    /// Number of distinct states the search may store before giving up.
    pub max_steps: usize,
    /// Largest process kept in the search; defaults to four times the
    /// larger of the start and the focused intermediate.
    pub max_term_size: Option<usize>,
    /// Run the deterministic focused phase before breadth-first search.
    pub focus: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { max_steps: 20_000, max_term_size: None, focus: true }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum SearchError {
    #[error("no symbolic reduction reaches the identity ({explored} states explored)")]
    NotFound { explored: usize },
    #[error("search budget of {limit} states exhausted")]
    BudgetExceeded { limit: usize },
}

#[derive(Clone, Debug)]
pub struct ProofTrace {
    pub start: Process,
    pub target: SessionType,
    pub steps: Vec<SrStep>,
}

impl ProofTrace {
    pub fn end(&self) -> &Process {
        self.steps.last().map(|s| &s.process).unwrap_or(&self.start)
    }

    pub fn rules(&self) -> impl Iterator<Item = SrRule> + '_ {
        self.steps.iter().map(|s| s.rule)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("0. [start] {}", self.start)];
        for (i, s) in self.steps.iter().enumerate() {
            out.push(format!("{}. [{} @ {}] {}", i + 1, s.rule, s.path, s.process));
        }
        out
    }
}

impl fmt::Display for ProofTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lines().join("\n"))
    }
}

/// Replays a trace rule by rule and checks that it ends in `id(target)`.
pub fn verify_trace(trace: &ProofTrace) -> bool {
    let mut cur = trace.start.clone();
    for s in &trace.steps {
        let ok = sr_step(&cur)
            .into_iter()
            .any(|c| c.rule == s.rule && c.path == s.path && alpha_eq(&c.process, &s.process));
        if !ok {
            return false;
        }
        cur = s.process.clone();
    }
    alpha_eq(&cur, &id_process(&trace.target))
}

/// Searches for `p ⇝* id(target)`.
pub fn prove_identity(p: &Process, target: &SessionType, opts: &SearchOptions) -> Result<ProofTrace, SearchError> {
    let goal = alpha_normalize(&id_process(target));
    let prefix = if opts.focus { focused(p, opts.max_steps) } else { Vec::new() };
    let mid = prefix.last().map(|s| s.process.clone()).unwrap_or_else(|| p.clone());
    let cap = opts.max_term_size.unwrap_or(4 * p.size().max(mid.size()));

    let first = bfs(&mid, &goal, cap, opts.max_steps);
    let (mut steps, tail) = match first {
        Ok(tail) => (prefix, tail),
        // the focused phase may commit to a dead end
        Err(e) if prefix.is_empty() => return Err(e),
        Err(_) => (Vec::new(), bfs(p, &goal, cap, opts.max_steps)?),
    };
    steps.extend(tail);
    Ok(ProofTrace { start: p.clone(), target: target.clone(), steps })
}

/// Deterministic reduction of the innermost parallel composition: decide
/// closed guards, then collapse identities, cut, hoist left, hoist right.
fn focused(p: &Process, limit: usize) -> Vec<SrStep> {
    let mut steps = Vec::new();
    let mut cur = p.clone();
    while steps.len() < limit {
        let Some(focus) = innermost_par(&cur, &mut Vec::new()) else { break };
        let cands = sr_step(&cur);
        let pick = cands
            .iter()
            .find(|s| s.rule == SrRule::CondEval)
            .or_else(|| {
                let here: Vec<&SrStep> = cands.iter().filter(|s| s.path.0 == focus).collect();
                here.iter()
                    .find(|s| s.rule == SrRule::Id)
                    .or_else(|| here.iter().find(|s| s.rule.is_cut()))
                    .or_else(|| here.iter().find(|s| matches!(s.rule, SrRule::Up(n) if n % 2 == 1)))
                    .or_else(|| here.iter().find(|s| matches!(s.rule, SrRule::Up(_))))
                    .copied()
            });
        let Some(next) = pick.cloned() else { break };
        cur = next.process.clone();
        steps.push(next);
    }
    steps
}

/// Path to the first parallel composition whose operands contain none.
fn innermost_par(p: &Process, path: &mut Vec<Frame>) -> Option<Vec<Frame>> {
    let go = |frame: Frame, q: &Process, path: &mut Vec<Frame>| {
        path.push(frame);
        let r = innermost_par(q, path);
        path.pop();
        r
    };
    match p {
        Process::Idle => None,
        Process::Input { cont, .. } | Process::Output { cont, .. } | Process::Select { cont, .. } => {
            go(Frame::Pre, cont, path)
        }
        Process::Branch { inl, inr, .. } => go(Frame::Inl, inl, path).or_else(|| go(Frame::Inr, inr, path)),
        Process::Cond { then, els, .. } => go(Frame::Then, then, path).or_else(|| go(Frame::Else, els, path)),
        Process::Par(a, b) => go(Frame::ParL, a, path)
            .or_else(|| go(Frame::ParR, b, path))
            .or_else(|| Some(path.clone())),
    }
}

/// Child key to parent key and the step between them.
type Parents = HashMap<Process, Option<(Process, SrStep)>>;

fn bfs(start: &Process, goal: &Process, cap: usize, limit: usize) -> Result<Vec<SrStep>, SearchError> {
    let start_key = alpha_normalize(start);
    if &start_key == goal {
        return Ok(Vec::new());
    }
    let mut parent = Parents::new();
    parent.insert(start_key.clone(), None);
    let mut queue = VecDeque::from([(start_key, start.clone())]);
    let mut explored = 0;
    while let Some((key, cur)) = queue.pop_front() {
        explored += 1;
        for s in sr_step(&cur) {
            if s.process.size() > cap {
                continue;
            }
            let k = alpha_normalize(&s.process);
            if parent.contains_key(&k) {
                continue;
            }
            if parent.len() >= limit {
                return Err(SearchError::BudgetExceeded { limit });
            }
            let done = &k == goal;
            parent.insert(k.clone(), Some((key.clone(), s.clone())));
            if done {
                return Ok(unwind(&parent, k));
            }
            queue.push_back((k, s.process));
        }
    }
    Err(SearchError::NotFound { explored })
}

fn unwind(parent: &Parents, mut k: Process) -> Vec<SrStep> {
    let mut steps = Vec::new();
    while let Some(Some((pk, s))) = parent.get(&k) {
        steps.push(s.clone());
        k = pk.clone();
    }
    steps.reverse();
    steps
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::{axiom_adapters, AxiomInstance, Dir};
    use crate::syntax::{parse_process, parse_type, BaseType};

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

    #[test]
    fn identity_of_identity_pair() {
        let t = parse_type("?int.(end + !bool.end)").unwrap();
        let id = id_process(&t);
        let tr = prove_identity(&Process::par(id.clone(), id), &t, &SearchOptions::default()).unwrap();
        assert!(verify_trace(&tr));
    }

    #[test]
    fn every_axiom_composition_reduces_to_identity() {
        for ax in instances() {
            let pair = axiom_adapters(&ax, Dir::Forward);
            let opts = SearchOptions::default();
            let ab = Process::par(pair.forward.clone(), pair.backward.clone());
            let tr = prove_identity(&ab, &pair.from, &opts).unwrap_or_else(|e| panic!("{ax} A||B: {e}"));
            assert!(verify_trace(&tr), "{ax}\n{tr}");
            let ba = Process::par(pair.backward.clone(), pair.forward.clone());
            let tr = prove_identity(&ba, &pair.to, &opts).unwrap_or_else(|e| panic!("{ax} B||A: {e}"));
            assert!(verify_trace(&tr), "{ax}\n{tr}");
        }
    }

    #[test]
    fn wrong_adapter_is_not_proved() {
        let t = parse_type("!int.end").unwrap();
        let p = parse_process("l?(x:int).r!(0).0 || l?(y:int).r!(y).0").unwrap();
        let opts = SearchOptions { max_steps: 2_000, ..SearchOptions::default() };
        assert!(prove_identity(&p, &t, &opts).is_err());
    }

    #[test]
    fn tampered_trace_fails_verification() {
        let t = parse_type("!int.end").unwrap();
        let id = id_process(&t);
        let mut tr = prove_identity(&Process::par(id.clone(), id), &t, &SearchOptions::default()).unwrap();
        tr.steps[0].rule = SrRule::Up(2);
        assert!(!verify_trace(&tr));
    }
}
