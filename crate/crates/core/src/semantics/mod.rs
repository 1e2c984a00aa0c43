//! Reduction semantics: evaluation, structural congruence, one-step
//! reduction and the correctness decision.

mod generate;
mod refute;

use std::collections::HashSet;
use std::fmt;

use thiserror::Error;

use crate::syntax::{alpha_normalize, substitute, Channel, Expr, Process, Selector, Value};

pub use generate::{generate_context, generate_typed};
pub use refute::{equiv_refute, equiv_refute_with, plug, Refutation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("free variable `{0}` during evaluation")]
    FreeVariable(String),
    #[error("operands of `{0}` have mismatched types")]
    TypeMismatch(String),
    #[error("integer overflow in `{0}`")]
    Overflow(String),
    #[error("guard `{0}` is not a boolean")]
    NotBool(String),
}

pub fn eval_expr(e: &Expr) -> Result<Value, EvalError> {
    match e {
        Expr::Var(x) => Err(EvalError::FreeVariable(x.clone())),
        Expr::Lit(v) => Ok(*v),
        Expr::Eq(a, b) => {
            let (u, v) = (eval_expr(a)?, eval_expr(b)?);
            if u.base_type() != v.base_type() {
                return Err(EvalError::TypeMismatch(e.to_string()));
            }
            Ok(Value::Bool(u == v))
        }
        Expr::Add(a, b) => match (eval_expr(a)?, eval_expr(b)?) {
            (Value::Int(m), Value::Int(n)) => m
                .checked_add(n)
                .map(Value::Int)
                .ok_or_else(|| EvalError::Overflow(e.to_string())),
            _ => Err(EvalError::TypeMismatch(e.to_string())),
        },
    }
}

/// A composition flattened by associativity, with runs of idle elements
/// merged. No element is a parallel composition.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ParList(Vec<Process>);

impl ParList {
    pub fn elements(&self) -> &[Process] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// True for the singleton `[0]`.
    pub fn is_idle(&self) -> bool {
        self.0.len() == 1 && self.0[0].is_idle()
    }

    /// Left-nested composition of the elements.
    pub fn to_process(&self) -> Process {
        Process::par_all(self.0.iter().cloned())
    }

    /// Equality of the lists elementwise up to alpha-equivalence.
    pub fn alpha_eq(&self, other: &ParList) -> bool {
        self.0.len() == other.0.len()
            && self.0.iter().zip(&other.0).all(|(a, b)| crate::syntax::alpha_eq(a, b))
    }

    fn key(&self) -> Vec<Process> {
        self.0.iter().map(alpha_normalize).collect()
    }
}

impl fmt::Display for ParList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// Canonical form modulo `0 || 0 ≡ 0` and associativity. An idle element
/// next to a non-idle one is kept: `0 || P` is not congruent to `P`.
pub fn canon(p: &Process) -> ParList {
    fn flatten(p: &Process, out: &mut Vec<Process>) {
        match p {
            Process::Par(a, b) => {
                flatten(a, out);
                flatten(b, out);
            }
            _ => {
                if !(p.is_idle() && out.last().is_some_and(Process::is_idle)) {
                    out.push(p.clone());
                }
            }
        }
    }
    let mut out = Vec::new();
    flatten(p, &mut out);
    ParList(out)
}

/// One reduction step: the rule, the index of the (leftmost) element of the
/// redex in the canonical list, and the resulting process.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Step {
    pub rule: &'static str,
    pub position: usize,
    pub process: Process,
}

/// All one-step successors of `p`.
pub fn step(p: &Process) -> Result<Vec<Step>, EvalError> {
    step_list(&canon(p))
}

fn step_list(list: &ParList) -> Result<Vec<Step>, EvalError> {
    let els = list.elements();
    let mut out = Vec::new();
    let mut emit = |rule, position: usize, replaced: Vec<Process>| {
        let mut items = els.to_vec();
        items.splice(position..position + replaced.len(), replaced);
        out.push(Step {
            rule,
            position,
            process: Process::par_all(items),
        });
    };
    for (i, el) in els.iter().enumerate() {
        if let Process::Cond { guard, then, els: otherwise } = el {
            match eval_expr(guard)? {
                Value::Bool(true) => emit("r-cond", i, vec![(**then).clone()]),
                Value::Bool(false) => emit("r-cond", i, vec![(**otherwise).clone()]),
                _ => return Err(EvalError::NotBool(guard.to_string())),
            }
        }
        let Some(next) = els.get(i + 1) else { continue };
        match (el, next) {
            (
                Process::Output { chan: Channel::R, expr, cont: p },
                Process::Input { chan: Channel::L, var, ty, cont: q },
            ) => {
                let v = eval_expr(expr)?;
                if v.inhabits(*ty) {
                    emit("r-comm 1", i, vec![(**p).clone(), substitute(q, var, v)]);
                }
            }
            (
                Process::Input { chan: Channel::R, var, ty, cont: p },
                Process::Output { chan: Channel::L, expr, cont: q },
            ) => {
                let v = eval_expr(expr)?;
                if v.inhabits(*ty) {
                    emit("r-comm 2", i, vec![substitute(p, var, v), (**q).clone()]);
                }
            }
            (
                Process::Select { chan: Channel::R, sel, cont: p },
                Process::Branch { chan: Channel::L, inl, inr },
            ) => {
                let q = if *sel == Selector::Inl { inl } else { inr };
                emit("r-choice 1", i, vec![(**p).clone(), (**q).clone()]);
            }
            (
                Process::Branch { chan: Channel::R, inl, inr },
                Process::Select { chan: Channel::L, sel, cont: q },
            ) => {
                let p = if *sel == Selector::Inl { inl } else { inr };
                emit("r-choice 2", i, vec![(**p).clone(), (**q).clone()]);
            }
            _ => {}
        }
    }
    Ok(out)
}

/// A reduction sequence `initial → ... → last`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Trace {
    pub initial: Process,
    pub steps: Vec<Step>,
}

impl Trace {
    pub fn last(&self) -> &Process {
        self.steps.last().map_or(&self.initial, |s| &s.process)
    }

    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("0. [init] {}", self.initial)];
        for (k, s) in self.steps.iter().enumerate() {
            out.push(format!("{}. [{}] {}", k + 1, s.rule, s.process));
        }
        out
    }
}

impl fmt::Display for Trace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lines().join("\n"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Correctness {
    Correct,
    /// A maximal trace ending in a stuck state other than `0`, or a trace
    /// whose last state fails to evaluate.
    Incorrect {
        trace: Trace,
        error: Option<EvalError>,
    },
}

impl Correctness {
    pub fn is_correct(&self) -> bool {
        matches!(self, Correctness::Correct)
    }
}

pub fn is_correct(p: &Process) -> bool {
    decide_correct(p).is_correct()
}

/// Explores every reduction sequence from `p`. Reduction strictly shrinks
/// terms, so the graph is finite and acyclic; states already shown to lead
/// only to `0` are memoized modulo congruence and alpha.
pub fn decide_correct(p: &Process) -> Correctness {
    let mut good = HashSet::new();
    let mut path = Vec::new();
    match explore(&canon(p), &mut good, &mut path) {
        Ok(()) => Correctness::Correct,
        Err(error) => Correctness::Incorrect {
            trace: Trace {
                initial: p.clone(),
                steps: path,
            },
            error,
        },
    }
}

/// On failure `path` holds the steps leading to the offending state.
fn explore(
    list: &ParList,
    good: &mut HashSet<Vec<Process>>,
    path: &mut Vec<Step>,
) -> Result<(), Option<EvalError>> {
    let key = list.key();
    if good.contains(&key) {
        return Ok(());
    }
    let succ = step_list(list).map_err(Some)?;
    if succ.is_empty() {
        return if list.is_idle() { good.insert(key); Ok(()) } else { Err(None) };
    }
    for s in succ {
        let next = canon(&s.process);
        path.push(s);
        explore(&next, good, path)?;
        path.pop();
    }
    good.insert(key);
    Ok(())
}

/// Calls `visit(state, step)` once for every edge of the reduction graph
/// reachable from `p` (states are identified modulo congruence and alpha).
pub fn explore_edges(p: &Process, mut visit: impl FnMut(&Process, &Step)) -> Result<(), EvalError> {
    let mut seen = HashSet::new();
    let mut stack = vec![canon(p)];
    while let Some(list) = stack.pop() {
        if !seen.insert(list.key()) {
            continue;
        }
        let state = list.to_process();
        for s in step_list(&list)? {
            visit(&state, &s);
            stack.push(canon(&s.process));
        }
    }
    Ok(())
}

/// Length of the longest reduction sequence from `p`.
pub fn longest_reduction(p: &Process) -> Result<usize, EvalError> {
    fn go(
        list: &ParList,
        memo: &mut std::collections::HashMap<Vec<Process>, usize>,
    ) -> Result<usize, EvalError> {
        let key = list.key();
        if let Some(&n) = memo.get(&key) {
            return Ok(n);
        }
        let mut best = 0;
        for s in step_list(list)? {
            best = best.max(1 + go(&canon(&s.process), memo)?);
        }
        memo.insert(key, best);
        Ok(best)
    }
    go(&canon(p), &mut Default::default())
}
