//! Adapter processes witnessing isomorphisms: one pair per axiom, lifted
//! through type contexts and composed along derivations.

use thiserror::Error;

use crate::syntax::{BaseType, Channel, Expr, Process, Selector, SessionType};
use crate::typecheck::{check_process, InterfacePair, TypeEnv, TypeError};

use super::axioms::{subterm, AxiomInstance, Dir, TypePath, TypeStep};
use super::id_process;
use super::normalize::{iso_decide, IsoDecision, IsoDerivation};
use super::oracle::shortest_derivation;

use Channel::{L, R};
use Selector::{Inl, Inr};

/// `forward` converts `from` into `to`: it checks at `(dual(from), to)`;
/// `backward` checks at `(dual(to), from)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdapterPair {
    pub forward: Process,
    pub backward: Process,
    pub from: SessionType,
    pub to: SessionType,
}

impl AdapterPair {
    pub fn forward_iface(&self) -> InterfacePair {
        InterfacePair::new(self.from.dual(), self.to.clone())
    }

    pub fn backward_iface(&self) -> InterfacePair {
        InterfacePair::new(self.to.dual(), self.from.clone())
    }

    /// Type checks both processes against their interfaces.
    pub fn check(&self) -> Result<(), TypeError> {
        check_process(&TypeEnv::new(), &self.forward, &self.forward_iface())?;
        check_process(&TypeEnv::new(), &self.backward, &self.backward_iface())?;
        Ok(())
    }
}

fn inp(c: Channel, x: &str, t: BaseType, k: Process) -> Process {
    Process::input(c, x, t, k)
}

fn out(c: Channel, x: &str, k: Process) -> Process {
    Process::output(c, Expr::var(x), k)
}

fn sel(c: Channel, s: Selector, k: Process) -> Process {
    Process::select(c, s, k)
}

fn case(c: Channel, a: Process, b: Process) -> Process {
    Process::branch(c, a, b)
}

/// The adapter pair of one axiom use: `A` forward and `B` backward for a
/// left-to-right use, exchanged for a right-to-left one.
pub fn axiom_adapters(ax: &AxiomInstance, dir: Dir) -> AdapterPair {
    use AxiomInstance::*;
    let id = id_process;
    let (a, b) = match ax {
        A1 { t, s, k } => (
            inp(L, "x", *t, inp(L, "y", *s, out(R, "y", out(R, "x", id(k))))),
            inp(L, "x", *s, inp(L, "y", *t, out(R, "y", out(R, "x", id(k))))),
        ),
        A2 { t, s, k } => (
            inp(R, "x", *s, inp(R, "y", *t, out(L, "y", out(L, "x", id(k))))),
            inp(R, "x", *t, inp(R, "y", *s, out(L, "y", out(L, "x", id(k))))),
        ),
        A3 { t, a, b } => (
            inp(
                L,
                "x",
                *t,
                case(L, sel(R, Inl, out(R, "x", id(a))), sel(R, Inr, out(R, "x", id(b)))),
            ),
            case(
                L,
                inp(L, "x", *t, out(R, "x", sel(R, Inl, id(a)))),
                inp(L, "x", *t, out(R, "x", sel(R, Inr, id(b)))),
            ),
        ),
        A4 { t, a, b } => (
            case(
                R,
                inp(R, "x", *t, out(L, "x", sel(L, Inl, id(a)))),
                inp(R, "x", *t, out(L, "x", sel(L, Inr, id(b)))),
            ),
            inp(
                R,
                "x",
                *t,
                case(R, sel(L, Inl, out(L, "x", id(a))), sel(L, Inr, out(L, "x", id(b)))),
            ),
        ),
        A5 { k } => (
            inp(L, "x", BaseType::Unit, id(k)),
            Process::output(R, Expr::unit(), id(k)),
        ),
        A6 { k } => (
            Process::output(L, Expr::unit(), id(k)),
            inp(R, "x", BaseType::Unit, id(k)),
        ),
        A7 { k } => (
            inp(
                L,
                "x",
                BaseType::Bool,
                Process::cond(Expr::var("x"), sel(R, Inl, id(k)), sel(R, Inr, id(k))),
            ),
            case(
                L,
                Process::output(R, Expr::bool(true), id(k)),
                Process::output(R, Expr::bool(false), id(k)),
            ),
        ),
        A8 { k } => (
            case(
                R,
                Process::output(L, Expr::bool(true), id(k)),
                Process::output(L, Expr::bool(false), id(k)),
            ),
            inp(
                R,
                "x",
                BaseType::Bool,
                Process::cond(Expr::var("x"), sel(L, Inl, id(k)), sel(L, Inr, id(k))),
            ),
        ),
        A9 { a, b } => (
            case(L, sel(R, Inr, id(a)), sel(R, Inl, id(b))),
            case(L, sel(R, Inr, id(b)), sel(R, Inl, id(a))),
        ),
        A10 { a, b } => (
            case(R, sel(L, Inr, id(b)), sel(L, Inl, id(a))),
            case(R, sel(L, Inr, id(a)), sel(L, Inl, id(b))),
        ),
        A11 { a, b, c } => (
            case(
                L,
                case(L, sel(R, Inl, id(a)), sel(R, Inr, sel(R, Inl, id(b)))),
                sel(R, Inr, sel(R, Inr, id(c))),
            ),
            case(
                L,
                sel(R, Inl, sel(R, Inl, id(a))),
                case(L, sel(R, Inl, sel(R, Inr, id(b))), sel(R, Inr, id(c))),
            ),
        ),
        A12 { a, b, c } => (
            case(
                R,
                sel(L, Inl, sel(L, Inl, id(a))),
                case(R, sel(L, Inl, sel(L, Inr, id(b))), sel(L, Inr, id(c))),
            ),
            case(
                R,
                case(R, sel(L, Inl, id(a)), sel(L, Inr, sel(L, Inl, id(b)))),
                sel(L, Inr, sel(L, Inr, id(c))),
            ),
        ),
    };
    let (lhs, rhs) = (ax.lhs(), ax.rhs());
    match dir {
        Dir::Forward => AdapterPair { forward: a, backward: b, from: lhs, to: rhs },
        Dir::Backward => AdapterPair { forward: b, backward: a, from: rhs, to: lhs },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LiftError {
    #[error("path {path} does not exist in {surrounding}")]
    NoSuchPath { path: TypePath, surrounding: SessionType },
    #[error("adapter converts {found}, but the subterm at {path} is {expected}")]
    Mismatch {
        path: TypePath,
        expected: SessionType,
        found: SessionType,
    },
}

/// Wraps `inner`, an adapter for the subterm of `surrounding` at `path`,
/// into an adapter for `surrounding` with that subterm replaced.
pub fn lift_adapter(path: &TypePath, surrounding: &SessionType, inner: &AdapterPair) -> Result<AdapterPair, LiftError> {
    let at = subterm(surrounding, path).ok_or_else(|| LiftError::NoSuchPath {
        path: path.clone(),
        surrounding: surrounding.clone(),
    })?;
    if *at != inner.from {
        return Err(LiftError::Mismatch {
            path: path.clone(),
            expected: at.clone(),
            found: inner.from.clone(),
        });
    }
    let mut pair = inner.clone();
    for depth in (0..path.0.len()).rev() {
        let parent = subterm(surrounding, &TypePath(path.0[..depth].to_vec())).expect("prefix of a valid path");
        pair = wrap(parent, path.0[depth], pair);
    }
    Ok(pair)
}

/// One level of lifting: `parent` is the type whose child `step` the pair
/// converts.
fn wrap(parent: &SessionType, step: TypeStep, p: AdapterPair) -> AdapterPair {
    use SessionType as St;
    let (forward, backward, from, to) = match (parent, step) {
        (St::Out(t, _), TypeStep::Cont) => (
            inp(L, "x", *t, out(R, "x", p.forward)),
            inp(L, "x", *t, out(R, "x", p.backward)),
            St::out(*t, p.from),
            St::out(*t, p.to),
        ),
        (St::In(t, _), TypeStep::Cont) => (
            inp(R, "x", *t, out(L, "x", p.forward)),
            inp(R, "x", *t, out(L, "x", p.backward)),
            St::inp(*t, p.from),
            St::inp(*t, p.to),
        ),
        (St::Select(_, other), TypeStep::Left) => (
            case(L, sel(R, Inl, p.forward), sel(R, Inr, id_process(other))),
            case(L, sel(R, Inl, p.backward), sel(R, Inr, id_process(other))),
            St::select(p.from, (**other).clone()),
            St::select(p.to, (**other).clone()),
        ),
        (St::Select(other, _), TypeStep::Right) => (
            case(L, sel(R, Inl, id_process(other)), sel(R, Inr, p.forward)),
            case(L, sel(R, Inl, id_process(other)), sel(R, Inr, p.backward)),
            St::select((**other).clone(), p.from),
            St::select((**other).clone(), p.to),
        ),
        (St::Branch(_, other), TypeStep::Left) => (
            case(R, sel(L, Inl, p.forward), sel(L, Inr, id_process(other))),
            case(R, sel(L, Inl, p.backward), sel(L, Inr, id_process(other))),
            St::branch(p.from, (**other).clone()),
            St::branch(p.to, (**other).clone()),
        ),
        (St::Branch(other, _), TypeStep::Right) => (
            case(R, sel(L, Inl, id_process(other)), sel(L, Inr, p.forward)),
            case(R, sel(L, Inl, id_process(other)), sel(L, Inr, p.backward)),
            St::branch((**other).clone(), p.from),
            St::branch((**other).clone(), p.to),
        ),
        _ => unreachable!("path validated against the surrounding type"),
    };
    AdapterPair { forward, backward, from, to }
}

/// States the search for a shorter derivation may visit.
const SHORTCUT_STATES: usize = 5_000;

/// The derivation synthesis follows: the one from [`iso_decide`], replaced
/// by a shorter one when a bounded search finds it. Each step becomes one
/// adapter in the composition, so fewer steps mean smaller adapters.
pub fn synthesis_derivation(t: &SessionType, s: &SessionType) -> Result<IsoDerivation, IsoDecision> {
    let derivation = match iso_decide(t, s) {
        IsoDecision::Derivable(d) => d,
        not => return Err(not),
    };
    if derivation.steps.len() <= 1 {
        return Ok(derivation);
    }
    Ok(shortest_derivation(t, s, SHORTCUT_STATES)
        .filter(|d| d.steps.len() < derivation.steps.len())
        .unwrap_or(derivation))
}

/// Adapters between `t` and `s` built from [`synthesis_derivation`]: each
/// step's axiom adapter is lifted to its position and the steps are chained
/// by composition.
pub fn synthesize(t: &SessionType, s: &SessionType) -> Result<AdapterPair, IsoDecision> {
    let derivation = synthesis_derivation(t, s)?;
    if derivation.steps.is_empty() {
        return Ok(AdapterPair {
            forward: id_process(t),
            backward: id_process(t),
            from: t.clone(),
            to: s.clone(),
        });
    }
    let mut forwards = Vec::new();
    let mut backwards = Vec::new();
    for step in &derivation.steps {
        let lifted = lift_adapter(&step.path, &step.before, &axiom_adapters(&step.axiom, step.dir))
            .expect("derivation steps are applicable");
        debug_assert_eq!(lifted.to, step.after);
        forwards.push(lifted.forward);
        backwards.push(lifted.backward);
    }
    backwards.reverse();
    Ok(AdapterPair {
        forward: Process::par_all(forwards),
        backward: Process::par_all(backwards),
        from: t.clone(),
        to: s.clone(),
    })
}
