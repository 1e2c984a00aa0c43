//! Proptest generators shared by the property suites.

#![allow(dead_code)]

use proptest::prelude::*;
use stiso_core::iso::{neighbours, AxiomInstance};
use stiso_core::syntax::{BaseType, Channel, Expr, Process, Selector, SessionType};

pub fn base() -> impl Strategy<Value = BaseType> {
    prop_oneof![Just(BaseType::Unit), Just(BaseType::Bool), Just(BaseType::Int)]
}

/// Session types with at most `nodes` nodes, roughly.
pub fn session_type(nodes: u32) -> impl Strategy<Value = SessionType> {
    Just(SessionType::End).prop_recursive(4, nodes, 2, |inner| {
        prop_oneof![
            (base(), inner.clone()).prop_map(|(t, k)| SessionType::out(t, k)),
            (base(), inner.clone()).prop_map(|(t, k)| SessionType::inp(t, k)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| SessionType::select(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| SessionType::branch(a, b)),
        ]
    })
}

fn name() -> impl Strategy<Value = String> {
    prop_oneof![Just("x"), Just("y"), Just("z"), Just("v1")].prop_map(String::from)
}

pub fn expr() -> impl Strategy<Value = Expr> {
    let leaf = prop_oneof![
        name().prop_map(Expr::var),
        (-50i64..1000).prop_map(Expr::int),
        any::<bool>().prop_map(Expr::bool),
        Just(Expr::unit()),
    ];
    leaf.prop_recursive(3, 8, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::eq(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Expr::add(a, b)),
        ]
    })
}

fn chan() -> impl Strategy<Value = Channel> {
    prop_oneof![Just(Channel::L), Just(Channel::R)]
}

fn selector() -> impl Strategy<Value = Selector> {
    prop_oneof![Just(Selector::Inl), Just(Selector::Inr)]
}

/// Untyped processes, for syntax properties.
pub fn process() -> impl Strategy<Value = Process> {
    Just(Process::Idle).prop_recursive(5, 24, 2, |inner| {
        prop_oneof![
            (chan(), name(), base(), inner.clone()).prop_map(|(c, x, t, k)| Process::input(c, x, t, k)),
            (chan(), expr(), inner.clone()).prop_map(|(c, e, k)| Process::output(c, e, k)),
            (chan(), selector(), inner.clone()).prop_map(|(c, s, k)| Process::select(c, s, k)),
            (chan(), inner.clone(), inner.clone()).prop_map(|(c, a, b)| Process::branch(c, a, b)),
            (expr(), inner.clone(), inner.clone()).prop_map(|(e, a, b)| Process::cond(e, a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Process::par(a, b)),
        ]
    })
}

pub fn axiom_instance() -> impl Strategy<Value = AxiomInstance> {
    let ty = || session_type(5);
    (1u8..=12, base(), base(), ty(), ty(), ty()).prop_map(|(n, t, s, a, b, c)| match n {
        1 => AxiomInstance::A1 { t, s, k: a },
        2 => AxiomInstance::A2 { t, s, k: a },
        3 => AxiomInstance::A3 { t, a, b },
        4 => AxiomInstance::A4 { t, a, b },
        5 => AxiomInstance::A5 { k: a },
        6 => AxiomInstance::A6 { k: a },
        7 => AxiomInstance::A7 { k: a },
        8 => AxiomInstance::A8 { k: a },
        9 => AxiomInstance::A9 { a, b },
        10 => AxiomInstance::A10 { a, b },
        11 => AxiomInstance::A11 { a, b, c },
        _ => AxiomInstance::A12 { a, b, c },
    })
}

/// A type and another reached from it by a few axiom uses, so the two are
/// isomorphic by construction.
pub fn iso_pair() -> impl Strategy<Value = (SessionType, SessionType)> {
    (session_type(5), prop::collection::vec(any::<u16>(), 0..4)).prop_map(|(t, picks)| {
        let cap = t.size() + 2;
        let mut s = t.clone();
        for pick in picks {
            let mut next: Vec<SessionType> = neighbours(&s).into_iter().filter(|u| u.size() <= cap).collect();
            if next.is_empty() {
                break;
            }
            next.sort();
            s = next.swap_remove(pick as usize % next.len());
        }
        (t, s)
    })
}

// The properties themselves, as plain checks so that both the proptest
// suites and the acceptance runner can drive them.

use stiso_core::iso::{id_process, normalize, synthesize};
use stiso_core::symbolic::{certify_iso_witnesses, SearchOptions};
use stiso_core::syntax::{parse_process, parse_type};
use stiso_core::typecheck::{check_process, InterfacePair, TypeEnv};

pub fn dual_involution(t: &SessionType) -> Result<(), TestCaseError> {
    prop_assert_eq!(&t.dual().dual(), t);
    Ok(())
}

pub fn type_round_trip(t: &SessionType) -> Result<(), TestCaseError> {
    prop_assert_eq!(&parse_type(&t.to_string()).unwrap(), t);
    Ok(())
}

pub fn process_round_trip(p: &Process) -> Result<(), TestCaseError> {
    let text = p.to_string();
    let back = parse_process(&text).map_err(|e| TestCaseError::fail(format!("{text}: {e}")))?;
    prop_assert_eq!(&back, p, "printed as {}", text);
    Ok(())
}

pub fn normalize_idempotent(t: &SessionType) -> Result<(), TestCaseError> {
    let (nf, d) = normalize(t);
    prop_assert!(d.replays());
    let (again, d2) = normalize(&nf);
    prop_assert_eq!(again, nf);
    prop_assert!(d2.steps.is_empty());
    Ok(())
}

pub fn axiom_sides_share_normal_form(ax: &AxiomInstance) -> Result<(), TestCaseError> {
    prop_assert_eq!(normalize(&ax.lhs()).0, normalize(&ax.rhs()).0, "{}", ax);
    Ok(())
}

pub fn identity_is_typed(t: &SessionType) -> Result<(), TestCaseError> {
    let iface = InterfacePair::new(t.dual(), t.clone());
    check_process(&TypeEnv::new(), &id_process(t), &iface).map_err(|e| TestCaseError::fail(e.to_string()))?;
    Ok(())
}

pub fn synthesized_adapters_certify(t: &SessionType, s: &SessionType) -> Result<(), TestCaseError> {
    let pair = synthesize(t, s).map_err(|_| TestCaseError::fail(format!("{t} and {s} not derivable")))?;
    certify_iso_witnesses(t, s, &pair.forward, &pair.backward, &SearchOptions::default())
        .map_err(|f| TestCaseError::fail(format!("{t} ≅ {s}: {f}")))?;
    Ok(())
}
