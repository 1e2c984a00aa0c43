//! Isomorphisms between session types: the identity process, the axioms,
//! the normalizer that decides derivability, adapters, and a brute-force
//! oracle.

mod adapters;
mod axioms;
mod normalize;
mod oracle;

use crate::syntax::{Channel, Expr, Process, Selector, SessionType};

pub use adapters::{axiom_adapters, lift_adapter, synthesis_derivation, synthesize, AdapterPair, LiftError};
pub use axioms::{positions, replace_at, rewrite, subterm, AxiomInstance, Dir, TypePath, TypeStep};
pub use normalize::{iso_decide, normal_form, normalize, IsoDecision, IsoDerivation, IsoStep};
pub use oracle::{default_cap, neighbours, oracle_ball, oracle_iso, shortest_derivation};

/// The forwarder `id(T)`: copies protocol `T` from `l` to `r`. It checks at
/// `(dual(T), T)`.
pub fn id_process(t: &SessionType) -> Process {
    id_at(t, 0)
}

fn id_at(t: &SessionType, depth: usize) -> Process {
    let name = if depth == 0 { "x".to_string() } else { format!("x{depth}") };
    match t {
        SessionType::End => Process::Idle,
        SessionType::Out(b, k) => Process::input(
            Channel::L,
            name.clone(),
            *b,
            Process::output(Channel::R, Expr::var(name), id_at(k, depth + 1)),
        ),
        SessionType::In(b, k) => Process::input(
            Channel::R,
            name.clone(),
            *b,
            Process::output(Channel::L, Expr::var(name), id_at(k, depth + 1)),
        ),
        SessionType::Select(a, b) => Process::branch(
            Channel::L,
            Process::select(Channel::R, Selector::Inl, id_at(a, depth)),
            Process::select(Channel::R, Selector::Inr, id_at(b, depth)),
        ),
        SessionType::Branch(a, b) => Process::branch(
            Channel::R,
            Process::select(Channel::L, Selector::Inl, id_at(a, depth)),
            Process::select(Channel::L, Selector::Inr, id_at(b, depth)),
        ),
    }
}

/// Recovers `T` from a term syntactically equal, up to alpha, to `id(T)`.
pub fn as_identity(p: &Process) -> Option<SessionType> {
    use crate::syntax::Process as P;
    match p {
        P::Idle => Some(SessionType::End),
        P::Input { chan, var, ty, cont } => match &**cont {
            P::Output { chan: c2, expr: Expr::Var(v), cont: k } if *c2 == chan.co() && v == var && !k.is_free(var) => {
                let inner = as_identity(k)?;
                Some(match chan {
                    Channel::L => SessionType::out(*ty, inner),
                    Channel::R => SessionType::inp(*ty, inner),
                })
            }
            _ => None,
        },
        P::Branch { chan, inl, inr } => match (&**inl, &**inr) {
            (
                P::Select { chan: c1, sel: Selector::Inl, cont: a },
                P::Select { chan: c2, sel: Selector::Inr, cont: b },
            ) if *c1 == chan.co() && *c2 == chan.co() => {
                let (ta, tb) = (as_identity(a)?, as_identity(b)?);
                Some(match chan {
                    Channel::L => SessionType::select(ta, tb),
                    Channel::R => SessionType::branch(ta, tb),
                })
            }
            _ => None,
        },
        _ => None,
    }
}
