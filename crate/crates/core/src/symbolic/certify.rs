use std::fmt;

use super::search::{prove_identity, ProofTrace, SearchError, SearchOptions};
use crate::syntax::{Process, SessionType};
use crate::typecheck::{check_process, Derivation, InterfacePair, TypeEnv};

/// The four obligations of an isomorphism witness `(A, B)` for `T ≅ S`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Obligation {
    /// `⊢ A ▷ dual(T) ; S`
    TypeForward,
    /// `⊢ B ▷ dual(S) ; T`
    TypeBackward,
    /// `A || B ⇝* id(T)`
    ComposeForward,
    /// `B || A ⇝* id(S)`
    ComposeBackward,
}

impl fmt::Display for Obligation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Obligation::TypeForward => "typing of A",
            Obligation::TypeBackward => "typing of B",
            Obligation::ComposeForward => "A || B reduces to id(T)",
            Obligation::ComposeBackward => "B || A reduces to id(S)",
        })
    }
}

#[derive(Clone, Debug)]
pub struct Certificate {
    pub typing_forward: Derivation,
    pub typing_backward: Derivation,
    pub forward: ProofTrace,
    pub backward: ProofTrace,
}

#[derive(Clone, Debug)]
pub struct CertifyFailure {
    pub obligation: Obligation,
    pub reason: String,
    /// The search ran out of budget rather than exhausting its space.
    pub budget_exceeded: bool,
}

impl fmt::Display for CertifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} failed: {}", self.obligation, self.reason)
    }
}

impl std::error::Error for CertifyFailure {}

/// Checks that `a` and `b` witness `t ≅ s`, stopping at the first failed
/// obligation.
pub fn certify_iso_witnesses(
    t: &SessionType,
    s: &SessionType,
    a: &Process,
    b: &Process,
    opts: &SearchOptions,
) -> Result<Certificate, CertifyFailure> {
    let typed = |ob, p: &Process, iface: InterfacePair| {
        check_process(&TypeEnv::new(), p, &iface).map_err(|e| CertifyFailure {
            obligation: ob,
            reason: e.to_string(),
            budget_exceeded: false,
        })
    };
    let typing_forward = typed(Obligation::TypeForward, a, InterfacePair::new(t.dual(), s.clone()))?;
    let typing_backward = typed(Obligation::TypeBackward, b, InterfacePair::new(s.dual(), t.clone()))?;

    let proved = |ob, p: Process, target: &SessionType| {
        prove_identity(&p, target, opts).map_err(|e| CertifyFailure {
            obligation: ob,
            budget_exceeded: matches!(e, SearchError::BudgetExceeded { .. }),
            reason: e.to_string(),
        })
    };
    let forward = proved(Obligation::ComposeForward, Process::par(a.clone(), b.clone()), t)?;
    let backward = proved(Obligation::ComposeBackward, Process::par(b.clone(), a.clone()), s)?;
    Ok(Certificate { typing_forward, typing_backward, forward, backward })
}
