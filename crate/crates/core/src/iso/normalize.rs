//! Normal forms modulo the axioms, and the derivations that reach them.
//!
//! The axioms are oriented as follows: unit prefixes are erased, bool
//! prefixes become binary choices, messages are pushed into choices of the
//! matching polarity, every choice is reassociated into a right comb whose
//! alternatives are sorted by the derived `Ord` on [`SessionType`], and runs
//! of same-direction prefixes are sorted by base type. Two types get the
//! same normal form iff (as far as checked) they are provably isomorphic.

use std::fmt;

use crate::syntax::{BaseType, SessionType};

use super::axioms::{rewrite, subterm, AxiomInstance, Dir, TypePath, TypeStep};

use SessionType as St;

/// One axiom use inside a derivation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoStep {
    pub axiom: AxiomInstance,
    pub dir: Dir,
    pub path: TypePath,
    pub before: SessionType,
    pub after: SessionType,
}

impl IsoStep {
    pub fn reversed(&self) -> IsoStep {
        IsoStep {
            axiom: self.axiom.clone(),
            dir: self.dir.flip(),
            path: self.path.clone(),
            before: self.after.clone(),
            after: self.before.clone(),
        }
    }
}

/// A chain of axiom uses rewriting `source` into `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsoDerivation {
    pub source: SessionType,
    pub target: SessionType,
    pub steps: Vec<IsoStep>,
}

impl IsoDerivation {
    pub fn lines(&self) -> Vec<String> {
        self.steps
            .iter()
            .enumerate()
            .map(|(k, s)| format!("{}. [{} {}] at {} : {} ⇒ {}", k + 1, s.axiom, s.dir, s.path, s.before, s.after))
            .collect()
    }

    /// Replays every step, confirming it is an axiom instance at its path
    /// and that the chain links `source` to `target`.
    pub fn replays(&self) -> bool {
        let mut cur = self.source.clone();
        for s in &self.steps {
            if s.before != cur {
                return false;
            }
            match rewrite(&cur, &s.path, &s.axiom, s.dir) {
                Some(next) if next == s.after => cur = next,
                _ => return false,
            }
        }
        cur == self.target
    }
}

impl fmt::Display for IsoDerivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.lines().join("\n"))
    }
}

struct Rewriter {
    current: SessionType,
    steps: Vec<IsoStep>,
}

impl Rewriter {
    fn apply(&mut self, path: TypePath, axiom: AxiomInstance, dir: Dir) {
        let after = rewrite(&self.current, &path, &axiom, dir)
            .unwrap_or_else(|| panic!("{axiom} {dir} does not apply at {path} of {}", self.current));
        let before = std::mem::replace(&mut self.current, after.clone());
        self.steps.push(IsoStep { axiom, dir, path, before, after });
    }

    fn at(&self, path: &TypePath) -> SessionType {
        subterm(&self.current, path).expect("valid path").clone()
    }

    /// Rewrites the first (preorder) position where `pick` offers a forward
    /// axiom instance, until none is left.
    fn exhaust(&mut self, pick: impl Fn(&SessionType) -> Option<AxiomInstance>) {
        loop {
            let hit = super::axioms::positions(&self.current)
                .into_iter()
                .find_map(|(path, sub)| pick(sub).map(|ax| (path, ax)));
            match hit {
                Some((path, ax)) => self.apply(path, ax, Dir::Forward),
                None => break,
            }
        }
    }

    fn sort_choices(&mut self, path: &TypePath) {
        match self.at(path) {
            St::End => {}
            St::Out(..) | St::In(..) => self.sort_choices(&path.child(TypeStep::Cont)),
            node @ (St::Select(..) | St::Branch(..)) => {
                let select = matches!(node, St::Select(..));
                let spine = self.right_comb(path, select);
                // alternatives sit at the left child of every spine node, and
                // the last one also at the right child of the last node
                let mut leaves: Vec<TypePath> = spine.iter().map(|p| p.child(TypeStep::Left)).collect();
                leaves.push(spine.last().expect("nonempty spine").child(TypeStep::Right));
                for leaf in &leaves {
                    self.sort_choices(leaf);
                }
                let n = leaves.len();
                for pass in 0..n {
                    for j in 0..n - 1 - pass {
                        if self.at(&leaves[j]) > self.at(&leaves[j + 1]) {
                            self.swap_adjacent(&spine, j, select);
                        }
                    }
                }
            }
        }
    }

    /// Reassociates the choice at `path` into a right comb and returns the
    /// paths of its spine nodes.
    fn right_comb(&mut self, path: &TypePath, select: bool) -> Vec<TypePath> {
        let mut spine = Vec::new();
        let mut cur = path.clone();
        loop {
            match self.at(&cur) {
                St::Select(a, c) if select => {
                    if let St::Select(a1, a2) = *a {
                        let ax = AxiomInstance::A11 { a: *a1, b: *a2, c: *c };
                        self.apply(cur.clone(), ax, Dir::Forward);
                        continue;
                    }
                    spine.push(cur.clone());
                    if !matches!(*c, St::Select(..)) {
                        break;
                    }
                }
                St::Branch(a, c) if !select => {
                    if let St::Branch(a1, a2) = *a {
                        let ax = AxiomInstance::A12 { a: *a1, b: *a2, c: *c };
                        self.apply(cur.clone(), ax, Dir::Forward);
                        continue;
                    }
                    spine.push(cur.clone());
                    if !matches!(*c, St::Branch(..)) {
                        break;
                    }
                }
                _ => unreachable!("spine nodes share the comb's kind"),
            }
            cur = cur.child(TypeStep::Right);
        }
        spine
    }

    /// Exchanges alternatives `j` and `j + 1` of a right comb.
    fn swap_adjacent(&mut self, spine: &[TypePath], j: usize, select: bool) {
        let node = spine[j].clone();
        let comm = |a: SessionType, b: SessionType| {
            if select {
                AxiomInstance::A9 { a, b }
            } else {
                AxiomInstance::A10 { a, b }
            }
        };
        let assoc = |a: SessionType, b: SessionType, c: SessionType| {
            if select {
                AxiomInstance::A11 { a, b, c }
            } else {
                AxiomInstance::A12 { a, b, c }
            }
        };
        let (x, rest) = split(&self.at(&node));
        if j + 1 == spine.len() {
            self.apply(node, comm(x, rest), Dir::Forward);
            return;
        }
        let (y, z) = split(&rest);
        self.apply(node.clone(), assoc(x.clone(), y.clone(), z.clone()), Dir::Backward);
        self.apply(node.child(TypeStep::Left), comm(x.clone(), y.clone()), Dir::Forward);
        self.apply(node, assoc(y, x, z), Dir::Forward);
    }
}

fn split(t: &SessionType) -> (SessionType, SessionType) {
    match t {
        St::Select(a, b) | St::Branch(a, b) => ((**a).clone(), (**b).clone()),
        _ => unreachable!("spine node is a choice"),
    }
}

/// The normal form of `t` and a derivation from `t` to it.
pub fn normalize(t: &SessionType) -> (SessionType, IsoDerivation) {
    let mut rw = Rewriter {
        current: t.clone(),
        steps: Vec::new(),
    };
    rw.exhaust(|sub| match sub {
        St::Out(BaseType::Unit, k) => Some(AxiomInstance::A5 { k: (**k).clone() }),
        St::In(BaseType::Unit, k) => Some(AxiomInstance::A6 { k: (**k).clone() }),
        _ => None,
    });
    rw.exhaust(|sub| match sub {
        St::Out(BaseType::Bool, k) => Some(AxiomInstance::A7 { k: (**k).clone() }),
        St::In(BaseType::Bool, k) => Some(AxiomInstance::A8 { k: (**k).clone() }),
        _ => None,
    });
    rw.exhaust(|sub| match sub {
        St::Out(t, k) => match &**k {
            St::Select(a, b) => Some(AxiomInstance::A3 { t: *t, a: (**a).clone(), b: (**b).clone() }),
            _ => None,
        },
        St::In(t, k) => match &**k {
            St::Branch(a, b) => Some(AxiomInstance::A4 { t: *t, a: (**a).clone(), b: (**b).clone() }),
            _ => None,
        },
        _ => None,
    });
    rw.sort_choices(&TypePath::root());
    // Only int prefixes survive the first two phases, so this finds nothing
    // today; it keeps the form canonical should more base types appear.
    rw.exhaust(|sub| match sub {
        St::Out(t, k) => match &**k {
            St::Out(s, k2) if s < t => Some(AxiomInstance::A1 { t: *t, s: *s, k: (**k2).clone() }),
            _ => None,
        },
        St::In(t, k) => match &**k {
            St::In(s, k2) if s < t => Some(AxiomInstance::A2 { t: *t, s: *s, k: (**k2).clone() }),
            _ => None,
        },
        _ => None,
    });
    let nf = rw.current.clone();
    let derivation = IsoDerivation {
        source: t.clone(),
        target: nf.clone(),
        steps: rw.steps,
    };
    (nf, derivation)
}

pub fn normal_form(t: &SessionType) -> SessionType {
    normalize(t).0
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoDecision {
    Derivable(IsoDerivation),
    /// The normal forms differ: the pair is not derivable from a1–a12 with
    /// this orientation. This is not a proof of non-isomorphism.
    NotDerivable { nf_left: SessionType, nf_right: SessionType },
}

impl IsoDecision {
    pub fn is_derivable(&self) -> bool {
        matches!(self, IsoDecision::Derivable(_))
    }
}

pub fn iso_decide(t: &SessionType, s: &SessionType) -> IsoDecision {
    if t == s {
        return IsoDecision::Derivable(IsoDerivation {
            source: t.clone(),
            target: s.clone(),
            steps: Vec::new(),
        });
    }
    let (nf_t, dt) = normalize(t);
    let (nf_s, ds) = normalize(s);
    if nf_t != nf_s {
        return IsoDecision::NotDerivable {
            nf_left: nf_t,
            nf_right: nf_s,
        };
    }
    let mut steps = dt.steps;
    steps.extend(ds.steps.iter().rev().map(IsoStep::reversed));
    IsoDecision::Derivable(IsoDerivation {
        source: t.clone(),
        target: s.clone(),
        steps: without_detours(steps),
    })
}

/// Drops every stretch of a chain that returns to a type already visited.
/// The two normalization chains usually share a tail, which this removes.
fn without_detours(steps: Vec<IsoStep>) -> Vec<IsoStep> {
    let Some(first) = steps.first() else { return steps };
    let mut last_seen = std::collections::HashMap::new();
    last_seen.insert(&first.before, 0);
    for (i, s) in steps.iter().enumerate() {
        last_seen.insert(&s.after, i + 1);
    }
    let mut out = Vec::new();
    // `at` indexes states: state 0 is the source, state i+1 follows step i
    let mut at = last_seen[&first.before];
    while at < steps.len() {
        out.push(steps[at].clone());
        at = last_seen[&steps[at].after];
    }
    out
}
