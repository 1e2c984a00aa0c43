//! The twelve isomorphism axioms, type positions and one-step rewriting.

use std::fmt;

use crate::syntax::{BaseType, SessionType};

/// A fully instantiated axiom. Field names follow the schemas: `t`, `s` are
/// payload types, `k` a continuation, `a`, `b`, `c` choice alternatives.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum AxiomInstance {
    /// `!t.!s.k ≅ !s.!t.k`
    A1 { t: BaseType, s: BaseType, k: SessionType },
    /// `?t.?s.k ≅ ?s.?t.k`
    A2 { t: BaseType, s: BaseType, k: SessionType },
    /// `!t.(a (+) b) ≅ !t.a (+) !t.b`
    A3 { t: BaseType, a: SessionType, b: SessionType },
    /// `?t.(a + b) ≅ ?t.a + ?t.b`
    A4 { t: BaseType, a: SessionType, b: SessionType },
    /// `!unit.k ≅ k`
    A5 { k: SessionType },
    /// `?unit.k ≅ k`
    A6 { k: SessionType },
    /// `!bool.k ≅ k (+) k`
    A7 { k: SessionType },
    /// `?bool.k ≅ k + k`
    A8 { k: SessionType },
    /// `a (+) b ≅ b (+) a`
    A9 { a: SessionType, b: SessionType },
    /// `a + b ≅ b + a`
    A10 { a: SessionType, b: SessionType },
    /// `(a (+) b) (+) c ≅ a (+) (b (+) c)`
    A11 { a: SessionType, b: SessionType, c: SessionType },
    /// `(a + b) + c ≅ a + (b + c)`
    A12 { a: SessionType, b: SessionType, c: SessionType },
}

/// Orientation of an axiom use: `Forward` rewrites the left-hand side to
/// the right-hand side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Dir {
    Forward,
    Backward,
}

impl Dir {
    pub fn flip(self) -> Dir {
        match self {
            Dir::Forward => Dir::Backward,
            Dir::Backward => Dir::Forward,
        }
    }
}

impl fmt::Display for Dir {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Dir::Forward => "→",
            Dir::Backward => "←",
        })
    }
}

use SessionType as St;

impl AxiomInstance {
    pub fn number(&self) -> u8 {
        match self {
            AxiomInstance::A1 { .. } => 1,
            AxiomInstance::A2 { .. } => 2,
            AxiomInstance::A3 { .. } => 3,
            AxiomInstance::A4 { .. } => 4,
            AxiomInstance::A5 { .. } => 5,
            AxiomInstance::A6 { .. } => 6,
            AxiomInstance::A7 { .. } => 7,
            AxiomInstance::A8 { .. } => 8,
            AxiomInstance::A9 { .. } => 9,
            AxiomInstance::A10 { .. } => 10,
            AxiomInstance::A11 { .. } => 11,
            AxiomInstance::A12 { .. } => 12,
        }
    }

    pub fn lhs(&self) -> SessionType {
        match self.clone() {
            AxiomInstance::A1 { t, s, k } => St::out(t, St::out(s, k)),
            AxiomInstance::A2 { t, s, k } => St::inp(t, St::inp(s, k)),
            AxiomInstance::A3 { t, a, b } => St::out(t, St::select(a, b)),
            AxiomInstance::A4 { t, a, b } => St::inp(t, St::branch(a, b)),
            AxiomInstance::A5 { k } => St::out(BaseType::Unit, k),
            AxiomInstance::A6 { k } => St::inp(BaseType::Unit, k),
            AxiomInstance::A7 { k } => St::out(BaseType::Bool, k),
            AxiomInstance::A8 { k } => St::inp(BaseType::Bool, k),
            AxiomInstance::A9 { a, b } => St::select(a, b),
            AxiomInstance::A10 { a, b } => St::branch(a, b),
            AxiomInstance::A11 { a, b, c } => St::select(St::select(a, b), c),
            AxiomInstance::A12 { a, b, c } => St::branch(St::branch(a, b), c),
        }
    }

    pub fn rhs(&self) -> SessionType {
        match self.clone() {
            AxiomInstance::A1 { t, s, k } => St::out(s, St::out(t, k)),
            AxiomInstance::A2 { t, s, k } => St::inp(s, St::inp(t, k)),
            AxiomInstance::A3 { t, a, b } => St::select(St::out(t, a), St::out(t, b)),
            AxiomInstance::A4 { t, a, b } => St::branch(St::inp(t, a), St::inp(t, b)),
            AxiomInstance::A5 { k } | AxiomInstance::A6 { k } => k,
            AxiomInstance::A7 { k } => St::select(k.clone(), k),
            AxiomInstance::A8 { k } => St::branch(k.clone(), k),
            AxiomInstance::A9 { a, b } => St::select(b, a),
            AxiomInstance::A10 { a, b } => St::branch(b, a),
            AxiomInstance::A11 { a, b, c } => St::select(a, St::select(b, c)),
            AxiomInstance::A12 { a, b, c } => St::branch(a, St::branch(b, c)),
        }
    }

    /// `(from, to)` for a use in direction `dir`.
    pub fn sides(&self, dir: Dir) -> (SessionType, SessionType) {
        match dir {
            Dir::Forward => (self.lhs(), self.rhs()),
            Dir::Backward => (self.rhs(), self.lhs()),
        }
    }

    /// Every instance and direction whose source side is exactly `t`.
    /// Backward uses of a5 and a6 apply to any type.
    pub fn matching(t: &SessionType) -> Vec<(AxiomInstance, Dir)> {
        use AxiomInstance::*;
        use Dir::*;
        let mut out = Vec::new();
        match t {
            St::Out(p, k) => {
                if let St::Out(q, k2) = &**k {
                    out.push((A1 { t: *p, s: *q, k: (**k2).clone() }, Forward));
                    out.push((A1 { t: *q, s: *p, k: (**k2).clone() }, Backward));
                }
                if let St::Select(a, b) = &**k {
                    out.push((A3 { t: *p, a: (**a).clone(), b: (**b).clone() }, Forward));
                }
                match p {
                    BaseType::Unit => out.push((A5 { k: (**k).clone() }, Forward)),
                    BaseType::Bool => out.push((A7 { k: (**k).clone() }, Forward)),
                    BaseType::Int => {}
                }
            }
            St::In(p, k) => {
                if let St::In(q, k2) = &**k {
                    out.push((A2 { t: *p, s: *q, k: (**k2).clone() }, Forward));
                    out.push((A2 { t: *q, s: *p, k: (**k2).clone() }, Backward));
                }
                if let St::Branch(a, b) = &**k {
                    out.push((A4 { t: *p, a: (**a).clone(), b: (**b).clone() }, Forward));
                }
                match p {
                    BaseType::Unit => out.push((A6 { k: (**k).clone() }, Forward)),
                    BaseType::Bool => out.push((A8 { k: (**k).clone() }, Forward)),
                    BaseType::Int => {}
                }
            }
            St::Select(a, b) => {
                out.push((A9 { a: (**a).clone(), b: (**b).clone() }, Forward));
                out.push((A9 { a: (**b).clone(), b: (**a).clone() }, Backward));
                if let (St::Out(p, a2), St::Out(q, b2)) = (&**a, &**b) {
                    if p == q {
                        out.push((A3 { t: *p, a: (**a2).clone(), b: (**b2).clone() }, Backward));
                    }
                }
                if a == b {
                    out.push((A7 { k: (**a).clone() }, Backward));
                }
                if let St::Select(a1, a2) = &**a {
                    out.push((A11 { a: (**a1).clone(), b: (**a2).clone(), c: (**b).clone() }, Forward));
                }
                if let St::Select(b1, b2) = &**b {
                    out.push((A11 { a: (**a).clone(), b: (**b1).clone(), c: (**b2).clone() }, Backward));
                }
            }
            St::Branch(a, b) => {
                out.push((A10 { a: (**a).clone(), b: (**b).clone() }, Forward));
                out.push((A10 { a: (**b).clone(), b: (**a).clone() }, Backward));
                if let (St::In(p, a2), St::In(q, b2)) = (&**a, &**b) {
                    if p == q {
                        out.push((A4 { t: *p, a: (**a2).clone(), b: (**b2).clone() }, Backward));
                    }
                }
                if a == b {
                    out.push((A8 { k: (**a).clone() }, Backward));
                }
                if let St::Branch(a1, a2) = &**a {
                    out.push((A12 { a: (**a1).clone(), b: (**a2).clone(), c: (**b).clone() }, Forward));
                }
                if let St::Branch(b1, b2) = &**b {
                    out.push((A12 { a: (**a).clone(), b: (**b1).clone(), c: (**b2).clone() }, Backward));
                }
            }
            St::End => {}
        }
        out.push((A5 { k: t.clone() }, Backward));
        out.push((A6 { k: t.clone() }, Backward));
        out
    }
}

impl fmt::Display for AxiomInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "a{}", self.number())
    }
}

/// One step into a type: the continuation of a prefix, or an alternative.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TypeStep {
    Cont,
    Left,
    Right,
}

/// A position in a type tree, outermost step first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TypePath(pub Vec<TypeStep>);

impl TypePath {
    pub fn root() -> Self {
        TypePath(Vec::new())
    }

    pub fn child(&self, s: TypeStep) -> TypePath {
        let mut v = self.0.clone();
        v.push(s);
        TypePath(v)
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for TypePath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|s| match s {
                TypeStep::Cont => "cont",
                TypeStep::Left => "left",
                TypeStep::Right => "right",
            })
            .collect();
        f.write_str(&parts.join("/"))
    }
}

pub fn subterm<'a>(t: &'a SessionType, path: &TypePath) -> Option<&'a SessionType> {
    let mut cur = t;
    for s in &path.0 {
        cur = match (s, cur) {
            (TypeStep::Cont, St::Out(_, k) | St::In(_, k)) => k,
            (TypeStep::Left, St::Select(a, _) | St::Branch(a, _)) => a,
            (TypeStep::Right, St::Select(_, b) | St::Branch(_, b)) => b,
            _ => return None,
        };
    }
    Some(cur)
}

/// `t` with the subterm at `path` replaced by `by`.
pub fn replace_at(t: &SessionType, path: &[TypeStep], by: SessionType) -> Option<SessionType> {
    let Some((first, rest)) = path.split_first() else {
        return Some(by);
    };
    Some(match (first, t) {
        (TypeStep::Cont, St::Out(b, k)) => St::out(*b, replace_at(k, rest, by)?),
        (TypeStep::Cont, St::In(b, k)) => St::inp(*b, replace_at(k, rest, by)?),
        (TypeStep::Left, St::Select(a, c)) => St::select(replace_at(a, rest, by)?, (**c).clone()),
        (TypeStep::Left, St::Branch(a, c)) => St::branch(replace_at(a, rest, by)?, (**c).clone()),
        (TypeStep::Right, St::Select(a, c)) => St::select((**a).clone(), replace_at(c, rest, by)?),
        (TypeStep::Right, St::Branch(a, c)) => St::branch((**a).clone(), replace_at(c, rest, by)?),
        _ => return None,
    })
}

/// Applies one axiom use at `path`, or `None` if the subterm there is not
/// the source side of the instance.
pub fn rewrite(t: &SessionType, path: &TypePath, ax: &AxiomInstance, dir: Dir) -> Option<SessionType> {
    let (from, to) = ax.sides(dir);
    if subterm(t, path)? != &from {
        return None;
    }
    replace_at(t, &path.0, to)
}

/// Every position of `t` with the subterm found there, in preorder.
pub fn positions(t: &SessionType) -> Vec<(TypePath, &SessionType)> {
    fn go<'a>(t: &'a SessionType, path: &mut Vec<TypeStep>, out: &mut Vec<(TypePath, &'a SessionType)>) {
        out.push((TypePath(path.clone()), t));
        let kids: Vec<(TypeStep, &SessionType)> = match t {
            St::End => vec![],
            St::Out(_, k) | St::In(_, k) => vec![(TypeStep::Cont, k)],
            St::Select(a, b) | St::Branch(a, b) => vec![(TypeStep::Left, a), (TypeStep::Right, b)],
        };
        for (s, k) in kids {
            path.push(s);
            go(k, path, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(t, &mut Vec::new(), &mut out);
    out
}
