//! Typing judgments `Γ ⊢ e : t` and `Γ ⊢ P ▷ T ; S`.
//!
//! Checking is bidirectional over session types that may contain
//! metavariables. A metavariable stands for a part of an interface that is
//! not yet known: the mediating type of a composition, or the alternative of
//! a selection that the process never takes. Channel rules consume the
//! prefix of the component named by their channel; when that component is
//! an unbound metavariable it is refined to the shape the rule needs.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::syntax::{BaseType, Channel, Expr, Process, Selector, SessionType};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("operands of `{expr}` have different types {left} and {right}")]
    OperandMismatch {
        expr: String,
        left: BaseType,
        right: BaseType,
    },
    #[error("`{expr}` expects int operands, found {found}")]
    NotInt { expr: String, found: BaseType },
    #[error("conditional guard `{guard}` has type {found}, expected bool")]
    GuardNotBool { guard: String, found: BaseType },
    #[error("`{process}` performs {action} on {chan} but the interface there is {expected}")]
    PrefixMismatch {
        process: String,
        chan: Channel,
        action: String,
        expected: String,
    },
    #[error("`{process}` carries {found} on {chan} but the interface expects {expected}")]
    PayloadMismatch {
        process: String,
        chan: Channel,
        expected: BaseType,
        found: BaseType,
    },
}

/// Finite map from variables to base types; extension shadows.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct TypeEnv(BTreeMap<String, BaseType>);

impl TypeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(&self, var: &str, ty: BaseType) -> TypeEnv {
        let mut m = self.0.clone();
        m.insert(var.to_string(), ty);
        TypeEnv(m)
    }

    pub fn get(&self, var: &str) -> Option<BaseType> {
        self.0.get(var).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(String, BaseType)> for TypeEnv {
    fn from_iter<I: IntoIterator<Item = (String, BaseType)>>(iter: I) -> Self {
        TypeEnv(iter.into_iter().collect())
    }
}

impl fmt::Display for TypeEnv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|(x, t)| format!("{x}:{t}")).collect();
        f.write_str(&parts.join(", "))
    }
}

/// The pair `(T, S)` of a judgment `Γ ⊢ P ▷ T ; S`: `T` governs channel `l`,
/// `S` governs channel `r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct InterfacePair {
    pub left: SessionType,
    pub right: SessionType,
}

impl InterfacePair {
    pub fn new(left: SessionType, right: SessionType) -> Self {
        InterfacePair { left, right }
    }

    pub fn closed() -> Self {
        InterfacePair::new(SessionType::End, SessionType::End)
    }
}

impl fmt::Display for InterfacePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ; {}", self.left, self.right)
    }
}

/// A session type with metavariable leaves. `Meta { id, dual: true }`
/// denotes the dual of metavariable `id`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum OpenType {
    End,
    Out(BaseType, Box<OpenType>),
    In(BaseType, Box<OpenType>),
    Select(Box<OpenType>, Box<OpenType>),
    Branch(Box<OpenType>, Box<OpenType>),
    Meta { id: usize, dual: bool },
}

impl OpenType {
    pub fn dual(&self) -> OpenType {
        match self {
            OpenType::End => OpenType::End,
            OpenType::Out(t, k) => OpenType::In(*t, Box::new(k.dual())),
            OpenType::In(t, k) => OpenType::Out(*t, Box::new(k.dual())),
            OpenType::Select(a, b) => OpenType::Branch(Box::new(a.dual()), Box::new(b.dual())),
            OpenType::Branch(a, b) => OpenType::Select(Box::new(a.dual()), Box::new(b.dual())),
            OpenType::Meta { id, dual } => OpenType::Meta { id: *id, dual: !dual },
        }
    }

    pub fn has_meta(&self) -> bool {
        match self {
            OpenType::End => false,
            OpenType::Out(_, k) | OpenType::In(_, k) => k.has_meta(),
            OpenType::Select(a, b) | OpenType::Branch(a, b) => a.has_meta() || b.has_meta(),
            OpenType::Meta { .. } => true,
        }
    }

    /// The closed type, if no metavariable remains.
    pub fn to_closed(&self) -> Option<SessionType> {
        Some(match self {
            OpenType::End => SessionType::End,
            OpenType::Out(t, k) => SessionType::out(*t, k.to_closed()?),
            OpenType::In(t, k) => SessionType::inp(*t, k.to_closed()?),
            OpenType::Select(a, b) => SessionType::select(a.to_closed()?, b.to_closed()?),
            OpenType::Branch(a, b) => SessionType::branch(a.to_closed()?, b.to_closed()?),
            OpenType::Meta { .. } => return None,
        })
    }

    /// Closes the type, instantiating leftover metavariables with `end`.
    fn close_with_end(&self) -> SessionType {
        match self {
            OpenType::End | OpenType::Meta { .. } => SessionType::End,
            OpenType::Out(t, k) => SessionType::out(*t, k.close_with_end()),
            OpenType::In(t, k) => SessionType::inp(*t, k.close_with_end()),
            OpenType::Select(a, b) => SessionType::select(a.close_with_end(), b.close_with_end()),
            OpenType::Branch(a, b) => SessionType::branch(a.close_with_end(), b.close_with_end()),
        }
    }
}

impl From<&SessionType> for OpenType {
    fn from(t: &SessionType) -> Self {
        match t {
            SessionType::End => OpenType::End,
            SessionType::Out(b, k) => OpenType::Out(*b, Box::new(k.as_ref().into())),
            SessionType::In(b, k) => OpenType::In(*b, Box::new(k.as_ref().into())),
            SessionType::Select(a, b) => {
                OpenType::Select(Box::new(a.as_ref().into()), Box::new(b.as_ref().into()))
            }
            SessionType::Branch(a, b) => {
                OpenType::Branch(Box::new(a.as_ref().into()), Box::new(b.as_ref().into()))
            }
        }
    }
}

impl fmt::Display for OpenType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn prefix(t: &OpenType, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            match t {
                OpenType::End => f.write_str("end"),
                OpenType::Out(b, k) => {
                    write!(f, "!{b}.")?;
                    prefix(k, f)
                }
                OpenType::In(b, k) => {
                    write!(f, "?{b}.")?;
                    prefix(k, f)
                }
                OpenType::Meta { id, dual } => {
                    write!(f, "{}M{id}", if *dual { "~" } else { "" })
                }
                _ => write!(f, "({t})"),
            }
        }
        match self {
            OpenType::Select(a, b) => {
                prefix(a, f)?;
                f.write_str(" (+) ")?;
                match **b {
                    OpenType::Select(..) => write!(f, "{b}"),
                    _ => prefix(b, f),
                }
            }
            OpenType::Branch(a, b) => {
                prefix(a, f)?;
                f.write_str(" + ")?;
                match **b {
                    OpenType::Branch(..) => write!(f, "{b}"),
                    _ => prefix(b, f),
                }
            }
            _ => prefix(self, f),
        }
    }
}

/// A typing derivation: one node per rule application.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Derivation {
    pub rule: &'static str,
    pub env: TypeEnv,
    pub process: Process,
    pub iface: InterfacePair,
    pub children: Vec<Derivation>,
}

impl Derivation {
    /// One line per node, children indented by two spaces.
    pub fn render(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.render_into(0, &mut out);
        out
    }

    fn render_into(&self, depth: usize, out: &mut Vec<String>) {
        out.push(format!(
            "{}{}  {}⊢ {} ▷ {}",
            "  ".repeat(depth),
            self.rule,
            if self.env.is_empty() {
                String::new()
            } else {
                format!("{} ", self.env)
            },
            self.process,
            self.iface
        ));
        for c in &self.children {
            c.render_into(depth + 1, out);
        }
    }

    pub fn size(&self) -> usize {
        1 + self.children.iter().map(Derivation::size).sum::<usize>()
    }
}

pub fn type_expr(env: &TypeEnv, e: &Expr) -> Result<BaseType, TypeError> {
    match e {
        Expr::Var(x) => env.get(x).ok_or_else(|| TypeError::UnboundVariable(x.clone())),
        Expr::Lit(v) => Ok(v.base_type()),
        Expr::Eq(a, b) => {
            let (ta, tb) = (type_expr(env, a)?, type_expr(env, b)?);
            if ta == tb {
                Ok(BaseType::Bool)
            } else {
                Err(TypeError::OperandMismatch {
                    expr: e.to_string(),
                    left: ta,
                    right: tb,
                })
            }
        }
        Expr::Add(a, b) => {
            for side in [a, b] {
                let t = type_expr(env, side)?;
                if t != BaseType::Int {
                    return Err(TypeError::NotInt {
                        expr: e.to_string(),
                        found: t,
                    });
                }
            }
            Ok(BaseType::Int)
        }
    }
}

struct RawNode {
    rule: &'static str,
    env: TypeEnv,
    process: Process,
    left: OpenType,
    right: OpenType,
    children: Vec<RawNode>,
}

#[derive(Default)]
struct Checker {
    bindings: Vec<Option<OpenType>>,
}

enum Shape {
    Out(BaseType),
    In(BaseType),
    Select,
    Branch,
}

impl Checker {
    fn fresh(&mut self) -> OpenType {
        self.bindings.push(None);
        OpenType::Meta {
            id: self.bindings.len() - 1,
            dual: false,
        }
    }

    /// Follows bindings until the head constructor is known or an unbound
    /// metavariable is reached.
    fn head(&self, t: &OpenType) -> OpenType {
        let mut cur = t.clone();
        while let OpenType::Meta { id, dual } = cur {
            match &self.bindings[id] {
                Some(b) => cur = if dual { b.dual() } else { b.clone() },
                None => break,
            }
        }
        cur
    }

    fn resolve(&self, t: &OpenType) -> OpenType {
        match self.head(t) {
            OpenType::Out(b, k) => OpenType::Out(b, Box::new(self.resolve(&k))),
            OpenType::In(b, k) => OpenType::In(b, Box::new(self.resolve(&k))),
            OpenType::Select(a, b) => {
                OpenType::Select(Box::new(self.resolve(&a)), Box::new(self.resolve(&b)))
            }
            OpenType::Branch(a, b) => {
                OpenType::Branch(Box::new(self.resolve(&a)), Box::new(self.resolve(&b)))
            }
            other => other,
        }
    }

    fn bind(&mut self, id: usize, dual: bool, t: OpenType) {
        self.bindings[id] = Some(if dual { t.dual() } else { t });
    }

    fn expect_end(&mut self, p: &Process, chan: Channel, t: &OpenType) -> Result<(), TypeError> {
        match self.head(t) {
            OpenType::End => Ok(()),
            OpenType::Meta { id, dual } => {
                self.bind(id, dual, OpenType::End);
                Ok(())
            }
            other => Err(TypeError::PrefixMismatch {
                process: p.to_string(),
                chan,
                action: "termination".into(),
                expected: self.resolve(&other).to_string(),
            }),
        }
    }

    /// Consumes one prefix of the given shape, returning the continuation(s).
    fn expect_shape(
        &mut self,
        p: &Process,
        chan: Channel,
        t: &OpenType,
        shape: Shape,
    ) -> Result<(OpenType, Option<OpenType>), TypeError> {
        let head = self.head(t);
        if let OpenType::Meta { id, dual } = head {
            let (built, ret) = match shape {
                Shape::Out(b) => {
                    let k = self.fresh();
                    (OpenType::Out(b, Box::new(k.clone())), (k, None))
                }
                Shape::In(b) => {
                    let k = self.fresh();
                    (OpenType::In(b, Box::new(k.clone())), (k, None))
                }
                Shape::Select => {
                    let (a, b) = (self.fresh(), self.fresh());
                    (
                        OpenType::Select(Box::new(a.clone()), Box::new(b.clone())),
                        (a, Some(b)),
                    )
                }
                Shape::Branch => {
                    let (a, b) = (self.fresh(), self.fresh());
                    (
                        OpenType::Branch(Box::new(a.clone()), Box::new(b.clone())),
                        (a, Some(b)),
                    )
                }
            };
            self.bind(id, dual, built);
            return Ok(ret);
        }
        let mismatch = |this: &Self, action: &str| TypeError::PrefixMismatch {
            process: p.to_string(),
            chan,
            action: action.to_string(),
            expected: this.resolve(&head).to_string(),
        };
        let payload = |expected: BaseType, found: BaseType| TypeError::PayloadMismatch {
            process: p.to_string(),
            chan,
            expected,
            found,
        };
        match (shape, &head) {
            (Shape::Out(b), OpenType::Out(t, k)) => {
                if b == *t {
                    Ok(((**k).clone(), None))
                } else {
                    Err(payload(*t, b))
                }
            }
            (Shape::In(b), OpenType::In(t, k)) => {
                if b == *t {
                    Ok(((**k).clone(), None))
                } else {
                    Err(payload(*t, b))
                }
            }
            (Shape::Select, OpenType::Select(a, b)) | (Shape::Branch, OpenType::Branch(a, b)) => {
                Ok(((**a).clone(), Some((**b).clone())))
            }
            (Shape::Out(_), _) => Err(mismatch(self, "an output")),
            (Shape::In(_), _) => Err(mismatch(self, "an input")),
            (Shape::Select, _) => Err(mismatch(self, "a selection")),
            (Shape::Branch, _) => Err(mismatch(self, "a branching")),
        }
    }

    fn check(
        &mut self,
        env: &TypeEnv,
        p: &Process,
        left: OpenType,
        right: OpenType,
    ) -> Result<RawNode, TypeError> {
        let node = |rule, children| RawNode {
            rule,
            env: env.clone(),
            process: p.clone(),
            left: left.clone(),
            right: right.clone(),
            children,
        };
        let split = |chan: Channel, k: OpenType| match chan {
            Channel::L => (k, right.clone()),
            Channel::R => (left.clone(), k),
        };
        let component = |chan: Channel| match chan {
            Channel::L => left.clone(),
            Channel::R => right.clone(),
        };
        match p {
            Process::Idle => {
                self.expect_end(p, Channel::L, &left)?;
                self.expect_end(p, Channel::R, &right)?;
                Ok(node("T-idle", vec![]))
            }
            Process::Input { chan, var, ty, cont } => {
                let (k, _) = self.expect_shape(p, *chan, &component(*chan), Shape::In(*ty))?;
                let (l2, r2) = split(*chan, k);
                let child = self.check(&env.with(var, *ty), cont, l2, r2)?;
                Ok(node("T-input", vec![child]))
            }
            Process::Output { chan, expr, cont } => {
                let ty = type_expr(env, expr)?;
                let (k, _) = self.expect_shape(p, *chan, &component(*chan), Shape::Out(ty))?;
                let (l2, r2) = split(*chan, k);
                let child = self.check(env, cont, l2, r2)?;
                Ok(node("T-output", vec![child]))
            }
            Process::Select { chan, sel, cont } => {
                let (a, b) = self.expect_shape(p, *chan, &component(*chan), Shape::Select)?;
                let (k, rule) = match sel {
                    Selector::Inl => (a, "T-select left"),
                    Selector::Inr => (b.expect("selection has two alternatives"), "T-select right"),
                };
                let (l2, r2) = split(*chan, k);
                let child = self.check(env, cont, l2, r2)?;
                Ok(node(rule, vec![child]))
            }
            Process::Branch { chan, inl, inr } => {
                let (a, b) = self.expect_shape(p, *chan, &component(*chan), Shape::Branch)?;
                let b = b.expect("branching has two alternatives");
                let (l1, r1) = split(*chan, a);
                let c1 = self.check(env, inl, l1, r1)?;
                let (l2, r2) = split(*chan, b);
                let c2 = self.check(env, inr, l2, r2)?;
                Ok(node("T-branch", vec![c1, c2]))
            }
            Process::Cond { guard, then, els } => {
                let g = type_expr(env, guard)?;
                if g != BaseType::Bool {
                    return Err(TypeError::GuardNotBool {
                        guard: guard.to_string(),
                        found: g,
                    });
                }
                let c1 = self.check(env, then, left.clone(), right.clone())?;
                let c2 = self.check(env, els, left.clone(), right.clone())?;
                Ok(node("T-conditional", vec![c1, c2]))
            }
            Process::Par(a, b) => {
                let mediator = self.fresh();
                let c1 = self.check(env, a, left.clone(), mediator.clone())?;
                let c2 = self.check(env, b, mediator.dual(), right.clone())?;
                Ok(node("T-parallel", vec![c1, c2]))
            }
        }
    }

    fn finish(&self, raw: RawNode) -> Derivation {
        Derivation {
            rule: raw.rule,
            env: raw.env,
            process: raw.process,
            iface: InterfacePair::new(
                self.resolve(&raw.left).close_with_end(),
                self.resolve(&raw.right).close_with_end(),
            ),
            children: raw.children.into_iter().map(|c| self.finish(c)).collect(),
        }
    }
}

/// Derives `Γ ⊢ p ▷ iface.left ; iface.right`.
///
/// Parts of mediating types that no rule constrains are instantiated with
/// `end` in the returned derivation; any instantiation would do.
pub fn check_process(env: &TypeEnv, p: &Process, iface: &InterfacePair) -> Result<Derivation, TypeError> {
    let mut checker = Checker::default();
    let raw = checker.check(env, p, (&iface.left).into(), (&iface.right).into())?;
    Ok(checker.finish(raw))
}

/// Most general interface pair of `p`. Unconstrained parts are left as
/// metavariables.
pub fn infer_interfaces(env: &TypeEnv, p: &Process) -> Result<(OpenType, OpenType), TypeError> {
    let mut checker = Checker::default();
    let (l, r) = (checker.fresh(), checker.fresh());
    checker.check(env, p, l.clone(), r.clone())?;
    Ok((checker.resolve(&l), checker.resolve(&r)))
}

/// `⊢ p ▷ end ; end`.
pub fn check_closed(p: &Process) -> bool {
    check_process(&TypeEnv::new(), p, &InterfacePair::closed()).is_ok()
}
