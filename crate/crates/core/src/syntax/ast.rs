//! Abstract syntax for base types, values, expressions, session types and
//! processes.

use std::collections::BTreeSet;
use std::fmt;

/// The basic types carried by messages.
///
/// The derived order `unit < bool < int` is the canonical base-type order
/// used by the isomorphism normalizer.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BaseType {
    Unit,
    Bool,
    Int,
}

impl BaseType {
    pub const ALL: [BaseType; 3] = [BaseType::Unit, BaseType::Bool, BaseType::Int];

    pub fn keyword(self) -> &'static str {
        match self {
            BaseType::Unit => "unit",
            BaseType::Bool => "bool",
            BaseType::Int => "int",
        }
    }
}

impl fmt::Display for BaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Value {
    Unit,
    Bool(bool),
    Int(i64),
}

impl Value {
    pub fn base_type(self) -> BaseType {
        match self {
            Value::Unit => BaseType::Unit,
            Value::Bool(_) => BaseType::Bool,
            Value::Int(_) => BaseType::Int,
        }
    }

    /// Membership `v ∈ t`.
    pub fn inhabits(self, ty: BaseType) -> bool {
        self.base_type() == ty
    }

    /// A fixed inhabitant of each base type.
    pub fn default_of(ty: BaseType) -> Value {
        match ty {
            BaseType::Unit => Value::Unit,
            BaseType::Bool => Value::Bool(true),
            BaseType::Int => Value::Int(0),
        }
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Unit => f.write_str("()"),
            Value::Bool(b) => write!(f, "{b}"),
            Value::Int(n) => write!(f, "{n}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Channel {
    L,
    R,
}

impl Channel {
    /// The involution `co(l) = r`, `co(r) = l`.
    pub fn co(self) -> Channel {
        match self {
            Channel::L => Channel::R,
            Channel::R => Channel::L,
        }
    }
}

impl fmt::Display for Channel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Channel::L => "l",
            Channel::R => "r",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Selector {
    Inl,
    Inr,
}

impl fmt::Display for Selector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Selector::Inl => "inl",
            Selector::Inr => "inr",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Expr {
    Var(String),
    Lit(Value),
    Eq(Box<Expr>, Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
}

impl Expr {
    pub fn var(name: impl Into<String>) -> Expr {
        Expr::Var(name.into())
    }

    pub fn int(n: i64) -> Expr {
        Expr::Lit(Value::Int(n))
    }

    pub fn bool(b: bool) -> Expr {
        Expr::Lit(Value::Bool(b))
    }

    pub fn unit() -> Expr {
        Expr::Lit(Value::Unit)
    }

    pub fn eq(a: Expr, b: Expr) -> Expr {
        Expr::Eq(Box::new(a), Box::new(b))
    }

    pub fn add(a: Expr, b: Expr) -> Expr {
        Expr::Add(Box::new(a), Box::new(b))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    pub(crate) fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Expr::Var(x) => {
                out.insert(x.clone());
            }
            Expr::Lit(_) => {}
            Expr::Eq(a, b) | Expr::Add(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    pub fn mentions(&self, name: &str) -> bool {
        match self {
            Expr::Var(x) => x == name,
            Expr::Lit(_) => false,
            Expr::Eq(a, b) | Expr::Add(a, b) => a.mentions(name) || b.mentions(name),
        }
    }

    pub fn is_closed(&self) -> bool {
        match self {
            Expr::Var(_) => false,
            Expr::Lit(_) => true,
            Expr::Eq(a, b) | Expr::Add(a, b) => a.is_closed() && b.is_closed(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Expr::Var(_) | Expr::Lit(_) => 1,
            Expr::Eq(a, b) | Expr::Add(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// Finite session types.
///
/// The derived `Ord` (variant rank `end < out < in < select < branch`, then
/// fields left to right) is the canonical term order used to sort choice
/// children in normal forms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SessionType {
    End,
    Out(BaseType, Box<SessionType>),
    In(BaseType, Box<SessionType>),
    /// Internal choice `T ⊕ S`, written `T (+) S`.
    Select(Box<SessionType>, Box<SessionType>),
    /// External choice `T + S`.
    Branch(Box<SessionType>, Box<SessionType>),
}

impl SessionType {
    pub fn out(t: BaseType, cont: SessionType) -> SessionType {
        SessionType::Out(t, Box::new(cont))
    }

    pub fn inp(t: BaseType, cont: SessionType) -> SessionType {
        SessionType::In(t, Box::new(cont))
    }

    pub fn select(a: SessionType, b: SessionType) -> SessionType {
        SessionType::Select(Box::new(a), Box::new(b))
    }

    pub fn branch(a: SessionType, b: SessionType) -> SessionType {
        SessionType::Branch(Box::new(a), Box::new(b))
    }

    /// Number of nodes; `end` has size 1.
    pub fn size(&self) -> usize {
        match self {
            SessionType::End => 1,
            SessionType::Out(_, k) | SessionType::In(_, k) => 1 + k.size(),
            SessionType::Select(a, b) | SessionType::Branch(a, b) => 1 + a.size() + b.size(),
        }
    }

    /// Swaps inputs with outputs and selections with branches.
    pub fn dual(&self) -> SessionType {
        match self {
            SessionType::End => SessionType::End,
            SessionType::Out(t, k) => SessionType::inp(*t, k.dual()),
            SessionType::In(t, k) => SessionType::out(*t, k.dual()),
            SessionType::Select(a, b) => SessionType::branch(a.dual(), b.dual()),
            SessionType::Branch(a, b) => SessionType::select(a.dual(), b.dual()),
        }
    }
}

/// Processes of the two-channel calculus.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Process {
    Idle,
    Input {
        chan: Channel,
        var: String,
        ty: BaseType,
        cont: Box<Process>,
    },
    Output {
        chan: Channel,
        expr: Expr,
        cont: Box<Process>,
    },
    Select {
        chan: Channel,
        sel: Selector,
        cont: Box<Process>,
    },
    Branch {
        chan: Channel,
        inl: Box<Process>,
        inr: Box<Process>,
    },
    Cond {
        guard: Expr,
        then: Box<Process>,
        els: Box<Process>,
    },
    /// Asymmetric composition: the left operand's `r` talks to the right
    /// operand's `l`.
    Par(Box<Process>, Box<Process>),
}

impl Process {
    pub fn input(chan: Channel, var: impl Into<String>, ty: BaseType, cont: Process) -> Process {
        Process::Input {
            chan,
            var: var.into(),
            ty,
            cont: Box::new(cont),
        }
    }

    pub fn output(chan: Channel, expr: Expr, cont: Process) -> Process {
        Process::Output {
            chan,
            expr,
            cont: Box::new(cont),
        }
    }

    pub fn select(chan: Channel, sel: Selector, cont: Process) -> Process {
        Process::Select {
            chan,
            sel,
            cont: Box::new(cont),
        }
    }

    pub fn branch(chan: Channel, inl: Process, inr: Process) -> Process {
        Process::Branch {
            chan,
            inl: Box::new(inl),
            inr: Box::new(inr),
        }
    }

    pub fn cond(guard: Expr, then: Process, els: Process) -> Process {
        Process::Cond {
            guard,
            then: Box::new(then),
            els: Box::new(els),
        }
    }

    pub fn par(a: Process, b: Process) -> Process {
        Process::Par(Box::new(a), Box::new(b))
    }

    /// Left-nested composition of a nonempty sequence.
    pub fn par_all(items: impl IntoIterator<Item = Process>) -> Process {
        let mut it = items.into_iter();
        let first = it.next().unwrap_or(Process::Idle);
        it.fold(first, Process::par)
    }

    pub fn is_idle(&self) -> bool {
        matches!(self, Process::Idle)
    }

    pub fn is_par(&self) -> bool {
        matches!(self, Process::Par(..))
    }

    pub fn contains_par(&self) -> bool {
        match self {
            Process::Idle => false,
            Process::Par(..) => true,
            Process::Input { cont, .. } | Process::Output { cont, .. } | Process::Select { cont, .. } => {
                cont.contains_par()
            }
            Process::Branch { inl, inr, .. } => inl.contains_par() || inr.contains_par(),
            Process::Cond { then, els, .. } => then.contains_par() || els.contains_par(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Process::Idle => 1,
            Process::Input { cont, .. } | Process::Select { cont, .. } => 1 + cont.size(),
            Process::Output { expr, cont, .. } => expr.size() + cont.size(),
            Process::Branch { inl, inr, .. } => 1 + inl.size() + inr.size(),
            Process::Cond { guard, then, els } => guard.size() + then.size() + els.size(),
            Process::Par(a, b) => 1 + a.size() + b.size(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_expr = |e: &Expr, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            for v in e.free_vars() {
                if !bound.contains(&v) {
                    out.insert(v);
                }
            }
        };
        match self {
            Process::Idle => {}
            Process::Input { var, cont, .. } => {
                bound.push(var.clone());
                cont.collect_free(bound, out);
                bound.pop();
            }
            Process::Output { expr, cont, .. } => {
                add_expr(expr, bound, out);
                cont.collect_free(bound, out);
            }
            Process::Select { cont, .. } => cont.collect_free(bound, out),
            Process::Branch { inl, inr, .. } => {
                inl.collect_free(bound, out);
                inr.collect_free(bound, out);
            }
            Process::Cond { guard, then, els } => {
                add_expr(guard, bound, out);
                then.collect_free(bound, out);
                els.collect_free(bound, out);
            }
            Process::Par(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
        }
    }

    pub fn is_free(&self, name: &str) -> bool {
        match self {
            Process::Idle => false,
            Process::Input { var, cont, .. } => var != name && cont.is_free(name),
            Process::Output { expr, cont, .. } => expr.mentions(name) || cont.is_free(name),
            Process::Select { cont, .. } => cont.is_free(name),
            Process::Branch { inl, inr, .. } => inl.is_free(name) || inr.is_free(name),
            Process::Cond { guard, then, els } => {
                guard.mentions(name) || then.is_free(name) || els.is_free(name)
            }
            Process::Par(a, b) => a.is_free(name) || b.is_free(name),
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring in the term, bound or free.
    pub fn all_names(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_names(&mut out);
        out
    }

    fn collect_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Process::Idle => {}
            Process::Input { var, cont, .. } => {
                out.insert(var.clone());
                cont.collect_names(out);
            }
            Process::Output { expr, cont, .. } => {
                expr.collect_vars(out);
                cont.collect_names(out);
            }
            Process::Select { cont, .. } => cont.collect_names(out),
            Process::Branch { inl, inr, .. } => {
                inl.collect_names(out);
                inr.collect_names(out);
            }
            Process::Cond { guard, then, els } => {
                guard.collect_vars(out);
                then.collect_names(out);
                els.collect_names(out);
            }
            Process::Par(a, b) => {
                a.collect_names(out);
                b.collect_names(out);
            }
        }
    }
}
