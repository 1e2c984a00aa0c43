//! Symbolic reduction `⇝`: a rewriting of open processes that preserves
//! equivalence of closed typed processes, and proof search with it.
//!
//! Besides the base rules, four extra rules are needed to close the proofs
//! for adapter compositions that exchange literal values, and for the
//! compositions built by adapter synthesis:
//!
//! * `sr-comm` substitutes the sent expression, not only a variable;
//! * `sr-cond-eval` decides a conditional whose guard is closed;
//! * `sr-cond-lift` moves an action shared by both branches of a
//!   conditional in front of it;
//! * `sr-unit` replaces a sent `()` by a unit-typed variable in scope
//!   (both denote the only unit value).

mod certify;
mod search;

use std::collections::BTreeSet;
use std::fmt;

use crate::iso::{as_identity, Dir};
use crate::semantics::eval_expr;
use crate::syntax::{alpha_eq, fresh_name, rename_free, subst_expr, BaseType, Channel, Expr, Process, Value};

pub use certify::{certify_iso_witnesses, Certificate, CertifyFailure, Obligation};
pub use search::{prove_identity, verify_trace, ProofTrace, SearchError, SearchOptions};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SrRule {
    Up(u8),
    /// Swap rules 3 to 8 run in both directions; 1, 2, 9 and 10 only
    /// forward, since their reverse is the forward rule on the other channel.
    Swap(u8, Dir),
    Cond,
    CondEval,
    CondLift,
    Unit,
    Comm(u8),
    Choice(u8),
    Id,
}

impl SrRule {
    /// Rule name without direction.
    pub fn name(&self) -> String {
        match self {
            SrRule::Up(n) => format!("sr-up {n}"),
            SrRule::Swap(n, _) => format!("sr-swap {n}"),
            SrRule::Cond => "sr-cond".into(),
            SrRule::CondEval => "sr-cond-eval".into(),
            SrRule::CondLift => "sr-cond-lift".into(),
            SrRule::Unit => "sr-unit".into(),
            SrRule::Comm(n) => format!("sr-comm {n}"),
            SrRule::Choice(n) => format!("sr-choice {n}"),
            SrRule::Id => "sr-id".into(),
        }
    }

    fn is_cut(&self) -> bool {
        matches!(self, SrRule::Comm(_) | SrRule::Choice(_))
    }
}

impl fmt::Display for SrRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SrRule::Swap(n, dir) if (3..=8).contains(n) => write!(f, "sr-swap {n} {dir}"),
            _ => f.write_str(&self.name()),
        }
    }
}

/// One step into a process, selecting the hole of a symbolic context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Frame {
    /// Continuation of an input, output or selection.
    Pre,
    Inl,
    Inr,
    Then,
    Else,
    ParL,
    ParR,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ProcPath(pub Vec<Frame>);

impl fmt::Display for ProcPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        let parts: Vec<&str> = self
            .0
            .iter()
            .map(|fr| match fr {
                Frame::Pre => "pre",
                Frame::Inl => "inl",
                Frame::Inr => "inr",
                Frame::Then => "then",
                Frame::Else => "else",
                Frame::ParL => "par.l",
                Frame::ParR => "par.r",
            })
            .collect();
        f.write_str(&parts.join("/"))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SrStep {
    pub rule: SrRule,
    pub path: ProcPath,
    pub process: Process,
}

/// Every one-step symbolic successor of `p`, at every position.
pub fn sr_step(p: &Process) -> Vec<SrStep> {
    let mut out = Vec::new();
    walk(p, &mut Vec::new(), &mut Vec::new(), &mut out, &mut |q| q);
    out
}

/// Visits every position of `p`. `rebuild` plugs a replacement for the
/// current subterm back into the whole process.
fn walk(
    p: &Process,
    env: &mut Vec<(String, BaseType)>,
    path: &mut Vec<Frame>,
    out: &mut Vec<SrStep>,
    rebuild: &mut dyn FnMut(Process) -> Process,
) {
    for (rule, replacement) in local(p, env) {
        out.push(SrStep {
            rule,
            path: ProcPath(path.clone()),
            process: rebuild(replacement),
        });
    }
    match p {
        Process::Idle => {}
        Process::Input { chan, var, ty, cont } => {
            env.push((var.clone(), *ty));
            path.push(Frame::Pre);
            walk(cont, env, path, out, &mut |k| rebuild(Process::input(*chan, var.clone(), *ty, k)));
            path.pop();
            env.pop();
        }
        Process::Output { chan, expr, cont } => {
            path.push(Frame::Pre);
            walk(cont, env, path, out, &mut |k| rebuild(Process::output(*chan, expr.clone(), k)));
            path.pop();
        }
        Process::Select { chan, sel, cont } => {
            path.push(Frame::Pre);
            walk(cont, env, path, out, &mut |k| rebuild(Process::select(*chan, *sel, k)));
            path.pop();
        }
        Process::Branch { chan, inl, inr } => {
            path.push(Frame::Inl);
            walk(inl, env, path, out, &mut |k| rebuild(Process::branch(*chan, k, (**inr).clone())));
            path.pop();
            path.push(Frame::Inr);
            walk(inr, env, path, out, &mut |k| rebuild(Process::branch(*chan, (**inl).clone(), k)));
            path.pop();
        }
        Process::Cond { guard, then, els } => {
            path.push(Frame::Then);
            walk(then, env, path, out, &mut |k| rebuild(Process::cond(guard.clone(), k, (**els).clone())));
            path.pop();
            path.push(Frame::Else);
            walk(els, env, path, out, &mut |k| rebuild(Process::cond(guard.clone(), (**then).clone(), k)));
            path.pop();
        }
        Process::Par(a, b) => {
            path.push(Frame::ParL);
            walk(a, env, path, out, &mut |k| rebuild(Process::par(k, (**b).clone())));
            path.pop();
            path.push(Frame::ParR);
            walk(b, env, path, out, &mut |k| rebuild(Process::par((**a).clone(), k)));
            path.pop();
        }
    }
}

/// Renames binder `x` of `body` if it would capture a free variable of
/// `other`; returns the binder to use and the body under it.
fn avoid_capture(x: &str, body: &Process, other: &BTreeSet<String>) -> (String, Process) {
    if !other.contains(x) {
        return (x.to_string(), body.clone());
    }
    let mut avoid = body.all_names();
    avoid.extend(other.iter().cloned());
    let z = fresh_name(x, &avoid);
    let renamed = rename_free(body, x, &z);
    (z, renamed)
}

/// Common binder for two inputs `c?(x).p` and `c?(y).q`, avoiding `extra`.
fn unify_binders(x: &str, p: &Process, y: &str, q: &Process, extra: &BTreeSet<String>) -> (String, Process, Process) {
    if x == y && !extra.contains(x) {
        return (x.to_string(), p.clone(), q.clone());
    }
    if !q.is_free(x) && !extra.contains(x) {
        return (x.to_string(), p.clone(), rename_free(q, y, x));
    }
    let mut avoid = p.all_names();
    avoid.extend(q.all_names());
    avoid.extend(extra.iter().cloned());
    let z = fresh_name(x, &avoid);
    (z.clone(), rename_free(p, x, &z), rename_free(q, y, &z))
}

fn par(a: Process, b: Process) -> Process {
    Process::par(a, b)
}

/// Rules whose redex is exactly `p`.
fn local(p: &Process, env: &[(String, BaseType)]) -> Vec<(SrRule, Process)> {
    let mut out = Vec::new();
    match p {
        Process::Par(a, b) => par_rules(a, b, &mut out),
        Process::Cond { guard, then, els } => cond_rules(guard, then, els, &mut out),
        _ => {}
    }
    swap_rules(p, &mut out);
    if let Process::Output { chan, expr: Expr::Lit(Value::Unit), cont } = p {
        if let Some(x) = unit_var(env) {
            out.push((SrRule::Unit, Process::output(*chan, Expr::var(x), (**cont).clone())));
        }
    }
    out
}

/// Innermost visible unit-typed binder.
fn unit_var(env: &[(String, BaseType)]) -> Option<String> {
    let mut shadowed = BTreeSet::new();
    for (x, t) in env.iter().rev() {
        if !shadowed.insert(x.clone()) {
            continue;
        }
        if *t == BaseType::Unit {
            return Some(x.clone());
        }
    }
    None
}

fn par_rules(a: &Process, b: &Process, out: &mut Vec<(SrRule, Process)>) {
    use Channel::{L, R};
    use Process as P;
    let id_a = as_identity(a);
    if id_a.is_some() && alpha_eq(a, b) {
        out.push((SrRule::Id, a.clone()));
    }
    // cuts between the right channel of `a` and the left channel of `b`
    match (a, b) {
        (P::Output { chan: R, expr, cont: p }, P::Input { chan: L, var, ty, cont: q }) => {
            if literal_fits(expr, *ty) {
                out.push((SrRule::Comm(1), par((**p).clone(), subst_expr(q, var, expr))));
            }
        }
        (P::Input { chan: R, var, ty, cont: p }, P::Output { chan: L, expr, cont: q }) => {
            if literal_fits(expr, *ty) {
                out.push((SrRule::Comm(2), par(subst_expr(p, var, expr), (**q).clone())));
            }
        }
        (P::Select { chan: R, sel, cont: p }, P::Branch { chan: L, inl, inr }) => {
            let q = if *sel == crate::syntax::Selector::Inl { inl } else { inr };
            out.push((SrRule::Choice(1), par((**p).clone(), (**q).clone())));
        }
        (P::Branch { chan: R, inl, inr }, P::Select { chan: L, sel, cont: q }) => {
            let p = if *sel == crate::syntax::Selector::Inl { inl } else { inr };
            out.push((SrRule::Choice(2), par((**p).clone(), (**q).clone())));
        }
        _ => {}
    }
    // hoisting from the left operand's left channel
    match a {
        P::Input { chan: L, var, ty, cont } => {
            let (x, k) = avoid_capture(var, cont, &b.free_vars());
            out.push((SrRule::Up(1), P::input(L, x, *ty, par(k, b.clone()))));
        }
        P::Output { chan: L, expr, cont } => {
            out.push((SrRule::Up(3), P::output(L, expr.clone(), par((**cont).clone(), b.clone()))));
        }
        P::Branch { chan: L, inl, inr } => out.push((
            SrRule::Up(5),
            P::branch(L, par((**inl).clone(), b.clone()), par((**inr).clone(), b.clone())),
        )),
        P::Select { chan: L, sel, cont } => {
            out.push((SrRule::Up(7), P::select(L, *sel, par((**cont).clone(), b.clone()))));
        }
        P::Cond { guard, then, els } => out.push((
            SrRule::Up(9),
            P::cond(guard.clone(), par((**then).clone(), b.clone()), par((**els).clone(), b.clone())),
        )),
        _ => {}
    }
    // hoisting from the right operand's right channel
    match b {
        P::Input { chan: R, var, ty, cont } => {
            let (x, k) = avoid_capture(var, cont, &a.free_vars());
            out.push((SrRule::Up(2), P::input(R, x, *ty, par(a.clone(), k))));
        }
        P::Output { chan: R, expr, cont } => {
            out.push((SrRule::Up(4), P::output(R, expr.clone(), par(a.clone(), (**cont).clone()))));
        }
        P::Branch { chan: R, inl, inr } => out.push((
            SrRule::Up(6),
            P::branch(R, par(a.clone(), (**inl).clone()), par(a.clone(), (**inr).clone())),
        )),
        P::Select { chan: R, sel, cont } => {
            out.push((SrRule::Up(8), P::select(R, *sel, par(a.clone(), (**cont).clone()))));
        }
        P::Cond { guard, then, els } => out.push((
            SrRule::Up(10),
            P::cond(guard.clone(), par(a.clone(), (**then).clone()), par(a.clone(), (**els).clone())),
        )),
        _ => {}
    }
}

/// A literal payload must inhabit the receiver's type; other expressions
/// are left to the type system.
fn literal_fits(e: &Expr, t: BaseType) -> bool {
    match e {
        Expr::Lit(v) => v.inhabits(t),
        _ => true,
    }
}

fn cond_rules(guard: &Expr, then: &Process, els: &Process, out: &mut Vec<(SrRule, Process)>) {
    use Process as P;
    if guard.is_closed() {
        if let Ok(Value::Bool(b)) = eval_expr(guard) {
            out.push((SrRule::CondEval, if b { then.clone() } else { els.clone() }));
        }
    }
    if let (
        P::Output { chan: c1, expr: Expr::Lit(Value::Bool(true)), cont: p },
        P::Output { chan: c2, expr: Expr::Lit(Value::Bool(false)), cont: q },
    ) = (then, els)
    {
        if c1 == c2 && alpha_eq(p, q) {
            out.push((SrRule::Cond, P::output(*c1, guard.clone(), (**p).clone())));
        }
    }
    let lift = match (then, els) {
        (P::Output { chan: c1, expr: e1, cont: p }, P::Output { chan: c2, expr: e2, cont: q })
            if c1 == c2 && e1 == e2 =>
        {
            Some(P::output(*c1, e1.clone(), P::cond(guard.clone(), (**p).clone(), (**q).clone())))
        }
        (P::Select { chan: c1, sel: s1, cont: p }, P::Select { chan: c2, sel: s2, cont: q })
            if c1 == c2 && s1 == s2 =>
        {
            Some(P::select(*c1, *s1, P::cond(guard.clone(), (**p).clone(), (**q).clone())))
        }
        (P::Input { chan: c1, var: x, ty: t1, cont: p }, P::Input { chan: c2, var: y, ty: t2, cont: q })
            if c1 == c2 && t1 == t2 =>
        {
            let (z, p2, q2) = unify_binders(x, p, y, q, &guard.free_vars());
            Some(P::input(*c1, z, *t1, P::cond(guard.clone(), p2, q2)))
        }
        _ => None,
    };
    if let Some(l) = lift {
        out.push((SrRule::CondLift, l));
    }
}

fn swap_rules(p: &Process, out: &mut Vec<(SrRule, Process)>) {
    use Dir::{Backward, Forward};
    use Process as P;
    let f = Forward;
    match p {
        P::Input { chan: c, var: x, ty: t, cont } => match &**cont {
            P::Input { chan: d, var: y, ty: s, cont: k } if *d == c.co() => {
                // rename an inner binder equal to the outer one first
                let (y2, k2) = if x == y {
                    let mut avoid = k.all_names();
                    avoid.insert(x.clone());
                    let z = fresh_name(y, &avoid);
                    (z.clone(), rename_free(k, y, &z))
                } else {
                    (y.clone(), (**k).clone())
                };
                out.push((SrRule::Swap(1, f), P::input(*d, y2, *s, P::input(*c, x.clone(), *t, k2))));
            }
            P::Output { chan: d, expr, cont: k } if *d == c.co() && !expr.mentions(x) => {
                out.push((SrRule::Swap(3, f), P::output(*d, expr.clone(), P::input(*c, x.clone(), *t, (**k).clone()))));
            }
            P::Select { chan: d, sel, cont: k } if *d == c.co() => {
                out.push((SrRule::Swap(4, f), P::select(*d, *sel, P::input(*c, x.clone(), *t, (**k).clone()))));
            }
            P::Branch { chan: d, inl, inr } if *d == c.co() => out.push((
                SrRule::Swap(6, f),
                P::branch(
                    *d,
                    P::input(*c, x.clone(), *t, (**inl).clone()),
                    P::input(*c, x.clone(), *t, (**inr).clone()),
                ),
            )),
            _ => {}
        },
        P::Output { chan: c, expr: e, cont } => match &**cont {
            P::Output { chan: d, expr: e2, cont: k } if *d == c.co() => {
                out.push((SrRule::Swap(2, f), P::output(*d, e2.clone(), P::output(*c, e.clone(), (**k).clone()))));
            }
            // d!(e).c?(x).k with d = co(c): the input moves first
            P::Input { chan: d, var: x, ty, cont: k } if *d == c.co() => {
                let (x2, k2) = avoid_capture(x, k, &e.free_vars());
                out.push((SrRule::Swap(3, Backward), P::input(*d, x2, *ty, P::output(*c, e.clone(), k2))));
            }
            P::Select { chan: d, sel, cont: k } if *d == c.co() => {
                out.push((SrRule::Swap(5, f), P::select(*d, *sel, P::output(*c, e.clone(), (**k).clone()))));
            }
            P::Branch { chan: d, inl, inr } if *d == c.co() => out.push((
                SrRule::Swap(7, f),
                P::branch(
                    *d,
                    P::output(*c, e.clone(), (**inl).clone()),
                    P::output(*c, e.clone(), (**inr).clone()),
                ),
            )),
            _ => {}
        },
        P::Select { chan: c, sel, cont } => match &**cont {
            P::Input { chan: d, var: x, ty, cont: k } if *d == c.co() => {
                out.push((SrRule::Swap(4, Backward), P::input(*d, x.clone(), *ty, P::select(*c, *sel, (**k).clone()))));
            }
            P::Output { chan: d, expr, cont: k } if *d == c.co() => {
                out.push((SrRule::Swap(5, Backward), P::output(*d, expr.clone(), P::select(*c, *sel, (**k).clone()))));
            }
            P::Select { chan: d, sel: s2, cont: k } if *d == c.co() => {
                out.push((SrRule::Swap(9, f), P::select(*d, *s2, P::select(*c, *sel, (**k).clone()))));
            }
            P::Branch { chan: d, inl, inr } if *d == c.co() => out.push((
                SrRule::Swap(8, Backward),
                P::branch(*d, P::select(*c, *sel, (**inl).clone()), P::select(*c, *sel, (**inr).clone())),
            )),
            _ => {}
        },
        P::Branch { chan: c, inl, inr } => match (&**inl, &**inr) {
            (P::Input { chan: d1, var: x, ty: t1, cont: p }, P::Input { chan: d2, var: y, ty: t2, cont: q })
                if *d1 == c.co() && d1 == d2 && t1 == t2 =>
            {
                let (z, p2, q2) = unify_binders(x, p, y, q, &BTreeSet::new());
                out.push((SrRule::Swap(6, Backward), P::input(*d1, z, *t1, P::branch(*c, p2, q2))));
            }
            (P::Output { chan: d1, expr: e1, cont: p }, P::Output { chan: d2, expr: e2, cont: q })
                if *d1 == c.co() && d1 == d2 && e1 == e2 =>
            {
                out.push((SrRule::Swap(7, Backward), P::output(*d1, e1.clone(), P::branch(*c, (**p).clone(), (**q).clone()))));
            }
            (P::Select { chan: d1, sel: s1, cont: p }, P::Select { chan: d2, sel: s2, cont: q })
                if *d1 == c.co() && d1 == d2 && s1 == s2 =>
            {
                out.push((SrRule::Swap(8, f), P::select(*d1, *s1, P::branch(*c, (**p).clone(), (**q).clone()))));
            }
            (P::Branch { chan: d1, inl: p1, inr: q1 }, P::Branch { chan: d2, inl: p2, inr: q2 })
                if *d1 == c.co() && d1 == d2 =>
            {
                out.push((
                    SrRule::Swap(10, f),
                    P::branch(
                        *d1,
                        P::branch(*c, (**p1).clone(), (**p2).clone()),
                        P::branch(*c, (**q1).clone(), (**q2).clone()),
                    ),
                ));
            }
            _ => {}
        },
        _ => {}
    }
}
