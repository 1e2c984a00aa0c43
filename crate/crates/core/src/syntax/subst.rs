//! Substitution, renaming and alpha-equivalence.

use std::collections::BTreeSet;

use super::ast::{Expr, Process, Value};

impl Expr {
    /// Replaces every occurrence of `name` by `by`.
    pub fn subst(&self, name: &str, by: &Expr) -> Expr {
        match self {
            Expr::Var(x) if x == name => by.clone(),
            Expr::Var(_) | Expr::Lit(_) => self.clone(),
            Expr::Eq(a, b) => Expr::eq(a.subst(name, by), b.subst(name, by)),
            Expr::Add(a, b) => Expr::add(a.subst(name, by), b.subst(name, by)),
        }
    }
}

/// Picks a name based on `base` that is not in `avoid`.
pub fn fresh_name(base: &str, avoid: &BTreeSet<String>) -> String {
    let stem = base.trim_end_matches(|c: char| c.is_ascii_digit());
    let stem = if stem.is_empty() { "x" } else { stem };
    if !avoid.contains(stem) {
        return stem.to_string();
    }
    (1..)
        .map(|i| format!("{stem}{i}"))
        .find(|n| !avoid.contains(n))
        .expect("unbounded name supply")
}

/// `p[v/x]`: replaces the free occurrences of `var` by the value `v`.
pub fn substitute(p: &Process, var: &str, v: Value) -> Process {
    subst_expr(p, var, &Expr::Lit(v))
}

/// Capture-avoiding substitution of an expression for the free occurrences
/// of `var`. Binders that would capture a free variable of `by` are renamed.
pub fn subst_expr(p: &Process, var: &str, by: &Expr) -> Process {
    if !p.is_free(var) {
        return p.clone();
    }
    let by_fv = by.free_vars();
    match p {
        Process::Idle => Process::Idle,
        Process::Input { chan, var: x, ty, cont } => {
            if x == var {
                return p.clone();
            }
            if by_fv.contains(x) {
                let mut avoid = cont.all_names();
                avoid.extend(by_fv.iter().cloned());
                avoid.insert(var.to_string());
                let z = fresh_name(x, &avoid);
                let renamed = rename_free(cont, x, &z);
                Process::input(*chan, z, *ty, subst_expr(&renamed, var, by))
            } else {
                Process::input(*chan, x.clone(), *ty, subst_expr(cont, var, by))
            }
        }
        Process::Output { chan, expr, cont } => {
            Process::output(*chan, expr.subst(var, by), subst_expr(cont, var, by))
        }
        Process::Select { chan, sel, cont } => Process::select(*chan, *sel, subst_expr(cont, var, by)),
        Process::Branch { chan, inl, inr } => {
            Process::branch(*chan, subst_expr(inl, var, by), subst_expr(inr, var, by))
        }
        Process::Cond { guard, then, els } => Process::cond(
            guard.subst(var, by),
            subst_expr(then, var, by),
            subst_expr(els, var, by),
        ),
        Process::Par(a, b) => Process::par(subst_expr(a, var, by), subst_expr(b, var, by)),
    }
}

/// Renames the free occurrences of `from` to `to` (capture-avoiding).
pub fn rename_free(p: &Process, from: &str, to: &str) -> Process {
    if from == to {
        return p.clone();
    }
    subst_expr(p, from, &Expr::var(to))
}

/// Equality up to consistent renaming of bound variables.
pub fn alpha_eq(p: &Process, q: &Process) -> bool {
    let mut left = Vec::new();
    let mut right = Vec::new();
    alpha_eq_in(p, q, &mut left, &mut right)
}

fn lookup(env: &[String], name: &str) -> Option<usize> {
    env.iter().rposition(|n| n == name)
}

fn expr_alpha_eq(a: &Expr, b: &Expr, le: &[String], re: &[String]) -> bool {
    match (a, b) {
        (Expr::Var(x), Expr::Var(y)) => match (lookup(le, x), lookup(re, y)) {
            (Some(i), Some(j)) => i == j,
            (None, None) => x == y,
            _ => false,
        },
        (Expr::Lit(u), Expr::Lit(v)) => u == v,
        (Expr::Eq(a1, a2), Expr::Eq(b1, b2)) | (Expr::Add(a1, a2), Expr::Add(b1, b2)) => {
            expr_alpha_eq(a1, b1, le, re) && expr_alpha_eq(a2, b2, le, re)
        }
        _ => false,
    }
}

fn alpha_eq_in(p: &Process, q: &Process, le: &mut Vec<String>, re: &mut Vec<String>) -> bool {
    match (p, q) {
        (Process::Idle, Process::Idle) => true,
        (
            Process::Input { chan: c1, var: x, ty: t1, cont: k1 },
            Process::Input { chan: c2, var: y, ty: t2, cont: k2 },
        ) => {
            if c1 != c2 || t1 != t2 {
                return false;
            }
            le.push(x.clone());
            re.push(y.clone());
            let ok = alpha_eq_in(k1, k2, le, re);
            le.pop();
            re.pop();
            ok
        }
        (
            Process::Output { chan: c1, expr: e1, cont: k1 },
            Process::Output { chan: c2, expr: e2, cont: k2 },
        ) => c1 == c2 && expr_alpha_eq(e1, e2, le, re) && alpha_eq_in(k1, k2, le, re),
        (
            Process::Select { chan: c1, sel: s1, cont: k1 },
            Process::Select { chan: c2, sel: s2, cont: k2 },
        ) => c1 == c2 && s1 == s2 && alpha_eq_in(k1, k2, le, re),
        (
            Process::Branch { chan: c1, inl: a1, inr: b1 },
            Process::Branch { chan: c2, inl: a2, inr: b2 },
        ) => c1 == c2 && alpha_eq_in(a1, a2, le, re) && alpha_eq_in(b1, b2, le, re),
        (
            Process::Cond { guard: g1, then: a1, els: b1 },
            Process::Cond { guard: g2, then: a2, els: b2 },
        ) => expr_alpha_eq(g1, g2, le, re) && alpha_eq_in(a1, a2, le, re) && alpha_eq_in(b1, b2, le, re),
        (Process::Par(a1, b1), Process::Par(a2, b2)) => {
            alpha_eq_in(a1, a2, le, re) && alpha_eq_in(b1, b2, le, re)
        }
        _ => false,
    }
}

/// Canonical representative of the alpha-class: binders are renamed to
/// `%0`, `%1`, ... in preorder. The `%` prefix cannot clash with parsed
/// identifiers, so two terms are alpha-equivalent iff their normalized forms
/// are equal.
pub fn alpha_normalize(p: &Process) -> Process {
    let mut counter = 0usize;
    normalize_in(p, &mut Vec::new(), &mut counter)
}

fn normalize_expr(e: &Expr, env: &[(String, String)]) -> Expr {
    match e {
        Expr::Var(x) => match env.iter().rev().find(|(from, _)| from == x) {
            Some((_, to)) => Expr::Var(to.clone()),
            None => e.clone(),
        },
        Expr::Lit(_) => e.clone(),
        Expr::Eq(a, b) => Expr::eq(normalize_expr(a, env), normalize_expr(b, env)),
        Expr::Add(a, b) => Expr::add(normalize_expr(a, env), normalize_expr(b, env)),
    }
}

fn normalize_in(p: &Process, env: &mut Vec<(String, String)>, counter: &mut usize) -> Process {
    match p {
        Process::Idle => Process::Idle,
        Process::Input { chan, var, ty, cont } => {
            let name = format!("%{counter}");
            *counter += 1;
            env.push((var.clone(), name.clone()));
            let k = normalize_in(cont, env, counter);
            env.pop();
            Process::input(*chan, name, *ty, k)
        }
        Process::Output { chan, expr, cont } => {
            Process::output(*chan, normalize_expr(expr, env), normalize_in(cont, env, counter))
        }
        Process::Select { chan, sel, cont } => {
            Process::select(*chan, *sel, normalize_in(cont, env, counter))
        }
        Process::Branch { chan, inl, inr } => {
            let a = normalize_in(inl, env, counter);
            let b = normalize_in(inr, env, counter);
            Process::branch(*chan, a, b)
        }
        Process::Cond { guard, then, els } => {
            let g = normalize_expr(guard, env);
            let a = normalize_in(then, env, counter);
            let b = normalize_in(els, env, counter);
            Process::cond(g, a, b)
        }
        Process::Par(a, b) => {
            let x = normalize_in(a, env, counter);
            let y = normalize_in(b, env, counter);
            Process::par(x, y)
        }
    }
}
