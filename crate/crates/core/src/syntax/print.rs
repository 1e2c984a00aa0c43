//! Printer for the concrete syntax. Output always reparses to the same tree
//! (processes up to alpha-equivalence).

use std::fmt::{self, Write};

use super::ast::{Expr, Process, SessionType};

pub fn print_type(t: &SessionType) -> String {
    let mut s = String::new();
    write_choice(&mut s, t).expect("writing to a String");
    s
}

pub fn print_process(p: &Process) -> String {
    let mut s = String::new();
    write_proc(&mut s, p).expect("writing to a String");
    s
}

pub fn print_expr(e: &Expr) -> String {
    let mut s = String::new();
    write_expr(&mut s, e).expect("writing to a String");
    s
}

fn write_choice(f: &mut impl Write, t: &SessionType) -> fmt::Result {
    match t {
        SessionType::Select(a, b) => {
            write_prefix(f, a)?;
            f.write_str(" (+) ")?;
            match **b {
                SessionType::Select(..) => write_choice(f, b),
                _ => write_prefix(f, b),
            }
        }
        SessionType::Branch(a, b) => {
            write_prefix(f, a)?;
            f.write_str(" + ")?;
            match **b {
                SessionType::Branch(..) => write_choice(f, b),
                _ => write_prefix(f, b),
            }
        }
        _ => write_prefix(f, t),
    }
}

fn write_prefix(f: &mut impl Write, t: &SessionType) -> fmt::Result {
    match t {
        SessionType::End => f.write_str("end"),
        SessionType::Out(b, k) => {
            write!(f, "!{b}.")?;
            write_prefix(f, k)
        }
        SessionType::In(b, k) => {
            write!(f, "?{b}.")?;
            write_prefix(f, k)
        }
        SessionType::Select(..) | SessionType::Branch(..) => {
            f.write_char('(')?;
            write_choice(f, t)?;
            f.write_char(')')
        }
    }
}

fn write_proc(f: &mut impl Write, p: &Process) -> fmt::Result {
    match p {
        Process::Par(a, b) => {
            write_proc(f, a)?;
            f.write_str(" || ")?;
            write_seq(f, b)
        }
        _ => write_seq(f, p),
    }
}

fn write_seq(f: &mut impl Write, p: &Process) -> fmt::Result {
    match p {
        Process::Idle => f.write_char('0'),
        Process::Input { chan, var, ty, cont } => {
            write!(f, "{chan}?({var}:{ty}).")?;
            write_seq(f, cont)
        }
        Process::Output { chan, expr, cont } => {
            write!(f, "{chan}!(")?;
            write_expr(f, expr)?;
            f.write_str(").")?;
            write_seq(f, cont)
        }
        Process::Select { chan, sel, cont } => {
            write!(f, "{chan}#{sel}.")?;
            write_seq(f, cont)
        }
        Process::Branch { chan, inl, inr } => {
            write!(f, "case {chan} {{ inl: ")?;
            write_proc(f, inl)?;
            f.write_str(", inr: ")?;
            write_proc(f, inr)?;
            f.write_str(" }")
        }
        Process::Cond { guard, then, els } => {
            f.write_str("if ")?;
            write_expr(f, guard)?;
            f.write_str(" then { ")?;
            write_proc(f, then)?;
            f.write_str(" } else { ")?;
            write_proc(f, els)?;
            f.write_str(" }")
        }
        Process::Par(..) => {
            f.write_char('(')?;
            write_proc(f, p)?;
            f.write_char(')')
        }
    }
}

fn write_expr(f: &mut impl Write, e: &Expr) -> fmt::Result {
    match e {
        Expr::Eq(a, b) => {
            write_sum(f, a)?;
            f.write_str(" == ")?;
            write_sum(f, b)
        }
        _ => write_sum(f, e),
    }
}

fn write_sum(f: &mut impl Write, e: &Expr) -> fmt::Result {
    match e {
        Expr::Add(a, b) => {
            write_sum(f, a)?;
            f.write_str(" + ")?;
            write_atom(f, b)
        }
        _ => write_atom(f, e),
    }
}

fn write_atom(f: &mut impl Write, e: &Expr) -> fmt::Result {
    match e {
        Expr::Var(x) => f.write_str(x),
        Expr::Lit(v) => write!(f, "{v}"),
        Expr::Eq(..) | Expr::Add(..) => {
            f.write_char('(')?;
            write_expr(f, e)?;
            f.write_char(')')
        }
    }
}

impl fmt::Display for SessionType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_choice(f, self)
    }
}

impl fmt::Display for Process {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_proc(f, self)
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_expr(f, self)
    }
}
