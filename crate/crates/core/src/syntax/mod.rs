//! Abstract and concrete syntax of types, expressions and processes.

mod ast;
mod parse;
mod print;
mod subst;

pub use ast::{BaseType, Channel, Expr, Process, Selector, SessionType, Value};
pub use parse::{is_keyword, parse_expr, parse_process, parse_type, ParseError};
pub use print::{print_expr, print_process, print_type};
pub use subst::{alpha_eq, alpha_normalize, fresh_name, rename_free, subst_expr, substitute};

pub fn dual(t: &SessionType) -> SessionType {
    t.dual()
}
