//! Binary session calculus with two channels: syntax, typing, reduction,
//! symbolic reduction, and type isomorphisms with adapter synthesis.

pub mod syntax;
pub mod iso;
pub mod library;
pub mod semantics;
pub mod symbolic;
pub mod typecheck;
