//! Inputs shared by the benchmarks.

use stiso_core::syntax::{parse_type, SessionType};

/// Isomorphic type pairs of growing size.
pub const ISO_PAIRS: &[(&str, &str)] = &[
    ("!int.!bool.end", "!bool.!int.end"),
    ("?int.(end + !unit.end)", "?int.end + ?int.end"),
    ("!bool.?int.end", "?int.end (+) ?int.end"),
    ("(end (+) !int.end) (+) ?bool.end", "(end + end) (+) (!int.end (+) end)"),
    ("!int.!bool.?bool.end", "!bool.!int.(end + end)"),
];

pub fn iso_pairs() -> Vec<(SessionType, SessionType)> {
    ISO_PAIRS
        .iter()
        .map(|(t, s)| (parse_type(t).expect("valid"), parse_type(s).expect("valid")))
        .collect()
}
