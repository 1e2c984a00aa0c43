//! Brute-force reachability under every axiom use, in both directions and
//! at every position. Independent of the normalizer, so it can check it.

use std::collections::{HashMap, HashSet, VecDeque};

use crate::syntax::SessionType;

use super::axioms::{positions, rewrite, AxiomInstance};
use super::normalize::{IsoDerivation, IsoStep};

/// All one-step rewrites of `t`.
pub fn neighbours(t: &SessionType) -> Vec<SessionType> {
    let mut out = Vec::new();
    for (path, sub) in positions(t) {
        for (ax, dir) in AxiomInstance::matching(sub) {
            if let Some(next) = rewrite(t, &path, &ax, dir) {
                out.push(next);
            }
        }
    }
    out
}

/// Types reachable from `t` in at most `depth` rewrites, never passing
/// through a type with more than `cap` nodes. Backward uses of a5 and a6
/// insert unit prefixes anywhere, so without the cap the graph is infinite.
pub fn oracle_ball(t: &SessionType, depth: usize, cap: usize) -> HashSet<SessionType> {
    let mut seen: HashSet<SessionType> = HashSet::from([t.clone()]);
    let mut frontier = vec![t.clone()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for u in &frontier {
            for v in neighbours(u) {
                if v.size() <= cap && seen.insert(v.clone()) {
                    next.push(v);
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    seen
}

/// Size cap used by [`oracle_iso`]: two nodes above the larger endpoint.
pub fn default_cap(t: &SessionType, s: &SessionType) -> usize {
    t.size().max(s.size()) + 2
}

/// True iff `s` is reachable from `t` within `depth` rewrites under the
/// default size cap.
pub fn oracle_iso(t: &SessionType, s: &SessionType, depth: usize) -> bool {
    t == s || oracle_ball(t, depth, default_cap(t, s)).contains(s)
}

/// A derivation of `t ≅ s` with fewest steps, found by breadth-first
/// search under the default size cap. Gives up after storing `max_states`
/// types.
pub fn shortest_derivation(t: &SessionType, s: &SessionType, max_states: usize) -> Option<IsoDerivation> {
    let cap = default_cap(t, s);
    let mut parent: HashMap<SessionType, Option<IsoStep>> = HashMap::from([(t.clone(), None)]);
    let mut queue = VecDeque::from([t.clone()]);
    while let Some(u) = queue.pop_front() {
        if &u == s {
            let mut steps = Vec::new();
            let mut at = u;
            while let Some(Some(step)) = parent.get(&at) {
                at = step.before.clone();
                steps.push(step.clone());
            }
            steps.reverse();
            return Some(IsoDerivation { source: t.clone(), target: s.clone(), steps });
        }
        for (path, sub) in positions(&u) {
            for (axiom, dir) in AxiomInstance::matching(sub) {
                let Some(after) = rewrite(&u, &path, &axiom, dir) else { continue };
                if after.size() > cap || parent.contains_key(&after) {
                    continue;
                }
                if parent.len() >= max_states {
                    return None;
                }
                let step = IsoStep { axiom, dir, path: path.clone(), before: u.clone(), after: after.clone() };
                parent.insert(after.clone(), Some(step));
                queue.push_back(after);
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::parse_type;

    fn t(s: &str) -> SessionType {
        parse_type(s).unwrap()
    }

    #[test]
    fn one_swap_apart() {
        assert!(oracle_iso(&t("!int.!bool.end"), &t("!bool.!int.end"), 1));
    }

    #[test]
    fn int_prefix_is_never_erased() {
        assert!(!oracle_iso(&t("!int.end"), &t("end"), 6));
    }

    #[test]
    fn depth_zero_is_equality() {
        assert!(oracle_iso(&t("?int.end"), &t("?int.end"), 0));
        assert!(!oracle_iso(&t("!unit.end"), &t("end"), 0));
    }

    #[test]
    fn shortest_route_is_direct() {
        let d = shortest_derivation(&t("?bool.(end (+) !bool.end)"), &t("?bool.!unit.(!bool.end (+) ?unit.end)"), 10_000).unwrap();
        assert!(d.replays());
        assert_eq!(d.steps.len(), 3);
        assert_eq!(shortest_derivation(&t("!int.end"), &t("end"), 1_000).map(|d| d.steps.len()), None);
    }

    #[test]
    fn ball_respects_cap() {
        assert!(oracle_ball(&t("end"), 4, 3).iter().all(|u| u.size() <= 3));
    }
}
