//! Isomorphism testing and canonical forms for small frames.

use std::cmp::Reverse;

use crate::frame::{Frame, World, WorldSet};

/// Per-world invariant preserved by every isomorphism. Sorting by it puts
/// roots first and maximal points last.
type Invariant = (Reverse<usize>, usize, usize, usize);

fn invariants(f: &Frame) -> Vec<Invariant> {
    let depths = f.depths();
    f.worlds()
        .map(|w| (Reverse(f.up(w).len()), f.down(w).len(), f.cluster(w).len(), depths[w]))
        .collect()
}

/// A complete isomorphism invariant: two frames are isomorphic iff their
/// codes are equal. Codes are totally ordered, which gives enumeration a
/// stable output order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalCode {
    size: usize,
    classes: Vec<Invariant>,
    rows: Vec<u64>,
}

/// Returns the canonical relabeling of `f` together with its code.
///
/// World `i` of the returned frame is world `perm[i]` of `f`. The search
/// runs over all permutations that respect the invariant classes, so it is
/// meant for the small frames produced by enumeration.
pub fn canonical_form(f: &Frame) -> (Frame, Vec<World>, CanonicalCode) {
    let inv = invariants(f);
    let mut order: Vec<World> = f.worlds().collect();
    order.sort_by_key(|&w| (inv[w], w));
    let classes: Vec<Invariant> = order.iter().map(|&w| inv[w]).collect();

    // Group positions into runs of equal invariants.
    let mut groups: Vec<Vec<World>> = Vec::new();
    for (i, &w) in order.iter().enumerate() {
        if i > 0 && classes[i] == classes[i - 1] {
            groups.last_mut().expect("nonempty").push(w);
        } else {
            groups.push(vec![w]);
        }
    }

    let mut best: Option<(Vec<u64>, Vec<World>)> = None;
    let mut perm = Vec::with_capacity(f.size());
    let mut used = WorldSet::EMPTY;
    search(f, &groups, 0, &mut perm, &mut used, &mut best);
    let (rows, perm) = best.expect("at least one permutation");
    let code = CanonicalCode { size: f.size(), classes, rows };
    (f.permuted(&perm).without_labels(), perm, code)
}

pub fn canonical_code(f: &Frame) -> CanonicalCode {
    canonical_form(f).2
}

fn rows_for(f: &Frame, perm: &[World]) -> Vec<u64> {
    let mut position = vec![0; f.size()];
    for (i, &w) in perm.iter().enumerate() {
        position[w] = i;
    }
    perm.iter()
        .map(|&w| f.up(w).iter().fold(0u64, |acc, u| acc | 1 << position[u]))
        .collect()
}

fn search(
    f: &Frame,
    groups: &[Vec<World>],
    group: usize,
    perm: &mut Vec<World>,
    used: &mut WorldSet,
    best: &mut Option<(Vec<u64>, Vec<World>)>,
) {
    if group == groups.len() {
        let rows = rows_for(f, perm);
        if best.as_ref().map_or(true, |(b, _)| rows < *b) {
            *best = Some((rows, perm.clone()));
        }
        return;
    }
    let members = &groups[group];
    let start = perm.len();
    let group_end = start + members.len();
    permute_group(f, groups, group, members, group_end, perm, used, best);
}

#[allow(clippy::too_many_arguments)]
fn permute_group(
    f: &Frame,
    groups: &[Vec<World>],
    group: usize,
    members: &[World],
    group_end: usize,
    perm: &mut Vec<World>,
    used: &mut WorldSet,
    best: &mut Option<(Vec<u64>, Vec<World>)>,
) {
    if perm.len() == group_end {
        search(f, groups, group + 1, perm, used, best);
        return;
    }
    for &w in members {
        if used.contains(w) {
            continue;
        }
        used.insert(w);
        perm.push(w);
        permute_group(f, groups, group, members, group_end, perm, used, best);
        perm.pop();
        used.remove(w);
    }
}

/// Decides whether a relation-preserving bijection exists.
pub fn are_isomorphic(f: &Frame, g: &Frame) -> bool {
    find_isomorphism(f, g).is_some()
}

/// A bijection `map` with `u ≤ w` iff `map[u] ≤ map[w]`, if one exists.
pub fn find_isomorphism(f: &Frame, g: &Frame) -> Option<Vec<World>> {
    if f.size() != g.size() {
        return None;
    }
    let fi = invariants(f);
    let gi = invariants(g);
    let mut fs = fi.clone();
    let mut gs = gi.clone();
    fs.sort();
    gs.sort();
    if fs != gs {
        return None;
    }
    let mut map = vec![usize::MAX; f.size()];
    let mut used = WorldSet::EMPTY;
    if extend_iso(f, g, &fi, &gi, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

fn extend_iso(
    f: &Frame,
    g: &Frame,
    fi: &[Invariant],
    gi: &[Invariant],
    w: World,
    map: &mut [World],
    used: &mut WorldSet,
) -> bool {
    if w == f.size() {
        return true;
    }
    for x in g.worlds() {
        if used.contains(x) || gi[x] != fi[w] {
            continue;
        }
        let consistent = (0..w).all(|u| {
            f.le(u, w) == g.le(map[u], x) && f.le(w, u) == g.le(x, map[u])
        });
        if !consistent {
            continue;
        }
        map[w] = x;
        used.insert(x);
        if extend_iso(f, g, fi, gi, w + 1, map, used) {
            return true;
        }
        used.remove(x);
    }
    map[w] = usize::MAX;
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roach::{builtin, Builtin};

    #[test]
    fn t2_is_f1() {
        let t2 = builtin(Builtin::T(2)).unwrap();
        let f1 = builtin(Builtin::F1).unwrap();
        assert!(are_isomorphic(&t2, &f1));
        assert_eq!(canonical_code(&t2), canonical_code(&f1));
    }

    #[test]
    fn different_frames_are_told_apart() {
        let f1 = builtin(Builtin::F1).unwrap();
        let f2 = builtin(Builtin::F2).unwrap();
        assert!(!are_isomorphic(&f1, &f2));
        assert_ne!(canonical_code(&f1), canonical_code(&f2));
        assert!(are_isomorphic(&f1, &f1));
    }

    #[test]
    fn relabeling_keeps_the_code() {
        let f3 = builtin(Builtin::F3).unwrap();
        let shuffled = f3.permuted(&[4, 2, 0, 3, 1]);
        assert!(are_isomorphic(&f3, &shuffled));
        assert_eq!(canonical_code(&f3), canonical_code(&shuffled));
        let map = find_isomorphism(&f3, &shuffled).unwrap();
        for (u, w) in f3.pairs() {
            assert!(shuffled.le(map[u], map[w]));
        }
    }

    #[test]
    fn canonical_form_puts_the_root_first() {
        let f3 = builtin(Builtin::F3).unwrap().permuted(&[3, 1, 4, 0, 2]);
        let (canon, perm, _) = canonical_form(&f3);
        assert_eq!(canon.roots(), WorldSet::singleton(0));
        assert_eq!(f3.permuted(&perm).without_labels(), canon);
    }
}
