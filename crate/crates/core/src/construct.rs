//! Unraveling: rooted frames into quasi-trees, 2-roaches into willow trees.

use crate::error::{Error, Result};
use crate::frame::{Frame, World, WorldSet};
use crate::morphism::PMorphism;
use crate::roach::{body_is_quasi_tree, is_2_roach, splitting_certificates};

/// Default cap on the number of worlds an unraveling may create.
pub const DEFAULT_NODE_BUDGET: usize = crate::frame::MAX_WORLDS;

/// An unraveled frame and its p-morphism onto the input.
#[derive(Clone, Debug)]
pub struct UnravelResult {
    pub tree: Frame,
    /// From `tree` onto the input frame.
    pub morphism: PMorphism,
    /// For willow unraveling: the splitting point in `tree` and in the input.
    pub splitting_point: Option<(World, World)>,
}

/// Unravels a rooted frame into a quasi-tree with the default node budget.
pub fn unravel_to_quasi_tree(f: &Frame) -> Result<UnravelResult> {
    unravel_with_budget(f, DEFAULT_NODE_BUDGET)
}

/// Nodes are paths of clusters `C_0 < C_1 < ..` starting at the root
/// cluster, each step an immediate successor in the skeleton, paired with a
/// world of the last cluster. A node sees every node whose path extends its
/// own. The map sends a node to its world.
pub fn unravel_with_budget(f: &Frame, budget: usize) -> Result<UnravelResult> {
    let root = f.root().ok_or(Error::NotRooted)?;
    let sk = f.skeleton();
    let k = sk.clusters.len();
    // Immediate successors in the skeleton.
    let covers: Vec<Vec<usize>> = (0..k)
        .map(|c| {
            let strict = sk.frame.up(c) - WorldSet::singleton(c);
            strict
                .iter()
                .filter(|&d| (strict - WorldSet::singleton(d)).iter().all(|e| !sk.frame.le(e, d)))
                .collect()
        })
        .collect();

    // Depth-first walk over paths; `parent[i]` is the parent of path `i`.
    let mut parent: Vec<Option<usize>> = Vec::new();
    let mut last: Vec<usize> = Vec::new();
    let mut stack = vec![(None, sk.pi[root])];
    let mut order = Vec::new();
    let mut total = 0usize;
    while let Some((par, c)) = stack.pop() {
        let id = parent.len();
        parent.push(par);
        last.push(c);
        order.push(id);
        total += sk.clusters[c].len();
        if total > budget {
            return Err(Error::CeilingExceeded { size: total, ceiling: budget });
        }
        for &d in covers[c].iter().rev() {
            stack.push((Some(id), d));
        }
    }

    if total > crate::frame::MAX_WORLDS {
        return Err(Error::TooLarge { size: total, limit: crate::frame::MAX_WORLDS });
    }

    // Node list: each path contributes its cluster's worlds in index order.
    let mut first_node = vec![0; parent.len()];
    let mut map = Vec::with_capacity(total);
    for &id in &order {
        first_node[id] = map.len();
        map.extend(sk.clusters[last[id]].iter());
    }
    let node_path: Vec<usize> = order
        .iter()
        .flat_map(|&id| std::iter::repeat(id).take(sk.clusters[last[id]].len()))
        .collect();

    // A node sees the nodes of its own path and of every extension.
    let mut below_paths: Vec<Vec<usize>> = vec![Vec::new(); parent.len()];
    for id in 0..parent.len() {
        let mut cur = Some(id);
        while let Some(p) = cur {
            below_paths[id].push(p);
            cur = parent[p];
        }
    }
    let mut up = vec![WorldSet::EMPTY; total];
    for (node, &path) in node_path.iter().enumerate() {
        for &anc in &below_paths[path] {
            let start = first_node[anc];
            for x in start..start + sk.clusters[last[anc]].len() {
                up[x].insert(node);
            }
        }
    }
    let tree = Frame::from_relation(up);
    let morphism = PMorphism::new(tree.clone(), f.clone(), map);
    if let Err(v) = morphism.check(true) {
        return Err(Error::Precondition(format!("unraveling map is not a p-morphism: {v}")));
    }
    Ok(UnravelResult { tree, morphism, splitting_point: None })
}

/// The splitting point used for willow unraveling: the first splitting
/// point (by index) whose body is already a quasi-tree, otherwise the
/// unique maximal point (single maximum) or the unique depth-2 splitting
/// point.
pub fn willow_splitting_point(f: &Frame) -> Result<World> {
    let cert = is_2_roach(f)?.ok_or_else(|| Error::Precondition("frame is not a 2-roach".into()))?;
    let certs = splitting_certificates(f, 2)?;
    if let Some(c) = certs.iter().find(|c| body_is_quasi_tree(f, c.s)) {
        return Ok(c.s);
    }
    let max = f.maximal_points();
    if max.len() == 1 {
        return Ok(max.first().expect("one maximal point"));
    }
    Ok(cert.s)
}

/// Unravels a 2-roach into a willow tree mapping onto it.
///
/// The body `W \ ↑s` is unraveled into a quasi-tree `T`; the result is
/// `T ∪ ↑s` where a node of `T` sees a world of `↑s` iff its image does.
/// The map is the unraveling on `T` and the identity on `↑s`.
pub fn roach_to_willow(f: &Frame) -> Result<UnravelResult> {
    let s = willow_splitting_point(f)?;
    let top = f.up(s);
    let body = f.all() - top;
    let top_worlds = top.to_vec();

    let (tree_part, body_map) = if body.is_empty() {
        (None, Vec::new())
    } else {
        let (sub, emb) = f.subframe(body);
        let un = unravel_to_quasi_tree(&sub)?;
        let map: Vec<World> = un.morphism.map.iter().map(|&x| emb[x]).collect();
        (Some(un.tree), map)
    };
    let t = body_map.len();
    let size = t + top_worlds.len();
    if size > crate::frame::MAX_WORLDS {
        return Err(Error::TooLarge { size, limit: crate::frame::MAX_WORLDS });
    }
    let mut up = vec![WorldSet::EMPTY; size];
    if let Some(tree) = &tree_part {
        for x in 0..t {
            up[x] = tree.up(x);
            for (j, &y) in top_worlds.iter().enumerate() {
                if f.le(body_map[x], y) {
                    up[x].insert(t + j);
                }
            }
        }
    }
    for (i, &x) in top_worlds.iter().enumerate() {
        for (j, &y) in top_worlds.iter().enumerate() {
            if f.le(x, y) {
                up[t + i].insert(t + j);
            }
        }
    }
    let willow = Frame::from_relation(up);
    let mut map = body_map;
    map.extend(top_worlds.iter().copied());
    let new_s = t + top_worlds.iter().position(|&w| w == s).expect("s in ↑s");
    let morphism = PMorphism::new(willow.clone(), f.clone(), map);
    if let Err(v) = morphism.check(true) {
        return Err(Error::Precondition(format!("willow map is not a p-morphism: {v}")));
    }
    Ok(UnravelResult { tree: willow, morphism, splitting_point: Some((new_s, s)) })
}
