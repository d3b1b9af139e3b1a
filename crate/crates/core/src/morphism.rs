//! p-morphisms: verification, search, permissibility and cluster collapses.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{Frame, World, WorldSet};

/// Largest frames accepted by [`find_onto_p_morphism`].
pub const SEARCH_CEILING: usize = 16;

/// A total map between two frames.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PMorphism {
    pub source: Frame,
    pub target: Frame,
    pub map: Vec<World>,
}

/// Why a map fails to be a (surjective) p-morphism.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// The map does not have one entry per source world.
    Arity { expected: usize, got: usize },
    /// `map[world]` is not a target world.
    OutOfRange { world: World, image: World },
    /// `u ≤ w` but `map[u] ≰ map[w]`.
    Forth { u: World, w: World },
    /// `map[w] ≤ v` but no `u ≥ w` maps to `v`.
    Back { w: World, v: World },
    /// Surjectivity was claimed and `missing` has no preimage.
    NotOnto { missing: World },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Arity { expected, got } => write!(f, "map has {got} entries, expected {expected}"),
            Violation::OutOfRange { world, image } => write!(f, "world {world} maps to {image}, outside the target"),
            Violation::Forth { u, w } => write!(f, "forth fails: {u} <= {w} but their images are unrelated"),
            Violation::Back { w, v } => write!(f, "back fails: image of {w} sees {v}, which has no preimage above {w}"),
            Violation::NotOnto { missing } => write!(f, "not onto: {missing} has no preimage"),
        }
    }
}

impl PMorphism {
    pub fn new(source: Frame, target: Frame, map: Vec<World>) -> PMorphism {
        PMorphism { source, target, map }
    }

    pub fn identity(f: &Frame) -> PMorphism {
        PMorphism::new(f.clone(), f.clone(), f.worlds().collect())
    }

    /// Forth, back, and (when `claim_onto`) surjectivity.
    pub fn check(&self, claim_onto: bool) -> std::result::Result<(), Violation> {
        check_p_morphism(self, claim_onto)
    }

    pub fn is_onto(&self) -> bool {
        self.image() == self.target.all()
    }

    pub fn image(&self) -> WorldSet {
        self.map.iter().copied().collect()
    }

    /// `self` followed by `next`. The target of `self` must be the source
    /// of `next`.
    pub fn then(&self, next: &PMorphism) -> Result<PMorphism> {
        if self.target != next.source {
            return Err(Error::Precondition("composed maps do not share a middle frame".into()));
        }
        let map = self.map.iter().map(|&w| next.map[w]).collect();
        Ok(PMorphism::new(self.source.clone(), next.target.clone(), map))
    }

    /// Restriction to the subframe generated by `g`, as a map onto the
    /// subframe generated by `map[g]`. Returns the restricted morphism and
    /// the embeddings of its source and target.
    pub fn restrict(&self, g: World) -> Result<(PMorphism, Vec<World>, Vec<World>)> {
        let (source, src_emb) = self.source.generated_subframe(g)?;
        let (target, tgt_emb) = self.target.generated_subframe(self.map[g])?;
        let mut position = vec![usize::MAX; self.target.size()];
        for (i, &w) in tgt_emb.iter().enumerate() {
            position[w] = i;
        }
        let map = src_emb.iter().map(|&w| position[self.map[w]]).collect::<Vec<_>>();
        if map.contains(&usize::MAX) {
            return Err(Error::Precondition("map does not satisfy forth".into()));
        }
        Ok((PMorphism::new(source, target, map), src_emb, tgt_emb))
    }
}

/// Verifies forth, back and, if claimed, onto. The first violation found
/// is reported.
pub fn check_p_morphism(p: &PMorphism, claim_onto: bool) -> std::result::Result<(), Violation> {
    let (src, tgt, map) = (&p.source, &p.target, &p.map);
    if map.len() != src.size() {
        return Err(Violation::Arity { expected: src.size(), got: map.len() });
    }
    for (world, &image) in map.iter().enumerate() {
        if image >= tgt.size() {
            return Err(Violation::OutOfRange { world, image });
        }
    }
    for u in src.worlds() {
        for w in src.up(u).iter() {
            if !tgt.le(map[u], map[w]) {
                return Err(Violation::Forth { u, w });
            }
        }
    }
    for w in src.worlds() {
        let reached: WorldSet = src.up(w).iter().map(|u| map[u]).collect();
        if let Some(v) = (tgt.up(map[w]) - reached).first() {
            return Err(Violation::Back { w, v });
        }
    }
    if claim_onto {
        if let Some(missing) = (tgt.all() - p.image()).first() {
            return Err(Violation::NotOnto { missing });
        }
    }
    Ok(())
}

/// The lexicographically least surjective p-morphism from `source` onto
/// `target`, or `None` when there is none.
///
/// Source worlds are assigned in index order, trying target worlds in
/// increasing order; partial maps are pruned on forth, on back once a
/// world's whole upset is assigned, on depth (a p-morphism never increases
/// depth) and on the number of targets still uncovered.
pub fn find_onto_p_morphism(source: &Frame, target: &Frame) -> Result<Option<PMorphism>> {
    for f in [source, target] {
        if f.size() > SEARCH_CEILING {
            return Err(Error::CeilingExceeded { size: f.size(), ceiling: SEARCH_CEILING });
        }
    }
    if target.size() > source.size() {
        return Ok(None);
    }
    let mut search = Search::new(source, target);
    if search.extend(0) {
        let p = PMorphism::new(source.clone(), target.clone(), search.map);
        debug_assert!(p.check(true).is_ok());
        Ok(Some(p))
    } else {
        Ok(None)
    }
}

struct Search<'a> {
    source: &'a Frame,
    target: &'a Frame,
    src_depth: Vec<usize>,
    tgt_depth: Vec<usize>,
    /// Worlds whose upset becomes fully assigned when world `i` is assigned.
    completes: Vec<Vec<World>>,
    map: Vec<World>,
    hits: Vec<usize>,
    covered: usize,
}

impl<'a> Search<'a> {
    fn new(source: &'a Frame, target: &'a Frame) -> Self {
        let mut completes = vec![Vec::new(); source.size()];
        for w in source.worlds() {
            let last = source.up(w).last().expect("upsets are nonempty");
            completes[last].push(w);
        }
        Search {
            source,
            target,
            src_depth: source.depths(),
            tgt_depth: target.depths(),
            completes,
            map: vec![usize::MAX; source.size()],
            hits: vec![0; target.size()],
            covered: 0,
        }
    }

    fn fits(&self, w: World, x: World) -> bool {
        if self.tgt_depth[x] > self.src_depth[w] {
            return false;
        }
        let (s, t) = (self.source, self.target);
        for u in 0..w {
            let y = self.map[u];
            if s.le(u, w) && !t.le(y, x) || s.le(w, u) && !t.le(x, y) {
                return false;
            }
        }
        true
    }

    fn back_ok(&self, w: World) -> bool {
        let reached: WorldSet = self.source.up(w).iter().map(|u| self.map[u]).collect();
        self.target.up(self.map[w]).is_subset(reached)
    }

    fn extend(&mut self, w: World) -> bool {
        let n = self.source.size();
        if w == n {
            return self.covered == self.target.size();
        }
        for x in self.target.worlds() {
            if !self.fits(w, x) {
                continue;
            }
            self.map[w] = x;
            self.hits[x] += 1;
            if self.hits[x] == 1 {
                self.covered += 1;
            }
            let ok = self.target.size() - self.covered <= n - w - 1
                && self.completes[w].iter().all(|&u| self.back_ok(u));
            if ok && self.extend(w + 1) {
                return true;
            }
            self.hits[x] -= 1;
            if self.hits[x] == 0 {
                self.covered -= 1;
            }
        }
        self.map[w] = usize::MAX;
        false
    }
}

/// Evidence that `config` is a p-morphic image of the subframe of the host
/// generated by `generator`.
#[derive(Clone, Debug)]
pub struct Permission {
    pub generator: World,
    /// Subframe world `i` is host world `embedding[i]`.
    pub embedding: Vec<World>,
    /// From the generated subframe onto `config`.
    pub morphism: PMorphism,
}

/// Whether `config` is permissible for `host`: an onto p-morphic image of a
/// point-generated subframe. Generation points are tried by increasing
/// `|↑g|`, then index.
pub fn is_permissible(config: &Frame, host: &Frame) -> Result<Option<Permission>> {
    let root = config.root().ok_or(Error::NotRooted)?;
    let config_depth = config.depth(root);
    let host_depth = host.depths();
    let mut order: Vec<World> = host.worlds().collect();
    order.sort_by_key(|&g| (host.up(g).len(), g));
    for g in order {
        if host.up(g).len() < config.size() || host_depth[g] < config_depth {
            continue;
        }
        let (sub, embedding) = host.generated_subframe(g)?;
        if let Some(morphism) = find_onto_p_morphism(&sub, config)? {
            return Ok(Some(Permission { generator: g, embedding, morphism }));
        }
    }
    Ok(None)
}

/// Identifies each block of worlds to a single point.
///
/// Each block with more than one world must be an upset, or a union of
/// whole clusters whose worlds share the same strict upset `↑w \ C_w`.
/// Worlds not listed stay as singleton classes. Quotient worlds are ordered
/// by their least member. The quotient map is verified before returning.
pub fn collapse(f: &Frame, blocks: &[WorldSet]) -> Result<(Frame, PMorphism)> {
    let mut listed = WorldSet::EMPTY;
    for (i, &block) in blocks.iter().enumerate() {
        let bad = |reason: &str| Error::BadBlock { block: i, reason: reason.to_string() };
        if block.is_empty() {
            return Err(bad("empty block"));
        }
        if let Some(index) = (block - f.all()).first() {
            return Err(Error::WorldOutOfRange { index, size: f.size() });
        }
        if listed.intersects(block) {
            return Err(bad("blocks overlap"));
        }
        listed = listed | block;
        if block.len() > 1 && !f.is_upset(block) {
            let whole_clusters = block.iter().all(|w| f.cluster(w).is_subset(block));
            let first = block.first().expect("nonempty");
            let same_successors = block.iter().all(|w| f.strict_up(w) == f.strict_up(first));
            if !whole_clusters || !same_successors {
                return Err(bad("neither an upset nor points with equal strict successors"));
            }
        }
    }
    let mut classes: Vec<WorldSet> = blocks.to_vec();
    classes.extend((f.all() - listed).iter().map(WorldSet::singleton));
    classes.sort_by_key(|c| c.first());
    let mut map = vec![0; f.size()];
    for (i, c) in classes.iter().enumerate() {
        for w in c.iter() {
            map[w] = i;
        }
    }
    let up = classes
        .iter()
        .map(|c| f.up_set(*c).iter().map(|w| map[w]).collect())
        .collect();
    let quotient = Frame::closure_of(up);
    let p = PMorphism::new(f.clone(), quotient.clone(), map);
    if let Err(v) = p.check(true) {
        return Err(Error::Precondition(format!("collapse is not a p-morphism: {v}")));
    }
    Ok((quotient, p))
}
