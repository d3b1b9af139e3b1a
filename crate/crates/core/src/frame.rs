//! Finite S4-frames: a set of worlds `0..size` with a reflexive, transitive
//! accessibility relation `≤`.
//!
//! Relations are stored as one bitset per world (the upset `↑w` and the
//! downset `↓w`), so frames are capped at [`MAX_WORLDS`] worlds. Every
//! construction in this crate stays far below that cap.

use std::fmt;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Index of a world inside a [`Frame`].
pub type World = usize;

/// Upper bound on the number of worlds in a frame.
pub const MAX_WORLDS: usize = 64;

/// A set of worlds, stored as a 64-bit mask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WorldSet(u64);

impl WorldSet {
    pub const EMPTY: WorldSet = WorldSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        WorldSet(bits)
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub fn singleton(w: World) -> Self {
        debug_assert!(w < MAX_WORLDS);
        WorldSet(1 << w)
    }

    /// The set `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_WORLDS);
        if n == MAX_WORLDS {
            WorldSet(u64::MAX)
        } else {
            WorldSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, w: World) -> bool {
        w < MAX_WORLDS && self.0 & (1 << w) != 0
    }

    pub fn insert(&mut self, w: World) {
        self.0 |= 1 << w;
    }

    pub fn remove(&mut self, w: World) {
        self.0 &= !(1 << w);
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn union(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 | other.0)
    }

    pub fn intersection(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & other.0)
    }

    pub fn difference(self, other: WorldSet) -> WorldSet {
        WorldSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: WorldSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn intersects(self, other: WorldSet) -> bool {
        self.0 & other.0 != 0
    }

    /// Least element, if any.
    pub fn first(self) -> Option<World> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as World)
    }

    /// Largest element, if any.
    pub fn last(self) -> Option<World> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros() as World)
    }

    /// Elements in increasing order.
    pub fn iter(self) -> impl Iterator<Item = World> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let w = bits.trailing_zeros() as World;
                bits &= bits - 1;
                Some(w)
            }
        })
    }

    pub fn to_vec(self) -> Vec<World> {
        self.iter().collect()
    }
}

impl FromIterator<World> for WorldSet {
    fn from_iter<I: IntoIterator<Item = World>>(iter: I) -> Self {
        let mut s = WorldSet::EMPTY;
        for w in iter {
            s.insert(w);
        }
        s
    }
}

// Serialized as the sorted list of member worlds.
impl Serialize for WorldSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for WorldSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let worlds = Vec::<World>::deserialize(deserializer)?;
        if let Some(&w) = worlds.iter().find(|&&w| w >= MAX_WORLDS) {
            return Err(serde::de::Error::custom(format!("world {w} exceeds the {MAX_WORLDS}-world limit")));
        }
        Ok(worlds.into_iter().collect())
    }
}

impl fmt::Debug for WorldSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl std::ops::BitOr for WorldSet {
    type Output = WorldSet;
    fn bitor(self, rhs: WorldSet) -> WorldSet {
        self.union(rhs)
    }
}

impl std::ops::BitAnd for WorldSet {
    type Output = WorldSet;
    fn bitand(self, rhs: WorldSet) -> WorldSet {
        self.intersection(rhs)
    }
}

impl std::ops::Sub for WorldSet {
    type Output = WorldSet;
    fn sub(self, rhs: WorldSet) -> WorldSet {
        self.difference(rhs)
    }
}

/// Direction of an order query.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    Up,
    Down,
}

/// A finite S4-frame `(W, ≤)`.
///
/// Equality and hashing look at the relation only; labels are display
/// metadata.
#[derive(Clone)]
pub struct Frame {
    up: Vec<WorldSet>,
    down: Vec<WorldSet>,
    labels: Option<Vec<String>>,
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.up == other.up
    }
}

impl Eq for Frame {}

impl Hash for Frame {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.up.hash(state);
    }
}

impl fmt::Debug for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Frame[{}]{{", self.size())?;
        let mut first = true;
        for u in self.worlds() {
            for w in self.up(u).iter().filter(|&w| w != u) {
                if !first {
                    write!(f, ", ")?;
                }
                first = false;
                write!(f, "{}<={}", self.label(u), self.label(w))?;
            }
        }
        write!(f, "}}")
    }
}

fn check_size(size: usize) -> Result<()> {
    if size == 0 {
        return Err(Error::EmptyFrame);
    }
    if size > MAX_WORLDS {
        return Err(Error::TooLarge { size, limit: MAX_WORLDS });
    }
    Ok(())
}

fn check_pairs(size: usize, pairs: &[(World, World)]) -> Result<()> {
    for &(u, w) in pairs {
        for index in [u, w] {
            if index >= size {
                return Err(Error::WorldOutOfRange { index, size });
            }
        }
    }
    Ok(())
}

impl Frame {
    /// Builds the reflexive-transitive closure of `pairs` over `size` worlds.
    pub fn from_pairs(size: usize, pairs: &[(World, World)]) -> Result<Frame> {
        check_size(size)?;
        check_pairs(size, pairs)?;
        let mut up: Vec<WorldSet> = (0..size).map(WorldSet::singleton).collect();
        for &(u, w) in pairs {
            up[u].insert(w);
        }
        Ok(Frame::from_relation(close(up)))
    }

    /// Like [`Frame::from_pairs`], but rejects input that is not already
    /// reflexive and transitive.
    pub fn from_closed_pairs(size: usize, pairs: &[(World, World)]) -> Result<Frame> {
        check_size(size)?;
        check_pairs(size, pairs)?;
        let mut up = vec![WorldSet::EMPTY; size];
        for &(u, w) in pairs {
            up[u].insert(w);
        }
        let reflexive: Vec<WorldSet> = up.iter().enumerate().map(|(w, &set)| set | WorldSet::singleton(w)).collect();
        let closed = close(reflexive);
        for u in 0..size {
            if let Some(w) = (closed[u] - up[u]).first() {
                return Err(Error::NotClosed(u, w));
            }
        }
        Ok(Frame::from_relation(up))
    }

    /// Builds a frame from upsets that are already reflexive and transitive.
    pub(crate) fn from_relation(up: Vec<WorldSet>) -> Frame {
        let n = up.len();
        debug_assert!(n <= MAX_WORLDS);
        let mut down = vec![WorldSet::EMPTY; n];
        for (u, set) in up.iter().enumerate() {
            for w in set.iter() {
                down[w].insert(u);
            }
        }
        let frame = Frame { up, down, labels: None };
        debug_assert!(frame.is_closed());
        frame
    }

    /// Builds a frame from arbitrary upsets, closing them first.
    pub(crate) fn closure_of(mut up: Vec<WorldSet>) -> Frame {
        for (w, set) in up.iter_mut().enumerate() {
            set.insert(w);
        }
        Frame::from_relation(close(up))
    }

    /// The single reflexive point.
    pub fn point() -> Frame {
        Frame::from_relation(vec![WorldSet::singleton(0)])
    }

    pub fn with_labels<S: Into<String>>(mut self, labels: impl IntoIterator<Item = S>) -> Frame {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        assert_eq!(labels.len(), self.size(), "one label per world");
        self.labels = Some(labels);
        self
    }

    pub fn without_labels(mut self) -> Frame {
        self.labels = None;
        self
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display name of a world: its label, or its index.
    pub fn label(&self, w: World) -> String {
        match &self.labels {
            Some(labels) => labels[w].clone(),
            None => w.to_string(),
        }
    }

    /// Index of the world carrying `label`.
    pub fn world_named(&self, label: &str) -> Option<World> {
        self.labels.as_ref()?.iter().position(|l| l == label)
    }

    pub fn size(&self) -> usize {
        self.up.len()
    }

    pub fn worlds(&self) -> std::ops::Range<World> {
        0..self.size()
    }

    pub fn all(&self) -> WorldSet {
        WorldSet::full(self.size())
    }

    /// `u ≤ w`.
    pub fn le(&self, u: World, w: World) -> bool {
        self.up[u].contains(w)
    }

    /// `u < w` strictly: `u ≤ w` and not `w ≤ u`.
    pub fn lt(&self, u: World, w: World) -> bool {
        self.le(u, w) && !self.le(w, u)
    }

    /// `↑w`.
    pub fn up(&self, w: World) -> WorldSet {
        self.up[w]
    }

    /// `↓w`.
    pub fn down(&self, w: World) -> WorldSet {
        self.down[w]
    }

    /// All ordered pairs `(u, w)` with `u ≤ w`, reflexive pairs included.
    pub fn pairs(&self) -> Vec<(World, World)> {
        self.worlds()
            .flat_map(|u| self.up(u).iter().map(move |w| (u, w)))
            .collect()
    }

    pub fn up_set(&self, seed: WorldSet) -> WorldSet {
        seed.iter().fold(WorldSet::EMPTY, |acc, w| acc | self.up[w])
    }

    pub fn down_set(&self, seed: WorldSet) -> WorldSet {
        seed.iter().fold(WorldSet::EMPTY, |acc, w| acc | self.down[w])
    }

    /// `↑A` or `↓A` for a seed set `A`.
    pub fn order_query(&self, seed: WorldSet, direction: Direction) -> Result<WorldSet> {
        if let Some(index) = (seed - self.all()).first() {
            return Err(Error::WorldOutOfRange { index, size: self.size() });
        }
        Ok(match direction {
            Direction::Up => self.up_set(seed),
            Direction::Down => self.down_set(seed),
        })
    }

    pub fn is_upset(&self, set: WorldSet) -> bool {
        self.up_set(set) == set
    }

    pub fn is_downset(&self, set: WorldSet) -> bool {
        self.down_set(set) == set
    }

    /// The cluster `C_w = ↑w ∩ ↓w`.
    pub fn cluster(&self, w: World) -> WorldSet {
        self.up[w] & self.down[w]
    }

    /// `↑w \ C_w`.
    pub fn strict_up(&self, w: World) -> WorldSet {
        self.up[w] - self.down[w]
    }

    /// Points `w` with `↑w = {w}`.
    pub fn maximal_points(&self) -> WorldSet {
        self.worlds().filter(|&w| self.up[w].len() == 1).collect()
    }

    /// Points `w` with `↓w = {w}`.
    pub fn minimal_points(&self) -> WorldSet {
        self.worlds().filter(|&w| self.down[w].len() == 1).collect()
    }

    pub fn roots(&self) -> WorldSet {
        let all = self.all();
        self.worlds().filter(|&w| self.up[w] == all).collect()
    }

    /// The least-index root, if the frame is rooted.
    pub fn root(&self) -> Option<World> {
        self.roots().first()
    }

    pub fn is_rooted(&self) -> bool {
        !self.roots().is_empty()
    }

    pub fn is_partial_order(&self) -> bool {
        self.worlds().all(|w| self.cluster(w).len() == 1)
    }

    /// Points of `set` whose upset inside `set` stays in their own cluster.
    pub fn quasi_maximal_in(&self, set: WorldSet) -> WorldSet {
        set.iter()
            .filter(|&w| (self.up[w] & set).is_subset(self.cluster(w)))
            .collect()
    }

    /// The distinct clusters, ordered by their least world.
    pub fn clusters(&self) -> Vec<WorldSet> {
        let mut seen = WorldSet::EMPTY;
        let mut out = Vec::new();
        for w in self.worlds() {
            if !seen.contains(w) {
                let c = self.cluster(w);
                seen = seen | c;
                out.push(c);
            }
        }
        out
    }

    /// Collapses every cluster to a point.
    pub fn skeleton(&self) -> Skeleton {
        let clusters = self.clusters();
        let mut pi = vec![0; self.size()];
        for (i, c) in clusters.iter().enumerate() {
            for w in c.iter() {
                pi[w] = i;
            }
        }
        let up = clusters
            .iter()
            .map(|c| {
                let rep = c.first().expect("clusters are nonempty");
                self.up[rep].iter().map(|w| pi[w]).collect()
            })
            .collect();
        Skeleton { frame: Frame::from_relation(up), clusters, pi }
    }

    /// Depth of every world: the length of the longest strictly ascending
    /// chain of clusters starting at the world.
    pub fn depths(&self) -> Vec<usize> {
        let mut order: Vec<World> = self.worlds().collect();
        order.sort_by_key(|&w| self.up[w].len());
        let mut depth = vec![0usize; self.size()];
        for w in order {
            depth[w] = 1 + self.strict_up(w).iter().map(|u| depth[u]).max().unwrap_or(0);
        }
        depth
    }

    pub fn depth(&self, w: World) -> usize {
        self.depths()[w]
    }

    /// Depth at a root, for rooted frames.
    pub fn frame_depth(&self) -> Option<usize> {
        self.root().map(|r| self.depth(r))
    }

    /// Restriction of `≤` to `set`, with the embedding `new index → old world`.
    pub fn subframe(&self, set: WorldSet) -> (Frame, Vec<World>) {
        let embedding = set.to_vec();
        let mut position = vec![usize::MAX; self.size()];
        for (i, &w) in embedding.iter().enumerate() {
            position[w] = i;
        }
        let up = embedding
            .iter()
            .map(|&w| (self.up[w] & set).iter().map(|u| position[u]).collect())
            .collect();
        let mut sub = Frame::from_relation(up);
        if let Some(labels) = &self.labels {
            sub.labels = Some(embedding.iter().map(|&w| labels[w].clone()).collect());
        }
        (sub, embedding)
    }

    /// The subframe on `↑w`.
    pub fn generated_subframe(&self, w: World) -> Result<(Frame, Vec<World>)> {
        if w >= self.size() {
            return Err(Error::WorldOutOfRange { index: w, size: self.size() });
        }
        Ok(self.subframe(self.up[w]))
    }

    /// Applies a permutation: world `i` of the result is world `perm[i]` of `self`.
    pub fn permuted(&self, perm: &[World]) -> Frame {
        assert_eq!(perm.len(), self.size());
        let mut inverse = vec![0; self.size()];
        for (i, &w) in perm.iter().enumerate() {
            inverse[w] = i;
        }
        let up = perm
            .iter()
            .map(|&w| self.up[w].iter().map(|u| inverse[u]).collect())
            .collect();
        let mut out = Frame::from_relation(up);
        if let Some(labels) = &self.labels {
            out.labels = Some(perm.iter().map(|&w| labels[w].clone()).collect());
        }
        out
    }

    fn is_closed(&self) -> bool {
        self.worlds()
            .all(|w| self.up[w].contains(w) && self.up_set(self.up[w]) == self.up[w])
    }

    /// Computes the frame-class flags.
    pub fn classify(&self) -> FrameFlags {
        let roots = self.roots();
        let rooted = !roots.is_empty();
        let partial_order = self.is_partial_order();
        let max_points = self.maximal_points();
        let min_points = self.minimal_points();
        let quasi_tree = rooted
            && self.worlds().all(|w| {
                let below = self.down[w];
                below
                    .iter()
                    .all(|u| below.iter().all(|v| self.le(u, v) || self.le(v, u)))
            });
        let s41 = self.size() > 0 && self.worlds().all(|w| self.up[w].intersects(max_points));
        FrameFlags {
            rooted,
            roots,
            partial_order,
            quasi_tree,
            tree: quasi_tree && partial_order,
            s41,
            s412: s41 && max_points.len() == 1,
            max_points,
            min_points,
        }
    }

    /// `Some(root)` when the frame is a rooted S4.1-frame.
    pub fn require_rooted_s41(&self) -> Result<World> {
        let root = self.root().ok_or(Error::NotRooted)?;
        if !self.classify().s41 {
            return Err(Error::NotS41);
        }
        Ok(root)
    }
}

fn close(mut up: Vec<WorldSet>) -> Vec<WorldSet> {
    let n = up.len();
    for k in 0..n {
        let through = up[k];
        for set in up.iter_mut() {
            if set.contains(k) {
                *set = *set | through;
            }
        }
    }
    up
}

/// The clusters of a frame, its skeleton and the projection onto it.
#[derive(Clone, Debug)]
pub struct Skeleton {
    pub frame: Frame,
    pub clusters: Vec<WorldSet>,
    /// `pi[w]` is the skeleton point of `C_w`.
    pub pi: Vec<usize>,
}

/// Frame-class flags computed by [`Frame::classify`].
///
/// `s41`/`s412` use the literal definitions and do not require rootedness.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrameFlags {
    pub rooted: bool,
    pub roots: WorldSet,
    pub partial_order: bool,
    pub quasi_tree: bool,
    pub tree: bool,
    pub s41: bool,
    pub s412: bool,
    pub max_points: WorldSet,
    pub min_points: WorldSet,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roach::{builtin, Builtin};

    fn set(ws: &[World]) -> WorldSet {
        ws.iter().copied().collect()
    }

    #[test]
    fn closure_of_single_edge() {
        let f = Frame::from_pairs(2, &[(0, 1)]).unwrap();
        assert_eq!(f.pairs(), vec![(0, 0), (0, 1), (1, 1)]);
    }

    #[test]
    fn closure_forces_transitivity() {
        let f = Frame::from_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(f.le(0, 2));
        assert!(!f.le(2, 0));
    }

    #[test]
    fn reflexive_singleton() {
        let f = Frame::from_pairs(1, &[]).unwrap();
        assert_eq!(f.pairs(), vec![(0, 0)]);
        assert_eq!(f, Frame::point());
    }

    #[test]
    fn closure_is_idempotent() {
        let f = Frame::from_pairs(4, &[(0, 1), (1, 2), (2, 1), (3, 0)]).unwrap();
        let again = Frame::from_pairs(4, &f.pairs()).unwrap();
        assert_eq!(f, again);
        assert_eq!(Frame::from_closed_pairs(4, &f.pairs()).unwrap(), f);
    }

    #[test]
    fn out_of_range_and_empty() {
        assert_eq!(
            Frame::from_pairs(2, &[(0, 2)]),
            Err(Error::WorldOutOfRange { index: 2, size: 2 })
        );
        assert_eq!(Frame::from_pairs(0, &[]), Err(Error::EmptyFrame));
        assert!(matches!(Frame::from_pairs(65, &[]), Err(Error::TooLarge { .. })));
    }

    #[test]
    fn strict_mode_rejects_open_relations() {
        assert_eq!(Frame::from_closed_pairs(2, &[(0, 0), (1, 1), (0, 1)]).map(|f| f.size()), Ok(2));
        assert_eq!(Frame::from_closed_pairs(2, &[(0, 1)]), Err(Error::NotClosed(0, 0)));
        assert_eq!(
            Frame::from_closed_pairs(3, &[(0, 0), (1, 1), (2, 2), (0, 1), (1, 2)]),
            Err(Error::NotClosed(0, 2))
        );
    }

    #[test]
    fn upsets_and_downsets() {
        let t2 = builtin(Builtin::T(2)).unwrap();
        let r = t2.world_named("r").unwrap();
        assert_eq!(t2.order_query(WorldSet::singleton(r), Direction::Up).unwrap(), t2.all());
        assert_eq!(t2.order_query(WorldSet::EMPTY, Direction::Down).unwrap(), WorldSet::EMPTY);

        let f3 = builtin(Builtin::F3).unwrap();
        let n = |s: &str| f3.world_named(s).unwrap();
        assert_eq!(f3.up(n("v1")), set(&[n("v1"), n("m1"), n("m2")]));
        assert!(f3.order_query(WorldSet::singleton(9), Direction::Up).is_err());
    }

    #[test]
    fn skeleton_of_f2_collapses_the_root_cluster() {
        let f2 = builtin(Builtin::F2).unwrap();
        let sk = f2.skeleton();
        assert_eq!(sk.frame.size(), 3);
        assert!(sk.frame.is_partial_order());
        let flags = sk.frame.classify();
        assert!(flags.rooted);
        assert_eq!(flags.max_points.len(), 2);
        assert_eq!(sk.pi[0], sk.pi[1]);
    }

    #[test]
    fn skeleton_of_a_poset_is_itself() {
        let f = builtin(Builtin::F3).unwrap();
        let sk = f.skeleton();
        assert_eq!(sk.frame, f);
        assert_eq!(sk.pi, (0..5).collect::<Vec<_>>());
        assert_eq!(Frame::point().skeleton().frame, Frame::point());
    }

    #[test]
    fn depths_of_named_frames() {
        for n in 1..=4 {
            let t = builtin(Builtin::T(n)).unwrap();
            assert_eq!(t.frame_depth(), Some(n + 1));
        }
        assert_eq!(Frame::point().depth(0), 1);
        let f3 = builtin(Builtin::F3).unwrap();
        assert_eq!(f3.depth(f3.world_named("r").unwrap()), 3);
        assert_eq!(f3.depth(f3.world_named("v1").unwrap()), 2);
        assert_eq!(f3.depth(f3.world_named("v2").unwrap()), 2);
    }

    #[test]
    fn classify_examples() {
        let f1 = builtin(Builtin::F1).unwrap().classify();
        assert!(f1.rooted && f1.partial_order && f1.s41 && !f1.s412);
        assert!(f1.tree);

        let g = builtin(Builtin::G).unwrap().classify();
        assert!(g.rooted && g.s41 && !g.s412 && !g.partial_order);
        assert_eq!(g.roots, set(&[0, 1]));
        assert!(g.quasi_tree && !g.tree);

        let p = Frame::point().classify();
        assert!(p.rooted && p.partial_order && p.quasi_tree && p.tree && p.s41 && p.s412);

        // F3 is not a quasi-tree: v1 and v2 both sit below m1.
        assert!(!builtin(Builtin::F3).unwrap().classify().quasi_tree);

        // A final 2-cluster has no maximal point.
        let c = Frame::from_pairs(3, &[(0, 1), (1, 2), (2, 1)]).unwrap().classify();
        assert!(c.rooted && !c.s41 && c.max_points.is_empty());
    }

    #[test]
    fn generated_subframes() {
        let f3 = builtin(Builtin::F3).unwrap();
        let (sub, emb) = f3.generated_subframe(f3.world_named("v1").unwrap()).unwrap();
        assert_eq!(sub.size(), 3);
        assert_eq!(emb, vec![1, 3, 4]);
        assert_eq!(sub.roots(), WorldSet::singleton(0));
        assert_eq!(sub.maximal_points(), set(&[1, 2]));

        let (top, _) = f3.generated_subframe(f3.world_named("m1").unwrap()).unwrap();
        assert_eq!(top, Frame::point());
        let (whole, emb) = f3.generated_subframe(0).unwrap();
        assert_eq!(whole, f3);
        assert_eq!(emb, vec![0, 1, 2, 3, 4]);
        assert!(f3.generated_subframe(5).is_err());
    }
}
