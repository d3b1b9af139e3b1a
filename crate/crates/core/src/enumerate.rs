//! Exhaustive enumeration of finite frames up to isomorphism.
//!
//! Posets are grown one maximal element at a time and deduplicated by
//! canonical code; every preorder is then obtained by blowing each poset
//! element up into a cluster. Results are memoized per size.

use std::collections::{BTreeMap, HashMap};
use std::str::FromStr;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::frame::{Frame, WorldSet};
use crate::iso::{canonical_form, CanonicalCode};
use crate::roach;

/// Default largest size accepted by [`enumerate_frames`].
pub const DEFAULT_CEILING: usize = 6;

/// Which frames to keep.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FrameFilter {
    All,
    Rooted,
    S41Rooted,
    TwoRoach,
    Willow,
}

impl FrameFilter {
    pub fn accepts(self, f: &Frame) -> bool {
        match self {
            FrameFilter::All => true,
            FrameFilter::Rooted => f.is_rooted(),
            FrameFilter::S41Rooted => f.require_rooted_s41().is_ok(),
            FrameFilter::TwoRoach => matches!(roach::is_2_roach(f), Ok(Some(_))),
            FrameFilter::Willow => matches!(roach::is_willow_tree(f), Ok(Some(_))),
        }
    }
}

impl FromStr for FrameFilter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, '-' | '_' | ' ' | '.'))
            .collect::<String>()
            .to_ascii_lowercase();
        match norm.as_str() {
            "all" => Ok(FrameFilter::All),
            "rooted" => Ok(FrameFilter::Rooted),
            "s41rooted" | "rooteds41" | "s41" => Ok(FrameFilter::S41Rooted),
            "2roach" | "tworoach" | "r2" => Ok(FrameFilter::TwoRoach),
            "willow" | "willowtree" => Ok(FrameFilter::Willow),
            _ => Err(Error::InvalidParameter(format!("unknown frame filter `{s}`"))),
        }
    }
}

type Cache = Mutex<HashMap<usize, Arc<Vec<Frame>>>>;

fn preorder_cache() -> &'static Cache {
    static CACHE: OnceLock<Cache> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

fn filtered_cache() -> &'static Mutex<HashMap<(usize, FrameFilter), Arc<Vec<Frame>>>> {
    static CACHE: OnceLock<Mutex<HashMap<(usize, FrameFilter), Arc<Vec<Frame>>>>> = OnceLock::new();
    CACHE.get_or_init(Default::default)
}

/// One representative per isomorphism class of `n`-world frames passing
/// `filter`, in canonical-code order. Representatives are in canonical
/// labeling, so roots come first.
pub fn enumerate_frames(n: usize, filter: FrameFilter) -> Result<Arc<Vec<Frame>>> {
    enumerate_frames_with_ceiling(n, filter, DEFAULT_CEILING)
}

pub fn enumerate_frames_with_ceiling(
    n: usize,
    filter: FrameFilter,
    ceiling: usize,
) -> Result<Arc<Vec<Frame>>> {
    if n > ceiling {
        return Err(Error::CeilingExceeded { size: n, ceiling });
    }
    if n == 0 {
        return Err(Error::EmptyFrame);
    }
    if let Some(hit) = filtered_cache().lock().expect("cache lock").get(&(n, filter)) {
        return Ok(hit.clone());
    }
    let all = all_preorders(n);
    let kept: Arc<Vec<Frame>> = if filter == FrameFilter::All {
        all
    } else {
        Arc::new(all.iter().filter(|f| filter.accepts(f)).cloned().collect())
    };
    filtered_cache()
        .lock()
        .expect("cache lock")
        .insert((n, filter), kept.clone());
    Ok(kept)
}

/// Frames of every size `1..=max` passing `filter`.
pub fn enumerate_up_to(max: usize, filter: FrameFilter) -> Result<Vec<Frame>> {
    let mut out = Vec::new();
    for n in 1..=max {
        out.extend(enumerate_frames_with_ceiling(n, filter, max.max(DEFAULT_CEILING))?.iter().cloned());
    }
    Ok(out)
}

fn all_preorders(n: usize) -> Arc<Vec<Frame>> {
    if let Some(hit) = preorder_cache().lock().expect("cache lock").get(&n) {
        return hit.clone();
    }
    let mut found: BTreeMap<CanonicalCode, Frame> = BTreeMap::new();
    for k in 1..=n {
        for poset in posets(k) {
            for sizes in compositions(n, k) {
                let f = blow_up(&poset, &sizes);
                let (canon, _, code) = canonical_form(&f);
                found.entry(code).or_insert(canon);
            }
        }
    }
    let frames = Arc::new(found.into_values().collect::<Vec<_>>());
    preorder_cache().lock().expect("cache lock").insert(n, frames.clone());
    frames
}

/// Posets on `k` elements up to isomorphism.
fn posets(k: usize) -> Vec<Frame> {
    fn grow(prev: &[Frame]) -> Vec<Frame> {
        let mut found: BTreeMap<CanonicalCode, Frame> = BTreeMap::new();
        for p in prev {
            let k = p.size();
            // The new element k gets a down-closed set of predecessors.
            for bits in 0u64..(1 << k) {
                let below = WorldSet::from_bits(bits);
                if !p.is_downset(below) {
                    continue;
                }
                let mut up: Vec<WorldSet> = p.worlds().map(|w| p.up(w)).collect();
                for w in below.iter() {
                    up[w].insert(k);
                }
                up.push(WorldSet::singleton(k));
                let f = Frame::closure_of(up);
                let (canon, _, code) = canonical_form(&f);
                found.entry(code).or_insert(canon);
            }
        }
        found.into_values().collect()
    }
    let mut level = vec![Frame::point()];
    for _ in 1..k {
        level = grow(&level);
    }
    level
}

/// Ordered ways to write `n` as a sum of `k` positive parts.
fn compositions(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return if n == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in 1..=n.saturating_sub(k - 1) {
        for mut rest in compositions(n - first, k - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn blow_up(poset: &Frame, sizes: &[usize]) -> Frame {
    let mut offset = Vec::with_capacity(sizes.len());
    let mut total = 0;
    for &s in sizes {
        offset.push(total);
        total += s;
    }
    let block = |i: usize| -> WorldSet { (offset[i]..offset[i] + sizes[i]).collect() };
    let mut up = Vec::with_capacity(total);
    for i in poset.worlds() {
        let reach = poset.up(i).iter().fold(WorldSet::EMPTY, |acc, j| acc | block(j));
        for _ in 0..sizes[i] {
            up.push(reach);
        }
    }
    Frame::closure_of(up)
}
