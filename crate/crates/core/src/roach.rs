//! Named frames, n-roach recognition with certificates, willow trees and
//! the constructive extraction of a forbidden configuration.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frame::{Frame, World, WorldSet};
use crate::morphism::{collapse, PMorphism};

/// Built-in frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Builtin {
    /// Root below a chain of two and a second maximal point.
    F1,
    /// A two-world root cluster below two maximal points.
    F2,
    /// Root below two points that each see both maximal points.
    F3,
    /// Same shape as `F2`; kept as a separate name.
    G,
    /// Root below a chain `w1 < .. < wn` and below a maximal point `v`.
    T(usize),
    TwoFork,
    Chain(usize),
    Point,
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Builtin::F1 => write!(f, "F1"),
            Builtin::F2 => write!(f, "F2"),
            Builtin::F3 => write!(f, "F3"),
            Builtin::G => write!(f, "G"),
            Builtin::T(n) => write!(f, "T{n}"),
            Builtin::TwoFork => write!(f, "two_fork"),
            Builtin::Chain(k) => write!(f, "chain{k}"),
            Builtin::Point => write!(f, "point"),
        }
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let norm: String = s
            .chars()
            .filter(|c| !matches!(c, '(' | ')' | '_' | '-' | ' ' | ':'))
            .collect::<String>()
            .to_ascii_lowercase();
        let bad = || Error::InvalidParameter(format!("unknown builtin frame `{s}`"));
        let number = |rest: &str| rest.parse::<usize>().map_err(|_| bad());
        match norm.as_str() {
            "f1" => Ok(Builtin::F1),
            "f2" => Ok(Builtin::F2),
            "f3" => Ok(Builtin::F3),
            "g" => Ok(Builtin::G),
            "twofork" | "fork" => Ok(Builtin::TwoFork),
            "point" => Ok(Builtin::Point),
            other => {
                if let Some(rest) = other.strip_prefix("chain") {
                    Ok(Builtin::Chain(number(rest)?))
                } else if let Some(rest) = other.strip_prefix('t') {
                    Ok(Builtin::T(number(rest)?))
                } else {
                    Err(bad())
                }
            }
        }
    }
}

/// The named frame, with world labels.
pub fn builtin(name: Builtin) -> Result<Frame> {
    let frame = match name {
        Builtin::F1 => Frame::from_pairs(4, &[(0, 1), (1, 2), (0, 3)])?.with_labels(["r", "v", "m1", "m2"]),
        Builtin::F2 | Builtin::G => Frame::from_pairs(4, &[(0, 1), (1, 0), (0, 2), (0, 3)])?
            .with_labels(["r1", "r2", "m1", "m2"]),
        Builtin::F3 => Frame::from_pairs(5, &[(0, 1), (0, 2), (1, 3), (1, 4), (2, 3), (2, 4)])?
            .with_labels(["r", "v1", "v2", "m1", "m2"]),
        Builtin::T(0) => return Err(Error::InvalidParameter("T(n) needs n >= 1".into())),
        Builtin::T(n) => {
            let mut pairs: Vec<(World, World)> = (0..n).map(|i| (i, i + 1)).collect();
            pairs.push((0, n + 1));
            let mut labels = vec!["r".to_string()];
            labels.extend((1..=n).map(|i| format!("w{i}")));
            labels.push("v".into());
            Frame::from_pairs(n + 2, &pairs)?.with_labels(labels)
        }
        Builtin::TwoFork => Frame::from_pairs(3, &[(0, 1), (0, 2)])?.with_labels(["r", "m1", "m2"]),
        Builtin::Chain(0) => return Err(Error::InvalidParameter("chain(k) needs k >= 1".into())),
        Builtin::Chain(k) => {
            let pairs: Vec<(World, World)> = (1..k).map(|i| (i - 1, i)).collect();
            Frame::from_pairs(k, &pairs)?.with_labels((0..k).map(|i| format!("c{i}")))
        }
        Builtin::Point => Frame::point().with_labels(["x"]),
    };
    Ok(frame)
}

/// Evidence that a frame is an `n`-roach with splitting point `s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingCertificate {
    pub s: World,
    pub n: usize,
    /// `t[w]` is the point of `↑s` with `↑w ∩ ↑s = ↑t[w]`.
    pub t: Vec<World>,
}

impl SplittingCertificate {
    /// Rechecks the certificate against `f` by direct set computation.
    pub fn verify(&self, f: &Frame) -> bool {
        let s = self.s;
        if s >= f.size() || self.t.len() != f.size() || f.depth(s) > self.n {
            return false;
        }
        let up_s = f.up(s);
        let partial = up_s.iter().all(|w| f.cluster(w).len() == 1);
        partial
            && f.worlds()
                .all(|w| up_s.contains(self.t[w]) && f.up(w) & up_s == f.up(self.t[w]))
    }
}

fn certificate_at(f: &Frame, depths: &[usize], s: World, n: usize) -> Option<SplittingCertificate> {
    if depths[s] > n {
        return None;
    }
    let up_s = f.up(s);
    if up_s.iter().any(|w| f.cluster(w).len() != 1) {
        return None;
    }
    let mut t = Vec::with_capacity(f.size());
    for w in f.worlds() {
        let meet = f.up(w) & up_s;
        t.push(meet.iter().find(|&x| f.up(x) == meet)?);
    }
    Some(SplittingCertificate { s, n, t })
}

/// Every splitting point witnessing that `f` is an `n`-roach, in index order.
pub fn splitting_certificates(f: &Frame, n: usize) -> Result<Vec<SplittingCertificate>> {
    f.require_rooted_s41()?;
    let depths = f.depths();
    Ok(f.worlds().filter_map(|s| certificate_at(f, &depths, s, n)).collect())
}

/// The first splitting point (by index) making `f` an `n`-roach.
pub fn splitting_certificate(f: &Frame, n: usize) -> Result<Option<SplittingCertificate>> {
    f.require_rooted_s41()?;
    let depths = f.depths();
    Ok(f.worlds().find_map(|s| certificate_at(f, &depths, s, n)))
}

/// Least `n` such that `f` is an `n`-roach, if it is a roach at all.
pub fn roach_rank(f: &Frame) -> Result<Option<usize>> {
    f.require_rooted_s41()?;
    let depths = f.depths();
    let mut best: Option<usize> = None;
    for s in f.worlds() {
        if certificate_at(f, &depths, s, depths[s]).is_some() {
            best = Some(best.map_or(depths[s], |b| b.min(depths[s])));
        }
    }
    Ok(best)
}

fn sees_one_max(f: &Frame, max: WorldSet, w: World) -> bool {
    (f.up(w) & max).len() == 1
}

/// Decides membership in `R₂` with the recursive characterization: some
/// `s` has `↑s = {s} ∪ max`, and every world outside `↓s` sees exactly one
/// maximal point.
pub fn is_2_roach(f: &Frame) -> Result<Option<SplittingCertificate>> {
    f.require_rooted_s41()?;
    let max = f.maximal_points();
    for s in f.worlds() {
        if f.up(s) != (max | WorldSet::singleton(s)) {
            continue;
        }
        let outside = f.all() - f.down(s);
        if !outside.iter().all(|w| sees_one_max(f, max, w)) {
            continue;
        }
        let t = f
            .worlds()
            .map(|w| if f.le(w, s) { s } else { (f.up(w) & max).first().expect("one max") })
            .collect();
        return Ok(Some(SplittingCertificate { s, n: 2, t }));
    }
    Ok(None)
}

/// The unique depth-2 splitting point of a frame in `R₂ \ R₁`.
pub fn unique_splitting_point(f: &Frame) -> Result<World> {
    let cert = is_2_roach(f)?.ok_or_else(|| Error::Precondition("frame is not a 2-roach".into()))?;
    if f.classify().s412 {
        return Err(Error::Precondition("frame is a 1-roach (single maximal point)".into()));
    }
    Ok(cert.s)
}

/// A willow-tree splitting point and the quasi-tree `W \ ↑s`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WillowEvidence {
    pub certificate: SplittingCertificate,
    pub body: WorldSet,
}

/// Whether `W \ ↑s` is empty or a quasi-tree.
pub fn body_is_quasi_tree(f: &Frame, s: World) -> bool {
    let body = f.all() - f.up(s);
    body.is_empty() || f.subframe(body).0.classify().quasi_tree
}

/// Whether `f` is a willow tree: a 2-roach with a splitting point whose
/// complement-of-upset is a quasi-tree. All splitting points are tried.
pub fn is_willow_tree(f: &Frame) -> Result<Option<WillowEvidence>> {
    let certs = splitting_certificates(f, 2)?;
    Ok(certs.into_iter().find(|c| body_is_quasi_tree(f, c.s)).map(|certificate| {
        let body = f.all() - f.up(certificate.s);
        WillowEvidence { certificate, body }
    }))
}

/// Which forbidden frame a witness maps onto.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Forbidden {
    F1,
    F2,
    F3,
}

impl Forbidden {
    pub fn frame(self) -> Frame {
        let name = match self {
            Forbidden::F1 => Builtin::F1,
            Forbidden::F2 => Builtin::F2,
            Forbidden::F3 => Builtin::F3,
        };
        builtin(name).expect("fixed builtin")
    }

    pub const ALL: [Forbidden; 3] = [Forbidden::F1, Forbidden::F2, Forbidden::F3];
}

impl fmt::Display for Forbidden {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// `which` is a p-morphic image of the subframe generated by `generator`.
#[derive(Clone, Debug)]
pub struct ForbiddenWitness {
    pub which: Forbidden,
    pub generator: World,
    /// Subframe world `i` is world `embedding[i]` of the tested frame.
    pub embedding: Vec<World>,
    pub morphism: PMorphism,
}

impl ForbiddenWitness {
    /// Rechecks the morphism and that its source is the generated subframe.
    pub fn verify(&self, f: &Frame) -> bool {
        let Ok((sub, emb)) = f.generated_subframe(self.generator) else {
            return false;
        };
        emb == self.embedding
            && sub == self.morphism.source
            && self.morphism.target == self.which.frame()
            && self.morphism.check(true).is_ok()
    }
}

// World indices inside the builtin forbidden frames.
const F1_R: World = 0;
const F1_V: World = 1;
const F1_M1: World = 2;
const F1_M2: World = 3;

/// Extracts one of `F1`, `F2`, `F3` as a p-morphic image of a
/// point-generated subframe of a rooted S4.1-frame that is not a 2-roach.
///
/// Points of depth 2 that see at least two maximal points decide the case.
/// With two of them the crisscross construction yields `F2` (same cluster)
/// or `F3`; otherwise a tall two-fork yields `F1`. Every choice of a point
/// takes the least index, and the result is verified before it is returned.
pub fn minimal_forbidden_witness(f: &Frame) -> Result<ForbiddenWitness> {
    if is_2_roach(f)?.is_some() {
        return Err(Error::Precondition("frame is a 2-roach; nothing is forbidden".into()));
    }
    let depths = f.depths();
    let max = f.maximal_points();
    let forks: Vec<World> = f
        .worlds()
        .filter(|&w| depths[w] == 2 && (f.up(w) & max).len() >= 2)
        .collect();

    let witness = if forks.len() >= 2 {
        crisscross(f, forks[0], forks[1])?
    } else {
        match forks.first() {
            Some(&s) if max.is_subset(f.up(s)) => {
                // Some point outside ↓s sees two maxima; take a quasi-maximal one.
                let bad: WorldSet = (f.all() - f.down(s))
                    .iter()
                    .filter(|&w| !sees_one_max(f, max, w))
                    .collect();
                let w = f
                    .quasi_maximal_in(bad)
                    .first()
                    .ok_or_else(|| Error::Precondition("frame is not a rooted S4.1-frame".into()))?;
                let (sub, emb) = f.generated_subframe(w)?;
                let morphism = tall_two_fork(&sub)?;
                ForbiddenWitness { which: Forbidden::F1, generator: w, embedding: emb, morphism }
            }
            _ => {
                let seen = forks.first().map_or_else(
                    || WorldSet::singleton(max.first().expect("S4.1 frames have a maximal point")),
                    |&s| f.up(s) & max,
                );
                let (quotient, h) = collapse(f, &[seen, max - seen])?;
                let n1 = h.map[seen.first().expect("nonempty")];
                let n2 = h.map[(max - seen).first().expect("two maxima at least")];
                let meet = quotient.down(n1) & quotient.down(n2);
                let q = quotient.quasi_maximal_in(meet).first().expect("the root sees both");
                let (sub, _) = quotient.generated_subframe(q)?;
                let fork = tall_two_fork(&sub)?;
                pull_back(f, &h, q, fork, Forbidden::F1)?
            }
        }
    };
    if !witness.verify(f) {
        return Err(Error::Precondition(format!(
            "constructed {} witness failed verification",
            witness.which
        )));
    }
    Ok(witness)
}

/// The `F1` map on a rooted frame whose root cluster sees two maxima while
/// every other world sees exactly one, and which has depth at least 3.
fn tall_two_fork(g: &Frame) -> Result<PMorphism> {
    let q = g.root().ok_or(Error::NotRooted)?;
    let cq = g.cluster(q);
    let max = g.maximal_points();
    let y = (g.all() - cq - max)
        .first()
        .ok_or_else(|| Error::Precondition("generated frame has depth below 3".into()))?;
    let n1 = (g.up(y) & max).first().expect("S4.1");
    let tall = g.down(n1) - cq - WorldSet::singleton(n1);
    let map = g
        .worlds()
        .map(|x| {
            if x == n1 {
                F1_M1
            } else if tall.contains(x) {
                F1_V
            } else if cq.contains(x) {
                F1_R
            } else {
                F1_M2
            }
        })
        .collect();
    Ok(PMorphism::new(g.clone(), Forbidden::F1.frame(), map))
}

/// Lifts a map `fork` from the subframe of `h.target` generated by `q` to a
/// witness on the subframe of `f` generated by the least preimage of `q`.
fn pull_back(f: &Frame, h: &PMorphism, q: World, fork: PMorphism, which: Forbidden) -> Result<ForbiddenWitness> {
    let g = (0..f.size())
        .find(|&w| h.map[w] == q)
        .ok_or_else(|| Error::Precondition("collapse is not onto".into()))?;
    let (restricted, embedding, _) = h.restrict(g)?;
    let morphism = restricted.then(&fork)?;
    Ok(ForbiddenWitness { which, generator: g, embedding, morphism })
}

fn crisscross(f: &Frame, a: World, b: World) -> Result<ForbiddenWitness> {
    let max = f.maximal_points();
    let ma = f.up(a) & max;
    let mb = f.up(b) & max;

    if f.cluster(a) == f.cluster(b) {
        let (sub, emb) = f.generated_subframe(a)?;
        let pos = |w: World| emb.iter().position(|&x| x == w).expect("in ↑a");
        let m = ma.first().expect("two maxima");
        let mut map = vec![0; sub.size()];
        for w in f.up(a).iter() {
            map[pos(w)] = if w == a {
                0
            } else if f.cluster(a).contains(w) {
                1
            } else if w == m {
                2
            } else {
                3
            };
        }
        let morphism = PMorphism::new(sub, Forbidden::F2.frame(), map);
        return Ok(ForbiddenWitness { which: Forbidden::F2, generator: a, embedding: emb, morphism });
    }

    let common = ma & mb;
    let (n1, n2, big1, big2) = match common.len() {
        0 => {
            let mut it = ma.iter();
            let mut jt = mb.iter();
            (it.next(), it.next(), jt.next(), jt.next())
        }
        1 => {
            let c = common.first();
            (c, (ma - mb).first(), c, (mb - ma).first())
        }
        _ => {
            let mut it = common.iter();
            let (x, y) = (it.next(), it.next());
            (x, y, x, y)
        }
    };
    let (n1, n2, big1, big2) = match (n1, n2, big1, big2) {
        (Some(a), Some(b), Some(c), Some(d)) => (a, b, c, d),
        _ => return Err(Error::Precondition("crisscross needs two maxima above each point".into())),
    };
    let _ = big2;

    // Two maximal points: {n1, N1} and everything else.
    let first: WorldSet = [n1, big1].into_iter().collect();
    let (f1, h1) = collapse(f, &[first, max - first])?;
    let x1 = h1.map[n1];
    let x2 = h1.map[n2];

    // Worlds missing one maximal point are sent to the other one.
    let blocks: Vec<WorldSet> = [f1.all() - f1.down(x1), f1.all() - f1.down(x2)]
        .into_iter()
        .filter(|blk| !blk.is_empty())
        .collect();
    let (f2, h2) = collapse(&f1, &blocks)?;
    let h = h1.then(&h2)?;

    // Merge the depth-2 worlds outside the cluster of a.
    let a2 = h.map[a];
    let depths = f2.depths();
    let others: WorldSet = f2
        .worlds()
        .filter(|&w| depths[w] == 2 && !f2.cluster(a2).contains(w))
        .collect();
    let (f3, h3) = collapse(&f2, &[others])?;
    let h = h.then(&h3)?;

    let a3 = h.map[a];
    let b3 = h.map[b];
    let top = f3.maximal_points();
    let m1 = h.map[n1];
    let m2 = (top - WorldSet::singleton(m1))
        .first()
        .ok_or_else(|| Error::Precondition("collapse lost a maximal point".into()))?;
    let q = f3
        .quasi_maximal_in(f3.down(a3) & f3.down(b3))
        .first()
        .expect("the root lies below both");
    let (sub, emb) = f3.generated_subframe(q)?;
    let cq = f3.cluster(q);
    let map = emb
        .iter()
        .map(|&x| {
            if x == m1 {
                3
            } else if x == m2 {
                4
            } else if cq.contains(x) {
                0
            } else if f3.le(x, a3) {
                1
            } else {
                2
            }
        })
        .collect();
    let fork = PMorphism::new(sub, Forbidden::F3.frame(), map);
    pull_back(f, &h, q, fork, Forbidden::F3)
}
