//! Kripke semantics on finite frames and brute-force validity.
//!
//! Validity is decided by enumerating every valuation of the formula's
//! variables. Valuations are numbered so that bit `v * size + w` of the
//! index says whether world `w` is in the extension of the `v`-th variable
//! (variables in name order); the least refuting index is reported.
//! Internally 64 valuations are evaluated at once, one per bit of a `u64`.

use std::collections::{BTreeMap, HashMap};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::formula::Formula;
use crate::frame::{Frame, World, WorldSet};

/// Default cap on the number of valuations [`frame_validates`] will try.
pub const DEFAULT_BUDGET: u64 = 1 << 28;

/// Variable assignment. Variables not listed are false everywhere.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Valuation(pub BTreeMap<String, WorldSet>);

impl Valuation {
    pub fn new() -> Self {
        Valuation::default()
    }

    pub fn with(mut self, name: impl Into<String>, worlds: impl IntoIterator<Item = World>) -> Self {
        self.0.insert(name.into(), worlds.into_iter().collect());
        self
    }

    pub fn get(&self, name: &str) -> WorldSet {
        self.0.get(name).copied().unwrap_or_default()
    }

    /// Checks every assigned set against the frame.
    pub fn check(&self, f: &Frame) -> Result<()> {
        for set in self.0.values() {
            if let Some(index) = (*set - f.all()).first() {
                return Err(Error::WorldOutOfRange { index, size: f.size() });
            }
        }
        Ok(())
    }
}

/// A frame with a valuation.
#[derive(Clone, Debug)]
pub struct Model {
    pub frame: Frame,
    pub valuation: Valuation,
}

impl Model {
    pub fn new(frame: Frame, valuation: Valuation) -> Result<Model> {
        valuation.check(&frame)?;
        Ok(Model { frame, valuation })
    }

    /// The set of worlds where `phi` holds.
    pub fn extension(&self, phi: &Formula) -> WorldSet {
        extension(&self.frame, &self.valuation, phi)
    }
}

/// `[φ]` in the model `(f, val)`: `[□φ] = {w : ↑w ⊆ [φ]}`, `[◇φ] = ↓[φ]`.
pub fn extension(f: &Frame, val: &Valuation, phi: &Formula) -> WorldSet {
    let all = f.all();
    match phi {
        Formula::Var(v) => val.get(v) & all,
        Formula::Top => all,
        Formula::Bot => WorldSet::EMPTY,
        Formula::Not(a) => all - extension(f, val, a),
        Formula::And(a, b) => extension(f, val, a) & extension(f, val, b),
        Formula::Or(a, b) => extension(f, val, a) | extension(f, val, b),
        Formula::Implies(a, b) => (all - extension(f, val, a)) | extension(f, val, b),
        Formula::Box(a) => {
            let inner = extension(f, val, a);
            f.worlds().filter(|&w| f.up(w).is_subset(inner)).collect()
        }
        Formula::Diamond(a) => f.down_set(extension(f, val, a)),
    }
}

/// A valuation together with a world where the formula fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub valuation: Valuation,
    pub world: World,
}

/// `f ⊨ φ` under the default budget.
pub fn frame_validates(f: &Frame, phi: &Formula) -> Result<bool> {
    Ok(find_refutation(f, phi, DEFAULT_BUDGET)?.is_none())
}

/// The least refuting valuation of `phi` on `f`, if any.
pub fn find_refutation(f: &Frame, phi: &Formula, budget: u64) -> Result<Option<Refutation>> {
    let program = Program::compile(phi);
    let n = f.size();
    let bits = program.vars.len() * n;
    if bits >= 64 || (1u64 << bits) > budget {
        return Err(Error::BudgetExceeded { bits: bits as u32, budget });
    }
    let ups: Vec<WorldSet> = f.worlds().map(|w| f.up(w)).collect();
    let found = if bits <= 6 {
        let mut scratch = Scratch::new(&program, n);
        scratch.run_batch(&program, &ups, 0, bits).map(|(lane, w)| (lane, w))
    } else {
        let batches = 1u64 << (bits - 6);
        const CHUNK: u64 = 256;
        let chunks = batches.div_ceil(CHUNK);
        let scan = |scratch: &mut Scratch, c: u64| {
            let end = ((c + 1) * CHUNK).min(batches);
            (c * CHUNK..end).find_map(|b| {
                scratch
                    .run_batch(&program, &ups, b << 6, bits)
                    .map(|(lane, w)| ((b << 6) | lane, w))
            })
        };
        if chunks <= 4 {
            let mut scratch = Scratch::new(&program, n);
            (0..chunks).find_map(|c| scan(&mut scratch, c))
        } else {
            (0..chunks)
                .into_par_iter()
                .map_init(|| Scratch::new(&program, n), |s, c| scan(s, c))
                .find_first(|r| r.is_some())
                .flatten()
        }
    };
    Ok(found.map(|(index, world)| Refutation { valuation: program.valuation(index, n), world }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    Atom(usize),
    Top,
    Bot,
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Box(usize),
    Diamond(usize),
}

/// A formula flattened to a hash-consed DAG in evaluation order.
struct Program {
    vars: Vec<String>,
    ops: Vec<Op>,
}

impl Program {
    fn compile(phi: &Formula) -> Program {
        let vars: Vec<String> = phi.vars().into_iter().collect();
        let index: HashMap<&str, usize> =
            vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut ops = Vec::new();
        let mut memo = HashMap::new();
        fn go(
            phi: &Formula,
            index: &HashMap<&str, usize>,
            ops: &mut Vec<Op>,
            memo: &mut HashMap<Op, usize>,
        ) -> usize {
            let op = match phi {
                Formula::Var(v) => Op::Atom(index[v.as_str()]),
                Formula::Top => Op::Top,
                Formula::Bot => Op::Bot,
                Formula::Not(a) => Op::Not(go(a, index, ops, memo)),
                Formula::Box(a) => Op::Box(go(a, index, ops, memo)),
                Formula::Diamond(a) => Op::Diamond(go(a, index, ops, memo)),
                Formula::And(a, b) => Op::And(go(a, index, ops, memo), go(b, index, ops, memo)),
                Formula::Or(a, b) => Op::Or(go(a, index, ops, memo), go(b, index, ops, memo)),
                Formula::Implies(a, b) => {
                    Op::Implies(go(a, index, ops, memo), go(b, index, ops, memo))
                }
            };
            *memo.entry(op).or_insert_with(|| {
                ops.push(op);
                ops.len() - 1
            })
        }
        go(phi, &index, &mut ops, &mut memo);
        Program { vars, ops }
    }

    fn valuation(&self, index: u64, n: usize) -> Valuation {
        let mut map = BTreeMap::new();
        for (v, name) in self.vars.iter().enumerate() {
            let set: WorldSet = (0..n).filter(|w| index >> (v * n + w) & 1 == 1).collect();
            map.insert(name.clone(), set);
        }
        Valuation(map)
    }
}

/// Lane masks for the low six valuation bits.
const LANE: [u64; 6] = [
    0xAAAA_AAAA_AAAA_AAAA,
    0xCCCC_CCCC_CCCC_CCCC,
    0xF0F0_F0F0_F0F0_F0F0,
    0xFF00_FF00_FF00_FF00,
    0xFFFF_0000_FFFF_0000,
    0xFFFF_FFFF_0000_0000,
];

struct Scratch {
    n: usize,
    values: Vec<u64>,
}

impl Scratch {
    fn new(program: &Program, n: usize) -> Scratch {
        Scratch { n, values: vec![0; program.ops.len() * n] }
    }

    /// Evaluates the 64 valuations `base..base + 64` (fewer when `bits < 6`)
    /// and returns the first failing lane and its least failing world.
    fn run_batch(&mut self, program: &Program, ups: &[WorldSet], base: u64, bits: usize) -> Option<(u64, World)> {
        let n = self.n;
        let valid = if bits >= 6 { u64::MAX } else { (1u64 << (1u64 << bits)) - 1 };
        for (i, op) in program.ops.iter().enumerate() {
            let (done, rest) = self.values.split_at_mut(i * n);
            let out = &mut rest[..n];
            let at = |j: usize, w: usize| done[j * n + w];
            match *op {
                Op::Atom(v) => {
                    for (w, slot) in out.iter_mut().enumerate() {
                        let bit = v * n + w;
                        *slot = if bit < 6 {
                            LANE[bit]
                        } else if base >> bit & 1 == 1 {
                            u64::MAX
                        } else {
                            0
                        };
                    }
                }
                Op::Top => out.fill(u64::MAX),
                Op::Bot => out.fill(0),
                Op::Not(a) => {
                    for (w, slot) in out.iter_mut().enumerate() {
                        *slot = !at(a, w);
                    }
                }
                Op::And(a, b) => {
                    for (w, slot) in out.iter_mut().enumerate() {
                        *slot = at(a, w) & at(b, w);
                    }
                }
                Op::Or(a, b) => {
                    for (w, slot) in out.iter_mut().enumerate() {
                        *slot = at(a, w) | at(b, w);
                    }
                }
                Op::Implies(a, b) => {
                    for (w, slot) in out.iter_mut().enumerate() {
                        *slot = !at(a, w) | at(b, w);
                    }
                }
                Op::Box(a) => {
                    for (w, slot) in out.iter_mut().enumerate() {
                        *slot = ups[w].iter().fold(u64::MAX, |acc, u| acc & at(a, u));
                    }
                }
                Op::Diamond(a) => {
                    for (w, slot) in out.iter_mut().enumerate() {
                        *slot = ups[w].iter().fold(0, |acc, u| acc | at(a, u));
                    }
                }
            }
        }
        let root = &self.values[(program.ops.len() - 1) * n..];
        let failing = root.iter().fold(0u64, |acc, &m| acc | !m) & valid;
        if failing == 0 {
            return None;
        }
        let lane = failing.trailing_zeros() as u64;
        let world = (0..n).find(|&w| root[w] >> lane & 1 == 0).expect("some world fails");
        Some((lane, world))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{axiom, parse, var, AxiomName};
    use crate::roach::{builtin, Builtin};

    fn f(text: &str) -> Formula {
        parse(text).unwrap()
    }

    #[test]
    fn diamond_is_downclosure_in_f1() {
        let f1 = builtin(Builtin::F1).unwrap();
        let m1 = f1.world_named("m1").unwrap();
        let val = Valuation::new().with("p", [m1]);
        let got = extension(&f1, &val, &f("<>p"));
        assert_eq!(got, f1.down(m1));
        let names: Vec<String> = got.iter().map(|w| f1.label(w)).collect();
        assert_eq!(names, vec!["r", "v", "m1"]);
    }

    #[test]
    fn top_and_box_on_a_chain() {
        let c = builtin(Builtin::Chain(2)).unwrap();
        assert_eq!(extension(&c, &Valuation::new(), &Formula::Top), c.all());
        let val = Valuation::new().with("p", [1]);
        assert_eq!(extension(&c, &val, &f("[]p")), WorldSet::singleton(1));
    }

    #[test]
    fn geach_fails_on_the_two_fork() {
        let fork = builtin(Builtin::TwoFork).unwrap();
        let r = find_refutation(&fork, &axiom(AxiomName::Ga).unwrap(), DEFAULT_BUDGET)
            .unwrap()
            .unwrap();
        assert_eq!(r.world, 0);
        assert_eq!(r.valuation.get("p").len(), 1);
        assert!(!extension(&fork, &r.valuation, &axiom(AxiomName::Ga).unwrap()).contains(0));
    }

    #[test]
    fn mckinsey_holds_on_s41_frames() {
        for b in [Builtin::F1, Builtin::F2, Builtin::F3, Builtin::TwoFork, Builtin::T(3)] {
            assert!(frame_validates(&builtin(b).unwrap(), &axiom(AxiomName::Ma).unwrap()).unwrap());
        }
    }

    #[test]
    fn bd_on_a_chain() {
        for n in 1..=4 {
            let t = builtin(Builtin::T(n)).unwrap();
            let (chain, _) = t.generated_subframe(t.world_named("w1").unwrap()).unwrap();
            assert_eq!(chain.size(), n);
            assert!(frame_validates(&chain, &axiom(AxiomName::Bd(n)).unwrap()).unwrap());
        }
    }

    #[test]
    fn least_refutation_matches_naive_scan() {
        // Compare the bit-sliced search with a direct loop over valuations.
        let frames = [builtin(Builtin::F1).unwrap(), builtin(Builtin::F2).unwrap()];
        let formulas = ["[]<>p -> <>[]q", "p -> []p", "<>[]p -> []<>p", "<>(p & ~q) | []q"];
        for fr in &frames {
            for text in formulas {
                let phi = f(text);
                let vars: Vec<String> = phi.vars().into_iter().collect();
                let n = fr.size();
                let mut expected = None;
                'outer: for index in 0u64..1 << (vars.len() * n) {
                    let mut val = Valuation::new();
                    for (v, name) in vars.iter().enumerate() {
                        val = val.with(name.clone(), (0..n).filter(|w| index >> (v * n + w) & 1 == 1));
                    }
                    let ext = extension(fr, &val, &phi);
                    if let Some(w) = (fr.all() - ext).first() {
                        expected = Some(Refutation { valuation: val, world: w });
                        break 'outer;
                    }
                }
                assert_eq!(find_refutation(fr, &phi, DEFAULT_BUDGET).unwrap(), expected, "{text}");
            }
        }
    }

    #[test]
    fn large_search_uses_the_parallel_path() {
        // 4 variables over 5 worlds: 2^20 valuations.
        let t = builtin(Builtin::T(3)).unwrap();
        assert!(!frame_validates(&t, &axiom(AxiomName::Bd(3)).unwrap()).unwrap());
        assert!(frame_validates(&t, &axiom(AxiomName::Bd(4)).unwrap()).unwrap());
    }

    #[test]
    fn budget_is_enforced() {
        let t = builtin(Builtin::T(3)).unwrap();
        let err = find_refutation(&t, &axiom(AxiomName::Bd(4)).unwrap(), 1 << 10).unwrap_err();
        assert_eq!(err, Error::BudgetExceeded { bits: 20, budget: 1 << 10 });
    }

    #[test]
    fn missing_variables_read_as_empty() {
        let c = builtin(Builtin::Chain(2)).unwrap();
        assert_eq!(extension(&c, &Valuation::new(), &var("q")), WorldSet::EMPTY);
    }

    #[test]
    fn valuations_are_checked() {
        let c = builtin(Builtin::Chain(2)).unwrap();
        assert!(Model::new(c, Valuation::new().with("p", [5])).is_err());
    }
}
