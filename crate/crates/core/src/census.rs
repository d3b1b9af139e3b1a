//! Exhaustive and randomized checks of the finite-frame results, one
//! report per criterion. The acceptance tests and `roach selftest` both run
//! these.

use std::time::Instant;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::construct::roach_to_willow;
use crate::decide::{decide_lr2, lr2_axioms, Verdict};
use crate::enumerate::{enumerate_up_to, FrameFilter};
use crate::error::Result;
use crate::formula::{axiom, AxiomName};
use crate::frame::{Frame, World};
use crate::jankov::fine_jankov;
use crate::morphism::{find_onto_p_morphism, is_permissible, PMorphism};
use crate::ordinal::{classify_beta_logic, tear_off, Ordinal};
use crate::roach::{
    builtin, is_2_roach, is_willow_tree, minimal_forbidden_witness, splitting_certificate, Builtin, Forbidden,
};
use crate::semantics::frame_validates;

/// Seed for every randomized criterion.
pub const SEED: u64 = 0x5EED_2_0AC4;

/// Criterion ids in run order.
pub const CRITERIA: [&str; 10] = [
    "char-R2",
    "fine-jankov",
    "minimality",
    "unraveling",
    "closure",
    "hierarchy",
    "bd-depth",
    "decide",
    "ordinal-table",
    "cnf-reconstruction",
];

/// Deliberate defects for checking that the census notices them.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mutation {
    #[default]
    None,
    /// Permissibility accepts maps that fail the forth condition.
    SkipForth,
}

#[derive(Clone, Debug, Serialize)]
pub struct CriterionReport {
    pub id: &'static str,
    pub passed: bool,
    /// Number of individual cases examined.
    pub checked: usize,
    pub failure_count: usize,
    /// The first few failing cases.
    pub failures: Vec<String>,
    pub elapsed_ms: u128,
}

const SHOWN_FAILURES: usize = 5;

#[derive(Default)]
struct Tally {
    checked: usize,
    failure_count: usize,
    failures: Vec<String>,
}

impl Tally {
    fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.checked += 1;
        if !ok {
            self.failure_count += 1;
            if self.failures.len() < SHOWN_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    fn error(&mut self, what: impl std::fmt::Display) {
        self.check(false, || what.to_string());
    }
}

/// Runs every criterion, or only `only` when given.
pub fn run(only: Option<&str>, mutation: Mutation) -> Result<Vec<CriterionReport>> {
    if let Some(id) = only {
        if !CRITERIA.iter().any(|c| c.eq_ignore_ascii_case(id)) {
            return Err(crate::Error::InvalidParameter(format!(
                "unknown criterion `{id}`; expected one of {}",
                CRITERIA.join(", ")
            )));
        }
    }
    Ok(CRITERIA
        .iter()
        .filter(|c| only.map_or(true, |id| c.eq_ignore_ascii_case(id)))
        .map(|&id| run_one(id, mutation))
        .collect())
}

/// Runs one criterion by id.
pub fn run_one(id: &'static str, mutation: Mutation) -> CriterionReport {
    let start = Instant::now();
    let mut tally = Tally::default();
    let outcome = match id {
        "char-R2" => char_r2(&mut tally),
        "fine-jankov" => fine_jankov_contract(&mut tally, mutation),
        "minimality" => minimality(&mut tally),
        "unraveling" => unraveling(&mut tally),
        "closure" => closure(&mut tally),
        "hierarchy" => hierarchy(&mut tally),
        "bd-depth" => bd_depth(&mut tally),
        "decide" => decide_spot_checks(&mut tally),
        "ordinal-table" => ordinal_table(&mut tally),
        "cnf-reconstruction" => cnf_reconstruction(&mut tally),
        other => Err(crate::Error::InvalidParameter(format!("unknown criterion `{other}`"))),
    };
    if let Err(e) = outcome {
        tally.error(format!("aborted: {e}"));
    }
    CriterionReport {
        id,
        passed: tally.failure_count == 0 && tally.checked > 0,
        checked: tally.checked,
        failure_count: tally.failure_count,
        failures: tally.failures,
        elapsed_ms: start.elapsed().as_millis(),
    }
}

fn forbidden_frames() -> Vec<(Forbidden, Frame)> {
    Forbidden::ALL.iter().map(|&w| (w, w.frame())).collect()
}

fn char_r2(tally: &mut Tally) -> Result<()> {
    let forbidden = forbidden_frames();
    for f in enumerate_up_to(5, FrameFilter::S41Rooted)? {
        let roach = is_2_roach(&f)?.is_some();
        let mut permitted = Vec::new();
        for (which, g) in &forbidden {
            if is_permissible(g, &f)?.is_some() {
                permitted.push(*which);
            }
        }
        tally.check(roach == permitted.is_empty(), || {
            format!("{f:?}: 2-roach = {roach}, permissible = {permitted:?}")
        });
    }
    Ok(())
}

/// Permissibility with the forth condition left out of the map check, by
/// exhaustive search over all onto maps.
fn permissible_skipping_forth(config: &Frame, host: &Frame) -> Result<bool> {
    for g in host.worlds() {
        let (sub, _) = host.generated_subframe(g)?;
        let n = sub.size();
        let k = config.size();
        let mut map = vec![0; n];
        loop {
            let p = PMorphism::new(sub.clone(), config.clone(), map.clone());
            let onto = p.image() == config.all();
            let back = sub.worlds().all(|w| {
                config.up(map[w]).iter().all(|v| sub.up(w).iter().any(|u| map[u] == v))
            });
            if onto && back {
                return Ok(true);
            }
            // Next map in odometer order.
            let mut i = 0;
            while i < n && map[i] + 1 == k {
                map[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
            map[i] += 1;
        }
    }
    Ok(false)
}

fn fine_jankov_contract(tally: &mut Tally, mutation: Mutation) -> Result<()> {
    let configs = enumerate_up_to(3, FrameFilter::Rooted)?;
    let hosts = enumerate_up_to(3, FrameFilter::All)?;
    for f in &configs {
        let chi = fine_jankov(f)?;
        for g in &hosts {
            let valid = frame_validates(g, &chi)?;
            let permissible = match mutation {
                Mutation::None => is_permissible(f, g)?.is_some(),
                Mutation::SkipForth => permissible_skipping_forth(f, g)?,
            };
            tally.check(valid != permissible, || {
                format!("config {f:?}, host {g:?}: chi valid = {valid}, permissible = {permissible}")
            });
        }
    }
    Ok(())
}

fn minimality(tally: &mut Tally) -> Result<()> {
    for f in enumerate_up_to(5, FrameFilter::S41Rooted)? {
        if is_2_roach(&f)?.is_some() {
            continue;
        }
        match minimal_forbidden_witness(&f) {
            Ok(w) => tally.check(w.verify(&f) && w.morphism.check(true).is_ok(), || {
                format!("{f:?}: witness for {} does not verify", w.which)
            }),
            Err(e) => tally.error(format!("{f:?}: {e}")),
        }
    }
    Ok(())
}

/// A random 2-roach on `n` worlds: root 0, a random body, the splitting
/// point and the maximal points last. Candidates that fail the recognizer
/// are redrawn.
pub fn random_two_roach(rng: &mut impl Rng, n: usize) -> Frame {
    assert!(n >= 4, "random 2-roaches need at least 4 worlds");
    loop {
        let k = rng.gen_range(1..=3.min(n - 3));
        let s = n - 1 - k;
        let maxima: Vec<World> = (s + 1..n).collect();
        let mut pairs: Vec<(World, World)> = maxima.iter().map(|&m| (s, m)).collect();
        pairs.push((0, s));
        for i in 0..s {
            pairs.push((0, i));
            for j in i + 1..s {
                if rng.gen_bool(0.35) {
                    pairs.push((i, j));
                }
            }
            if i > 1 && rng.gen_bool(0.1) {
                pairs.push((i, rng.gen_range(1..i)));
            }
            if rng.gen_bool(0.5) {
                pairs.push((i, s));
            } else {
                pairs.push((i, *maxima.choose(rng).expect("k >= 1")));
            }
        }
        let f = Frame::from_pairs(n, &pairs).expect("indices in range");
        if matches!(is_2_roach(&f), Ok(Some(_))) {
            return f;
        }
    }
}

fn check_willow(tally: &mut Tally, f: &Frame) -> Result<()> {
    match roach_to_willow(f) {
        Ok(r) => {
            let willow = is_willow_tree(&r.tree)?.is_some();
            let onto = r.morphism.source == r.tree && r.morphism.target == *f && r.morphism.check(true).is_ok();
            tally.check(willow && onto, || format!("{f:?}: willow = {willow}, onto p-morphism = {onto}"));
        }
        Err(e) => tally.error(format!("{f:?}: {e}")),
    }
    Ok(())
}

fn unraveling(tally: &mut Tally) -> Result<()> {
    for f in enumerate_up_to(5, FrameFilter::TwoRoach)? {
        check_willow(tally, &f)?;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..50 {
        let n = rng.gen_range(6..=7);
        let f = random_two_roach(&mut rng, n);
        check_willow(tally, &f)?;
    }
    Ok(())
}

fn closure(tally: &mut Tally) -> Result<()> {
    let roaches = enumerate_up_to(5, FrameFilter::TwoRoach)?;
    let targets = enumerate_up_to(4, FrameFilter::Rooted)?;
    for f in &roaches {
        for w in f.worlds() {
            let (sub, _) = f.generated_subframe(w)?;
            tally.check(is_2_roach(&sub)?.is_some(), || format!("{f:?}: subframe at {w} is not a 2-roach"));
        }
        for g in targets.iter().filter(|g| g.size() <= f.size()) {
            if find_onto_p_morphism(f, g)?.is_some() {
                let ok = g.require_rooted_s41().is_ok() && is_2_roach(g)?.is_some();
                tally.check(ok, || format!("{f:?} maps onto {g:?}, which is not a 2-roach"));
            }
        }
    }
    Ok(())
}

fn hierarchy(tally: &mut Tally) -> Result<()> {
    for n in 1..=3 {
        let t = builtin(Builtin::T(n + 1))?;
        let below = splitting_certificate(&t, n)?;
        tally.check(below.is_none(), || format!("T{} has an {n}-roach certificate at {:?}", n + 1, below));
        let at = splitting_certificate(&t, n + 1)?;
        tally.check(at.is_some(), || {
            format!("T{} has no {}-roach certificate (depth of its root is {})", n + 1, n + 1, t.depth(0))
        });
    }
    let g = builtin(Builtin::G)?;
    for n in 1..=5 {
        let cert = splitting_certificate(&g, n)?;
        tally.check(cert.is_none(), || format!("G has an {n}-roach certificate"));
    }
    Ok(())
}

fn bd_depth(tally: &mut Tally) -> Result<()> {
    let ma = axiom(AxiomName::Ma)?;
    let ga = axiom(AxiomName::Ga)?;
    let bds: Vec<_> = (1..=4).map(|n| axiom(AxiomName::Bd(n))).collect::<Result<_>>()?;
    for f in enumerate_up_to(5, FrameFilter::Rooted)? {
        let depth = f.frame_depth().expect("nonempty frame");
        for (i, bd) in bds.iter().enumerate() {
            let n = i + 1;
            let valid = frame_validates(&f, bd)?;
            tally.check(valid == (depth <= n), || format!("{f:?}: bd{n} valid = {valid}, depth = {depth}"));
        }
        let both = frame_validates(&f, &ma)? && frame_validates(&f, &ga)?;
        let s412 = f.classify().s412;
        tally.check(both == s412, || format!("{f:?}: ma and ga valid = {both}, S4.1.2 = {s412}"));
    }
    Ok(())
}

fn decide_spot_checks(tally: &mut Tally) -> Result<()> {
    let refuted = |phi, bound| -> Result<bool> { Ok(decide_lr2(&phi, bound)?.is_refuted()) };
    tally.check(refuted(axiom(AxiomName::Ga)?, 3)?, || "ga is not refuted up to 3 worlds".into());
    tally.check(refuted(axiom(AxiomName::Bd(2))?, 4)?, || "bd2 is not refuted up to 4 worlds".into());
    let axioms = lr2_axioms();
    for (which, chi) in Forbidden::ALL.iter().zip(&axioms[1..]) {
        let v = decide_lr2(chi, 5)?;
        tally.check(matches!(v, Verdict::NoCountermodelUpTo(5)), || format!("chi_{which} is refuted: {v:?}"));
    }
    let v = decide_lr2(&axioms[0], 5)?;
    tally.check(matches!(v, Verdict::NoCountermodelUpTo(5)), || format!("ma is refuted: {v:?}"));
    Ok(())
}

/// `(ordinal, expected logic)` pairs for the golden table.
pub fn ordinal_golden_table() -> Vec<(String, String)> {
    let mut rows = vec![("w".to_string(), "L_1 = S4.1.2".to_string())];
    for m in 2..=4 {
        rows.push((format!("w^{m}"), format!("L_{m}")));
    }
    rows.push(("2".into(), "S4.Grz_1".into()));
    for n in 2..=4 {
        let base = if n == 2 { "w".to_string() } else { format!("w^{}", n - 1) };
        rows.push((format!("{base} + 1"), format!("S4.Grz_{n}")));
    }
    rows.push(("w^w + 1".into(), "S4.Grz".into()));
    for m in 1..=3 {
        rows.push((format!("w^w + w^{m}"), format!("S4.Grz ∩ L_{m}")));
    }
    for n in 2..=4 {
        for m in 1..n {
            rows.push((format!("w^{} + w^{m}", n - 1), format!("S4.Grz_{n} ∩ L_{m}")));
        }
    }
    rows.push(("w^w".into(), "L_inf (conjectured)".into()));
    rows
}

fn ordinal_table(tally: &mut Tally) -> Result<()> {
    for (text, expected) in ordinal_golden_table() {
        let gamma: Ordinal = text.parse()?;
        let got = classify_beta_logic(&gamma)?.to_string();
        tally.check(got == expected, || format!("{text}: got `{got}`, expected `{expected}`"));
    }
    Ok(())
}

/// A random nonzero ordinal whose exponents nest at most `depth` levels.
pub fn random_ordinal(rng: &mut impl Rng, depth: u32) -> Ordinal {
    let terms = rng.gen_range(1..=3);
    let mut parts: Vec<(Ordinal, u64)> = (0..terms)
        .map(|_| {
            let e = if depth == 0 || rng.gen_bool(0.4) {
                Ordinal::nat(rng.gen_range(0..4))
            } else {
                random_ordinal(rng, depth - 1)
            };
            (e, rng.gen_range(1..=4))
        })
        .collect();
    parts.sort_by(|a, b| b.0.cmp(&a.0));
    parts.dedup_by(|a, b| a.0 == b.0);
    Ordinal::from_terms(parts)
}

/// A random ordinal with a nonzero least exponent.
pub fn random_noncompact_ordinal(rng: &mut impl Rng, depth: u32) -> Ordinal {
    loop {
        let g = random_ordinal(rng, depth);
        if !g.is_compact() {
            return g;
        }
    }
}

fn cnf_reconstruction(tally: &mut Tally) -> Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for _ in 0..1000 {
        let gamma = random_noncompact_ordinal(&mut rng, 3);
        let split = tear_off(&gamma)?;
        let back = (split.rest.clone() + Ordinal::one()) + Ordinal::omega_pow(split.alpha1.clone());
        tally.check(back == gamma, || format!("{gamma}: rebuilt as {back}"));
    }
    Ok(())
}
