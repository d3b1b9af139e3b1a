//! Fine–Jankov frame formulas and the one-generator check.

use crate::error::{Error, Result};
use crate::formula::{var, Formula};
use crate::frame::{Frame, World, WorldSet};

/// Name of the variable describing world `w`.
pub fn world_var(w: World) -> String {
    format!("p{w}")
}

/// The diagram `δ_f` of a rooted frame.
///
/// One boxed clause per world `u` fixes which variables may hold together
/// with `p_u` and which worlds are (in)visible from it.
pub fn diagram(f: &Frame) -> Result<Formula> {
    let root = f.root().ok_or(Error::NotRooted)?;
    let p = |w: World| var(world_var(w));
    let mut parts = vec![p(root), Formula::disj(f.worlds().map(p)).boxed()];
    for u in f.worlds() {
        let mut clause = Vec::new();
        clause.extend(f.worlds().filter(|&w| w != u).map(|w| p(w).not()));
        for w in f.worlds() {
            if f.le(u, w) {
                clause.push(p(w).diamond());
            } else {
                clause.push(p(w).diamond().not());
            }
        }
        parts.push(p(u).implies(Formula::conj(clause)).boxed());
    }
    Ok(Formula::conj(parts))
}

/// `χ_f = δ_f → ¬p_root`.
///
/// A frame `g` validates `χ_f` iff `f` is not a p-morphic image of a
/// point-generated subframe of `g`.
pub fn fine_jankov(f: &Frame) -> Result<Formula> {
    let root = f.root().ok_or(Error::NotRooted)?;
    Ok(diagram(f)?.implies(var(world_var(root)).not()))
}

/// Whether closing `seed` under complement, intersection and `↓` yields
/// every subset of `f`, i.e. the valuation `p ↦ seed` generates the full
/// powerset algebra of the frame.
pub fn is_generator(f: &Frame, seed: WorldSet) -> bool {
    let all = f.all();
    let mut known: Vec<WorldSet> = vec![seed];
    let mut seen = std::collections::HashSet::from([seed]);
    let mut i = 0;
    while i < known.len() {
        let a = known[i];
        let mut fresh = vec![all - a, f.down_set(a)];
        for &b in &known[..=i] {
            fresh.push(a & b);
        }
        for x in fresh {
            if seen.insert(x) {
                known.push(x);
            }
        }
        i += 1;
    }
    // The algebra is atomic, so it is the full powerset iff every
    // singleton is present.
    f.worlds().all(|w| seen.contains(&WorldSet::singleton(w)))
}
