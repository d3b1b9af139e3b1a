//! The logic of 2-roaches: its axioms and a bounded countermodel search.

use crate::enumerate::{enumerate_frames, FrameFilter, DEFAULT_CEILING};
use crate::error::{Error, Result};
use crate::formula::{axiom, AxiomName, Formula};
use crate::frame::{Frame, World};
use crate::jankov::fine_jankov;
use crate::roach::Forbidden;
use crate::semantics::{find_refutation, Model, DEFAULT_BUDGET};

/// Outcome of [`decide_lr2`].
#[derive(Clone, Debug)]
pub enum Verdict {
    /// A 2-roach and a valuation falsifying the formula at `world`.
    Refuted { model: Model, world: World },
    /// No 2-roach with at most `bound` worlds refutes the formula. This is
    /// not a proof of validity.
    NoCountermodelUpTo(usize),
}

impl Verdict {
    pub fn is_refuted(&self) -> bool {
        matches!(self, Verdict::Refuted { .. })
    }
}

/// `[ma, χ_F1, χ_F2, χ_F3]`, over an S4 base.
pub fn lr2_axioms() -> Vec<Formula> {
    let mut out = vec![axiom(AxiomName::Ma).expect("ma is fixed")];
    out.extend(
        Forbidden::ALL
            .iter()
            .map(|which| fine_jankov(&which.frame()).expect("forbidden frames are rooted")),
    );
    out
}

/// Searches 2-roaches by increasing size, in canonical order within a size,
/// for one refuting `phi`.
pub fn decide_lr2(phi: &Formula, bound: usize) -> Result<Verdict> {
    decide_lr2_with_budget(phi, bound, DEFAULT_BUDGET)
}

pub fn decide_lr2_with_budget(phi: &Formula, bound: usize, budget: u64) -> Result<Verdict> {
    if bound > DEFAULT_CEILING {
        return Err(Error::CeilingExceeded { size: bound, ceiling: DEFAULT_CEILING });
    }
    for n in 1..=bound {
        for frame in enumerate_frames(n, FrameFilter::TwoRoach)?.iter() {
            if let Some(r) = find_refutation(frame, phi, budget)? {
                let model = Model::new(frame.clone(), r.valuation)?;
                return Ok(Verdict::Refuted { model, world: r.world });
            }
        }
    }
    Ok(Verdict::NoCountermodelUpTo(bound))
}

/// Re-checks a refutation independently of the search.
pub fn recheck(phi: &Formula, model: &Model, world: World) -> bool {
    let frame: &Frame = &model.frame;
    matches!(crate::roach::is_2_roach(frame), Ok(Some(_))) && !model.extension(phi).contains(world)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::roach::{builtin, Builtin};

    #[test]
    fn axiom_list() {
        let ax = lr2_axioms();
        assert_eq!(ax.len(), 4);
        assert_eq!(ax[0], axiom(AxiomName::Ma).unwrap());
        assert_eq!(ax[1], fine_jankov(&builtin(Builtin::F1).unwrap()).unwrap());
    }

    #[test]
    fn geach_is_refuted_on_a_fork() {
        let Verdict::Refuted { model, world } = decide_lr2(&axiom(AxiomName::Ga).unwrap(), 3).unwrap() else {
            panic!("expected a countermodel");
        };
        assert_eq!(model.frame.size(), 3);
        assert_eq!(model.frame.maximal_points().len(), 2);
        assert!(recheck(&axiom(AxiomName::Ga).unwrap(), &model, world));
    }

    #[test]
    fn mckinsey_survives() {
        assert!(matches!(
            decide_lr2(&axiom(AxiomName::Ma).unwrap(), 4).unwrap(),
            Verdict::NoCountermodelUpTo(4)
        ));
    }

    #[test]
    fn bound_is_capped() {
        assert!(decide_lr2(&Formula::Top, 7).is_err());
    }
}
