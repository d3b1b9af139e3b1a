use std::fmt;
use std::str::FromStr;

use super::{var, Formula};
use crate::error::{Error, Result};

/// Named axioms.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum AxiomName {
    /// McKinsey: `□◇p → ◇□p`.
    Ma,
    /// Geach: `◇□p → □◇p`.
    Ga,
    /// Grzegorczyk: `□(□(p → □p) → p) → p`.
    Grz,
    /// Bounded depth `bd_n`, `n ≥ 1`.
    Bd(usize),
    /// Reflexivity: `□p → p`.
    S4T,
    /// Transitivity: `□p → □□p`.
    S4Four,
}

impl fmt::Display for AxiomName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AxiomName::Ma => write!(f, "ma"),
            AxiomName::Ga => write!(f, "ga"),
            AxiomName::Grz => write!(f, "grz"),
            AxiomName::Bd(n) => write!(f, "bd{n}"),
            AxiomName::S4T => write!(f, "s4_T"),
            AxiomName::S4Four => write!(f, "s4_4"),
        }
    }
}

impl FromStr for AxiomName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        match lower.as_str() {
            "ma" => return Ok(AxiomName::Ma),
            "ga" => return Ok(AxiomName::Ga),
            "grz" => return Ok(AxiomName::Grz),
            "s4_t" | "t" => return Ok(AxiomName::S4T),
            "s4_4" | "4" => return Ok(AxiomName::S4Four),
            _ => {}
        }
        let digits = lower
            .strip_prefix("bd")
            .map(|rest| rest.trim_start_matches(['_', '(', ' ']).trim_end_matches(')'))
            .ok_or_else(|| Error::InvalidParameter(format!("unknown axiom `{s}`")))?;
        let n: usize = digits
            .parse()
            .map_err(|_| Error::InvalidParameter(format!("bad bd index in `{s}`")))?;
        if n == 0 {
            return Err(Error::InvalidParameter("bd needs n >= 1".into()));
        }
        Ok(AxiomName::Bd(n))
    }
}

fn bd(n: usize) -> Formula {
    let p = var(format!("p{n}"));
    if n == 1 {
        p.clone().boxed().diamond().implies(p)
    } else {
        p.clone().boxed().and(bd(n - 1).not()).diamond().implies(p)
    }
}

/// The formula named by `name`. `bd(0)` is rejected.
pub fn axiom(name: AxiomName) -> Result<Formula> {
    let p = || var("p");
    Ok(match name {
        AxiomName::Ma => p().diamond().boxed().implies(p().boxed().diamond()),
        AxiomName::Ga => p().boxed().diamond().implies(p().diamond().boxed()),
        AxiomName::Grz => p().implies(p().boxed()).boxed().implies(p()).boxed().implies(p()),
        AxiomName::Bd(0) => return Err(Error::InvalidParameter("bd needs n >= 1".into())),
        AxiomName::Bd(n) => bd(n),
        AxiomName::S4T => p().boxed().implies(p()),
        AxiomName::S4Four => p().boxed().implies(p().boxed().boxed()),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    #[test]
    fn bd_one_and_two() {
        assert_eq!(axiom(AxiomName::Bd(1)).unwrap(), parse("<>[]p1 -> p1").unwrap());
        assert_eq!(
            axiom(AxiomName::Bd(2)).unwrap(),
            parse("<>([]p2 & ~(<>[]p1 -> p1)) -> p2").unwrap()
        );
    }

    #[test]
    fn geach() {
        assert_eq!(axiom(AxiomName::Ga).unwrap().to_string(), "<>[]p -> []<>p");
    }

    #[test]
    fn bd_zero_is_rejected() {
        assert!(axiom(AxiomName::Bd(0)).is_err());
        assert!("bd0".parse::<AxiomName>().is_err());
    }

    #[test]
    fn bd_shape() {
        for n in 1..=6 {
            let f = axiom(AxiomName::Bd(n)).unwrap();
            assert_eq!(f.vars().len(), n);
            assert_eq!(f.modal_depth(), n + 1);
        }
    }

    #[test]
    fn names_round_trip() {
        for name in [
            AxiomName::Ma,
            AxiomName::Ga,
            AxiomName::Grz,
            AxiomName::Bd(3),
            AxiomName::S4T,
            AxiomName::S4Four,
        ] {
            assert_eq!(name.to_string().parse::<AxiomName>().unwrap(), name);
        }
        assert_eq!("bd(4)".parse::<AxiomName>().unwrap(), AxiomName::Bd(4));
    }
}
