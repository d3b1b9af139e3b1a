//! Ordinals below ε₀ in Cantor normal form, and the logics of ordinal
//! spaces and of their Čech–Stone compactifications.

use std::cmp::Ordering;
use std::fmt;
use std::ops::Add;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};

/// `ω^{e_1}·c_1 + … + ω^{e_k}·c_k` with strictly decreasing exponents and
/// positive coefficients. The empty sum is 0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Ordinal {
    terms: Vec<(Ordinal, u64)>,
}

// The derived order compares term lists lexicographically: leading
// exponents first, then coefficients, a proper prefix being smaller. On
// normal forms that is exactly the ordinal order.

impl Ordinal {
    pub fn zero() -> Ordinal {
        Ordinal::default()
    }

    pub fn nat(n: u64) -> Ordinal {
        if n == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(Ordinal::zero(), n)] }
        }
    }

    pub fn one() -> Ordinal {
        Ordinal::nat(1)
    }

    /// `ω^e`.
    pub fn omega_pow(e: Ordinal) -> Ordinal {
        Ordinal { terms: vec![(e, 1)] }
    }

    /// `ω`.
    pub fn omega() -> Ordinal {
        Ordinal::omega_pow(Ordinal::one())
    }

    /// `ω^e·c`, zero when `c = 0`.
    pub fn term(e: Ordinal, c: u64) -> Ordinal {
        if c == 0 {
            Ordinal::zero()
        } else {
            Ordinal { terms: vec![(e, c)] }
        }
    }

    /// Builds from terms, normalizing through addition.
    pub fn from_terms(terms: impl IntoIterator<Item = (Ordinal, u64)>) -> Ordinal {
        terms
            .into_iter()
            .fold(Ordinal::zero(), |acc, (e, c)| acc + Ordinal::term(e, c))
    }

    pub fn terms(&self) -> &[(Ordinal, u64)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `Some(n)` for finite ordinals.
    pub fn as_finite(&self) -> Option<u64> {
        match self.terms.as_slice() {
            [] => Some(0),
            [(e, c)] if e.is_zero() => Some(*c),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        self.as_finite().is_some()
    }

    /// Least exponent `α₁` of a nonzero ordinal.
    pub fn least_exponent(&self) -> Option<&Ordinal> {
        self.terms.last().map(|(e, _)| e)
    }

    /// Greatest exponent `α_k` of a nonzero ordinal.
    pub fn leading_exponent(&self) -> Option<&Ordinal> {
        self.terms.first().map(|(e, _)| e)
    }

    /// Successor ordinals and 0 are compact as spaces; limits are not.
    pub fn is_compact(&self) -> bool {
        self.least_exponent().map_or(true, Ordinal::is_zero)
    }

    fn is_valid(&self) -> bool {
        self.terms.iter().all(|(e, c)| *c > 0 && e.is_valid())
            && self.terms.windows(2).all(|w| w[0].0 > w[1].0)
    }
}

/// Ordinal comparison.
pub fn cnf_compare(a: &Ordinal, b: &Ordinal) -> Ordering {
    a.cmp(b)
}

impl Add for Ordinal {
    type Output = Ordinal;

    /// Terms of `self` below the leading exponent of `rhs` are absorbed.
    fn add(self, rhs: Ordinal) -> Ordinal {
        let Some((lead, coef)) = rhs.terms.first() else {
            return self;
        };
        let mut terms: Vec<(Ordinal, u64)> =
            self.terms.into_iter().take_while(|(e, _)| e >= lead).collect();
        let mut rest = rhs.terms.iter().cloned();
        match terms.last_mut() {
            Some((e, c)) if e == lead => {
                *c += coef;
                rest.next();
            }
            _ => {}
        }
        terms.extend(rest);
        Ordinal { terms }
    }
}

impl<'a> Add<&'a Ordinal> for &'a Ordinal {
    type Output = Ordinal;
    fn add(self, rhs: &'a Ordinal) -> Ordinal {
        self.clone() + rhs.clone()
    }
}

/// `ω^α₁` is torn off the end of `γ = γ' + ω^α₁`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TearOff {
    pub rest: Ordinal,
    pub alpha1: Ordinal,
}

/// Splits a non-compact `γ` as `γ' + ω^α₁` by removing one copy of its
/// least power; then `γ = (γ' + 1) + ω^α₁`.
pub fn tear_off(gamma: &Ordinal) -> Result<TearOff> {
    let Some((alpha1, n1)) = gamma.terms.last() else {
        return Err(Error::InvalidParameter("cannot tear off from 0".into()));
    };
    if alpha1.is_zero() {
        return Err(Error::InvalidParameter(format!("{gamma} is compact")));
    }
    let mut terms = gamma.terms.clone();
    if *n1 == 1 {
        terms.pop();
    } else {
        terms.last_mut().expect("nonempty").1 -= 1;
    }
    Ok(TearOff { rest: Ordinal { terms }, alpha1: alpha1.clone() })
}

/// Names of the logics produced by the classifiers.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "logic", rename_all = "snake_case")]
pub enum LogicId {
    S41,
    S412,
    S4Grz,
    S4GrzN { n: u64 },
    LN { m: u64 },
    LInf,
    MeetGrz { m: u64 },
    MeetGrzN { n: u64, m: u64 },
    UnknownConjecturedLInf { note: String },
}

const CONJECTURE_NOTE: &str =
    "least exponent is infinite; the logic is conjectured, not known, to be L_inf";

impl fmt::Display for LogicId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LogicId::S41 => write!(f, "S4.1"),
            LogicId::S412 => write!(f, "S4.1.2"),
            LogicId::S4Grz => write!(f, "S4.Grz"),
            LogicId::S4GrzN { n } => write!(f, "S4.Grz_{n}"),
            LogicId::LN { m: 1 } => write!(f, "L_1 = S4.1.2"),
            LogicId::LN { m } => write!(f, "L_{m}"),
            LogicId::LInf => write!(f, "L_inf"),
            LogicId::MeetGrz { m } => write!(f, "S4.Grz ∩ L_{m}"),
            LogicId::MeetGrzN { n, m } => write!(f, "S4.Grz_{n} ∩ L_{m}"),
            LogicId::UnknownConjecturedLInf { .. } => write!(f, "L_inf (conjectured)"),
        }
    }
}

impl LogicId {
    /// `Some(true)` if `self ⊆ other` follows from the known inclusions,
    /// `Some(false)` if it is known to fail, `None` when not recorded.
    pub fn subset_of(&self, other: &LogicId) -> Option<bool> {
        use LogicId::*;
        // Position on the chain S4.1 ⊂ L_inf ⊂ .. ⊂ L_2 ⊂ L_1 = S4.1.2.
        fn chain(l: &LogicId) -> Option<u64> {
            match l {
                S41 => Some(0),
                LInf => Some(1),
                LN { m } => Some(u64::MAX - m),
                S412 => Some(u64::MAX - 1),
                _ => None,
            }
        }
        // Position on S4.Grz ⊂ .. ⊂ S4.Grz_2 ⊂ S4.Grz_1.
        fn grz(l: &LogicId) -> Option<u64> {
            match l {
                S4Grz => Some(0),
                S4GrzN { n } => Some(u64::MAX - n),
                _ => None,
            }
        }
        if self == other {
            return Some(true);
        }
        if let (Some(a), Some(b)) = (chain(self), chain(other)) {
            return Some(a <= b);
        }
        if let (Some(a), Some(b)) = (grz(self), grz(other)) {
            return Some(a <= b);
        }
        match self {
            MeetGrz { m } => {
                if (LN { m: *m }).subset_of(other) == Some(true) || S4Grz.subset_of(other) == Some(true) {
                    return Some(true);
                }
            }
            MeetGrzN { n, m } => {
                if (LN { m: *m }).subset_of(other) == Some(true)
                    || (S4GrzN { n: *n }).subset_of(other) == Some(true)
                {
                    return Some(true);
                }
            }
            _ => {}
        }
        None
    }
}

/// Logic of the ordinal space `γ ≥ 1`: `S4.Grz_n` when
/// `ω^{n-1} < γ ≤ ω^n`, `S4.Grz` when `γ ≥ ω^ω`. `γ = 1` (a single point)
/// gets `S4.Grz_1`.
pub fn logic_of_ordinal_space(gamma: &Ordinal) -> Result<LogicId> {
    let Some(lead) = gamma.leading_exponent() else {
        return Err(Error::InvalidParameter("the ordinal 0 is an empty space".into()));
    };
    let Some(k) = lead.as_finite() else {
        return Ok(LogicId::S4Grz);
    };
    // γ ≤ ω^k exactly when γ is ω^k itself; otherwise ω^k < γ < ω^{k+1}.
    let exact = gamma.terms.len() == 1 && gamma.terms[0].1 == 1;
    let n = if exact { k.max(1) } else { k + 1 };
    Ok(LogicId::S4GrzN { n })
}

/// The classification of `γ ≥ 1` by its Cantor normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BetaClassification {
    pub logic: LogicId,
    /// The tear-off, for non-compact `γ`.
    pub tear_off: Option<TearOff>,
}

/// Logic of the Čech–Stone compactification of `γ ≥ 1`.
pub fn classify_beta_logic(gamma: &Ordinal) -> Result<LogicId> {
    Ok(classify_beta(gamma)?.logic)
}

pub fn classify_beta(gamma: &Ordinal) -> Result<BetaClassification> {
    if gamma.is_zero() {
        return Err(Error::InvalidParameter("the ordinal 0 is an empty space".into()));
    }
    if gamma.is_compact() {
        return Ok(BetaClassification { logic: logic_of_ordinal_space(gamma)?, tear_off: None });
    }
    let split = tear_off(gamma)?;
    let Some(m) = split.alpha1.as_finite() else {
        return Ok(BetaClassification {
            logic: LogicId::UnknownConjecturedLInf { note: CONJECTURE_NOTE.into() },
            tear_off: Some(split),
        });
    };
    let logic = if split.rest.is_zero() {
        LogicId::LN { m }
    } else {
        match logic_of_ordinal_space(&(split.rest.clone() + Ordinal::one()))? {
            LogicId::S4GrzN { n } => LogicId::MeetGrzN { n, m },
            _ => LogicId::MeetGrz { m },
        }
    };
    Ok(BetaClassification { logic, tear_off: Some(split) })
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            if e.is_zero() {
                write!(f, "{c}")?;
                continue;
            }
            match e.as_finite() {
                Some(1) => write!(f, "w")?,
                Some(k) => write!(f, "w^{k}")?,
                None if *e == Ordinal::omega() => write!(f, "w^w")?,
                None => write!(f, "w^({e})")?,
            }
            if *c > 1 {
                write!(f, "*{c}")?;
            }
        }
        Ok(())
    }
}

struct OrdParser<'a> {
    s: &'a [u8],
    at: usize,
}

impl<'a> OrdParser<'a> {
    fn skip_ws(&mut self) {
        while self.at < self.s.len() && self.s[self.at].is_ascii_whitespace() {
            self.at += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.at).copied()
    }

    fn err(&self, msg: &str) -> Error {
        Error::Syntax { pos: self.at, msg: msg.to_string() }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.at += 1;
            Ok(())
        } else {
            Err(self.err(&format!("expected `{}`", c as char)))
        }
    }

    fn natural(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.at;
        while self.at < self.s.len() && self.s[self.at].is_ascii_digit() {
            self.at += 1;
        }
        if start == self.at {
            return Err(self.err("expected a natural number"));
        }
        std::str::from_utf8(&self.s[start..self.at])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::Syntax { pos: start, msg: "number too large".into() })
    }

    fn sum(&mut self) -> Result<Ordinal> {
        let mut acc = self.term()?;
        while self.peek() == Some(b'+') {
            self.at += 1;
            acc = acc + self.term()?;
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(b'0'..=b'9') => Ok(Ordinal::nat(self.natural()?)),
            Some(b'w') => {
                self.at += 1;
                let exp = if self.peek() == Some(b'^') {
                    self.at += 1;
                    self.exponent()?
                } else {
                    Ordinal::one()
                };
                let coef = if self.peek() == Some(b'*') {
                    self.at += 1;
                    self.natural()?
                } else {
                    1
                };
                Ok(Ordinal::term(exp, coef))
            }
            _ => Err(self.err("expected `w` or a natural number")),
        }
    }

    fn exponent(&mut self) -> Result<Ordinal> {
        match self.peek() {
            Some(b'(') => {
                self.at += 1;
                let inner = self.sum()?;
                self.expect(b')')?;
                Ok(inner)
            }
            Some(b'w') => {
                self.at += 1;
                Ok(Ordinal::omega())
            }
            Some(b'0'..=b'9') => Ok(Ordinal::nat(self.natural()?)),
            _ => Err(self.err("expected an exponent")),
        }
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    /// Terms `w^(<ordinal>)*c`, `w^k`, `w^w`, `w` and naturals joined by `+`.
    fn from_str(text: &str) -> Result<Self> {
        let mut p = OrdParser { s: text.as_bytes(), at: 0 };
        let out = p.sum()?;
        if p.peek().is_some() {
            return Err(p.err("unexpected trailing input"));
        }
        debug_assert!(out.is_valid());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn comparison() {
        assert_eq!(cnf_compare(&o("w"), &o("w^2")), Ordering::Less);
        assert_eq!(cnf_compare(&o("w^w"), &o("w^3*5 + w")), Ordering::Greater);
        assert_eq!(cnf_compare(&o("w^2 + 1"), &o("w^2 + 1")), Ordering::Equal);
        assert!(o("w*2") > o("w + 5"));
        assert!(o("w^(w+1)") > o("w^w*7"));
    }

    #[test]
    fn addition() {
        assert_eq!(Ordinal::one() + Ordinal::omega(), Ordinal::omega());
        assert_eq!(o("w^2*3 + w*2") + o("w^2"), o("w^2*4"));
        assert_eq!(o("w + 3") + Ordinal::zero(), o("w + 3"));
        assert_eq!(o("w") + o("1"), o("w + 1"));
        assert_eq!(o("5 + w + 2"), o("w + 2"));
    }

    #[test]
    fn tear_off_cases() {
        let t = tear_off(&o("w")).unwrap();
        assert_eq!((t.rest, t.alpha1), (Ordinal::zero(), Ordinal::one()));
        let t = tear_off(&o("w^2*3 + w*2")).unwrap();
        assert_eq!((t.rest, t.alpha1), (o("w^2*3 + w"), Ordinal::one()));
        let t = tear_off(&o("w^w + w^2")).unwrap();
        assert_eq!((t.rest, t.alpha1), (o("w^w"), o("2")));
        assert!(tear_off(&o("w + 1")).is_err());
        assert!(tear_off(&Ordinal::zero()).is_err());
    }

    #[test]
    fn ordinal_space_logics() {
        assert_eq!(logic_of_ordinal_space(&o("5")).unwrap(), LogicId::S4GrzN { n: 1 });
        assert_eq!(logic_of_ordinal_space(&o("1")).unwrap(), LogicId::S4GrzN { n: 1 });
        assert_eq!(logic_of_ordinal_space(&o("w")).unwrap(), LogicId::S4GrzN { n: 1 });
        assert_eq!(logic_of_ordinal_space(&o("w + 1")).unwrap(), LogicId::S4GrzN { n: 2 });
        assert_eq!(logic_of_ordinal_space(&o("w^2")).unwrap(), LogicId::S4GrzN { n: 2 });
        assert_eq!(logic_of_ordinal_space(&o("w^w")).unwrap(), LogicId::S4Grz);
        assert!(logic_of_ordinal_space(&Ordinal::zero()).is_err());
    }

    #[test]
    fn beta_logics() {
        assert_eq!(classify_beta_logic(&o("w^3")).unwrap(), LogicId::LN { m: 3 });
        assert_eq!(classify_beta_logic(&o("w^w + w^2")).unwrap(), LogicId::MeetGrz { m: 2 });
        assert_eq!(classify_beta_logic(&o("w^3 + w")).unwrap(), LogicId::MeetGrzN { n: 4, m: 1 });
        assert_eq!(classify_beta_logic(&o("w*2")).unwrap(), LogicId::MeetGrzN { n: 2, m: 1 });
        assert_eq!(classify_beta_logic(&o("w^2 + 1")).unwrap(), LogicId::S4GrzN { n: 3 });
        assert!(matches!(
            classify_beta_logic(&o("w^w")).unwrap(),
            LogicId::UnknownConjecturedLInf { .. }
        ));
        assert!(matches!(
            classify_beta_logic(&o("w^(w+1) + w^w*2")).unwrap(),
            LogicId::UnknownConjecturedLInf { .. }
        ));
    }

    #[test]
    fn display_strings() {
        assert_eq!(LogicId::LN { m: 1 }.to_string(), "L_1 = S4.1.2");
        assert_eq!(LogicId::MeetGrzN { n: 3, m: 1 }.to_string(), "S4.Grz_3 ∩ L_1");
        assert_eq!(o("w^w + w^2*3 + 1").to_string(), "w^w + w^2*3 + 1");
        assert_eq!(o("w^(w + 1)*2 + w").to_string(), "w^(w + 1)*2 + w");
        assert_eq!(o("w^(w)").to_string(), "w^w");
        assert_eq!(o("w^(2)").to_string(), "w^2");
        assert_eq!(Ordinal::zero().to_string(), "0");
    }

    #[test]
    fn parse_errors() {
        assert!("w^".parse::<Ordinal>().is_err());
        assert!("w +".parse::<Ordinal>().is_err());
        assert!("x".parse::<Ordinal>().is_err());
        assert!("w^(w".parse::<Ordinal>().is_err());
        assert!("w w".parse::<Ordinal>().is_err());
    }

    #[test]
    fn chain_metadata() {
        use LogicId::*;
        assert_eq!(LN { m: 2 }.subset_of(&LN { m: 1 }), Some(true));
        assert_eq!(LN { m: 1 }.subset_of(&LN { m: 2 }), Some(false));
        assert_eq!(LN { m: 1 }.subset_of(&S412), Some(true));
        assert_eq!(S412.subset_of(&LN { m: 1 }), Some(true));
        assert_eq!(S41.subset_of(&LInf), Some(true));
        assert_eq!(LInf.subset_of(&LN { m: 9 }), Some(true));
        assert_eq!(S4Grz.subset_of(&S4GrzN { n: 2 }), Some(true));
        assert_eq!(MeetGrzN { n: 3, m: 1 }.subset_of(&LN { m: 1 }), Some(true));
        assert_eq!(S4Grz.subset_of(&LN { m: 1 }), None);
    }
}
