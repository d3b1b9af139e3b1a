//! Modal formulas: the AST, a printer, a parser and the named axioms.

mod axiom;
mod parse;

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;
use std::str::FromStr;

use crate::error::Error;

pub use axiom::{axiom, AxiomName};
pub use parse::parse;

/// A modal formula. `Diamond` is a primitive, not an abbreviation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Formula {
    Var(String),
    Top,
    Bot,
    Not(Arc<Formula>),
    And(Arc<Formula>, Arc<Formula>),
    Or(Arc<Formula>, Arc<Formula>),
    Implies(Arc<Formula>, Arc<Formula>),
    Box(Arc<Formula>),
    Diamond(Arc<Formula>),
}

pub fn var(name: impl Into<String>) -> Formula {
    Formula::Var(name.into())
}

impl Formula {
    pub fn not(self) -> Formula {
        Formula::Not(Arc::new(self))
    }

    pub fn and(self, rhs: Formula) -> Formula {
        Formula::And(Arc::new(self), Arc::new(rhs))
    }

    pub fn or(self, rhs: Formula) -> Formula {
        Formula::Or(Arc::new(self), Arc::new(rhs))
    }

    pub fn implies(self, rhs: Formula) -> Formula {
        Formula::Implies(Arc::new(self), Arc::new(rhs))
    }

    pub fn boxed(self) -> Formula {
        Formula::Box(Arc::new(self))
    }

    pub fn diamond(self) -> Formula {
        Formula::Diamond(Arc::new(self))
    }

    /// Left-nested conjunction; `T` when empty.
    pub fn conj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::and).unwrap_or(Formula::Top)
    }

    /// Left-nested disjunction; `F` when empty.
    pub fn disj(items: impl IntoIterator<Item = Formula>) -> Formula {
        items.into_iter().reduce(Formula::or).unwrap_or(Formula::Bot)
    }

    /// Variables in name order.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Var(v) => {
                out.insert(v.clone());
            }
            Formula::Top | Formula::Bot => {}
            Formula::Not(a) | Formula::Box(a) | Formula::Diamond(a) => a.collect_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Nesting depth of `□`/`◇`.
    pub fn modal_depth(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => 0,
            Formula::Not(a) => a.modal_depth(),
            Formula::Box(a) | Formula::Diamond(a) => 1 + a.modal_depth(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.modal_depth().max(b.modal_depth())
            }
        }
    }

    /// Number of AST nodes.
    pub fn size(&self) -> usize {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => 1,
            Formula::Not(a) | Formula::Box(a) | Formula::Diamond(a) => 1 + a.size(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                1 + a.size() + b.size()
            }
        }
    }

    /// Rewrites every `◇φ` as `¬□¬φ`. Never applied implicitly.
    pub fn expand_diamonds(&self) -> Formula {
        match self {
            Formula::Var(_) | Formula::Top | Formula::Bot => self.clone(),
            Formula::Not(a) => a.expand_diamonds().not(),
            Formula::Box(a) => a.expand_diamonds().boxed(),
            Formula::Diamond(a) => a.expand_diamonds().not().boxed().not(),
            Formula::And(a, b) => a.expand_diamonds().and(b.expand_diamonds()),
            Formula::Or(a, b) => a.expand_diamonds().or(b.expand_diamonds()),
            Formula::Implies(a, b) => a.expand_diamonds().implies(b.expand_diamonds()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Implies(..) => 1,
            Formula::Or(..) => 2,
            Formula::And(..) => 3,
            _ => 4,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, sub: &Formula, parens: bool) -> fmt::Result {
    if parens {
        write!(f, "({sub})")
    } else {
        write!(f, "{sub}")
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Var(v) => write!(f, "{v}"),
            Formula::Top => write!(f, "T"),
            Formula::Bot => write!(f, "F"),
            Formula::Not(a) | Formula::Box(a) | Formula::Diamond(a) => {
                let op = match self {
                    Formula::Not(_) => "~",
                    Formula::Box(_) => "[]",
                    _ => "<>",
                };
                write!(f, "{op}")?;
                write_operand(f, a, a.precedence() < 4)
            }
            Formula::And(a, b) | Formula::Or(a, b) => {
                let (op, prec) = if matches!(self, Formula::And(..)) { (" & ", 3) } else { (" | ", 2) };
                write_operand(f, a, a.precedence() < prec)?;
                write!(f, "{op}")?;
                write_operand(f, b, b.precedence() <= prec)
            }
            Formula::Implies(a, b) => {
                write_operand(f, a, a.precedence() <= 1)?;
                write!(f, " -> ")?;
                write_operand(f, b, b.precedence() < 1)
            }
        }
    }
}

impl FromStr for Formula {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p() -> Formula {
        var("p")
    }

    #[test]
    fn render_respects_precedence() {
        let ma = p().diamond().boxed().implies(p().boxed().diamond());
        assert_eq!(ma.to_string(), "[]<>p -> <>[]p");
        let nested = p().implies(p()).implies(p());
        assert_eq!(nested.to_string(), "(p -> p) -> p");
        let right = p().implies(p().implies(p()));
        assert_eq!(right.to_string(), "p -> p -> p");
        let mixed = p().or(p()).and(p());
        assert_eq!(mixed.to_string(), "(p | p) & p");
        let neg = p().and(p()).not();
        assert_eq!(neg.to_string(), "~(p & p)");
        let assoc = p().and(p().and(var("q")));
        assert_eq!(assoc.to_string(), "p & (p & q)");
    }

    #[test]
    fn structural_measures() {
        let f = p().boxed().implies(var("q").diamond().diamond());
        assert_eq!(f.modal_depth(), 2);
        assert_eq!(f.size(), 6);
        assert_eq!(f.vars().into_iter().collect::<Vec<_>>(), vec!["p", "q"]);
    }

    #[test]
    fn diamond_expansion_is_explicit() {
        let d = p().diamond();
        assert_ne!(d, p().not().boxed().not());
        assert_eq!(d.expand_diamonds(), p().not().boxed().not());
    }

    #[test]
    fn empty_connectives() {
        assert_eq!(Formula::conj([]), Formula::Top);
        assert_eq!(Formula::disj([]), Formula::Bot);
        assert_eq!(Formula::conj([p(), var("q"), var("r")]).to_string(), "p & q & r");
    }
}
