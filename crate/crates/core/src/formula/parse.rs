//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! imp   := or ( "->" imp )?
//! or    := and ( "|" and )*
//! and   := unary ( "&" unary )*
//! unary := ("~" | "[]" | "<>") unary | atom
//! atom  := VAR | "T" | "F" | "(" imp ")"
//! ```

use super::Formula;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Var(String),
    Top,
    Bot,
    Not,
    And,
    Or,
    Arrow,
    Box,
    Diamond,
    LParen,
    RParen,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Var(v) => format!("variable `{v}`"),
        Tok::End => "end of input".to_string(),
        other => format!("`{}`", match other {
            Tok::Top => "T",
            Tok::Bot => "F",
            Tok::Not => "~",
            Tok::And => "&",
            Tok::Or => "|",
            Tok::Arrow => "->",
            Tok::Box => "[]",
            Tok::Diamond => "<>",
            Tok::LParen => "(",
            _ => ")",
        }),
    }
}

fn lex(text: &str) -> Result<Vec<(usize, Tok)>> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    let err = |pos: usize, msg: &str| Error::Syntax { pos, msg: msg.to_string() };
    while i < bytes.len() {
        let c = bytes[i];
        let two = bytes.get(i..i + 2);
        let tok = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'a'..=b'z' => {
                let start = i;
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                out.push((start, Tok::Var(text[start..i].to_string())));
                continue;
            }
            b'T' | b'F' => {
                if bytes.get(i + 1).is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_') {
                    return Err(err(i, "identifiers must start with a lowercase letter"));
                }
                if c == b'T' { Tok::Top } else { Tok::Bot }
            }
            b'~' => Tok::Not,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'-' if two == Some(b"->") => Tok::Arrow,
            b'[' if two == Some(b"[]") => Tok::Box,
            b'<' if two == Some(b"<>") => Tok::Diamond,
            b'-' => return Err(err(i, "expected `->`")),
            b'[' => return Err(err(i, "expected `[]`")),
            b'<' => return Err(err(i, "expected `<>`")),
            _ => {
                let ch = text[i..].chars().next().unwrap_or('?');
                return Err(Error::Syntax { pos: i, msg: format!("unexpected character `{ch}`") });
            }
        };
        let width = match tok {
            Tok::Arrow | Tok::Box | Tok::Diamond => 2,
            _ => 1,
        };
        out.push((i, tok));
        i += width;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].1
    }

    fn pos(&self) -> usize {
        self.toks[self.at].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].1.clone();
        if t != Tok::End {
            self.at += 1;
        }
        t
    }

    fn unexpected(&self, wanted: &str) -> Error {
        Error::Syntax {
            pos: self.pos(),
            msg: format!("expected {wanted}, found {}", describe(self.peek())),
        }
    }

    fn implication(&mut self) -> Result<Formula> {
        let lhs = self.disjunction()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let rhs = self.implication()?;
            return Ok(lhs.implies(rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.conjunction()?;
        while *self.peek() == Tok::Or {
            self.bump();
            lhs = lhs.or(self.conjunction()?);
        }
        Ok(lhs)
    }

    fn conjunction(&mut self) -> Result<Formula> {
        let mut lhs = self.unary()?;
        while *self.peek() == Tok::And {
            self.bump();
            lhs = lhs.and(self.unary()?);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Formula> {
        match self.peek() {
            Tok::Not => {
                self.bump();
                Ok(self.unary()?.not())
            }
            Tok::Box => {
                self.bump();
                Ok(self.unary()?.boxed())
            }
            Tok::Diamond => {
                self.bump();
                Ok(self.unary()?.diamond())
            }
            _ => self.atom(),
        }
    }

    fn atom(&mut self) -> Result<Formula> {
        match self.peek().clone() {
            Tok::Var(v) => {
                self.bump();
                Ok(Formula::Var(v))
            }
            Tok::Top => {
                self.bump();
                Ok(Formula::Top)
            }
            Tok::Bot => {
                self.bump();
                Ok(Formula::Bot)
            }
            Tok::LParen => {
                self.bump();
                let inner = self.implication()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.unexpected("`)`"));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.unexpected("a formula")),
        }
    }
}

/// Parses a formula; errors carry the byte offset of the problem.
pub fn parse(text: &str) -> Result<Formula> {
    let mut p = Parser { toks: lex(text)?, at: 0 };
    let f = p.implication()?;
    if *p.peek() != Tok::End {
        return Err(p.unexpected("end of input"));
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{axiom, var, AxiomName};

    #[test]
    fn parses_the_mckinsey_axiom() {
        assert_eq!(parse("[]<>p -> <>[]p").unwrap(), axiom(AxiomName::Ma).unwrap());
    }

    #[test]
    fn parses_a_variable() {
        assert_eq!(parse("p").unwrap(), var("p"));
        assert_eq!(parse("  p_1x ").unwrap(), var("p_1x"));
    }

    #[test]
    fn parses_a_grz_fragment() {
        let p = || var("p");
        let want = p().implies(p().boxed()).boxed().implies(p());
        assert_eq!(parse("([](p -> []p) -> p)").unwrap(), want);
        assert_eq!(parse("[]([](p -> []p) -> p) -> p").unwrap(), axiom(AxiomName::Grz).unwrap());
    }

    #[test]
    fn implication_is_right_associative() {
        let (p, q, r) = (var("p"), var("q"), var("r"));
        assert_eq!(parse("p -> q -> r").unwrap(), p.implies(q.implies(r)));
    }

    #[test]
    fn binding_strength() {
        let (p, q, r) = (var("p"), var("q"), var("r"));
        assert_eq!(parse("~p & q | r").unwrap(), p.clone().not().and(q.clone()).or(r.clone()));
        assert_eq!(parse("[]p & q").unwrap(), p.boxed().and(q));
        assert_eq!(parse("T | F").unwrap(), Formula::Top.or(Formula::Bot));
        assert_eq!(parse("a & b & c").unwrap(), var("a").and(var("b")).and(var("c")));
        let _ = r;
    }

    #[test]
    fn errors_carry_positions() {
        assert!(matches!(parse("p &"), Err(Error::Syntax { pos: 3, .. })));
        assert!(matches!(parse("(p"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("p q"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("p - q"), Err(Error::Syntax { pos: 2, .. })));
        assert!(matches!(parse("P"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("Tx"), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { pos: 0, .. })));
        assert!(matches!(parse("p # q"), Err(Error::Syntax { pos: 2, .. })));
    }
}
