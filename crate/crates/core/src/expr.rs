//! Lattice expressions such as `(-2) + -E8 + -E8 + H + H`.
//!
//! ```text
//! expr := term ('+' term)*
//! term := '-'? atom
//! atom := 'E8' | 'E7' | 'E6' | 'H' | 'II(' int ',' int ')' | '(' int ')' | 'gram:' path
//! ```
//!
//! Whitespace between tokens is ignored; `−` (U+2212) is accepted for `-`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

use crate::error::LatticeError;
use crate::lattice::Lattice;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    E8,
    E7,
    E6,
    H,
    Unimodular(i64, i64),
    Rank1(BigInt),
    Gram(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub negated: bool,
    pub atom: Atom,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticeExpr {
    pub terms: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("syntax error at byte {offset}: expected {expected}")]
    Syntax { offset: usize, expected: String },
    #[error("at byte {offset}: no standard lattice II({p},{q}); known pairs are (1,1), (1,9), (1,17), (2,26), (3,19)")]
    UnknownUnimodular { offset: usize, p: i64, q: i64 },
}

#[derive(Debug, Error)]
pub enum EvalError {
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error("reading {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
}

const KNOWN_UNIMODULAR: [(i64, i64); 5] = [(1, 1), (1, 9), (1, 17), (2, 26), (3, 19)];

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn skip_ws(&mut self) {
        let trimmed = self.rest().trim_start();
        self.pos = self.src.len() - trimmed.len();
    }

    fn error<T>(&self, expected: &str) -> Result<T, ParseError> {
        Err(ParseError::Syntax {
            offset: self.pos,
            expected: expected.to_string(),
        })
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.rest().starts_with(token) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn eat_minus(&mut self) -> bool {
        self.eat("-") || self.eat("\u{2212}")
    }

    fn expect(&mut self, token: &str) -> Result<(), ParseError> {
        if self.eat(token) {
            Ok(())
        } else {
            self.error(&format!("'{token}'"))
        }
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let negative = if self.eat_minus() {
            true
        } else {
            self.eat("+");
            false
        };
        let digits: &str = {
            let rest = self.rest();
            let end = rest.find(|c: char| !c.is_ascii_digit()).unwrap_or(rest.len());
            &rest[..end]
        };
        if digits.is_empty() {
            return self.error("an integer");
        }
        self.pos += digits.len();
        let value: BigInt = digits.parse().expect("ascii digits");
        Ok(if negative { -value } else { value })
    }

    fn small_integer(&mut self) -> Result<i64, ParseError> {
        let start = self.pos;
        let v = self.integer()?;
        i64::try_from(&v).map_err(|_| ParseError::Syntax {
            offset: start,
            expected: "a small integer".into(),
        })
    }

    fn atom(&mut self) -> Result<Atom, ParseError> {
        self.skip_ws();
        let start = self.pos;
        for (name, atom) in [("E8", Atom::E8), ("E7", Atom::E7), ("E6", Atom::E6)] {
            if self.eat(name) {
                return Ok(atom);
            }
        }
        if self.eat("II") {
            self.expect("(")?;
            let p = self.small_integer()?;
            self.expect(",")?;
            let q = self.small_integer()?;
            self.expect(")")?;
            if !KNOWN_UNIMODULAR.contains(&(p, q)) {
                return Err(ParseError::UnknownUnimodular { offset: start, p, q });
            }
            return Ok(Atom::Unimodular(p, q));
        }
        if self.eat("H") {
            return Ok(Atom::H);
        }
        if self.eat("(") {
            let n = self.integer()?;
            self.expect(")")?;
            return Ok(Atom::Rank1(n));
        }
        if self.eat("gram:") {
            let rest = self.rest();
            let end = rest
                .find(|c: char| c.is_whitespace() || c == '+')
                .unwrap_or(rest.len());
            if end == 0 {
                return self.error("a file path");
            }
            self.pos += end;
            return Ok(Atom::Gram(rest[..end].to_string()));
        }
        self.error("E8, E7, E6, H, II(p,q), (n) or gram:PATH")
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let negated = self.eat_minus();
        let atom = self.atom()?;
        Ok(Term { negated, atom })
    }

    fn expr(&mut self) -> Result<LatticeExpr, ParseError> {
        let mut terms = vec![self.term()?];
        while self.eat("+") {
            terms.push(self.term()?);
        }
        self.skip_ws();
        if self.pos != self.src.len() {
            return self.error("'+' or end of input");
        }
        Ok(LatticeExpr { terms })
    }
}

pub fn parse(text: &str) -> Result<LatticeExpr, ParseError> {
    Parser { src: text, pos: 0 }.expr()
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::E8 => write!(f, "E8"),
            Atom::E7 => write!(f, "E7"),
            Atom::E6 => write!(f, "E6"),
            Atom::H => write!(f, "H"),
            Atom::Unimodular(p, q) => write!(f, "II({p},{q})"),
            Atom::Rank1(n) => write!(f, "({n})"),
            Atom::Gram(path) => write!(f, "gram:{path}"),
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negated {
            write!(f, "-")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Display for LatticeExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

impl std::str::FromStr for LatticeExpr {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse(s)
    }
}

impl LatticeExpr {
    /// Notes on rank-one terms whose norm is odd or zero; they parse but the
    /// result is not an even nondegenerate lattice.
    pub fn warnings(&self) -> Vec<String> {
        self.terms
            .iter()
            .filter_map(|t| match &t.atom {
                Atom::Rank1(n) if n.is_zero() => Some(format!("term {t} is degenerate (norm 0)")),
                Atom::Rank1(n) if n.is_odd() => Some(format!("term {t} has odd norm; lattice is not even")),
                _ => None,
            })
            .collect()
    }

    /// Build the lattice, loading `gram:` terms through `load`.
    pub fn evaluate_with(
        &self,
        mut load: impl FnMut(&str) -> Result<Lattice, EvalError>,
    ) -> Result<Lattice, EvalError> {
        let mut parts = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let base = match &t.atom {
                Atom::E8 => Lattice::e8(),
                Atom::E7 => Lattice::e7(),
                Atom::E6 => Lattice::e6(),
                Atom::H => Lattice::hyperbolic(),
                Atom::Unimodular(p, q) => Lattice::unimodular(*p, *q)?,
                Atom::Rank1(n) => Lattice::rank1(n.clone()),
                Atom::Gram(path) => load(path)?,
            };
            parts.push(if t.negated { base.rescale(-1) } else { base });
        }
        Ok(Lattice::direct_sum_all(&parts))
    }

    /// Build the lattice, reading `gram:` terms from the filesystem.
    pub fn evaluate(&self) -> Result<Lattice, EvalError> {
        self.evaluate_with(|path| {
            let text = std::fs::read_to_string(path).map_err(|source| EvalError::Io {
                path: path.to_string(),
                source,
            })?;
            Ok(Lattice::from_gram_text(&text)?)
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval(text: &str) -> Lattice {
        parse(text).unwrap().evaluate().unwrap()
    }

    #[test]
    fn polarized_plus_e8() {
        let l = eval("(-2) + -E8");
        assert_eq!(l.rank(), 9);
        assert_eq!(l.determinant(), BigInt::from(-2));
        assert_eq!(eval("(−2)+−E8"), l);
    }

    #[test]
    fn two_twenty_six() {
        let l = eval("-E8 + -E8 + -E8 + H + H");
        assert_eq!(l, eval("II(2,26)"));
        assert_eq!(l.determinant(), BigInt::from(1));
        assert_eq!(l.signature().unwrap(), (2, 26));
        assert_eq!(eval("II(1,17)"), eval("H + -E8 + -E8"));
        assert_eq!(eval(" II ( 1 , 9 ) "), eval("H+-E8"));
    }

    #[test]
    fn canonical_print() {
        let e = parse("  -E8+H +( -2 )+II(3,19)").unwrap();
        assert_eq!(e.to_string(), "-E8 + H + (-2) + II(3,19)");
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        assert_eq!(
            parse("E8 + X"),
            Err(ParseError::Syntax {
                offset: 5,
                expected: "E8, E7, E6, H, II(p,q), (n) or gram:PATH".into()
            })
        );
        assert!(matches!(parse("E8 E7"), Err(ParseError::Syntax { offset: 3, .. })));
        assert!(matches!(parse("(2"), Err(ParseError::Syntax { offset: 2, .. })));
        assert!(matches!(parse(""), Err(ParseError::Syntax { offset: 0, .. })));
        assert_eq!(
            parse("H + II(1,25)"),
            Err(ParseError::UnknownUnimodular { offset: 4, p: 1, q: 25 })
        );
    }

    #[test]
    fn odd_and_zero_norms_flagged() {
        let e = parse("(3) + (0) + (2)").unwrap();
        assert_eq!(e.warnings().len(), 2);
        assert!(parse("(2) + E8").unwrap().warnings().is_empty());
    }

    #[test]
    fn gram_terms_use_loader() {
        let e = parse("gram:witness.txt + H").unwrap();
        let l = e
            .evaluate_with(|path| {
                assert_eq!(path, "witness.txt");
                Ok(Lattice::rank1(8))
            })
            .unwrap();
        assert_eq!(l.rank(), 3);
        assert!(matches!(
            parse("gram:/definitely/missing").unwrap().evaluate(),
            Err(EvalError::Io { .. })
        ));
    }
}
