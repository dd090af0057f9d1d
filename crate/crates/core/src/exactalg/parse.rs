//! Shared reader for the polynomial and operator grammars.
//!
//! ```text
//! sum    := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := int ['/' posint] | 'x' posint ['^' nat] | 'd' posint ['^' nat] | 's' ['^' nat]
//! ```
//! Whitespace is ignored everywhere. The polynomial grammar rejects `d` and `s`.

use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::monomial::Monomial;
use super::polynomial::Polynomial;
use super::rational::Rational;
use super::ExactAlgError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum Atom {
    Coeff(Rational),
    X(usize, u32),
    D(usize, u32),
    S(u32),
}

/// A signed product of atoms, kept in source order.
pub(crate) type Term = (bool, Vec<Atom>);

struct Reader {
    chars: Vec<(usize, char)>,
    pos: usize,
}

impl Reader {
    fn new(text: &str) -> Self {
        Reader {
            chars: text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect(),
            pos: 0,
        }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars
            .get(self.pos)
            .map(|&(i, _)| i)
            .unwrap_or_else(|| self.chars.last().map(|&(i, _)| i + 1).unwrap_or(0))
    }

    fn err(&self, message: impl Into<String>) -> ExactAlgError {
        ExactAlgError::Syntax { position: self.offset(), message: message.into() }
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Option<String> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            None
        } else {
            Some(self.chars[start..self.pos].iter().map(|&(_, c)| c).collect())
        }
    }

    fn nat(&mut self, what: &str) -> Result<u32, ExactAlgError> {
        let d = self.digits().ok_or_else(|| self.err(alloc::format!("expected {what}")))?;
        d.parse().map_err(|_| self.err("integer too large"))
    }

    fn index(&mut self) -> Result<usize, ExactAlgError> {
        let i = self.nat("variable index")?;
        if i == 0 {
            return Err(self.err("variable indices start at 1"));
        }
        Ok(i as usize - 1)
    }

    fn exponent(&mut self) -> Result<u32, ExactAlgError> {
        if self.eat('^') {
            self.nat("exponent")
        } else {
            Ok(1)
        }
    }

    fn factor(&mut self) -> Result<Atom, ExactAlgError> {
        match self.peek() {
            Some(c) if c.is_ascii_digit() => {
                let n: BigInt = self.digits().unwrap().parse().unwrap();
                let d: BigInt = if self.eat('/') {
                    let d: BigInt = self
                        .digits()
                        .ok_or_else(|| self.err("expected denominator"))?
                        .parse()
                        .unwrap();
                    if d.is_zero() {
                        return Err(ExactAlgError::ZeroDenominator);
                    }
                    d
                } else {
                    BigInt::one()
                };
                Ok(Atom::Coeff(Rational::new(n, d)))
            }
            Some('x') => {
                self.pos += 1;
                let i = self.index()?;
                Ok(Atom::X(i, self.exponent()?))
            }
            Some('d') => {
                self.pos += 1;
                let i = self.index()?;
                Ok(Atom::D(i, self.exponent()?))
            }
            Some('s') => {
                self.pos += 1;
                Ok(Atom::S(self.exponent()?))
            }
            Some(c) => Err(self.err(alloc::format!("unexpected character {c:?}"))),
            None => Err(self.err("unexpected end of input")),
        }
    }

    fn term(&mut self) -> Result<Vec<Atom>, ExactAlgError> {
        let mut atoms = alloc::vec![self.factor()?];
        while self.eat('*') {
            atoms.push(self.factor()?);
        }
        Ok(atoms)
    }

    fn sum(&mut self) -> Result<Vec<Term>, ExactAlgError> {
        let mut terms = Vec::new();
        let mut negative = if self.eat('-') {
            true
        } else {
            self.eat('+');
            false
        };
        loop {
            terms.push((negative, self.term()?));
            if self.eat('+') {
                negative = false;
            } else if self.eat('-') {
                negative = true;
            } else {
                break;
            }
        }
        if self.pos != self.chars.len() {
            return Err(self.err("trailing input"));
        }
        Ok(terms)
    }
}

pub(crate) fn parse_terms(text: &str) -> Result<Vec<Term>, ExactAlgError> {
    Reader::new(text).sum()
}

/// Largest variable index used (for either `x` or `d`), plus one.
pub(crate) fn inferred_dim(terms: &[Term]) -> usize {
    terms
        .iter()
        .flat_map(|(_, atoms)| atoms.iter())
        .filter_map(|a| match a {
            Atom::X(i, _) | Atom::D(i, _) => Some(i + 1),
            _ => None,
        })
        .max()
        .unwrap_or(1)
}

pub(crate) fn check_dim(terms: &[Term], dim: usize) -> Result<(), ExactAlgError> {
    let used = inferred_dim(terms);
    let any_var = terms
        .iter()
        .flat_map(|(_, a)| a.iter())
        .any(|a| matches!(a, Atom::X(..) | Atom::D(..)));
    if any_var && used > dim {
        return Err(ExactAlgError::VariableOutOfRange { index: used, dim });
    }
    Ok(())
}

pub(crate) fn parse_polynomial(text: &str, dim: Option<usize>) -> Result<Polynomial, ExactAlgError> {
    let terms = parse_terms(text)?;
    let dim = match dim {
        Some(d) => {
            check_dim(&terms, d)?;
            d
        }
        None => inferred_dim(&terms),
    };
    let mut p = Polynomial::zero(dim);
    for (negative, atoms) in terms {
        let mut c = Rational::one();
        let mut m = Monomial::one(dim);
        for a in atoms {
            match a {
                Atom::Coeff(q) => c *= q,
                Atom::X(i, e) => m.0[i] += e,
                Atom::D(..) | Atom::S(..) => {
                    return Err(ExactAlgError::Syntax {
                        position: 0,
                        message: "operator symbols are not allowed in a polynomial".into(),
                    })
                }
            }
        }
        p.add_term(m, if negative { -c } else { c });
    }
    Ok(p)
}
