//! Parser for rational expressions such as `1+a-b`, `a/2+n` or the
//! `-(...)*k/(2+a+2*n-2*b-2*c)/(...)` certificate notation.
//!
//! Grammar:
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/' | <juxtaposition>) unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' ['-'] integer)?
//! atom   := integer | identifier | '(' expr ')'
//! ```
//!
//! Juxtaposition (`2b`, `2(a+b)`) is multiplication. `−` (U+2212) is read as
//! `-`. Nesting depth, exponents, literal length and intermediate sizes are
//! bounded so hostile input fails with an error instead of exhausting memory.

use num_bigint::BigInt;
use thiserror::Error;

use super::poly::{Polynomial, Q};
use super::ratfun::RationalFunction;
use super::symbol::Symbol;

const MAX_DEPTH: usize = 64;
const MAX_EXPONENT: u32 = 32;
const MAX_TERMS: usize = 20_000;
const MAX_DIGITS: usize = 200;
const MAX_IDENT: usize = 32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {ch:?} at offset {pos}")]
    Unexpected { pos: usize, ch: char },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("trailing input at offset {0}")]
    Trailing(usize),
    #[error("division by zero")]
    DivisionByZero,
    #[error("exponent must be an integer of magnitude at most {MAX_EXPONENT}")]
    BadExponent,
    #[error("expression nested too deeply")]
    TooDeep,
    #[error("expression too large")]
    TooLarge,
    #[error("expected a polynomial, found a proper fraction: {0}")]
    NotPolynomial(String),
    #[error("empty expression")]
    Empty,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = src.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '0'..='9' => {
                let start = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                if i - start > MAX_DIGITS {
                    return Err(ParseError::TooLarge);
                }
                let s: String = chars[start..i].iter().map(|(_, c)| *c).collect();
                out.push((pos, Tok::Num(s.parse().expect("ascii digits"))));
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let start = i;
                while i < chars.len() && (chars[i].1.is_ascii_alphanumeric() || chars[i].1 == '_') {
                    i += 1;
                }
                if i - start > MAX_IDENT {
                    return Err(ParseError::TooLarge);
                }
                out.push((pos, Tok::Ident(chars[start..i].iter().map(|(_, c)| *c).collect())));
            }
            '+' => {
                out.push((pos, Tok::Plus));
                i += 1;
            }
            '-' | '\u{2212}' => {
                out.push((pos, Tok::Minus));
                i += 1;
            }
            '*' => {
                out.push((pos, Tok::Star));
                i += 1;
            }
            '/' => {
                out.push((pos, Tok::Slash));
                i += 1;
            }
            '^' => {
                out.push((pos, Tok::Caret));
                i += 1;
            }
            '(' => {
                out.push((pos, Tok::LParen));
                i += 1;
            }
            ')' => {
                out.push((pos, Tok::RParen));
                i += 1;
            }
            other => return Err(ParseError::Unexpected { pos, ch: other }),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: &'a [(usize, Tok)],
    pos: usize,
    depth: usize,
    src_len: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.toks.get(self.pos).map_or(self.src_len, |(p, _)| *p)
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(_, t)| t.clone());
        self.pos += 1;
        t
    }

    fn enter(&mut self) -> Result<(), ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            Err(ParseError::TooDeep)
        } else {
            Ok(())
        }
    }

    fn expr(&mut self) -> Result<RationalFunction, ParseError> {
        self.enter()?;
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = checked(&acc + &t)?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    let t = self.term()?;
                    acc = checked(&acc - &t)?;
                }
                _ => break,
            }
        }
        self.depth -= 1;
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.bump();
                    let f = self.unary()?;
                    acc = checked(&acc * &f)?;
                }
                Some(Tok::Slash) => {
                    self.bump();
                    let f = self.unary()?;
                    let inv = f.recip().ok_or(ParseError::DivisionByZero)?;
                    acc = checked(&acc * &inv)?;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {
                    let f = self.power()?;
                    acc = checked(&acc * &f)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction, ParseError> {
        match self.peek() {
            Some(Tok::Minus) => {
                self.bump();
                self.enter()?;
                let v = -self.unary()?;
                self.depth -= 1;
                Ok(v)
            }
            Some(Tok::Plus) => {
                self.bump();
                self.enter()?;
                let v = self.unary()?;
                self.depth -= 1;
                Ok(v)
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction, ParseError> {
        let base = self.atom()?;
        if self.peek() != Some(&Tok::Caret) {
            return Ok(base);
        }
        self.bump();
        let neg = if self.peek() == Some(&Tok::Minus) {
            self.bump();
            true
        } else {
            false
        };
        let e: i64 = match self.bump() {
            Some(Tok::Num(n)) => i64::try_from(&n).map_err(|_| ParseError::BadExponent)?,
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                if self.bump() != Some(Tok::RParen) {
                    return Err(ParseError::UnexpectedEnd);
                }
                let q = inner.as_constant().filter(|q| q.is_integer()).ok_or(ParseError::BadExponent)?;
                i64::try_from(q.to_integer()).map_err(|_| ParseError::BadExponent)?
            }
            _ => return Err(ParseError::BadExponent),
        };
        if e.unsigned_abs() > MAX_EXPONENT as u64 {
            return Err(ParseError::BadExponent);
        }
        pow_checked(&base, if neg { -e as i32 } else { e as i32 })
    }

    fn atom(&mut self) -> Result<RationalFunction, ParseError> {
        let off = self.offset();
        match self.bump() {
            Some(Tok::Num(n)) => Ok(RationalFunction::constant(Q::from_integer(n))),
            Some(Tok::Ident(s)) => Ok(RationalFunction::from_poly(Polynomial::var(Symbol::new(&s)))),
            Some(Tok::LParen) => {
                let v = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(v),
                    Some(_) => Err(ParseError::Trailing(off)),
                    None => Err(ParseError::UnexpectedEnd),
                }
            }
            Some(_) => {
                let (p, _) = self.toks[self.pos - 1];
                let ch = self.toks_char(p);
                Err(ParseError::Unexpected { pos: p, ch })
            }
            None => Err(ParseError::UnexpectedEnd),
        }
    }

    fn toks_char(&self, _p: usize) -> char {
        match &self.toks[self.pos - 1].1 {
            Tok::Plus => '+',
            Tok::Minus => '-',
            Tok::Star => '*',
            Tok::Slash => '/',
            Tok::Caret => '^',
            Tok::LParen => '(',
            Tok::RParen => ')',
            _ => '?',
        }
    }
}

fn too_large(r: &RationalFunction) -> bool {
    r.numer().num_terms() > MAX_TERMS || r.denom().num_terms() > MAX_TERMS
}

fn checked(r: RationalFunction) -> Result<RationalFunction, ParseError> {
    if too_large(&r) {
        Err(ParseError::TooLarge)
    } else {
        Ok(r)
    }
}

fn pow_checked(base: &RationalFunction, e: i32) -> Result<RationalFunction, ParseError> {
    let est = base.numer().num_terms().max(base.denom().num_terms());
    if est > 1 && (est as f64).powi(e.abs().min(MAX_EXPONENT as i32)) > (MAX_TERMS as f64) * 1e3 {
        return Err(ParseError::TooLarge);
    }
    let r = base.pow(e).ok_or(ParseError::DivisionByZero)?;
    checked(r)
}

/// Parses a rational expression over the rationals in any symbols.
pub fn parse_rational(src: &str) -> Result<RationalFunction, ParseError> {
    let toks = lex(src)?;
    if toks.is_empty() {
        return Err(ParseError::Empty);
    }
    let mut p = Parser { toks: &toks, pos: 0, depth: 0, src_len: src.len() };
    let v = p.expr()?;
    if p.pos < toks.len() {
        return Err(ParseError::Trailing(toks[p.pos].0));
    }
    Ok(v)
}

/// Parses an expression that must reduce to a polynomial (rational
/// coefficients allowed, e.g. `1+a/2-b`).
pub fn parse_polynomial(src: &str) -> Result<Polynomial, ParseError> {
    let r = parse_rational(src)?;
    if r.is_polynomial() {
        Ok(r.into_parts().0)
    } else {
        Err(ParseError::NotPolynomial(r.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::poly::q_frac;

    #[test]
    fn precedence_and_juxtaposition() {
        assert_eq!(parse_polynomial("2+a-2b-2c").unwrap(), parse_polynomial("2+a-2*b-2*c").unwrap());
        assert_eq!(parse_polynomial("-2^2").unwrap(), Polynomial::int(-4));
        assert_eq!(parse_polynomial("a/2").unwrap(), Polynomial::sym("a").scale(&q_frac(1, 2)));
        assert_eq!(parse_rational("1/2/2").unwrap(), RationalFunction::constant(q_frac(1, 4)));
        assert_eq!(parse_polynomial("2(a+b)").unwrap(), parse_polynomial("2*a+2*b").unwrap());
    }

    #[test]
    fn unicode_minus() {
        assert_eq!(parse_polynomial("1+a\u{2212}b").unwrap(), parse_polynomial("1+a-b").unwrap());
    }

    #[test]
    fn negative_exponent() {
        assert_eq!(parse_rational("k^-2").unwrap(), parse_rational("1/k^2").unwrap());
        assert_eq!(parse_rational("k^(-1)").unwrap(), parse_rational("1/k").unwrap());
    }

    #[test]
    fn errors() {
        assert_eq!(parse_rational(""), Err(ParseError::Empty));
        assert_eq!(parse_rational("1/0"), Err(ParseError::DivisionByZero));
        assert!(matches!(parse_rational("a+"), Err(ParseError::UnexpectedEnd)));
        assert!(matches!(parse_rational("a $ b"), Err(ParseError::Unexpected { .. })));
        assert!(matches!(parse_rational("x^100"), Err(ParseError::BadExponent)));
        assert!(matches!(parse_rational("(a+1"), Err(ParseError::UnexpectedEnd)));
        assert!(matches!(parse_polynomial("1/a"), Err(ParseError::NotPolynomial(_))));
        let deep = "(".repeat(500) + "a" + &")".repeat(500);
        assert_eq!(parse_rational(&deep), Err(ParseError::TooDeep));
    }

    #[test]
    fn printed_form_reparses() {
        let r = parse_rational("-(b-1)*k/((1+a+2*n-b+k)*(a+2*n))").unwrap();
        assert_eq!(parse_rational(&r.to_string()).unwrap(), r);
    }
}
