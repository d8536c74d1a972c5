use std::fmt::Write;

use num_traits::Zero;
use thiserror::Error;

use super::{MPoly, Monomial};
use crate::field::FiniteField;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("unexpected character {0:?} at offset {1}")]
    BadChar(char, usize),
    #[error("unknown variable {0:?}")]
    UnknownVar(String),
    #[error("unexpected end of input")]
    Eof,
    #[error("unexpected token at offset {0}")]
    Unexpected(usize),
    #[error("number {0:?} out of range")]
    Number(String),
}

/// Named variables of a polynomial ring. The listed order is the grevlex
/// precedence: the first name is the greatest variable.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    names: Vec<String>,
}

impl PolyRing {
    pub fn new<S: AsRef<str>>(names: &[S]) -> Self {
        assert!(
            names.len() <= Monomial::MAX_VARS,
            "at most {} variables",
            Monomial::MAX_VARS
        );
        let names: Vec<String> = names.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            assert!(!names[..i].contains(n), "duplicate variable {n}");
        }
        PolyRing { names }
    }

    /// Ring whose precedence is given as an ascending chain `v0 < v1 < ...`.
    pub fn from_ascending<S: AsRef<str>>(chain: &[S]) -> Self {
        let mut v: Vec<&str> = chain.iter().map(|s| s.as_ref()).collect();
        v.reverse();
        Self::new(&v)
    }

    /// The ambient ring of the curves, with `x > y > z > w`.
    pub fn xyzw() -> Self {
        Self::new(&["x", "y", "z", "w"])
    }

    pub fn nvars(&self) -> usize {
        self.names.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn render_monomial(&self, m: Monomial) -> String {
        let mut s = String::new();
        for (i, name) in self.names.iter().enumerate() {
            let e = m.exp(i);
            if e == 0 {
                continue;
            }
            if !s.is_empty() {
                s.push('*');
            }
            s.push_str(name);
            if e > 1 {
                let _ = write!(s, "^{e}");
            }
        }
        assert!(
            m.support_len() <= self.names.len(),
            "monomial outside the ring"
        );
        s
    }

    /// Canonical text: terms in decreasing grevlex order, least residues,
    /// unit coefficients omitted, `*` between factors.
    pub fn render<F: FiniteField>(&self, p: &MPoly<F>) -> String {
        self.render_with(p, |c| c.to_string())
    }

    /// Renders a polynomial whose coefficients live in another named ring.
    pub fn render_nested<F: FiniteField>(&self, inner: &PolyRing, p: &MPoly<MPoly<F>>) -> String {
        self.render_with(p, |c| {
            if c.len() == 1 && c.terms()[0].0.is_one() {
                c.terms()[0].1.to_string()
            } else {
                format!("({})", inner.render(c))
            }
        })
    }

    fn render_with<R: crate::field::Ring>(
        &self,
        p: &MPoly<R>,
        coeff: impl Fn(&R) -> String,
    ) -> String {
        if p.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (m, c)) in p.terms().iter().enumerate() {
            if k > 0 {
                out.push_str(" + ");
            }
            let mono = self.render_monomial(*m);
            let cs = coeff(c);
            if mono.is_empty() {
                out.push_str(&cs);
            } else if c.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&cs);
                out.push('*');
                out.push_str(&mono);
            }
        }
        out
    }

    pub fn parse<F: FiniteField>(&self, s: &str) -> Result<MPoly<F>, ParseError> {
        self.parse_with(s, &[])
    }

    /// Parses with extra named constants (e.g. `t` for the generator of a
    /// quadratic extension). Accepts `*` or juxtaposition for products, `^`
    /// for powers, parentheses, and signed integer literals.
    pub fn parse_with<F: FiniteField>(
        &self,
        s: &str,
        constants: &[(&str, F)],
    ) -> Result<MPoly<F>, ParseError> {
        let tokens = tokenize(s)?;
        let mut p = Parser {
            ring: self,
            constants,
            tokens,
            pos: 0,
        };
        let v = p.expr()?;
        if p.pos != p.tokens.len() {
            return Err(ParseError::Unexpected(p.tokens[p.pos].1));
        }
        Ok(v)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<(usize, char)> = s.char_indices().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (off, c) = chars[i];
        match c {
            c if c.is_whitespace() => i += 1,
            '+' => {
                out.push((Tok::Plus, off));
                i += 1
            }
            '-' => {
                out.push((Tok::Minus, off));
                i += 1
            }
            '*' => {
                out.push((Tok::Star, off));
                i += 1
            }
            '^' => {
                out.push((Tok::Caret, off));
                i += 1
            }
            '(' => {
                out.push((Tok::LParen, off));
                i += 1
            }
            ')' => {
                out.push((Tok::RParen, off));
                i += 1
            }
            c if c.is_ascii_digit() => {
                let mut j = i;
                while j < chars.len() && chars[j].1.is_ascii_digit() {
                    j += 1;
                }
                out.push((Tok::Num(chars[i..j].iter().map(|x| x.1).collect()), off));
                i = j;
            }
            c if c.is_ascii_alphabetic() || c == '_' => {
                let mut j = i;
                while j < chars.len() && (chars[j].1.is_ascii_alphanumeric() || chars[j].1 == '_') {
                    j += 1;
                }
                out.push((Tok::Ident(chars[i..j].iter().map(|x| x.1).collect()), off));
                i = j;
            }
            c => return Err(ParseError::BadChar(c, off)),
        }
    }
    Ok(out)
}

struct Parser<'a, F> {
    ring: &'a PolyRing,
    constants: &'a [(&'a str, F)],
    tokens: Vec<(Tok, usize)>,
    pos: usize,
}

impl<F: FiniteField> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.tokens.get(self.pos).map(|t| &t.0)
    }

    fn expr(&mut self) -> Result<MPoly<F>, ParseError> {
        let mut acc = MPoly::zero();
        let mut sign = match self.peek() {
            Some(Tok::Minus) => {
                self.pos += 1;
                -1
            }
            Some(Tok::Plus) => {
                self.pos += 1;
                1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            acc = if sign < 0 { &acc - &t } else { &acc + &t };
            match self.peek() {
                Some(Tok::Plus) => sign = 1,
                Some(Tok::Minus) => sign = -1,
                _ => return Ok(acc),
            }
            self.pos += 1;
        }
    }

    fn term(&mut self) -> Result<MPoly<F>, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.pos += 1;
                }
                Some(Tok::Num(_)) | Some(Tok::Ident(_)) | Some(Tok::LParen) => {}
                _ => return Ok(acc),
            }
            let f = self.factor()?;
            acc = &acc * &f;
        }
    }

    fn factor(&mut self) -> Result<MPoly<F>, ParseError> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.pos += 1;
            match self.tokens.get(self.pos) {
                Some((Tok::Num(n), _)) => {
                    let e: u32 = n.parse().map_err(|_| ParseError::Number(n.clone()))?;
                    self.pos += 1;
                    Ok(base.pow(e))
                }
                Some((_, off)) => Err(ParseError::Unexpected(*off)),
                None => Err(ParseError::Eof),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<MPoly<F>, ParseError> {
        let (tok, off) = self.tokens.get(self.pos).cloned().ok_or(ParseError::Eof)?;
        self.pos += 1;
        match tok {
            Tok::Num(n) => {
                let v: i64 = n.parse().map_err(|_| ParseError::Number(n.clone()))?;
                Ok(MPoly::constant(F::from_i64(v)))
            }
            Tok::Ident(name) => {
                if let Some(i) = self.ring.index_of(&name) {
                    Ok(MPoly::var(i))
                } else if let Some((_, c)) = self.constants.iter().find(|(n, _)| *n == name) {
                    Ok(MPoly::constant(*c))
                } else {
                    Err(ParseError::UnknownVar(name))
                }
            }
            Tok::LParen => {
                let v = self.expr()?;
                match self.tokens.get(self.pos) {
                    Some((Tok::RParen, _)) => {
                        self.pos += 1;
                        Ok(v)
                    }
                    Some((_, off)) => Err(ParseError::Unexpected(*off)),
                    None => Err(ParseError::Eof),
                }
            }
            Tok::Minus => Ok(-self.factor()?),
            _ => Err(ParseError::Unexpected(off)),
        }
    }
}
