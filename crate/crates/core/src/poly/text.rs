//! Textual polynomial syntax: `+`-separated terms, `*`-separated factors,
//! `^` powers, coefficients in the field element syntax (parenthesized when
//! they have several terms). Printing is canonical, so parse/print round
//! trips are bit-exact.

use std::cmp::Ordering;
use std::sync::Arc;

use thiserror::Error;

use crate::field::{FieldDesc, FieldElem};

use super::{Monomial, MonomialOrder, MultiPoly, VarRoster};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("cannot parse polynomial at `{at}`: {reason}")]
pub struct PolyParseError {
    pub at: String,
    pub reason: String,
}

fn err(at: &str, reason: &str) -> PolyParseError {
    PolyParseError {
        at: at.chars().take(32).collect(),
        reason: reason.to_string(),
    }
}

impl MultiPoly {
    /// Canonical text form: terms in descending grevlex order.
    pub fn to_text(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut terms: Vec<(&Monomial, &FieldElem)> = self.terms().collect();
        let ord = MonomialOrder::GrevLex;
        terms.sort_by(|(a, _), (b, _)| match ord.cmp(a, b) {
            Ordering::Equal => Ordering::Equal,
            o => o.reverse(),
        });
        let rendered: Vec<String> = terms
            .into_iter()
            .map(|(m, c)| self.render_term(m, c))
            .collect();
        rendered.join(" + ")
    }

    fn render_term(&self, m: &Monomial, c: &FieldElem) -> String {
        let coeff_text = c.to_text();
        let coeff_part = if coeff_text.contains('+') {
            format!("({coeff_text})")
        } else {
            coeff_text
        };
        if m.is_one() {
            return coeff_part;
        }
        let mut factors = Vec::new();
        if !c.is_one() {
            factors.push(coeff_part);
        }
        for (i, &e) in m.exps().iter().enumerate() {
            match e {
                0 => {}
                1 => factors.push(self.roster().name(i).to_string()),
                _ => factors.push(format!("{}^{}", self.roster().name(i), e)),
            }
        }
        factors.join("*")
    }

    /// Parse the textual syntax into this roster/field.
    pub fn parse(
        roster: &Arc<VarRoster>,
        desc: &Arc<FieldDesc>,
        text: &str,
    ) -> Result<MultiPoly, PolyParseError> {
        let tokens = tokenize(text)?;
        let mut parser = Parser {
            roster,
            desc,
            tokens: &tokens,
            pos: 0,
        };
        let p = parser.parse_sum()?;
        if parser.pos != tokens.len() {
            return Err(err(&format!("{:?}", tokens[parser.pos]), "trailing input"));
        }
        Ok(p)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Token {
    Ident(String),
    Int(u64),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
}

fn tokenize(text: &str) -> Result<Vec<Token>, PolyParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    while let Some(&(i, c)) = chars.peek() {
        match c {
            ' ' | '\t' | '\n' | '\r' => {
                chars.next();
            }
            '+' => {
                out.push(Token::Plus);
                chars.next();
            }
            '-' => {
                out.push(Token::Minus);
                chars.next();
            }
            '*' => {
                out.push(Token::Star);
                chars.next();
            }
            '^' => {
                out.push(Token::Caret);
                chars.next();
            }
            '(' => {
                out.push(Token::LParen);
                chars.next();
            }
            ')' => {
                out.push(Token::RParen);
                chars.next();
            }
            '0'..='9' => {
                let mut n: u64 = 0;
                while let Some(&(_, d)) = chars.peek() {
                    if let Some(v) = d.to_digit(10) {
                        n = n
                            .checked_mul(10)
                            .and_then(|n| n.checked_add(v as u64))
                            .ok_or_else(|| err(&text[i..], "integer overflow"))?;
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Int(n));
            }
            c if c.is_ascii_alphabetic() => {
                let mut name = String::new();
                while let Some(&(_, d)) = chars.peek() {
                    if d.is_ascii_alphanumeric() || d == '_' {
                        name.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Token::Ident(name));
            }
            _ => return Err(err(&text[i..], "unexpected character")),
        }
    }
    Ok(out)
}

struct Parser<'a> {
    roster: &'a Arc<VarRoster>,
    desc: &'a Arc<FieldDesc>,
    tokens: &'a [Token],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn bump(&mut self) -> Option<&Token> {
        let t = self.tokens.get(self.pos);
        if t.is_some() {
            self.pos += 1;
        }
        t
    }

    fn parse_sum(&mut self) -> Result<MultiPoly, PolyParseError> {
        let mut negate = false;
        if matches!(self.peek(), Some(Token::Minus)) {
            self.bump();
            negate = true;
        }
        let mut acc = {
            let t = self.parse_term()?;
            if negate {
                t.neg()
            } else {
                t
            }
        };
        loop {
            match self.peek() {
                Some(Token::Plus) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.add(&t);
                }
                Some(Token::Minus) => {
                    self.bump();
                    let t = self.parse_term()?;
                    acc = acc.sub(&t);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<MultiPoly, PolyParseError> {
        let mut acc = self.parse_factor()?;
        while matches!(self.peek(), Some(Token::Star)) {
            self.bump();
            let f = self.parse_factor()?;
            acc = acc.mul(&f);
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<MultiPoly, PolyParseError> {
        let base = match self.bump().cloned() {
            Some(Token::Int(n)) => MultiPoly::constant(self.roster, self.desc.from_int(n as i64)),
            Some(Token::Ident(name)) => {
                if let Some(i) = self.roster.index_of(&name) {
                    MultiPoly::var(self.roster, self.desc, i)
                } else if name == "g" && self.desc.degree() >= 2 {
                    MultiPoly::constant(self.roster, self.desc.generator())
                } else {
                    return Err(err(&name, "unknown variable"));
                }
            }
            Some(Token::LParen) => {
                let inner = self.parse_sum()?;
                match self.bump() {
                    Some(Token::RParen) => inner,
                    _ => return Err(err("", "expected `)`")),
                }
            }
            other => return Err(err(&format!("{other:?}"), "expected factor")),
        };
        if matches!(self.peek(), Some(Token::Caret)) {
            self.bump();
            match self.bump().cloned() {
                Some(Token::Int(e)) => {
                    if e > u16::MAX as u64 {
                        return Err(err(&e.to_string(), "exponent too large"));
                    }
                    return Ok(base.pow(e as u32));
                }
                other => return Err(err(&format!("{other:?}"), "expected exponent")),
            }
        }
        Ok(base)
    }
}
