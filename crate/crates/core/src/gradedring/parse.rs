//! Infix polynomial expressions: `+ - * / ^`, parentheses, integer literals.
//! Division is only allowed by nonzero constants whose value is a unit in
//! Z[1/6] up to an integer factor of the dividend, i.e. the result must stay
//! in Z[1/6].

use std::sync::Arc;

use super::{GradedPoly, VarTable};
use crate::error::{Error, Result};
use crate::exactnum::Coefficient;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Ident(String),
    Op(char),
}

fn lex(s: &str) -> Result<Vec<Tok>> {
    let cs: Vec<char> = s.chars().collect();
    let mut i = 0;
    let mut out = Vec::new();
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let st = i;
            while i < cs.len() && cs[i].is_ascii_digit() {
                i += 1;
            }
            out.push(Tok::Num(cs[st..i].iter().collect()));
        } else if c.is_alphabetic() || c == '_' {
            let st = i;
            while i < cs.len() && (cs[i].is_alphanumeric() || cs[i] == '_') {
                i += 1;
            }
            out.push(Tok::Ident(cs[st..i].iter().collect()));
        } else if "+-*/^()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else {
            return Err(Error::Parse(format!("unexpected character {c:?} in {s:?}")));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    table: &'a Arc<VarTable>,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Op(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<GradedPoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = acc.add(&self.term()?);
            } else if self.eat('-') {
                acc = acc.sub(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<GradedPoly> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.mul(&self.unary()?);
            } else if self.eat('/') {
                let d = self.unary()?;
                acc = divide(&acc, &d)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<GradedPoly> {
        if self.eat('-') {
            return Ok(self.unary()?.neg());
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<GradedPoly> {
        let base = self.atom()?;
        if self.eat('^') {
            match self.peek().cloned() {
                Some(Tok::Num(n)) => {
                    self.pos += 1;
                    let e: u32 = n.parse().map_err(|_| Error::Parse(format!("bad exponent {n}")))?;
                    Ok(base.pow(e))
                }
                other => Err(Error::Parse(format!("expected exponent, found {other:?}"))),
            }
        } else {
            Ok(base)
        }
    }

    fn atom(&mut self) -> Result<GradedPoly> {
        match self.peek().cloned() {
            Some(Tok::Num(n)) => {
                self.pos += 1;
                let c: Coefficient = n.parse()?;
                Ok(GradedPoly::constant(self.table, c))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                GradedPoly::var(self.table, &name)
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(Error::Parse("missing ')'".into()));
                }
                Ok(e)
            }
            other => Err(Error::Parse(format!("unexpected token {other:?}"))),
        }
    }
}

fn divide(a: &GradedPoly, d: &GradedPoly) -> Result<GradedPoly> {
    let c = match d.terms() {
        [(m, c)] if m.is_one() => c.clone(),
        [] => return Err(Error::DivisionByZero),
        _ => return Err(Error::Parse(format!("can only divide by constants, not {d}"))),
    };
    let terms = a
        .terms()
        .iter()
        .map(|(m, x)| {
            x.checked_div(&c)
                .or_else(|| c.inverse().map(|u| x * &u))
                .map(|q| (m.clone(), q))
                .ok_or_else(|| Error::BadDenominator(format!("{x}/{c}")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(GradedPoly::from_terms(a.table(), terms))
}

pub fn parse_poly(table: &Arc<VarTable>, s: &str) -> Result<GradedPoly> {
    let toks = lex(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, table };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input in {s:?}")));
    }
    Ok(e)
}
