//! Polynomial text syntax: identifiers, integers, `^`, `*`, `+`, `-`, parentheses.

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::field::Field;
use crate::poly::{Poly, PolyRing};

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn err(col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line: 1,
        col,
        msg: msg.into(),
    }
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().expect("digits")), col));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
        } else if "+-*^()".contains(c) {
            out.push((Tok::Sym(c), col));
            i += 1;
        } else {
            return Err(err(col, format!("unexpected character `{c}`")));
        }
    }
    Ok(out)
}

struct Parser<'a, F: Field> {
    ring: &'a PolyRing<F>,
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
}

impl<F: Field> Parser<'_, F> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn col(&self) -> usize {
        self.toks.get(self.pos).map_or(self.end_col, |t| t.1)
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly<F>> {
        let mut acc = if self.eat('-') {
            let t = self.term()?;
            self.ring.neg(&t)
        } else {
            self.eat('+');
            self.term()?
        };
        loop {
            if self.eat('+') {
                let t = self.term()?;
                acc = self.ring.add(&acc, &t);
            } else if self.eat('-') {
                let t = self.term()?;
                acc = self.ring.sub(&acc, &t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Poly<F>> {
        let mut acc = self.factor()?;
        while self.eat('*') {
            let f = self.factor()?;
            acc = self.ring.mul(&acc, &f);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly<F>> {
        let base = self.base()?;
        if self.eat('^') {
            let col = self.col();
            match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.pos += 1;
                    let e: u32 = n.try_into().map_err(|_| err(col, "exponent too large"))?;
                    Ok(self.ring.pow(&base, e))
                }
                _ => Err(err(col, "expected a non-negative integer exponent")),
            }
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Poly<F>> {
        let col = self.col();
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.pos += 1;
                Ok(self.ring.constant(self.ring.field().from_bigint(&n)))
            }
            Some(Tok::Ident(name)) => {
                self.pos += 1;
                match self.ring.var_index(&name) {
                    Some(i) => Ok(self.ring.var(i)),
                    None => Err(err(col, format!("unknown variable `{name}`"))),
                }
            }
            Some(Tok::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(')') {
                    return Err(err(self.col(), "expected `)`"));
                }
                Ok(e)
            }
            Some(Tok::Sym('-')) => {
                self.pos += 1;
                let b = self.factor()?;
                Ok(self.ring.neg(&b))
            }
            Some(t) => Err(err(col, format!("unexpected token {t:?}"))),
            None => Err(err(col, "unexpected end of input")),
        }
    }
}

/// Parses a polynomial; errors carry the 1-based column of the offending token.
pub fn parse_poly<F: Field>(ring: &PolyRing<F>, text: &str) -> Result<Poly<F>> {
    let toks = lex(text)?;
    let mut p = Parser {
        ring,
        toks,
        pos: 0,
        end_col: text.chars().count() + 1,
    };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(err(p.col(), "trailing input"));
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn parses_and_renders_back() {
        let r = PolyRing::standard(PrimeField::default(), &["z0", "z1", "z2"]);
        let p = parse_poly(&r, "z1^2 - z0*z2").unwrap();
        assert_eq!(r.render(&p), "z1^2 - z0*z2");
        let q = parse_poly(&r, "-(z0 + 2*z1)^2").unwrap();
        assert_eq!(r.render(&q), "-z0^2 - 4*z0*z1 - 4*z1^2");
    }

    #[test]
    fn unknown_variable_is_located() {
        let r = PolyRing::standard(PrimeField::default(), &["z0", "z1", "z2"]);
        match parse_poly(&r, "z1^2 - z0*z3") {
            Err(Error::Parse { col, msg, .. }) => {
                assert_eq!(col, 11);
                assert!(msg.contains("z3"));
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }
}
