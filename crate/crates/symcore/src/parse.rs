//! Parser for the canonical expression syntax: integers, variables
//! (t1.., g1.., h1.., C112.., c), + - * / ^ and parentheses. `^` takes an
//! integer exponent, optionally negative and parenthesized.

use num_bigint::BigInt;

use crate::error::SymError;
use crate::poly::ZPoly;
use crate::ratfn::{QuotientCtx, RatFn};
use crate::var::Var;

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
    ctx: &'a QuotientCtx,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T, SymError> {
        Err(SymError::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFn, SymError> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let t = self.term()?;
                acc = self.ctx.add(&acc, &t);
            } else if self.eat(b'-') {
                let t = self.term()?;
                acc = self.ctx.sub(&acc, &t);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFn, SymError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                let t = self.unary()?;
                acc = self.ctx.mul(&acc, &t);
            } else if self.eat(b'/') {
                let at = self.pos;
                let t = self.unary()?;
                acc = self.ctx.div(&acc, &t).map_err(|_| SymError::Parse {
                    pos: at,
                    msg: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFn, SymError> {
        if self.eat(b'-') {
            let u = self.unary()?;
            return Ok(self.ctx.neg(&u));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFn, SymError> {
        let base = self.primary()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        let k = self.integer()?;
        if paren && !self.eat(b')') {
            return self.err("expected `)` after exponent");
        }
        let k: i32 = match k.try_into() {
            Ok(k) => k,
            Err(_) => return self.err("exponent too large"),
        };
        let k = if neg { -k } else { k };
        let at = self.pos;
        self.ctx
            .pow(&base, k)
            .map_err(|_| SymError::Parse { pos: at, msg: "zero to a negative power".into() })
    }

    fn integer(&mut self) -> Result<BigInt, SymError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        Ok(txt.parse().unwrap())
    }

    fn primary(&mut self) -> Result<RatFn, SymError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected `)`");
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let k = self.integer()?;
                Ok(RatFn::from_zpoly(ZPoly::constant(k)))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
                let v: Var = name.parse()?;
                Ok(self.ctx.reduce(&RatFn::var(v)))
            }
            Some(_) => self.err("unexpected character"),
            None => self.err("unexpected end of input"),
        }
    }
}

/// Parses an expression into its canonical form under `ctx`.
pub fn parse_ratfn(s: &str, ctx: &QuotientCtx) -> Result<RatFn, SymError> {
    let mut p = Parser { s: s.as_bytes(), pos: 0, ctx };
    let e = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Parses an integer polynomial.
pub fn parse_zpoly(s: &str) -> Result<ZPoly, SymError> {
    let f = parse_ratfn(s, &QuotientCtx::plain())?;
    if !f.den().is_one() {
        return Err(SymError::Parse { pos: 0, msg: "not an integer polynomial".into() });
    }
    Ok(f.num().clone())
}
