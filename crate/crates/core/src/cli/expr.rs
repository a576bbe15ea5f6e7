//! Expressions over the localized Heisenberg group:
//!
//! ```text
//! expr   := factor ('*' factor)*
//! factor := atom ('^' integer)?
//! atom   := 'id' | '(' rational ',' integer ',' integer ')' | '[' expr ',' expr ']' | '(' expr ')'
//! ```
//!
//! `[g, h]` is the commutator `g h g^-1 h^-1`.

use crate::error::{Error, Result};
use crate::exact::{Int, Rat};
use crate::heisenberg::HeisElement;

pub fn eval_heis_expr(src: &str) -> Result<HeisElement> {
    let mut p = Parser { src: src.as_bytes(), pos: 0 };
    let value = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(value)
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at offset {} in {:?}", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn expr(&mut self) -> Result<HeisElement> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = acc.mul(&self.factor()?);
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<HeisElement> {
        let base = self.atom()?;
        if self.eat(b'^') {
            let n = self.integer()?;
            return Ok(base.pow(&n));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<HeisElement> {
        match self.peek() {
            Some(b'[') => {
                self.pos += 1;
                let g = self.expr()?;
                self.expect(b',')?;
                let h = self.expr()?;
                self.expect(b']')?;
                Ok(g.comm(&h))
            }
            Some(b'(') => {
                let start = self.pos;
                self.pos += 1;
                if let Some(t) = self.try_triple()? {
                    return Ok(t);
                }
                self.pos = start + 1;
                let g = self.expr()?;
                self.expect(b')')?;
                Ok(g)
            }
            Some(b'i') if self.src[self.pos..].starts_with(b"id") => {
                self.pos += 2;
                Ok(HeisElement::identity())
            }
            _ => Err(self.error("expected a triple, 'id', a commutator or a parenthesized expression")),
        }
    }

    /// After an opening parenthesis: `rational , integer , integer )`, or `None`
    /// if the input does not start with a number.
    fn try_triple(&mut self) -> Result<Option<HeisElement>> {
        match self.peek() {
            Some(c) if c == b'-' || c == b'+' || c.is_ascii_digit() => {}
            _ => return Ok(None),
        }
        let a = self.rational()?;
        self.expect(b',')?;
        let b = self.integer()?;
        self.expect(b',')?;
        let c = self.integer()?;
        self.expect(b')')?;
        Ok(Some(HeisElement::new(a, b, c)))
    }

    fn integer(&mut self) -> Result<Int> {
        self.skip_ws();
        let start = self.pos;
        if matches!(self.src.get(self.pos), Some(b'-') | Some(b'+')) {
            self.pos += 1;
        }
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        text.parse::<Int>().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    fn rational(&mut self) -> Result<Rat> {
        let num = self.integer()?;
        if self.src.get(self.pos) == Some(&b'/') {
            self.pos += 1;
            let den = self.integer()?;
            if den == Int::from(0) {
                return Err(self.error("zero denominator"));
            }
            return Ok(Rat::new(num, den));
        }
        Ok(Rat::from_integer(num))
    }
}
