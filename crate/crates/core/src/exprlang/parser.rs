//! Recursive-descent parser.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' exponent)?
//! atom   := INT | IDENT | IDENT '(' args ')' | '(' expr ')'
//! ```

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

use super::{normalize, Expr, ExprError, Func, NamedConst};

/// Parses and normalizes.
pub fn parse(text: &str) -> Result<Expr, ExprError> {
    parse_raw(text).map(|e| normalize(&e))
}

/// Parses without normalization.
pub fn parse_raw(text: &str) -> Result<Expr, ExprError> {
    if !text.is_ascii() {
        let offset = text.char_indices().find(|(_, c)| !c.is_ascii()).map_or(0, |(i, _)| i);
        return Err(syntax(offset, "non-ASCII input"));
    }
    let mut p = Parser { src: text.as_bytes(), pos: 0 };
    p.skip_ws();
    if p.at_end() {
        return Err(syntax(0, "empty expression"));
    }
    let e = p.expr()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(syntax(p.pos, format!("unexpected `{}`", p.src[p.pos] as char)));
    }
    Ok(e)
}

fn syntax(offset: usize, message: impl Into<String>) -> ExprError {
    ExprError::Syntax { offset, message: message.into() }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_whitespace()) {
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

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(syntax(self.pos, format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = Expr::add(lhs, self.term()?);
            } else if self.eat(b'-') {
                lhs = Expr::sub(lhs, self.term()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = Expr::mul(lhs, self.unary()?);
            } else if self.eat(b'/') {
                lhs = Expr::div(lhs, self.unary()?);
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr, ExprError> {
        if self.eat(b'-') {
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr, ExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let k = self.exponent()?;
        if self.peek() == Some(b'^') {
            return Err(syntax(self.pos, "chained exponents need parentheses"));
        }
        Ok(Expr::pow(base, k))
    }

    fn exponent(&mut self) -> Result<i64, ExprError> {
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        if !neg {
            self.eat(b'+');
        }
        self.skip_ws();
        let start = self.pos;
        let digits = self.integer()?;
        let k = digits
            .to_i64()
            .ok_or_else(|| syntax(start, "exponent out of range"))?;
        if paren {
            self.expect(b')')?;
        }
        Ok(if neg { -k } else { k })
    }

    fn integer(&mut self) -> Result<BigInt, ExprError> {
        self.skip_ws();
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(syntax(start, "expected an integer"));
        }
        if self.src.get(self.pos) == Some(&b'.') {
            return Err(syntax(self.pos, "decimal literals are not supported; write p/q"));
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Ok(s.parse().expect("digits"))
    }

    fn ident(&mut self) -> Option<(usize, String)> {
        self.skip_ws();
        let start = self.pos;
        if !self.src.get(self.pos).is_some_and(|c| c.is_ascii_alphabetic()) {
            return None;
        }
        while self
            .src
            .get(self.pos)
            .is_some_and(|c| c.is_ascii_alphanumeric() || *c == b'_')
        {
            self.pos += 1;
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
        Some((start, s.to_string()))
    }

    fn atom(&mut self) -> Result<Expr, ExprError> {
        match self.peek() {
            None => Err(syntax(self.pos, "unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'.') => Err(syntax(self.pos, "decimal literals are not supported; write p/q")),
            Some(c) if c.is_ascii_digit() => Ok(Expr::Int(self.integer()?)),
            Some(c) if c.is_ascii_alphabetic() => {
                let (offset, name) = self.ident().expect("alphabetic");
                if self.peek() == Some(b'(') {
                    self.pos += 1;
                    let e = self.call(&name, offset)?;
                    self.expect(b')')?;
                    return Ok(e);
                }
                match name.as_str() {
                    "n" | "z" | "v" => Ok(Expr::Var),
                    "pi" => Ok(Expr::Const(NamedConst::Pi)),
                    "gamma" => Ok(Expr::Const(NamedConst::Gamma)),
                    "catalan" => Ok(Expr::Const(NamedConst::Catalan)),
                    "e" => Ok(Expr::Const(NamedConst::E)),
                    _ => Err(ExprError::UnknownIdentifier { name, offset }),
                }
            }
            Some(c) => Err(syntax(self.pos, format!("unexpected `{}`", c as char))),
        }
    }

    fn call(&mut self, name: &str, offset: usize) -> Result<Expr, ExprError> {
        if let Some(f) = Func::ALL.iter().find(|f| f.name() == name) {
            return Ok(Expr::func(*f, self.expr()?));
        }
        match name {
            "zeta" => {
                let k = self.order()?;
                Ok(Expr::Zeta(k))
            }
            "psi" => {
                let a = self.positive_rational()?;
                Ok(Expr::Psi(a))
            }
            "hurwitz" => {
                let k = self.order()?;
                self.expect(b',')?;
                let a = self.positive_rational()?;
                Ok(Expr::Hurwitz(k, a))
            }
            _ => Err(ExprError::UnknownIdentifier { name: name.to_string(), offset }),
        }
    }

    fn order(&mut self) -> Result<u32, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let k = self.integer()?;
        match k.to_u32() {
            Some(k) if k >= 2 => Ok(k),
            _ => Err(syntax(start, "zeta order must be an integer >= 2")),
        }
    }

    fn positive_rational(&mut self) -> Result<BigRational, ExprError> {
        self.skip_ws();
        let start = self.pos;
        let e = normalize(&self.expr()?);
        match e.as_literal() {
            Some(r) if r.is_positive() => Ok(r),
            _ => Err(syntax(start, "expected a positive rational argument")),
        }
    }
}
