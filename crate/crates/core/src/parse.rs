//! Recursive-descent parser for the shared polynomial text grammar.
//!
//! Grammar: identifiers `[a-zA-Z][a-zA-Z0-9_]*`, optionally with a
//! parenthesized index `x(1)` which normalizes to `x_1`; operators `+ - * ^`
//! with the usual precedence; integer and `a/b` rational literals; no
//! implicit multiplication.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::Error;
use crate::poly::{Poly, Rat};
use crate::ring::Ring;
use crate::Result;

struct Parser<'a> {
    input: &'a [u8],
    pos: usize,
    ring: &'a Arc<Ring>,
}

pub fn parse_poly(text: &str, ring: &Arc<Ring>) -> Result<Poly> {
    let mut p = Parser {
        input: text.as_bytes(),
        pos: 0,
        ring,
    };
    p.skip_ws();
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos != p.input.len() {
        return Err(p.err("unexpected trailing input"));
    }
    Ok(poly)
}

/// Normalize `x(3)` to `x_3`; other names pass through.
pub fn normalize_var_name(name: &str) -> String {
    if let Some(open) = name.find('(') {
        if name.ends_with(')') {
            let idx = &name[open + 1..name.len() - 1];
            if idx.chars().all(|c| c.is_ascii_digit()) && !idx.is_empty() {
                return format!("{}_{}", &name[..open], idx);
            }
        }
    }
    name.to_string()
}

impl<'a> Parser<'a> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.input.len() && self.input[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&self) -> Option<u8> {
        self.input.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            self.skip_ws();
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = if self.eat(b'-') {
            -&self.term()?
        } else {
            self.term()?
        };
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                break;
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Poly> {
        let mut acc = self.factor()?;
        while self.eat(b'*') {
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Poly> {
        let base = self.base()?;
        if self.eat(b'^') {
            let e = self.uint()?;
            let e: u32 = e
                .try_into()
                .map_err(|_| self.err("exponent too large"))?;
            let p = base.pow(e);
            self.skip_ws();
            Ok(p)
        } else {
            Ok(base)
        }
    }

    fn base(&mut self) -> Result<Poly> {
        match self.peek() {
            Some(b'(') => {
                self.eat(b'(');
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected ')'"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.int()?;
                self.skip_ws();
                if self.eat(b'/') {
                    let d = self.int()?;
                    self.skip_ws();
                    if d == BigInt::from(0) {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Poly::constant(self.ring, Rat::new(n, d)))
                } else {
                    Ok(Poly::constant(self.ring, Rat::new(n, BigInt::one())))
                }
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let name = self.ident()?;
                self.skip_ws();
                match self.ring.var_index(&name) {
                    Some(i) => Ok(Poly::var(self.ring, i)),
                    None => Err(self.err(&format!("unknown variable '{name}'"))),
                }
            }
            _ => Err(self.err("expected '(', number or variable")),
        }
    }

    fn uint(&mut self) -> Result<u64> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| self.err("integer too large"))
    }

    fn int(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while self.peek().is_some_and(|c| c.is_ascii_digit()) {
            self.pos += 1;
        }
        if self.pos == start {
            return Err(self.err("expected integer"));
        }
        Ok(std::str::from_utf8(&self.input[start..self.pos])
            .unwrap()
            .parse()
            .unwrap())
    }

    fn ident(&mut self) -> Result<String> {
        let start = self.pos;
        self.pos += 1;
        while self
            .peek()
            .is_some_and(|c| c.is_ascii_alphanumeric() || c == b'_')
        {
            self.pos += 1;
        }
        let mut name =
            std::str::from_utf8(&self.input[start..self.pos]).unwrap().to_string();
        // parenthesized index form x(1)
        if self.peek() == Some(b'(') {
            let save = self.pos;
            self.pos += 1;
            let dstart = self.pos;
            while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                self.pos += 1;
            }
            if self.pos > dstart && self.peek() == Some(b')') {
                self.pos += 1;
                let idx = std::str::from_utf8(&self.input[dstart..self.pos - 1]).unwrap();
                name = format!("{name}_{idx}");
            } else {
                self.pos = save;
            }
        }
        Ok(name)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_round_trips() {
        let r = Ring::new(vec!["x", "y", "z"]);
        let p = parse_poly("x^5 + y^2 + z^2", &r).unwrap();
        assert_eq!(p.to_string(), "x^5 + y^2 + z^2");
        let q = parse_poly("2*x*y - 1/2", &r).unwrap();
        assert_eq!(q.to_string(), "2*x*y - 1/2");
    }

    #[test]
    fn indexed_names_normalize() {
        let r = Ring::new(vec!["x_1", "y_0"]);
        let p = parse_poly("x(1)^2*y(0)", &r).unwrap();
        assert_eq!(p.to_string(), "x_1^2*y_0");
        assert_eq!(normalize_var_name("x(12)"), "x_12");
        assert_eq!(normalize_var_name("abc"), "abc");
    }

    #[test]
    fn rejects_malformed_input() {
        let r = Ring::new(vec!["x", "y"]);
        assert!(parse_poly("x++y", &r).is_err());
        assert!(parse_poly("x y", &r).is_err()); // no implicit multiplication
        assert!(parse_poly("w + 1", &r).is_err());
        assert!(parse_poly("x^", &r).is_err());
    }

    #[test]
    fn precedence() {
        let r = Ring::new(vec!["x", "y"]);
        let p = parse_poly("-x^2 + 2*x*y^3 - y", &r).unwrap();
        let q = parse_poly("(2*y^3 - 0)*x - x^2 - y", &r).unwrap();
        assert_eq!(p, q);
    }
}
