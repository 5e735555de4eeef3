//! Arithmetic expressions over a tower: `+ - * / ^`, parentheses, integer
//! literals, declared variables and `g` (canonical generator of the base).

use super::elem::FieldElem;
use super::tower::FieldTower;
use crate::error::{Error, Result};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    field: &'a FieldTower,
}

impl FieldElem {
    /// Parse an expression such as `(x+1)*y^2 - g/x`.
    pub fn parse(field: &FieldTower, s: &str) -> Result<FieldElem> {
        let mut p = Parser { src: s.as_bytes(), pos: 0, field };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(e)
    }
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse { pos: self.pos, msg: msg.to_string() }
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

    fn domain(&self, at: usize, r: Result<FieldElem>) -> Result<FieldElem> {
        r.map_err(|e| match e {
            Error::DivisionByZero => Error::Parse { pos: at, msg: "division by zero".into() },
            other => other,
        })
    }

    fn expr(&mut self) -> Result<FieldElem> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = &acc + &self.term()?;
            } else if self.eat(b'-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<FieldElem> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = &acc * &self.unary()?;
            } else if self.eat(b'/') {
                let at = self.pos;
                let d = self.unary()?;
                acc = self.domain(at, acc.checked_div(&d))?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<FieldElem> {
        if self.eat(b'-') {
            return Ok(-self.unary()?);
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<FieldElem> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let at = self.pos;
        let neg = self.eat(b'-');
        let paren = !neg && self.eat(b'(');
        let neg = neg || (paren && self.eat(b'-'));
        let e = self.integer()?;
        if paren && !self.eat(b')') {
            return Err(self.err("expected `)`"));
        }
        let e = i64::try_from(e).map_err(|_| self.err("exponent too large"))?;
        self.domain(at, base.pow(if neg { -e } else { e }))
    }

    fn integer(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected integer"));
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|_| Error::Parse { pos: start, msg: "integer too large".into() })
    }

    fn atom(&mut self) -> Result<FieldElem> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if !self.eat(b')') {
                    return Err(self.err("expected `)`"));
                }
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.integer()?;
                let p = self.field.characteristic() as u64;
                Ok(FieldElem::from_int(self.field, (n % p) as i64))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_') {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if name == "g" {
                    return Ok(FieldElem::generator(self.field));
                }
                FieldElem::var(self.field, name)
                    .map_err(|_| Error::Parse { pos: start, msg: format!("undeclared variable `{name}`") })
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_basic_expressions() {
        let k = FieldTower::parse("Fq(5,1)(x)((y))").unwrap();
        let a = FieldElem::parse(&k, "(x+1)*y").unwrap();
        assert_eq!(a.to_string(), "(x + 1)*y");
        let b = FieldElem::parse(&k, "x/(x+1) + 1/(x+1)").unwrap();
        assert!(b.is_one());
        let c = FieldElem::parse(&k, "-g*x^2 + 7").unwrap();
        assert_eq!(c, FieldElem::parse(&k, "3*x^2 + 2").unwrap());
        let d = FieldElem::parse(&k, "y^-2 * y^(2)").unwrap();
        assert!(d.is_one());
    }

    #[test]
    fn display_reparses() {
        let k = FieldTower::parse("Fq(5,2)(x)(y)").unwrap();
        for s in ["g*x/(y+g^3)", "(x^2+g)/(x*y+1)", "y/(x+1) - 1/y", "g^7", "x^3/(x+g)^2"] {
            let e = FieldElem::parse(&k, s).unwrap();
            assert_eq!(FieldElem::parse(&k, &e.to_string()).unwrap(), e, "{s} -> {e}");
        }
    }

    #[test]
    fn parse_errors_carry_positions() {
        let k = FieldTower::parse("Fq(5,1)(x)").unwrap();
        assert!(matches!(FieldElem::parse(&k, "x + z"), Err(Error::Parse { pos: 4, .. })));
        assert!(matches!(FieldElem::parse(&k, "1/(x-x)"), Err(Error::Parse { .. })));
        assert!(matches!(FieldElem::parse(&k, "(x"), Err(Error::Parse { .. })));
    }
}
