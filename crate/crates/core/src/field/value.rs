//! Recursive exact arithmetic for iterated rational function fields.
//!
//! A value of level 0 is a finite-field constant. A value of level `l >= 1`
//! is a reduced fraction `num/den` of polynomials in the `l`-th variable whose
//! coefficients are values of level `l - 1`; `den` is monic and coprime to
//! `num`. Canonical form makes structural equality agree with field equality.

use super::gf::{Fq, Gf};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Value {
    C(Fq),
    R(Box<Frac>),
}

/// Polynomial in one variable with coefficients one level down, low to high.
pub type RPoly = Vec<Value>;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Frac {
    pub num: RPoly,
    pub den: RPoly,
}

impl Value {
    pub fn frac(&self) -> &Frac {
        match self {
            Value::R(f) => f,
            Value::C(_) => panic!("level-0 value has no fraction form"),
        }
    }
    pub fn as_const(&self) -> Fq {
        match self {
            Value::C(c) => *c,
            Value::R(_) => panic!("value is not a level-0 constant"),
        }
    }
}

/// Arithmetic context over one finite field.
#[derive(Clone, Copy)]
pub struct Ar<'a> {
    pub gf: &'a Gf,
}

impl<'a> Ar<'a> {
    pub fn new(gf: &'a Gf) -> Self {
        Ar { gf }
    }

    pub fn zero(&self, l: usize) -> Value {
        if l == 0 {
            Value::C(0)
        } else {
            Value::R(Box::new(Frac { num: vec![], den: vec![self.one(l - 1)] }))
        }
    }

    pub fn one(&self, l: usize) -> Value {
        self.constant(l, 1)
    }

    pub fn constant(&self, l: usize, c: Fq) -> Value {
        if l == 0 {
            Value::C(c)
        } else if c == 0 {
            self.zero(l)
        } else {
            Value::R(Box::new(Frac { num: vec![self.constant(l - 1, c)], den: vec![self.one(l - 1)] }))
        }
    }

    pub fn from_int(&self, l: usize, n: i64) -> Value {
        self.constant(l, self.gf.from_int(n))
    }

    /// The variable of layer `l` as an element of level `l`.
    pub fn var(&self, l: usize) -> Value {
        assert!(l >= 1);
        Value::R(Box::new(Frac {
            num: vec![self.zero(l - 1), self.one(l - 1)],
            den: vec![self.one(l - 1)],
        }))
    }

    /// Embed a value of level `from` into level `to >= from`.
    pub fn lift(&self, v: &Value, from: usize, to: usize) -> Value {
        let mut v = v.clone();
        for l in from..to {
            v = if self.is_zero(&v) {
                self.zero(l + 1)
            } else {
                Value::R(Box::new(Frac { num: vec![v], den: vec![self.one(l)] }))
            };
        }
        v
    }

    /// Build a value of level `l` from polynomial numerator and denominator.
    pub fn from_polys(&self, l: usize, num: RPoly, den: RPoly) -> Result<Value> {
        self.make(l, num, den)
    }

    pub fn is_zero(&self, v: &Value) -> bool {
        match v {
            Value::C(c) => *c == 0,
            Value::R(f) => f.num.is_empty(),
        }
    }

    pub fn is_one(&self, l: usize, v: &Value) -> bool {
        *v == self.one(l)
    }

    pub fn add(&self, l: usize, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::C(x), Value::C(y)) => Value::C(self.gf.add(*x, *y)),
            (Value::R(x), Value::R(y)) => {
                let c = l - 1;
                if x.num.is_empty() {
                    return b.clone();
                }
                if y.num.is_empty() {
                    return a.clone();
                }
                if x.den == y.den {
                    let num = self.p_add(c, &x.num, &y.num);
                    return self.make(l, num, x.den.clone()).unwrap();
                }
                let num = self.p_add(c, &self.p_mul(c, &x.num, &y.den), &self.p_mul(c, &y.num, &x.den));
                let den = self.p_mul(c, &x.den, &y.den);
                self.make(l, num, den).unwrap()
            }
            _ => panic!("level mismatch in add"),
        }
    }

    pub fn neg(&self, l: usize, a: &Value) -> Value {
        match a {
            Value::C(x) => Value::C(self.gf.neg(*x)),
            Value::R(x) => Value::R(Box::new(Frac { num: self.p_neg(l - 1, &x.num), den: x.den.clone() })),
        }
    }

    pub fn sub(&self, l: usize, a: &Value, b: &Value) -> Value {
        self.add(l, a, &self.neg(l, b))
    }

    pub fn mul(&self, l: usize, a: &Value, b: &Value) -> Value {
        match (a, b) {
            (Value::C(x), Value::C(y)) => Value::C(self.gf.mul(*x, *y)),
            (Value::R(x), Value::R(y)) => {
                let c = l - 1;
                if x.num.is_empty() || y.num.is_empty() {
                    return self.zero(l);
                }
                // cross-cancel before multiplying
                let g1 = self.p_gcd(c, &x.num, &y.den);
                let g2 = self.p_gcd(c, &y.num, &x.den);
                let n1 = self.p_exact_div(c, &x.num, &g1);
                let d2 = self.p_exact_div(c, &y.den, &g1);
                let n2 = self.p_exact_div(c, &y.num, &g2);
                let d1 = self.p_exact_div(c, &x.den, &g2);
                let num = self.p_mul(c, &n1, &n2);
                let den = self.p_mul(c, &d1, &d2);
                self.normalize_lead(l, num, den)
            }
            _ => panic!("level mismatch in mul"),
        }
    }

    pub fn inv(&self, l: usize, a: &Value) -> Result<Value> {
        match a {
            Value::C(x) => Ok(Value::C(self.gf.inv(*x)?)),
            Value::R(x) => {
                if x.num.is_empty() {
                    return Err(Error::DivisionByZero);
                }
                Ok(self.normalize_lead(l, x.den.clone(), x.num.clone()))
            }
        }
    }

    pub fn div(&self, l: usize, a: &Value, b: &Value) -> Result<Value> {
        Ok(self.mul(l, a, &self.inv(l, b)?))
    }

    pub fn pow(&self, l: usize, a: &Value, e: i64) -> Result<Value> {
        let base = if e < 0 { self.inv(l, a)? } else { a.clone() };
        let mut e = e.unsigned_abs();
        let mut r = self.one(l);
        let mut b = base;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(l, &r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(l, &b, &b);
            }
        }
        Ok(r)
    }

    fn normalize_lead(&self, l: usize, num: RPoly, den: RPoly) -> Value {
        let c = l - 1;
        let lc = den.last().expect("nonzero denominator").clone();
        if self.is_one(c, &lc) {
            return Value::R(Box::new(Frac { num, den }));
        }
        let inv = self.inv(c, &lc).unwrap();
        Value::R(Box::new(Frac { num: self.p_scale(c, &num, &inv), den: self.p_scale(c, &den, &inv) }))
    }

    fn make(&self, l: usize, num: RPoly, den: RPoly) -> Result<Value> {
        let c = l - 1;
        let num = self.p_trim(num);
        let den = self.p_trim(den);
        if den.is_empty() {
            return Err(Error::DivisionByZero);
        }
        if num.is_empty() {
            return Ok(self.zero(l));
        }
        let g = self.p_gcd(c, &num, &den);
        let (num, den) = if g.len() > 1 {
            (self.p_exact_div(c, &num, &g), self.p_exact_div(c, &den, &g))
        } else {
            (num, den)
        };
        Ok(self.normalize_lead(l, num, den))
    }

    // ---- polynomials over level-c coefficients ----

    pub fn p_trim(&self, mut a: RPoly) -> RPoly {
        while a.last().is_some_and(|v| self.is_zero(v)) {
            a.pop();
        }
        a
    }

    pub fn p_add(&self, c: usize, a: &RPoly, b: &RPoly) -> RPoly {
        let n = a.len().max(b.len());
        let z = self.zero(c);
        let out = (0..n).map(|i| self.add(c, a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z))).collect();
        self.p_trim(out)
    }

    pub fn p_neg(&self, c: usize, a: &RPoly) -> RPoly {
        a.iter().map(|v| self.neg(c, v)).collect()
    }

    pub fn p_sub(&self, c: usize, a: &RPoly, b: &RPoly) -> RPoly {
        self.p_add(c, a, &self.p_neg(c, b))
    }

    pub fn p_scale(&self, c: usize, a: &RPoly, s: &Value) -> RPoly {
        if self.is_zero(s) {
            return vec![];
        }
        a.iter().map(|v| self.mul(c, v, s)).collect()
    }

    pub fn p_mul(&self, c: usize, a: &RPoly, b: &RPoly) -> RPoly {
        if a.is_empty() || b.is_empty() {
            return vec![];
        }
        if a.len() == 1 {
            return self.p_scale(c, b, &a[0]);
        }
        if b.len() == 1 {
            return self.p_scale(c, a, &b[0]);
        }
        let mut out = vec![self.zero(c); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if self.is_zero(x) {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if self.is_zero(y) {
                    continue;
                }
                out[i + j] = self.add(c, &out[i + j], &self.mul(c, x, y));
            }
        }
        self.p_trim(out)
    }

    pub fn p_divrem(&self, c: usize, a: &RPoly, b: &RPoly) -> Result<(RPoly, RPoly)> {
        if b.is_empty() {
            return Err(Error::DivisionByZero);
        }
        let db = b.len() - 1;
        if a.len() <= db {
            return Ok((vec![], a.clone()));
        }
        let inv = self.inv(c, b.last().unwrap())?;
        let mut r = a.clone();
        let mut q = vec![self.zero(c); a.len() - db];
        for i in (db..r.len()).rev() {
            if self.is_zero(&r[i]) {
                continue;
            }
            let t = self.mul(c, &r[i], &inv);
            for j in 0..=db {
                let k = i - db + j;
                r[k] = self.sub(c, &r[k], &self.mul(c, &t, &b[j]));
            }
            q[i - db] = t;
        }
        r.truncate(db);
        Ok((self.p_trim(q), self.p_trim(r)))
    }

    pub fn p_exact_div(&self, c: usize, a: &RPoly, b: &RPoly) -> RPoly {
        let (q, r) = self.p_divrem(c, a, b).expect("nonzero divisor");
        debug_assert!(r.is_empty(), "inexact division");
        q
    }

    pub fn p_monic(&self, c: usize, a: &RPoly) -> RPoly {
        match a.last() {
            None => vec![],
            Some(lc) if self.is_one(c, lc) => a.clone(),
            Some(lc) => self.p_scale(c, a, &self.inv(c, lc).unwrap()),
        }
    }

    pub fn p_gcd(&self, c: usize, a: &RPoly, b: &RPoly) -> RPoly {
        if a.len() == 1 || b.len() == 1 {
            return vec![self.one(c)];
        }
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_empty() {
            let r = self.p_divrem(c, &x, &y).unwrap().1;
            x = y;
            y = r;
        }
        self.p_monic(c, &x)
    }

    pub fn p_eval(&self, c: usize, a: &RPoly, x: &Value) -> Value {
        a.iter().rev().fold(self.zero(c), |acc, v| self.add(c, &self.mul(c, &acc, x), v))
    }

    pub fn p_constant(&self, v: Value) -> RPoly {
        if self.is_zero(&v) {
            vec![]
        } else {
            vec![v]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_forms_over_f5_x() {
        let gf = Gf::get(5, 1).unwrap();
        let ar = Ar::new(&gf);
        let x = ar.var(1);
        let one = ar.one(1);
        let xp1 = ar.add(1, &x, &one);
        // x/(x+1) + 1/(x+1) = 1
        let a = ar.div(1, &x, &xp1).unwrap();
        let b = ar.inv(1, &xp1).unwrap();
        assert_eq!(ar.add(1, &a, &b), one);
        // 1/x
        let ix = ar.inv(1, &x).unwrap();
        assert_eq!(ar.mul(1, &ix, &x), one);
    }

    #[test]
    fn two_level_cancellation() {
        let gf = Gf::get(5, 1).unwrap();
        let ar = Ar::new(&gf);
        let x = ar.lift(&ar.var(1), 1, 2);
        let y = ar.var(2);
        // (x*y + x) / (y + 1) = x
        let xy = ar.mul(2, &x, &y);
        let num = ar.add(2, &xy, &x);
        let den = ar.add(2, &y, &ar.one(2));
        assert_eq!(ar.div(2, &num, &den).unwrap(), x);
    }
}
