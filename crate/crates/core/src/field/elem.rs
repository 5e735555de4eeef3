use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::gf::Fq;
use super::tower::FieldTower;
use super::upoly::UPoly;
use super::value::{Ar, RPoly, Value};
use crate::error::{Error, Result};

/// An element of a [`FieldTower`], in canonical reduced form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    field: FieldTower,
    value: Value,
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} in {}", self, self.field)
    }
}

impl FieldElem {
    pub(crate) fn from_value(field: &FieldTower, value: Value) -> FieldElem {
        FieldElem { field: field.clone(), value }
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }
    pub fn value(&self) -> &Value {
        &self.value
    }
    pub(crate) fn ar(&self) -> Ar<'_> {
        Ar::new(self.field.gf())
    }
    fn level(&self) -> usize {
        self.field.depth()
    }

    pub fn zero(field: &FieldTower) -> FieldElem {
        Self::from_value(field, Ar::new(field.gf()).zero(field.depth()))
    }
    pub fn one(field: &FieldTower) -> FieldElem {
        Self::from_value(field, Ar::new(field.gf()).one(field.depth()))
    }
    pub fn from_int(field: &FieldTower, n: i64) -> FieldElem {
        Self::from_value(field, Ar::new(field.gf()).from_int(field.depth(), n))
    }
    pub fn constant(field: &FieldTower, c: Fq) -> FieldElem {
        Self::from_value(field, Ar::new(field.gf()).constant(field.depth(), c))
    }
    /// The canonical generator `g` of the base finite field.
    pub fn generator(field: &FieldTower) -> FieldElem {
        Self::constant(field, field.gf().generator())
    }
    /// The variable of layer `level` (1-based).
    pub fn var_at(field: &FieldTower, level: usize) -> FieldElem {
        let ar = Ar::new(field.gf());
        Self::from_value(field, ar.lift(&ar.var(level), level, field.depth()))
    }
    pub fn var(field: &FieldTower, name: &str) -> Result<FieldElem> {
        let level = field
            .var_level(name)
            .ok_or_else(|| Error::InvalidField(format!("undeclared variable `{name}`")))?;
        Ok(Self::var_at(field, level))
    }

    pub fn is_zero(&self) -> bool {
        self.ar().is_zero(&self.value)
    }
    pub fn is_one(&self) -> bool {
        self.ar().is_one(self.level(), &self.value)
    }

    fn check(&self, o: &FieldElem) -> Result<()> {
        if self.field != o.field {
            return Err(Error::TowerMismatch(self.field.to_string(), o.field.to_string()));
        }
        Ok(())
    }

    pub fn checked_add(&self, o: &FieldElem) -> Result<FieldElem> {
        self.check(o)?;
        Ok(Self::from_value(&self.field, self.ar().add(self.level(), &self.value, &o.value)))
    }
    pub fn checked_sub(&self, o: &FieldElem) -> Result<FieldElem> {
        self.check(o)?;
        Ok(Self::from_value(&self.field, self.ar().sub(self.level(), &self.value, &o.value)))
    }
    pub fn checked_mul(&self, o: &FieldElem) -> Result<FieldElem> {
        self.check(o)?;
        Ok(Self::from_value(&self.field, self.ar().mul(self.level(), &self.value, &o.value)))
    }
    pub fn checked_div(&self, o: &FieldElem) -> Result<FieldElem> {
        self.check(o)?;
        Ok(Self::from_value(&self.field, self.ar().div(self.level(), &self.value, &o.value)?))
    }
    pub fn inv(&self) -> Result<FieldElem> {
        Ok(Self::from_value(&self.field, self.ar().inv(self.level(), &self.value)?))
    }
    pub fn pow(&self, e: i64) -> Result<FieldElem> {
        Ok(Self::from_value(&self.field, self.ar().pow(self.level(), &self.value, e)?))
    }

    /// Embed into a tower that has this element's field as a prefix.
    pub fn embed(&self, into: &FieldTower) -> Result<FieldElem> {
        if !self.field.is_prefix_of(into) {
            return Err(Error::TowerMismatch(self.field.to_string(), into.to_string()));
        }
        Ok(Self::from_value(into, self.ar().lift(&self.value, self.level(), into.depth())))
    }

    /// Numerator and denominator as polynomials in the top variable, with
    /// coefficients one level down. Panics at depth 0.
    pub fn top_parts(&self) -> (RPoly, RPoly) {
        let f = self.value.frac();
        (f.num.clone(), f.den.clone())
    }

    /// Assemble from polynomials in the top variable.
    pub fn from_top_parts(field: &FieldTower, num: RPoly, den: RPoly) -> Result<FieldElem> {
        let v = Ar::new(field.gf()).from_polys(field.depth(), num, den)?;
        Ok(Self::from_value(field, v))
    }

    /// Wrap a coefficient-level value (from the field one level down) as an element there.
    pub fn sub_elem(&self, v: Value) -> FieldElem {
        Self::from_value(&self.field.sub(self.level() - 1), v)
    }

    /// Finite-field constant at depth 0.
    pub fn as_const(&self) -> Option<Fq> {
        match &self.value {
            Value::C(c) => Some(*c),
            _ => None,
        }
    }

    /// Whether the element is a base-field constant at any depth.
    pub fn constant_value(&self) -> Option<Fq> {
        let mut v = &self.value;
        loop {
            match v {
                Value::C(c) => return Some(*c),
                Value::R(f) => {
                    if f.den.len() != 1 || f.num.len() > 1 {
                        return None;
                    }
                    match f.num.first() {
                        None => return Some(0),
                        Some(n) => v = n,
                    }
                }
            }
        }
    }

    /// For depth-1 elements: numerator and denominator as univariate polynomials.
    pub fn as_upolys(&self) -> Option<(UPoly, UPoly)> {
        if self.level() != 1 {
            return None;
        }
        let f = self.value.frac();
        let conv = |p: &RPoly| UPoly::from_coeffs(p.iter().map(|v| v.as_const()).collect());
        Some((conv(&f.num), conv(&f.den)))
    }

    pub fn from_upolys(field: &FieldTower, num: &UPoly, den: &UPoly) -> Result<FieldElem> {
        assert_eq!(field.depth(), 1);
        let conv = |p: &UPoly| p.0.iter().map(|&c| Value::C(c)).collect::<RPoly>();
        Self::from_top_parts(field, conv(num), conv(den))
    }

    pub fn from_upoly(field: &FieldTower, p: &UPoly) -> FieldElem {
        Self::from_upolys(field, p, &UPoly::constant(1)).expect("nonzero denominator")
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $checked:ident) => {
        impl $tr<&FieldElem> for &FieldElem {
            type Output = FieldElem;
            fn $method(self, o: &FieldElem) -> FieldElem {
                self.$checked(o).expect("field operands must share a tower")
            }
        }
        impl $tr<FieldElem> for FieldElem {
            type Output = FieldElem;
            fn $method(self, o: FieldElem) -> FieldElem {
                (&self).$checked(&o).expect("field operands must share a tower")
            }
        }
    };
}
binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        FieldElem::from_value(&self.field, self.ar().neg(self.level(), &self.value))
    }
}
impl Neg for FieldElem {
    type Output = FieldElem;
    fn neg(self) -> FieldElem {
        -&self
    }
}

// ---- printing (the output re-parses to the same element) ----

fn fmt_const(field: &FieldTower, c: Fq) -> String {
    let gf = field.gf();
    if gf.k() == 1 || c == 0 {
        c.to_string()
    } else if c == 1 {
        "1".into()
    } else {
        format!("g^{}", gf.log(c).unwrap())
    }
}

fn is_simple_const(v: &Value) -> Option<Fq> {
    match v {
        Value::C(c) => Some(*c),
        Value::R(f) if f.den.len() == 1 && f.num.len() <= 1 => match f.num.first() {
            None => Some(0),
            Some(n) => is_simple_const(n),
        },
        _ => None,
    }
}

fn fmt_value(field: &FieldTower, level: usize, v: &Value) -> String {
    match v {
        Value::C(c) => fmt_const(field, *c),
        Value::R(f) => {
            let var = &field.layer(level).var;
            let num = fmt_poly(field, level, var, &f.num);
            if f.den.len() == 1 {
                num
            } else {
                let den = fmt_poly(field, level, var, &f.den);
                let num = if is_single_term(&f.num) { num } else { format!("({num})") };
                let den = if is_single_term(&f.den) { den } else { format!("({den})") };
                format!("{num}/{den}")
            }
        }
    }
}

fn is_single_term(p: &RPoly) -> bool {
    p.iter().filter(|c| is_simple_const(c) != Some(0)).count() == 1
        && p.iter().all(|c| is_simple_const(c).is_some())
}

fn fmt_poly(field: &FieldTower, level: usize, var: &str, p: &RPoly) -> String {
    if p.is_empty() {
        return "0".into();
    }
    let mut terms = Vec::new();
    for (i, c) in p.iter().enumerate().rev() {
        let sc = is_simple_const(c);
        if sc == Some(0) {
            continue;
        }
        let mono = match i {
            0 => String::new(),
            1 => var.to_string(),
            _ => format!("{var}^{i}"),
        };
        let coef = match sc {
            Some(1) => String::new(),
            Some(c) => fmt_const(field, c),
            None if i == 0 => fmt_value(field, level - 1, c),
            None => format!("({})", fmt_value(field, level - 1, c)),
        };
        terms.push(match (coef.is_empty(), mono.is_empty()) {
            (true, true) => "1".to_string(),
            (true, false) => mono,
            (false, true) => coef,
            (false, false) => format!("{coef}*{mono}"),
        });
    }
    terms.join(" + ")
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&fmt_value(&self.field, self.level(), &self.value))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5x() -> FieldTower {
        FieldTower::parse("Fq(5,1)(x)").unwrap()
    }

    #[test]
    fn spec_arithmetic_examples() {
        let k = f5x();
        let x = FieldElem::var(&k, "x").unwrap();
        let one = FieldElem::one(&k);
        let xp1 = &x + &one;
        let a = x.checked_div(&xp1).unwrap();
        let b = one.checked_div(&xp1).unwrap();
        assert_eq!(&a + &b, one);
        assert_eq!(x.inv().unwrap().to_string(), "1/x");
        let f5 = FieldTower::finite(5, 1).unwrap();
        let prod = FieldElem::from_int(&f5, 3) * FieldElem::from_int(&f5, 4);
        assert_eq!(prod, FieldElem::from_int(&f5, 2));
    }

    #[test]
    fn inverse_of_zero_fails() {
        let k = f5x();
        assert_eq!(FieldElem::zero(&k).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn mixed_towers_fail() {
        let a = FieldElem::one(&f5x());
        let b = FieldElem::one(&FieldTower::parse("Fq(5,1)(y)").unwrap());
        assert!(matches!(a.checked_add(&b), Err(Error::TowerMismatch(_, _))));
    }

    #[test]
    fn display_nested() {
        let k = FieldTower::parse("Fq(5,1)(x)((y))").unwrap();
        let x = FieldElem::var(&k, "x").unwrap();
        let y = FieldElem::var(&k, "y").unwrap();
        let e = (&x + &FieldElem::one(&k)) * y.clone();
        assert_eq!(e.to_string(), "(x + 1)*y");
        let e2 = y.checked_div(&x).unwrap();
        assert_eq!(e2.to_string(), "(1/x)*y");
    }
}
