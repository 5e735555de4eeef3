//! Brauer classes presented as `Z/n`-combinations of symbols `(f, g)_n`.
//!
//! The symbol `(f, g)_n` is the cyclic algebra with `X^n = f`, `Y^n = g`,
//! `YX = ζ_n XY` for the fixed root of unity `ζ_n = g_q^((q-1)/n)`.

mod exponent;
mod kato;
mod residue;

pub use exponent::{exponent, is_zero, laurent_decompose, LaurentSplit};
pub use kato::{second_residue_check, KatoPoint, KatoReport};
pub use residue::{
    arrangement_lines, candidate_places, global_invariants, local_invariant, ramification_divisor, reciprocity_check, residue_transport, tame_residue,
    symbol_residue, Invariant, ResidueClass, TransportReport, TransportedResidue,
};

use std::fmt;

use crate::error::{Error, Result};
use crate::field::gf::{gcd, prime_divisors};
use crate::field::{FieldElem, FieldTower};

/// One term `c * (f, g)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Term {
    pub c: u32,
    pub f: FieldElem,
    pub g: FieldElem,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerClass {
    field: FieldTower,
    n: u32,
    terms: Vec<Term>,
}

impl BrauerClass {
    /// Build a class; coefficients are reduced mod `n` and zero terms pruned.
    pub fn new(field: &FieldTower, n: u32, terms: Vec<(i64, FieldElem, FieldElem)>) -> Result<BrauerClass> {
        field.check_roots_of_unity(n)?;
        let mut out = Vec::new();
        for (c, f, g) in terms {
            if f.field() != field {
                return Err(Error::TowerMismatch(f.field().to_string(), field.to_string()));
            }
            if g.field() != field {
                return Err(Error::TowerMismatch(g.field().to_string(), field.to_string()));
            }
            if f.is_zero() || g.is_zero() {
                return Err(Error::ZeroEntry);
            }
            let c = c.rem_euclid(n as i64) as u32;
            if c != 0 {
                out.push(Term { c, f, g });
            }
        }
        Ok(BrauerClass { field: field.clone(), n, terms: out })
    }

    pub fn zero(field: &FieldTower, n: u32) -> Result<BrauerClass> {
        BrauerClass::new(field, n, vec![])
    }

    /// The single symbol `(f, g)_n`.
    pub fn symbol(f: &FieldElem, g: &FieldElem, n: u32) -> Result<BrauerClass> {
        BrauerClass::new(f.field(), n, vec![(1, f.clone(), g.clone())])
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }
    pub fn n(&self) -> u32 {
        self.n
    }
    pub fn terms(&self) -> &[Term] {
        &self.terms
    }
    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Formal sum (term lists concatenated).
    pub fn add(&self, o: &BrauerClass) -> Result<BrauerClass> {
        if self.field != o.field || self.n != o.n {
            return Err(Error::TowerMismatch(self.describe_field(), o.describe_field()));
        }
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        Ok(BrauerClass { terms, ..self.clone() })
    }

    pub fn scale(&self, m: i64) -> BrauerClass {
        let terms = self
            .terms
            .iter()
            .filter_map(|t| {
                let c = (t.c as i64 * m).rem_euclid(self.n as i64) as u32;
                (c != 0).then(|| Term { c, ..t.clone() })
            })
            .collect();
        BrauerClass { terms, ..self.clone() }
    }

    pub fn neg(&self) -> BrauerClass {
        self.scale(-1)
    }

    pub fn sub(&self, o: &BrauerClass) -> Result<BrauerClass> {
        self.add(&o.neg())
    }

    fn describe_field(&self) -> String {
        format!("{} (n={})", self.field, self.n)
    }

    /// Reinterpret a class whose coefficients are all divisible by `n/m` as
    /// a class of order dividing `m` with `ζ_m = ζ_n^(n/m)`.
    pub fn reduce_modulus(&self, m: u32) -> Result<BrauerClass> {
        if m == 0 || !self.n.is_multiple_of(m) {
            return Err(Error::InvalidInput(format!("{m} does not divide {}", self.n)));
        }
        let k = self.n / m;
        let mut terms = Vec::new();
        for t in &self.terms {
            if t.c % k != 0 {
                return Err(Error::InvalidInput(format!("coefficient {} not divisible by {k}", t.c)));
            }
            terms.push(((t.c / k) as i64, t.f.clone(), t.g.clone()));
        }
        BrauerClass::new(&self.field, m, terms)
    }

    /// Reinterpret as a class of order dividing `m * n` (multiplying
    /// coefficients by `m`), the inverse of [`BrauerClass::reduce_modulus`].
    pub fn inflate_modulus(&self, m: u32) -> Result<BrauerClass> {
        let terms = self.terms.iter().map(|t| ((t.c * m) as i64, t.f.clone(), t.g.clone())).collect();
        BrauerClass::new(&self.field, self.n * m, terms)
    }

    /// Parse `1*(x, g) + 2*(x+1, y) - (x, y)`; `0` or empty is the zero class.
    pub fn parse(field: &FieldTower, n: u32, s: &str) -> Result<BrauerClass> {
        let trimmed = s.trim();
        if trimmed.is_empty() || trimmed == "0" {
            return BrauerClass::zero(field, n);
        }
        let mut terms = Vec::new();
        for (start, sign, text) in split_terms(s)? {
            let (coef, body) = match text.find("*(") {
                Some(i) if text[..i].trim().chars().all(|c| c.is_ascii_digit()) && !text[..i].trim().is_empty() => {
                    (text[..i].trim().parse::<i64>().map_err(|_| perr(start, "bad coefficient"))?, &text[i + 1..])
                }
                _ => (1, text),
            };
            let body = body.trim();
            let body_off = body.as_ptr() as usize - s.as_ptr() as usize;
            if !body.starts_with('(') || !body.ends_with(')') {
                return Err(perr(body_off, "expected a symbol `(f, g)`"));
            }
            let inner = &body[1..body.len() - 1];
            let comma = top_level_comma(inner).ok_or_else(|| perr(body_off, "expected `,` inside symbol"))?;
            let shift = |e: Error, base: usize| match e {
                Error::Parse { pos, msg } => Error::Parse { pos: pos + base, msg },
                other => other,
            };
            let f = FieldElem::parse(field, &inner[..comma]).map_err(|e| shift(e, body_off + 1))?;
            let g = FieldElem::parse(field, &inner[comma + 1..]).map_err(|e| shift(e, body_off + comma + 2))?;
            terms.push((sign * coef, f, g));
        }
        BrauerClass::new(field, n, terms)
    }

    /// The classes of the primary parts, one per prime `l | n`, via CRT
    /// idempotents (each part keeps modulus `n`).
    pub fn primary_decomposition(&self) -> Vec<(u32, BrauerClass)> {
        let n = self.n as u64;
        prime_divisors(n)
            .into_iter()
            .map(|l| {
                let mut m = 1;
                while n.is_multiple_of(m * l) {
                    m *= l;
                }
                let rest = n / m;
                // e = rest * (rest^{-1} mod m): 1 mod m, 0 mod rest
                let inv = (1..=m).find(|k| (rest % m) * k % m == 1 % m).unwrap_or(1);
                let e = (rest * inv) % n;
                (l as u32, self.scale(e as i64))
            })
            .collect()
    }
}

fn perr(pos: usize, msg: &str) -> Error {
    Error::Parse { pos, msg: msg.to_string() }
}

fn top_level_comma(s: &str) -> Option<usize> {
    let mut depth = 0i32;
    for (i, c) in s.char_indices() {
        match c {
            '(' => depth += 1,
            ')' => depth -= 1,
            ',' if depth == 0 => return Some(i),
            _ => {}
        }
    }
    None
}

/// Split at top-level `+`/`-` that precede a term (coefficient or symbol).
fn split_terms(s: &str) -> Result<Vec<(usize, i64, &str)>> {
    let bytes = s.as_bytes();
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut sign = 1;
    let mut i = 0;
    // optional leading sign
    while i < bytes.len() && bytes[i].is_ascii_whitespace() {
        i += 1;
    }
    if i < bytes.len() && (bytes[i] == b'-' || bytes[i] == b'+') {
        sign = if bytes[i] == b'-' { -1 } else { 1 };
        i += 1;
        start = i;
    }
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => {
                depth -= 1;
                if depth < 0 {
                    return Err(perr(i, "unbalanced `)`"));
                }
            }
            b'+' | b'-' if depth == 0 => {
                out.push((start, sign, &s[start..i]));
                sign = if bytes[i] == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if depth != 0 {
        return Err(perr(s.len(), "unbalanced `(`"));
    }
    out.push((start, sign, &s[start..]));
    for (p, _, t) in &out {
        if t.trim().is_empty() {
            return Err(perr(*p, "empty term"));
        }
    }
    Ok(out)
}

impl fmt::Display for BrauerClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|t| format!("{}*({}, {})", t.c, t.f, t.g)).collect();
        f.write_str(&parts.join(" + "))
    }
}

/// `gcd`-based order of `c` in `Z/n`.
pub fn order_mod(c: u64, n: u64) -> u64 {
    n / gcd(c % n, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        let k = FieldTower::parse("Fq(5,1)(x)((y))").unwrap();
        let a = BrauerClass::parse(&k, 2, "1*(x,g) + 1*(x+1,y)").unwrap();
        assert_eq!(a.terms().len(), 2);
        assert_eq!(a.to_string(), "1*(x, 2) + 1*(x + 1, y)");
        let b = BrauerClass::parse(&k, 2, &a.to_string()).unwrap();
        assert_eq!(a, b);
        let c = BrauerClass::parse(&k, 4, "-(x, y) + 2*(x - 1, (y+1)/y)").unwrap();
        assert_eq!(c.terms()[0].c, 3);
        assert!(BrauerClass::parse(&k, 2, "0").unwrap().is_empty());
        assert!(BrauerClass::parse(&k, 2, "(x, 0)").is_err());
        assert!(matches!(BrauerClass::parse(&k, 3, "(x, y)"), Err(Error::RootsOfUnityMissing { .. })));
        assert!(matches!(BrauerClass::parse(&k, 2, "(x, z)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn primary_decomposition_uses_crt_idempotents() {
        let k = FieldTower::parse("Fq(7,1)(t)").unwrap();
        let a = BrauerClass::parse(&k, 6, "(t, 3)").unwrap();
        let parts = a.primary_decomposition();
        assert_eq!(parts.len(), 2);
        assert_eq!(parts[0].0, 2);
        assert_eq!(parts[0].1.terms()[0].c, 3);
        assert_eq!(parts[1].0, 3);
        assert_eq!(parts[1].1.terms()[0].c, 4);
        let z = BrauerClass::zero(&k, 6).unwrap();
        assert!(z.primary_decomposition().iter().all(|(_, c)| c.is_empty()));
        let p = BrauerClass::parse(&k, 3, "(t, 3)").unwrap();
        assert_eq!(p.primary_decomposition().len(), 1);
    }
}
