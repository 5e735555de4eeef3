//! Decomposition of a place in a Kummer extension `K(f^(1/l))` and in a
//! constant-field extension.

use std::fmt;

use super::elem::FieldElem;
use super::gf::gcd;
use super::place::{Place, ResidueElem};
use super::power::is_nth_power_residue;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SplitType {
    /// Totally ramified: one place, `e = l`.
    Ramified,
    /// Completely split: `l` places of residue degree one.
    Split,
    /// Inert: one place, residue degree `l`.
    Inert,
}

impl fmt::Display for SplitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SplitType::Ramified => "ramified",
            SplitType::Split => "split",
            SplitType::Inert => "inert",
        })
    }
}

/// How a place decomposes in a degree-`l` Kummer extension.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KummerSplitting {
    pub kind: SplitType,
    /// Ramification index.
    pub e: u32,
    /// Residue degree of each place above.
    pub f: u32,
    /// Number of places above.
    pub g: u32,
    /// Valuation of the radicand at the place.
    pub valuation: i64,
    /// When unramified: the unit residue `ū` of `f π^(-v(f))`; the residue
    /// fields above are `κ(ū^(1/l))`.
    pub unit_residue: Option<ResidueElem>,
}

/// Decomposition of `v` in `K(f^(1/l))` for a prime `l` invertible at `v`.
pub fn kummer_splitting(v: &Place, f: &FieldElem, l: u32) -> Result<KummerSplitting> {
    let p = v.field().characteristic();
    if l < 2 || gcd(l as u64, p as u64) != 1 {
        return Err(Error::CharacteristicDivides { p, n: l });
    }
    v.field().check_roots_of_unity(l)?;
    let val = v.valuation(f)?;
    if val.rem_euclid(l as i64) != 0 {
        return Ok(KummerSplitting { kind: SplitType::Ramified, e: l, f: 1, g: 1, valuation: val, unit_residue: None });
    }
    let u = v.unit_residue(f)?;
    let split = is_nth_power_residue(&u, l)?.is_power;
    let (kind, fdeg, g) = if split { (SplitType::Split, 1, l) } else { (SplitType::Inert, l, 1) };
    Ok(KummerSplitting { kind, e: 1, f: fdeg, g, valuation: val, unit_residue: Some(u) })
}

/// Decomposition of a place of degree `d` of `F_q(t)` in `F_{q^m}(t)`:
/// `gcd(m, d)` places, each of residue degree `m / gcd(m, d)`, unramified.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ConstantSplitting {
    pub f: u32,
    pub g: u32,
}

pub fn constant_splitting(v: &Place, m: u32) -> ConstantSplitting {
    let g = gcd(m as u64, v.degree() as u64) as u32;
    ConstantSplitting { f: m / g, g }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::FieldTower;

    #[test]
    fn kummer_examples_over_f5_t() {
        let k = FieldTower::parse("Fq(5,1)(t)").unwrap();
        let vt = Place::parse(&k, "t").unwrap();
        let e = |s: &str| FieldElem::parse(&k, s).unwrap();
        let s = kummer_splitting(&vt, &e("t"), 2).unwrap();
        assert_eq!((s.kind, s.e, s.f, s.g), (SplitType::Ramified, 2, 1, 1));
        let s = kummer_splitting(&vt, &e("t-1"), 2).unwrap();
        assert_eq!((s.kind, s.e, s.f, s.g), (SplitType::Split, 1, 1, 2));
        let s = kummer_splitting(&vt, &e("2*(t+1)"), 2).unwrap();
        assert_eq!((s.kind, s.e, s.f, s.g), (SplitType::Inert, 1, 2, 1));
        assert!(matches!(kummer_splitting(&vt, &e("t"), 5), Err(Error::CharacteristicDivides { .. })));
    }

    #[test]
    fn efg_is_l_on_many_inputs() {
        let k = FieldTower::parse("Fq(13,1)(t)").unwrap();
        for s in ["t^2+2", "t^3", "(t+1)^3*(t+5)", "2", "7*t^6", "t^4+t+1"] {
            let f = FieldElem::parse(&k, s).unwrap();
            for v in crate::field::place::support_places(&k, &[&f, &FieldElem::parse(&k, "t*(t-1)").unwrap()]).unwrap() {
                for l in [2, 3] {
                    let ks = kummer_splitting(&v, &f, l).unwrap();
                    assert_eq!(ks.e * ks.f * ks.g, l);
                }
            }
        }
    }

    #[test]
    fn constant_extension_splitting() {
        let k = FieldTower::parse("Fq(5,1)(t)").unwrap();
        let v = Place::parse(&k, "t^2+2").unwrap();
        assert_eq!(constant_splitting(&v, 2), ConstantSplitting { f: 1, g: 2 });
        assert_eq!(constant_splitting(&v, 3), ConstantSplitting { f: 3, g: 1 });
    }
}
