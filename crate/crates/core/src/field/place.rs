//! Places of the top layer of a tower: monic irreducible polynomials and
//! infinity on a rational layer over the base, and the uniformizer place of a
//! tame Laurent layer. Each place carries its residue field.

use std::fmt;
use std::sync::Arc;

use super::elem::FieldElem;
use super::gf::{Fq, Gf};
use super::plane::{check_plane, elem_to_poly2, Line};
use super::tower::{FieldTower, LayerKind};
use super::upoly::UPoly;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PlaceKind {
    /// Monic irreducible polynomial in the top variable over the base
    /// (over a closure base: irreducible over `F_p`, standing for its orbit).
    Poly(UPoly),
    Infinity,
    /// The uniformizer place of a tame Laurent layer.
    Laurent,
    /// An affine line of the plane `F_q(x)(y)`; its residue field is the
    /// rational function field in the line's parameter (`x`, or `y` for
    /// vertical lines).
    Line(Line),
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Place {
    field: FieldTower,
    kind: PlaceKind,
}

impl PartialOrd for Place {
    fn partial_cmp(&self, o: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(o))
    }
}
impl Ord for Place {
    /// Places of one field ordered by (degree, polynomial), infinity last.
    fn cmp(&self, o: &Self) -> std::cmp::Ordering {
        let key = |p: &Place| match &p.kind {
            PlaceKind::Poly(f) => (0, f.0.len(), f.0.iter().rev().copied().collect::<Vec<_>>()),
            PlaceKind::Infinity => (1, 0, vec![]),
            PlaceKind::Laurent => (2, 0, vec![]),
            PlaceKind::Line(l) => (3, 0, vec![l.a, l.b, l.c]),
        };
        key(self).cmp(&key(o))
    }
}

impl fmt::Debug for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Place({self})")
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PlaceKind::Poly(p) => write!(f, "{}", FieldElem::from_upoly(&self.field, p)),
            PlaceKind::Infinity => write!(f, "inf"),
            PlaceKind::Laurent => write!(f, "{}", self.field.top().unwrap().var),
            PlaceKind::Line(l) => write!(f, "{}", l.to_elem(&self.field)),
        }
    }
}

/// The residue field of a place.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueField {
    /// `F_q[x]/(P)`; with `closure` set it is read inside the algebraic closure.
    Ext { gf: Arc<Gf>, modulus: UPoly, closure: bool },
    /// The residue field of a Laurent place: the tower one level down.
    Tower(FieldTower),
}

/// An element of a residue field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ResidueElem {
    Ext(ExtElem),
    Tower(FieldElem),
}

/// Element of `F_q[x]/(P)` for an irreducible `P`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtElem {
    pub gf: Arc<Gf>,
    pub modulus: UPoly,
    pub value: UPoly,
    pub closure: bool,
}

impl ExtElem {
    pub fn new(gf: &Arc<Gf>, modulus: &UPoly, value: UPoly, closure: bool) -> ExtElem {
        let value = value.rem(modulus, gf);
        ExtElem { gf: gf.clone(), modulus: modulus.clone(), value, closure }
    }
    pub fn constant(gf: &Arc<Gf>, c: Fq, closure: bool) -> ExtElem {
        ExtElem::new(gf, &UPoly::x(), UPoly::constant(c), closure)
    }
    /// Degree of the extension over the base finite field.
    pub fn degree(&self) -> u32 {
        self.modulus.degree().unwrap() as u32
    }
    /// Number of elements `q^d`.
    pub fn size(&self) -> u128 {
        (self.gf.size() as u128).pow(self.degree())
    }
    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
    pub fn is_one(&self) -> bool {
        self.value.is_one()
    }
    fn with(&self, value: UPoly) -> ExtElem {
        ExtElem { value, ..self.clone() }
    }
    pub fn one(&self) -> ExtElem {
        self.with(UPoly::constant(1))
    }
    pub fn mul(&self, o: &ExtElem) -> ExtElem {
        debug_assert_eq!(self.modulus, o.modulus);
        self.with(self.value.mulmod(&o.value, &self.modulus, &self.gf))
    }
    pub fn inv(&self) -> Result<ExtElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.with(self.value.invmod(&self.modulus, &self.gf)?))
    }
    pub fn pow(&self, e: i64) -> Result<ExtElem> {
        let b = if e < 0 { self.inv()? } else { self.clone() };
        Ok(self.with(b.value.powmod(e.unsigned_abs() as u128, &self.modulus, &self.gf)))
    }
    pub fn pow_u(&self, e: u128) -> ExtElem {
        self.with(self.value.powmod(e, &self.modulus, &self.gf))
    }
    /// The value as a base-field constant, if it is one.
    pub fn as_const(&self) -> Option<Fq> {
        match self.value.degree() {
            None => Some(0),
            Some(0) => Some(self.value.lead()),
            _ => None,
        }
    }
}

impl ResidueElem {
    pub fn is_zero(&self) -> bool {
        match self {
            ResidueElem::Ext(e) => e.is_zero(),
            ResidueElem::Tower(e) => e.is_zero(),
        }
    }
    pub fn is_one(&self) -> bool {
        match self {
            ResidueElem::Ext(e) => e.is_one(),
            ResidueElem::Tower(e) => e.is_one(),
        }
    }
    pub fn mul(&self, o: &ResidueElem) -> Result<ResidueElem> {
        match (self, o) {
            (ResidueElem::Ext(a), ResidueElem::Ext(b)) if a.modulus == b.modulus => Ok(ResidueElem::Ext(a.mul(b))),
            (ResidueElem::Tower(a), ResidueElem::Tower(b)) => Ok(ResidueElem::Tower(a.checked_mul(b)?)),
            _ => Err(Error::TowerMismatch(format!("{self}"), format!("{o}"))),
        }
    }
    pub fn pow(&self, e: i64) -> Result<ResidueElem> {
        Ok(match self {
            ResidueElem::Ext(a) => ResidueElem::Ext(a.pow(e)?),
            ResidueElem::Tower(a) => ResidueElem::Tower(a.pow(e)?),
        })
    }
    pub fn neg_one_like(&self) -> ResidueElem {
        match self {
            ResidueElem::Ext(a) => ResidueElem::Ext(a.with(UPoly::constant(a.gf.neg(1)))),
            ResidueElem::Tower(a) => ResidueElem::Tower(-FieldElem::one(a.field())),
        }
    }
}

impl fmt::Display for ResidueElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueElem::Tower(e) => write!(f, "{e}"),
            ResidueElem::Ext(e) => {
                if let Some(c) = e.as_const() {
                    let one = FieldTower::finite(e.gf.p(), e.gf.k()).expect("valid base");
                    write!(f, "{}", FieldElem::constant(&one, c))
                } else {
                    // printed as a polynomial in `a`, a root of the modulus
                    let t = FieldTower::finite(e.gf.p(), e.gf.k()).and_then(|b| b.rational("a")).expect("valid base");
                    write!(
                        f,
                        "{} mod ({})",
                        FieldElem::from_upoly(&t, &e.value),
                        FieldElem::from_upoly(&t, &e.modulus)
                    )
                }
            }
        }
    }
}

impl ResidueField {
    pub fn one(&self) -> ResidueElem {
        match self {
            ResidueField::Ext { gf, modulus, closure } => {
                ResidueElem::Ext(ExtElem::new(gf, modulus, UPoly::constant(1), *closure))
            }
            ResidueField::Tower(t) => ResidueElem::Tower(FieldElem::one(t)),
        }
    }
}

impl Place {
    fn check_rational_top(field: &FieldTower) -> Result<()> {
        if field.depth() != 1 || field.layer(1).kind != LayerKind::Rational {
            return Err(Error::InvalidPlace(format!(
                "polynomial and infinite places are supported on a rational layer directly over the base, not on {field}"
            )));
        }
        Ok(())
    }

    /// The place of a monic irreducible polynomial (made monic here).
    pub fn poly(field: &FieldTower, p: &UPoly) -> Result<Place> {
        Self::check_rational_top(field)?;
        let gf = field.gf();
        let m = p.monic(gf);
        if !m.is_irreducible(gf) {
            return Err(Error::InvalidPlace(format!("{} is not irreducible", FieldElem::from_upoly(field, p))));
        }
        Ok(Place { field: field.clone(), kind: PlaceKind::Poly(m) })
    }

    /// Place given by an irreducible element such as `x - 2`.
    pub fn from_elem(e: &FieldElem) -> Result<Place> {
        let (num, den) = e
            .as_upolys()
            .ok_or_else(|| Error::InvalidPlace(format!("{e} is not a polynomial in one variable")))?;
        if !den.is_one() {
            return Err(Error::InvalidPlace(format!("{e} is not a polynomial")));
        }
        Place::poly(e.field(), &num)
    }

    pub fn infinity(field: &FieldTower) -> Result<Place> {
        Self::check_rational_top(field)?;
        Ok(Place { field: field.clone(), kind: PlaceKind::Infinity })
    }

    pub fn laurent(field: &FieldTower) -> Result<Place> {
        match field.top() {
            Some(l) if l.kind == LayerKind::Laurent => Ok(Place { field: field.clone(), kind: PlaceKind::Laurent }),
            _ => Err(Error::InvalidPlace(format!("{field} has no Laurent layer on top"))),
        }
    }

    /// The place of an affine line of the plane `F_q(x)(y)`.
    pub fn line(field: &FieldTower, line: Line) -> Result<Place> {
        check_plane(field)?;
        Ok(Place { field: field.clone(), kind: PlaceKind::Line(line) })
    }

    /// Parse `inf`, the Laurent variable name, or an irreducible polynomial.
    pub fn parse(field: &FieldTower, s: &str) -> Result<Place> {
        let s = s.trim();
        if s == "inf" {
            return Place::infinity(field);
        }
        if let Some(top) = field.top() {
            if top.kind == LayerKind::Laurent && top.var == s {
                return Place::laurent(field);
            }
        }
        let e = FieldElem::parse(field, s)?;
        if check_plane(field).is_ok() {
            let (num, den) = elem_to_poly2(&e);
            let gf = field.gf();
            return match (num.line_factors(gf), den.as_constant()) {
                (Some((_, ls)), Some(_)) if ls.len() == 1 && ls[0].1 == 1 => Place::line(field, ls[0].0),
                _ => Err(Error::InvalidPlace(format!("{e} is not an affine line"))),
            };
        }
        Place::from_elem(&e)
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }
    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }
    fn gf(&self) -> &Arc<Gf> {
        self.field.gf()
    }

    /// Degree of the place over the base (1 for infinity and Laurent places).
    pub fn degree(&self) -> u32 {
        match &self.kind {
            PlaceKind::Poly(p) => p.degree().unwrap() as u32,
            _ => 1,
        }
    }

    pub fn residue_field(&self) -> ResidueField {
        let closure = self.field.is_closure();
        match &self.kind {
            PlaceKind::Poly(p) => ResidueField::Ext { gf: self.gf().clone(), modulus: p.clone(), closure },
            PlaceKind::Infinity => ResidueField::Ext { gf: self.gf().clone(), modulus: UPoly::x(), closure },
            PlaceKind::Laurent => ResidueField::Tower(self.field.sub(self.field.depth() - 1)),
            PlaceKind::Line(l) => ResidueField::Tower(self.line_residue_tower(l)),
        }
    }

    /// Size of a finite residue field, `None` for infinite ones.
    pub fn residue_size(&self) -> Option<u128> {
        match self.residue_field() {
            ResidueField::Ext { gf, modulus, closure: false } => {
                Some((gf.size() as u128).pow(modulus.degree().unwrap() as u32))
            }
            _ => None,
        }
    }

    /// A uniformizer: `P`, `1/x` or the Laurent variable.
    pub fn uniformizer(&self) -> FieldElem {
        match &self.kind {
            PlaceKind::Poly(p) => FieldElem::from_upoly(&self.field, p),
            PlaceKind::Infinity => FieldElem::var_at(&self.field, 1).inv().unwrap(),
            PlaceKind::Laurent => FieldElem::var_at(&self.field, self.field.depth()),
            PlaceKind::Line(l) => l.to_elem(&self.field),
        }
    }

    fn check_field(&self, a: &FieldElem) -> Result<()> {
        if a.field() != &self.field {
            return Err(Error::TowerMismatch(a.field().to_string(), self.field.to_string()));
        }
        Ok(())
    }

    pub fn valuation(&self, a: &FieldElem) -> Result<i64> {
        self.check_field(a)?;
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        Ok(match &self.kind {
            PlaceKind::Poly(p) => {
                let (num, den) = a.as_upolys().unwrap();
                multiplicity(&num, p, self.gf()).0 as i64 - multiplicity(&den, p, self.gf()).0 as i64
            }
            PlaceKind::Infinity => {
                let (num, den) = a.as_upolys().unwrap();
                den.degree().unwrap() as i64 - num.degree().unwrap() as i64
            }
            PlaceKind::Laurent => {
                let (num, den) = a.top_parts();
                let ar = a.ar();
                let low = |p: &Vec<_>| p.iter().position(|c| !ar.is_zero(c)).unwrap() as i64;
                low(&num) - low(&den)
            }
            PlaceKind::Line(l) => {
                let (num, den) = elem_to_poly2(a);
                let gf = self.gf();
                num.line_multiplicity(l, gf).0 as i64 - den.line_multiplicity(l, gf).0 as i64
            }
        })
    }

    /// Residue of `a * pi^(-v(a))`, a nonzero element of the residue field.
    /// For infinity the uniformizer is `1/x`; for polynomial places it is `P`.
    pub fn unit_residue(&self, a: &FieldElem) -> Result<ResidueElem> {
        self.check_field(a)?;
        if a.is_zero() {
            return Err(Error::ZeroElement);
        }
        let gf = self.gf();
        let closure = self.field.is_closure();
        Ok(match &self.kind {
            PlaceKind::Poly(p) => {
                let (num, den) = a.as_upolys().unwrap();
                let n = multiplicity(&num, p, gf).1;
                let d = multiplicity(&den, p, gf).1;
                let num = ExtElem::new(gf, p, n, closure);
                let den = ExtElem::new(gf, p, d, closure);
                ResidueElem::Ext(num.mul(&den.inv()?))
            }
            PlaceKind::Infinity => {
                let (num, den) = a.as_upolys().unwrap();
                ResidueElem::Ext(ExtElem::constant(gf, gf.div(num.lead(), den.lead())?, closure))
            }
            PlaceKind::Laurent => {
                let (num, den) = a.top_parts();
                let ar = a.ar();
                let c = self.field.depth() - 1;
                let first = |p: &Vec<_>| p.iter().find(|v| !ar.is_zero(v)).unwrap().clone();
                let v = ar.div(c, &first(&num), &first(&den))?;
                ResidueElem::Tower(a.sub_elem(v))
            }
            PlaceKind::Line(l) => {
                let (num, den) = elem_to_poly2(a);
                let n = num.line_multiplicity(l, gf).1.restrict(l, gf);
                let d = den.line_multiplicity(l, gf).1.restrict(l, gf);
                ResidueElem::Tower(FieldElem::from_upolys(&self.line_residue_tower(l), &n, &d)?)
            }
        })
    }

    /// Reduction of an element of non-negative valuation.
    pub fn reduce(&self, a: &FieldElem) -> Result<ResidueElem> {
        if a.is_zero() {
            return Ok(self.zero_residue());
        }
        let v = self.valuation(a)?;
        if v < 0 {
            return Err(Error::NegativeValuation(v));
        }
        if v > 0 {
            return Ok(self.zero_residue());
        }
        self.unit_residue(a)
    }

    fn zero_residue(&self) -> ResidueElem {
        match self.residue_field() {
            ResidueField::Ext { gf, modulus, closure } => ResidueElem::Ext(ExtElem::new(&gf, &modulus, UPoly::zero(), closure)),
            ResidueField::Tower(t) => ResidueElem::Tower(FieldElem::zero(&t)),
        }
    }

    /// Residue field of a line: `F_q(s)` with `s` the line's parameter.
    fn line_residue_tower(&self, l: &Line) -> FieldTower {
        let var = &self.field.layer(if l.param_is_x() { 1 } else { 2 }).var;
        self.field.sub(0).rational(var).expect("valid variable")
    }

    /// Lift a residue back to the field: Laurent residues as coefficients,
    /// line residues by pull-back along the line's parameter, and residues of
    /// polynomial places through their polynomial representative.
    pub fn lift_residue(&self, r: &ResidueElem) -> Result<FieldElem> {
        match (&self.kind, r) {
            (PlaceKind::Line(l), ResidueElem::Tower(e)) => {
                let (n, d) = e.as_upolys().ok_or_else(|| Error::InvalidPlace("residue outside F_q(s)".into()))?;
                let s = FieldElem::var_at(&self.field, if l.param_is_x() { 1 } else { 2 });
                eval_upoly(&n, &s).checked_div(&eval_upoly(&d, &s))
            }
            (_, ResidueElem::Tower(e)) => e.embed(&self.field),
            (_, ResidueElem::Ext(e)) => Ok(FieldElem::from_upoly(&self.field, &e.value)),
        }
    }
}

/// `p(s)` for an element `s`.
pub fn eval_upoly(p: &UPoly, s: &FieldElem) -> FieldElem {
    let k = s.field();
    p.0.iter().rev().fold(FieldElem::zero(k), |acc, &c| &(&acc * s) + &FieldElem::constant(k, c))
}

/// `(m, f / P^m)` with `P^m` the exact power of `P` dividing `f`.
pub fn multiplicity(f: &UPoly, p: &UPoly, gf: &Gf) -> (u32, UPoly) {
    let mut f = f.clone();
    let mut m = 0;
    loop {
        let (q, r) = f.divrem(p, gf).expect("nonzero modulus");
        if !r.is_zero() || f.is_zero() {
            return (m, f);
        }
        f = q;
        m += 1;
    }
}

/// All places in the support of the given depth-1 elements, plus infinity.
pub fn support_places(field: &FieldTower, elems: &[&FieldElem]) -> Result<Vec<Place>> {
    Place::check_rational_top(field)?;
    let gf = field.gf();
    let mut out = std::collections::BTreeSet::new();
    for e in elems {
        if e.is_zero() {
            return Err(Error::ZeroElement);
        }
        let (num, den) = e.as_upolys().unwrap();
        for poly in [num, den] {
            for (f, _) in poly.factor(gf)?.1 {
                out.insert(Place { field: field.clone(), kind: PlaceKind::Poly(f) });
            }
        }
    }
    out.insert(Place { field: field.clone(), kind: PlaceKind::Infinity });
    Ok(out.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f5t() -> FieldTower {
        FieldTower::parse("Fq(5,1)(t)").unwrap()
    }
    fn el(k: &FieldTower, s: &str) -> FieldElem {
        FieldElem::parse(k, s).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let k = f5t();
        let vt = Place::parse(&k, "t").unwrap();
        assert_eq!(vt.valuation(&el(&k, "t^2/(t+1)")).unwrap(), 2);
        let inf = Place::infinity(&k).unwrap();
        assert_eq!(inf.valuation(&el(&k, "t")).unwrap(), -1);
        // t^2 + 1 = (t-2)(t-3) over F_5
        let v2 = Place::parse(&k, "t-2").unwrap();
        assert_eq!(v2.valuation(&el(&k, "t^2+1")).unwrap(), 1);
        assert_eq!(vt.valuation(&FieldElem::zero(&k)), Err(Error::ZeroElement));
    }

    #[test]
    fn reduction_examples() {
        let k = f5t();
        let c = |r: ResidueElem| match r {
            ResidueElem::Ext(e) => e.as_const().unwrap(),
            _ => unreachable!(),
        };
        let vt = Place::parse(&k, "t").unwrap();
        assert_eq!(c(vt.reduce(&el(&k, "t+1")).unwrap()), 1);
        let v2 = Place::parse(&k, "t-2").unwrap();
        assert_eq!(c(v2.reduce(&el(&k, "t")).unwrap()), 2);
        let v3 = Place::parse(&k, "t-3").unwrap();
        assert_eq!(c(v3.reduce(&el(&k, "(t^2+1)/(t-2)")).unwrap()), 0);
        assert_eq!(vt.reduce(&el(&k, "1/t")), Err(Error::NegativeValuation(-1)));
        assert!(vt.reduce(&vt.uniformizer()).unwrap().is_zero());
    }

    #[test]
    fn laurent_place() {
        let k = FieldTower::parse("Fq(5,1)(x)((y))").unwrap();
        let v = Place::laurent(&k).unwrap();
        let a = el(&k, "(x+1)*y^3/(y+x)");
        assert_eq!(v.valuation(&a).unwrap(), 3);
        match v.unit_residue(&a).unwrap() {
            ResidueElem::Tower(r) => assert_eq!(r, el(&k.sub(1), "(x+1)/x")),
            _ => unreachable!(),
        }
    }

    #[test]
    fn rejects_reducible_places() {
        let k = f5t();
        assert!(matches!(Place::parse(&k, "t^2+1"), Err(Error::InvalidPlace(_))));
        assert!(Place::parse(&k, "t^2+2").is_ok());
    }

    #[test]
    fn degree_formula_on_examples() {
        let k = f5t();
        for s in ["t^3/(t^2+2)", "(t+1)^2*(t^2+t+1)/(t^4+3)", "3", "t^5 - t"] {
            let a = el(&k, s);
            let sum: i64 = support_places(&k, &[&a])
                .unwrap()
                .iter()
                .map(|v| v.valuation(&a).unwrap() * v.degree() as i64)
                .sum();
            assert_eq!(sum, 0, "{s}");
        }
    }
}
