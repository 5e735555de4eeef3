//! Tame residues, ramification divisors, local invariants, reciprocity and
//! residue transport along Kummer extensions.

use std::fmt;

use super::BrauerClass;
use crate::error::{Error, Result};
use crate::field::kummer::{kummer_splitting, KummerSplitting, SplitType};
use crate::field::place::{support_places, Place, ResidueElem};
use crate::field::plane::{check_plane, elem_to_poly2, Line};
use crate::field::power::{coords_order, coords_scale, discrete_log_class, residue_coords, Coords};
use crate::field::{FieldElem, LayerKind};

/// A residue class in `κ(v)^*/κ(v)^{*n}`.
#[derive(Clone, Debug)]
pub struct ResidueClass {
    pub place: Place,
    pub n: u32,
    /// A representative in `κ(v)^*`.
    pub rep: ResidueElem,
    /// Coordinates in `κ(v)^*/n`.
    pub coords: Coords,
    /// Discrete-log class when `κ(v)` is finite.
    pub dlog: Option<u32>,
}

impl ResidueClass {
    pub fn is_trivial(&self) -> bool {
        self.coords.is_empty()
    }
    pub fn order(&self) -> u32 {
        coords_order(&self.coords, self.n)
    }
}

/// `∂_v((f, g)) = (-1)^(v(f) v(g)) f^(v(g)) g^(-v(f))`, reduced at `v`.
pub fn symbol_residue(f: &FieldElem, g: &FieldElem, v: &Place) -> Result<ResidueElem> {
    let a = v.valuation(f)?;
    let b = v.valuation(g)?;
    let uf = v.unit_residue(f)?;
    let ug = v.unit_residue(g)?;
    let mut r = uf.pow(b)?.mul(&ug.pow(-a)?)?;
    if (a * b) % 2 != 0 {
        r = r.mul(&r.neg_one_like())?;
    }
    Ok(r)
}

/// Tame residue of a class at a place of the top layer.
pub fn tame_residue(alpha: &BrauerClass, v: &Place) -> Result<ResidueClass> {
    if v.field() != alpha.field() {
        return Err(Error::TowerMismatch(v.field().to_string(), alpha.field().to_string()));
    }
    let n = alpha.n();
    let mut rep = v.residue_field().one();
    for t in alpha.terms() {
        let r = symbol_residue(&t.f, &t.g, v)?;
        rep = rep.mul(&r.pow(t.c as i64)?)?;
    }
    let coords = residue_coords(&rep, n)?;
    let dlog = discrete_log_class(&rep, n).ok();
    Ok(ResidueClass { place: v.clone(), n, rep, coords, dlog })
}

/// Places of the top layer that can carry ramification: divisors of entries
/// and infinity on a rational layer over the base, the uniformizer on a
/// Laurent layer, and the lines of a line arrangement in the plane.
pub fn candidate_places(alpha: &BrauerClass) -> Result<Vec<Place>> {
    let field = alpha.field();
    let entries: Vec<&FieldElem> = alpha.terms().iter().flat_map(|t| [&t.f, &t.g]).collect();
    match field.top() {
        None => Ok(vec![]),
        Some(l) if l.kind == LayerKind::Laurent => Ok(vec![Place::laurent(field)?]),
        Some(_) if field.depth() == 1 => {
            if entries.is_empty() {
                return Ok(vec![Place::infinity(field)?]);
            }
            support_places(field, &entries)
        }
        Some(_) if check_plane(field).is_ok() => {
            let lines = arrangement_lines(&entries)?;
            lines.into_iter().map(|l| Place::line(field, l)).collect()
        }
        Some(_) => Err(Error::UnsupportedTower(format!("residues over {field}"))),
    }
}

/// The lines dividing some entry; every entry must be a product of lines.
pub fn arrangement_lines(entries: &[&FieldElem]) -> Result<Vec<Line>> {
    let mut out = std::collections::BTreeSet::new();
    for e in entries {
        let gf = e.field().gf();
        let (num, den) = elem_to_poly2(e);
        for p in [num, den] {
            let (_, ls) = p.line_factors(gf).ok_or_else(|| Error::NotALineArrangement(e.to_string()))?;
            out.extend(ls.into_iter().map(|(l, _)| l));
        }
    }
    Ok(out.into_iter().collect())
}

/// Nonzero residues over the candidate place set.
pub fn ramification_divisor(alpha: &BrauerClass) -> Result<Vec<ResidueClass>> {
    let mut out = Vec::new();
    for v in candidate_places(alpha)? {
        let r = tame_residue(alpha, &v)?;
        if !r.is_trivial() {
            out.push(r);
        }
    }
    Ok(out)
}

/// Local invariant `j/n` in `Q/Z` at a place of `F_q(t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Invariant {
    pub place: Place,
    /// Class `j` in `Z/n`.
    pub j: u32,
    pub n: u32,
}

impl Invariant {
    pub fn order(&self) -> u32 {
        super::order_mod(self.j as u64, self.n as u64) as u32
    }
    /// Reduced fraction `(num, den)` of `j/n`.
    pub fn fraction(&self) -> (u32, u32) {
        let g = crate::field::gf::gcd(self.j as u64, self.n as u64) as u32;
        if self.j == 0 {
            (0, 1)
        } else {
            (self.j / g, self.n / g)
        }
    }
}

impl fmt::Display for Invariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (a, b) = self.fraction();
        if a == 0 {
            write!(f, "0")
        } else {
            write!(f, "{a}/{b}")
        }
    }
}

fn check_global(alpha: &BrauerClass) -> Result<()> {
    let field = alpha.field();
    if field.depth() != 1 || field.is_closure() || field.layer(1).kind != LayerKind::Rational {
        return Err(Error::UnsupportedTower(format!(
            "local invariants need a rational layer over a finite base, got {field}"
        )));
    }
    Ok(())
}

/// `inv_v(α) = dlog_class(∂_v α) / n` over `F_q(t)`.
pub fn local_invariant(alpha: &BrauerClass, v: &Place) -> Result<Invariant> {
    check_global(alpha)?;
    let r = tame_residue(alpha, v)?;
    let j = r.dlog.ok_or_else(|| Error::InvariantViolation("finite residue field expected".into()))?;
    Ok(Invariant { place: v.clone(), j, n: alpha.n() })
}

/// Local invariants at every place of the support set (including infinity).
pub fn global_invariants(alpha: &BrauerClass) -> Result<Vec<Invariant>> {
    check_global(alpha)?;
    candidate_places(alpha)?.iter().map(|v| local_invariant(alpha, v)).collect()
}

/// Whether `Σ_v inv_v(α) ≡ 0` in `Q/Z`. Always true for a correct
/// implementation; a `false` is an internal invariant violation.
pub fn reciprocity_check(alpha: &BrauerClass) -> Result<bool> {
    let invs = global_invariants(alpha)?;
    let sum: u64 = invs.iter().map(|i| i.j as u64).sum();
    Ok(sum.is_multiple_of(alpha.n() as u64))
}

/// Residue above one place of `K(f^(1/l))`.
#[derive(Clone, Debug)]
pub struct TransportedResidue {
    pub e: u32,
    pub f: u32,
    /// `e` times the restriction of the residue below, in the coordinates of
    /// `κ(v)^*/l` (modulo the kernel of restriction for inert places).
    pub coords: Coords,
    pub trivial: bool,
}

#[derive(Clone, Debug)]
pub struct TransportReport {
    pub splitting: KummerSplitting,
    pub below: ResidueClass,
    pub above: Vec<TransportedResidue>,
}

/// Residues of `α` restricted to `K(f^(1/l))` at the places above `v`:
/// `∂_w(α) = e_{w/v} · res(∂_v α)`.
pub fn residue_transport(alpha: &BrauerClass, v: &Place, f: &FieldElem, l: u32) -> Result<TransportReport> {
    if alpha.n() != l {
        return Err(Error::InvalidInput(format!("transport needs n = l, got n = {} and l = {l}", alpha.n())));
    }
    let ks = kummer_splitting(v, f, l)?;
    let below = tame_residue(alpha, v)?;
    let above = match ks.kind {
        SplitType::Ramified => {
            let coords = coords_scale(&below.coords, l as i64, l);
            vec![TransportedResidue { e: l, f: 1, trivial: coords.is_empty(), coords }]
        }
        SplitType::Split => (0..l)
            .map(|_| TransportedResidue { e: 1, f: 1, coords: below.coords.clone(), trivial: below.is_trivial() })
            .collect(),
        SplitType::Inert => {
            let coords = match &below.rep {
                // finite residue fields: restriction to the degree-l extension multiplies the class by l
                ResidueElem::Ext(_) => coords_scale(&below.coords, l as i64, l),
                // otherwise the kernel of restriction is generated by ū
                ResidueElem::Tower(_) => {
                    let u = residue_coords(ks.unit_residue.as_ref().unwrap(), l)?;
                    let in_span = (0..l as i64).any(|k| coords_scale(&u, k, l) == below.coords);
                    if in_span {
                        Coords::new()
                    } else {
                        below.coords.clone()
                    }
                }
            };
            vec![TransportedResidue { e: 1, f: l, trivial: coords.is_empty(), coords }]
        }
    };
    Ok(TransportReport { splitting: ks, below, above })
}

impl fmt::Display for ResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.dlog {
            Some(j) => write!(f, "{} (class {j} mod {})", self.rep, self.n),
            None => write!(f, "{}", self.rep),
        }
    }
}
