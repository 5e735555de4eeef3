//! Diagonal quadratic forms: isotropy and hyperbolicity decisions over the
//! supported towers, Albert and Pfister forms, and `u`-invariant bounds.
//!
//! Decisions recurse down the tower:
//! - finite fields: Chevalley–Warning (dim ≥ 3 isotropic), binary forms by
//!   the square class of `-ab`; Witt class determined by dim and discriminant;
//! - the algebraic closure of `F_p`: every form of dim ≥ 2 is isotropic;
//! - a Laurent layer `k((t))`: Springer, `q ≅ q₁ ⊥ t q₂` with residue forms
//!   over `k`; isotropic iff `q₁` or `q₂` is, hyperbolic iff both are;
//! - `F_q(t)`: local–global at the bad places (divisors of entries and
//!   infinity), each completion handled by Springer over a finite residue
//!   field. At any other place the form is a unit form, isotropic as soon as
//!   its dimension is at least 3; binary forms are decided globally by the
//!   square class of `-ab`;
//! - `F̄_p(t)` is C1: dim ≥ 3 isotropic, and the Witt class is determined by
//!   dim and discriminant.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::place::{support_places, Place, ResidueElem};
use crate::field::power::{is_nth_power, is_nth_power_residue};
use crate::field::{FieldElem, FieldTower, LayerKind};
use crate::random::{random_elem, sample_rng};

/// A diagonal form `⟨a_1, ..., a_m⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadForm {
    field: FieldTower,
    entries: Vec<FieldElem>,
}

/// Isotropy and (for even dimension) hyperbolicity of a form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WittVerdict {
    pub isotropic: bool,
    pub hyperbolic: bool,
}

impl QuadForm {
    pub fn new(field: &FieldTower, entries: Vec<FieldElem>) -> Result<QuadForm> {
        if field.characteristic() == 2 {
            return Err(Error::CharacteristicTwo);
        }
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        for e in &entries {
            if e.field() != field {
                return Err(Error::TowerMismatch(e.field().to_string(), field.to_string()));
            }
            if e.is_zero() {
                return Err(Error::ZeroEntry);
            }
        }
        Ok(QuadForm { field: field.clone(), entries })
    }

    /// Parse a comma-separated list of entries.
    pub fn parse(field: &FieldTower, s: &str) -> Result<QuadForm> {
        let mut entries = Vec::new();
        let mut start = 0;
        let mut depth = 0i32;
        let bytes = s.as_bytes();
        for i in 0..=bytes.len() {
            let end = i == bytes.len();
            if !end {
                match bytes[i] {
                    b'(' => depth += 1,
                    b')' => depth -= 1,
                    _ => {}
                }
            }
            if end || (bytes[i] == b',' && depth == 0) {
                let e = FieldElem::parse(field, &s[start..i]).map_err(|e| match e {
                    Error::Parse { pos, msg } => Error::Parse { pos: pos + start, msg },
                    other => other,
                })?;
                entries.push(e);
                start = i + 1;
            }
        }
        QuadForm::new(field, entries)
    }

    pub fn field(&self) -> &FieldTower {
        &self.field
    }
    pub fn entries(&self) -> &[FieldElem] {
        &self.entries
    }
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    /// `c · q`.
    pub fn scale(&self, c: &FieldElem) -> Result<QuadForm> {
        let entries = self.entries.iter().map(|e| e.checked_mul(c)).collect::<Result<_>>()?;
        QuadForm::new(&self.field, entries)
    }

    /// Orthogonal sum.
    pub fn orthogonal_sum(&self, o: &QuadForm) -> Result<QuadForm> {
        let mut entries = self.entries.clone();
        entries.extend(o.entries.iter().cloned());
        QuadForm::new(&self.field, entries)
    }

    /// Signed discriminant `(-1)^(m(m-1)/2) Π a_i`.
    pub fn discriminant(&self) -> FieldElem {
        let m = self.dim();
        let prod = self.entries.iter().fold(FieldElem::one(&self.field), |acc, e| &acc * e);
        if (m * (m.saturating_sub(1)) / 2) % 2 == 1 {
            -prod
        } else {
            prod
        }
    }

    /// Evaluate `Σ a_i v_i²`.
    pub fn evaluate(&self, v: &[FieldElem]) -> Result<FieldElem> {
        let mut acc = FieldElem::zero(&self.field);
        for (a, x) in self.entries.iter().zip(v) {
            acc = acc.checked_add(&a.checked_mul(&x.checked_mul(x)?)?)?;
        }
        Ok(acc)
    }

    pub fn verdict(&self) -> Result<WittVerdict> {
        let isotropic = is_isotropic(self)?;
        let hyperbolic = self.dim().is_multiple_of(2) && is_hyperbolic(self)?;
        Ok(WittVerdict { isotropic, hyperbolic })
    }
}

impl fmt::Display for QuadForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.entries.iter().map(|e| e.to_string()).collect();
        write!(f, "<{}>", parts.join(", "))
    }
}

fn check_supported(field: &FieldTower) -> Result<()> {
    if field.characteristic() == 2 {
        return Err(Error::CharacteristicTwo);
    }
    let layers = field.layers();
    let rationals: Vec<usize> = (0..layers.len()).filter(|&i| layers[i].kind == LayerKind::Rational).collect();
    let ok = match rationals.as_slice() {
        [] => true,
        [0] => true,
        _ => false,
    };
    if !ok {
        return Err(Error::UnsupportedTower(format!(
            "quadratic forms over {field}: at most one rational layer, directly on the base"
        )));
    }
    Ok(())
}

fn is_square(a: &ResidueElem) -> Result<bool> {
    Ok(is_nth_power_residue(a, 2)?.is_power)
}

/// A diagonal form over a finite (or algebraically closed) residue field.
fn residue_isotropic(entries: &[ResidueElem], closed: bool) -> Result<bool> {
    match entries.len() {
        0 | 1 => Ok(false),
        2 if closed => Ok(true),
        2 => {
            let d = entries[0].mul(&entries[1])?;
            is_square(&d.mul(&d.neg_one_like())?)
        }
        _ => Ok(true),
    }
}

fn residue_hyperbolic(entries: &[ResidueElem], closed: bool) -> Result<bool> {
    let m = entries.len();
    if m % 2 == 1 {
        return Ok(false);
    }
    if m == 0 || closed {
        return Ok(true);
    }
    let mut d = entries.iter().skip(1).try_fold(entries[0].clone(), |acc, e| acc.mul(e))?;
    if (m / 2) % 2 == 1 {
        d = d.mul(&d.neg_one_like())?;
    }
    is_square(&d)
}

/// Springer residue forms `(q₁, q₂)` at a place.
fn springer_split(q: &[FieldElem], v: &Place) -> Result<(Vec<ResidueElem>, Vec<ResidueElem>)> {
    let mut even = Vec::new();
    let mut odd = Vec::new();
    for e in q {
        let u = v.unit_residue(e)?;
        if v.valuation(e)?.rem_euclid(2) == 0 {
            even.push(u);
        } else {
            odd.push(u);
        }
    }
    Ok((even, odd))
}

fn tower_elems(r: Vec<ResidueElem>) -> Vec<FieldElem> {
    r.into_iter()
        .map(|e| match e {
            ResidueElem::Tower(f) => f,
            ResidueElem::Ext(_) => unreachable!("Laurent residues live in the tower below"),
        })
        .collect()
}

fn bad_places(field: &FieldTower, q: &[FieldElem]) -> Result<Vec<Place>> {
    let refs: Vec<&FieldElem> = q.iter().collect();
    support_places(field, &refs)
}

fn isotropic_entries(field: &FieldTower, q: &[FieldElem]) -> Result<bool> {
    let m = q.len();
    if m <= 1 {
        return Ok(false);
    }
    match field.top() {
        None => {
            if field.is_closure() {
                return Ok(true);
            }
            let r: Vec<ResidueElem> = q.iter().cloned().map(ResidueElem::Tower).collect();
            residue_isotropic(&r, false)
        }
        Some(l) if l.kind == LayerKind::Laurent => {
            let v = Place::laurent(field)?;
            let (q1, q2) = springer_split(q, &v)?;
            let k = field.sub(field.depth() - 1);
            Ok(isotropic_entries(&k, &tower_elems(q1))? || isotropic_entries(&k, &tower_elems(q2))?)
        }
        Some(_) => {
            if m == 2 {
                let d = q[0].checked_mul(&q[1])?;
                return Ok(is_nth_power(&-d, 2)?.is_power);
            }
            if field.is_closure() {
                return Ok(true);
            }
            for v in bad_places(field, q)? {
                let (q1, q2) = springer_split(q, &v)?;
                if !residue_isotropic(&q1, false)? && !residue_isotropic(&q2, false)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

fn hyperbolic_entries(field: &FieldTower, q: &[FieldElem]) -> Result<bool> {
    let m = q.len();
    if m % 2 == 1 {
        return Ok(false);
    }
    if m == 0 {
        return Ok(true);
    }
    match field.top() {
        None => {
            let r: Vec<ResidueElem> = q.iter().cloned().map(ResidueElem::Tower).collect();
            residue_hyperbolic(&r, field.is_closure())
        }
        Some(l) if l.kind == LayerKind::Laurent => {
            let v = Place::laurent(field)?;
            let (q1, q2) = springer_split(q, &v)?;
            let k = field.sub(field.depth() - 1);
            Ok(hyperbolic_entries(&k, &tower_elems(q1))? && hyperbolic_entries(&k, &tower_elems(q2))?)
        }
        Some(_) => {
            let mut disc = q.iter().skip(1).fold(q[0].clone(), |acc, e| &acc * e);
            if (m / 2) % 2 == 1 {
                disc = -disc;
            }
            if !is_nth_power(&disc, 2)?.is_power {
                return Ok(false);
            }
            if field.is_closure() {
                return Ok(true);
            }
            for v in bad_places(field, q)? {
                let (q1, q2) = springer_split(q, &v)?;
                if !residue_hyperbolic(&q1, false)? || !residue_hyperbolic(&q2, false)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// Whether `q` has a nontrivial zero.
pub fn is_isotropic(q: &QuadForm) -> Result<bool> {
    check_supported(&q.field)?;
    isotropic_entries(&q.field, &q.entries)
}

/// Whether `q` is zero in the Witt group.
pub fn is_hyperbolic(q: &QuadForm) -> Result<bool> {
    check_supported(&q.field)?;
    if q.dim() % 2 == 1 {
        return Err(Error::OddDimension(q.dim()));
    }
    hyperbolic_entries(&q.field, &q.entries)
}

/// `⟨a, b, -ab, -c, -d, cd⟩`, anisotropic iff `(a,b) ⊗ (c,d)` is a division algebra.
pub fn albert_form(a: &FieldElem, b: &FieldElem, c: &FieldElem, d: &FieldElem) -> Result<QuadForm> {
    for e in [a, b, c, d] {
        if e.is_zero() {
            return Err(Error::ZeroEntry);
        }
    }
    let entries = vec![a.clone(), b.clone(), -(a * b), -c.clone(), -d.clone(), c * d];
    QuadForm::new(a.field(), entries)
}

/// `⟨⟨a_1, ..., a_n⟩⟩ = ⊗ ⟨1, -a_i⟩`.
pub fn pfister(entries: &[FieldElem]) -> Result<QuadForm> {
    let first = entries.first().ok_or(Error::EmptyInput)?;
    let field = first.field().clone();
    let mut out = vec![FieldElem::one(&field)];
    for a in entries {
        if a.is_zero() {
            return Err(Error::ZeroEntry);
        }
        let na = -a.clone();
        let twisted: Vec<FieldElem> = out.iter().map(|e| e.checked_mul(&na)).collect::<Result<_>>()?;
        out.extend(twisted);
    }
    QuadForm::new(&field, out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum UBoundVariant {
    Basic,
    Improved,
}

impl std::str::FromStr for UBoundVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<UBoundVariant> {
        match s {
            "basic" => Ok(UBoundVariant::Basic),
            "improved" => Ok(UBoundVariant::Improved),
            _ => Err(Error::Parse { pos: 0, msg: format!("unknown u-bound variant `{s}`") }),
        }
    }
}

/// Bounds on `u(K)` from symbol-length bounds `λ_1..λ_N`:
/// basic `1 + Σ 2^n λ_n`, improved `2 + Σ_{n≥2} (2^n - 2) λ_n`.
pub fn u_bound(lambdas: &[u64], variant: UBoundVariant) -> Result<u64> {
    if lambdas.is_empty() {
        return Err(Error::EmptyInput);
    }
    let terms = lambdas.iter().enumerate().map(|(i, &l)| (i as u32 + 1, l));
    Ok(match variant {
        UBoundVariant::Basic => 1 + terms.map(|(n, l)| (1u64 << n) * l).sum::<u64>(),
        UBoundVariant::Improved => 2 + terms.filter(|&(n, _)| n >= 2).map(|(n, l)| ((1u64 << n) - 2) * l).sum::<u64>(),
    })
}

/// Outcome of a search for anisotropic forms of a given dimension.
#[derive(Clone, Debug)]
pub struct ScanReport {
    pub dim: usize,
    pub samples: usize,
    pub found_anisotropic: bool,
    pub witness: Option<QuadForm>,
    /// Whether the witness is the canonical Pfister-type candidate rather
    /// than a random sample.
    pub canonical: bool,
}

/// The canonical candidate: the first `dim` entries of `⟨⟨g, t_1, ..., t_d⟩⟩`
/// (when it has at least `dim` entries).
pub fn canonical_candidate(field: &FieldTower, dim: usize) -> Result<Option<QuadForm>> {
    let mut slots = vec![FieldElem::generator(field)];
    slots.extend((1..=field.depth()).map(|l| FieldElem::var_at(field, l)));
    if dim > 1 << slots.len() || field.is_closure() {
        return Ok(None);
    }
    let p = pfister(&slots)?;
    Ok(Some(QuadForm::new(field, p.entries[..dim].to_vec())?))
}

/// Random form of dimension `dim` with entries of degree at most `max_deg`.
pub fn random_form<R: Rng>(field: &FieldTower, dim: usize, max_deg: u32, rng: &mut R) -> Result<QuadForm> {
    let entries = (0..dim).map(|_| random_elem(field, max_deg, rng)).collect();
    QuadForm::new(field, entries)
}

/// Search for an anisotropic form of dimension `dim`: the canonical candidate
/// first, then `samples` random forms (sample `i` drawn from a generator
/// seeded by `(seed, i)`).
pub fn anisotropic_dimension_scan(field: &FieldTower, dim: usize, samples: usize, seed: u64) -> Result<ScanReport> {
    check_supported(field)?;
    if dim == 0 {
        return Err(Error::EmptyInput);
    }
    if let Some(c) = canonical_candidate(field, dim)? {
        if !is_isotropic(&c)? {
            return Ok(ScanReport { dim, samples, found_anisotropic: true, witness: Some(c), canonical: true });
        }
    }
    for i in 0..samples {
        let mut rng = sample_rng(seed, i as u64);
        let q = random_form(field, dim, 2, &mut rng)?;
        if !is_isotropic(&q)? {
            return Ok(ScanReport { dim, samples, found_anisotropic: true, witness: Some(q), canonical: false });
        }
    }
    Ok(ScanReport { dim, samples, found_anisotropic: false, witness: None, canonical: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn form(field: &str, s: &str) -> QuadForm {
        QuadForm::parse(&FieldTower::parse(field).unwrap(), s).unwrap()
    }

    #[test]
    fn finite_field_examples() {
        assert!(is_isotropic(&form("Fq(5,1)", "1, 1, 1")).unwrap());
        assert!(!is_isotropic(&form("Fq(5,1)", "1, -2")).unwrap());
        assert!(is_isotropic(&form("Fq(5,1)", "1, -1")).unwrap());
        assert!(!is_isotropic(&form("Fq(5,1)", "3")).unwrap());
        assert!(is_hyperbolic(&form("Fq(5,1)", "1, -1")).unwrap());
        assert!(is_hyperbolic(&form("Fq(5,1)", "1, 1, 1, 1")).unwrap());
        assert!(is_hyperbolic(&form("Fq(5,1)", "1, -2, 1, -2")).unwrap());
        assert!(!is_hyperbolic(&form("Fq(5,1)", "1, 1, 1, 2")).unwrap());
        assert_eq!(is_hyperbolic(&form("Fq(5,1)", "1, 1, 1")), Err(Error::OddDimension(3)));
        assert!(is_isotropic(&form("Fpbar(5)", "1, 2")).unwrap());
    }

    #[test]
    fn brute_force_agreement_over_f7() {
        let k = FieldTower::finite(7, 1).unwrap();
        for a in 1..7i64 {
            for b in 1..7i64 {
                let q = QuadForm::new(&k, vec![FieldElem::from_int(&k, a), FieldElem::from_int(&k, b)]).unwrap();
                let brute = (0..7i64).flat_map(|x| (0..7i64).map(move |y| (x, y))).any(|(x, y)| {
                    (x, y) != (0, 0) && (a * x * x + b * y * y) % 7 == 0
                });
                assert_eq!(is_isotropic(&q).unwrap(), brute);
            }
        }
    }

    #[test]
    fn rejects_characteristic_two_and_zero_entries() {
        let k = FieldTower::finite(3, 1).unwrap();
        assert_eq!(QuadForm::new(&k, vec![FieldElem::zero(&k)]), Err(Error::ZeroEntry));
        let k2 = FieldTower::finite(2, 1);
        if let Ok(k2) = k2 {
            assert_eq!(QuadForm::new(&k2, vec![FieldElem::one(&k2)]), Err(Error::CharacteristicTwo));
        }
    }

    #[test]
    fn albert_and_pfister_shapes() {
        let k = FieldTower::parse("Fq(5,1)(x)((y))").unwrap();
        let e = |s: &str| FieldElem::parse(&k, s).unwrap();
        let a = albert_form(&e("x"), &e("g"), &e("x+1"), &e("y")).unwrap();
        assert_eq!(a, QuadForm::parse(&k, "x, g, -g*x, -(x+1), -y, (x+1)*y").unwrap());
        assert!(!is_isotropic(&a).unwrap());
        let one = albert_form(&e("1"), &e("1"), &e("1"), &e("1")).unwrap();
        assert_eq!(one, QuadForm::parse(&k, "1, 1, -1, -1, -1, 1").unwrap());
        assert!(is_hyperbolic(&one).unwrap());
        let same = albert_form(&e("x"), &e("y"), &e("x"), &e("y")).unwrap();
        assert!(is_hyperbolic(&same).unwrap());
        assert_eq!(pfister(&[e("x")]).unwrap(), QuadForm::parse(&k, "1, -x").unwrap());
        assert_eq!(pfister(&[e("x"), e("y")]).unwrap(), QuadForm::parse(&k, "1, -x, -y, x*y").unwrap());
        assert!(is_hyperbolic(&pfister(&[e("1")]).unwrap()).unwrap());
    }

    #[test]
    fn u_bounds() {
        assert_eq!(u_bound(&[1, 2, 1], UBoundVariant::Improved).unwrap(), 12);
        assert_eq!(u_bound(&[1, 2, 1], UBoundVariant::Basic).unwrap(), 19);
        assert_eq!(u_bound(&[1], UBoundVariant::Improved).unwrap(), 2);
        assert_eq!(u_bound(&[], UBoundVariant::Basic), Err(Error::EmptyInput));
    }

    #[test]
    fn global_witnesses() {
        let w = form("Fq(5,1)(t)", "1, -g, -t, g*t");
        assert!(!is_isotropic(&w).unwrap());
        let p = form("Fq(5,1)((x))((y))", "1, -g, -x, g*x, -y, g*y, x*y, -g*x*y");
        assert!(!is_isotropic(&p).unwrap());
        assert!(is_isotropic(&form("Fq(5,1)(t)", "1, -g, -t, g*t, t+1")).unwrap());
        assert!(is_isotropic(&form("Fq(5,1)(t)", "t^2+2, -(t^2+2)*4")).unwrap());
        assert!(is_isotropic(&form("Fpbar(5)(t)", "1, t, t+1")).unwrap());
        assert!(!is_isotropic(&form("Fpbar(5)(t)", "1, t")).unwrap());
    }

    #[test]
    fn scans() {
        let k = FieldTower::parse("Fq(5,1)(t)").unwrap();
        let r = anisotropic_dimension_scan(&k, 4, 10, 7).unwrap();
        assert!(r.found_anisotropic && r.canonical);
        assert_eq!(r.witness.unwrap(), form("Fq(5,1)(t)", "1, -g, -t, g*t"));
        let r = anisotropic_dimension_scan(&k, 5, 50, 7).unwrap();
        assert!(!r.found_anisotropic);
        let l = FieldTower::parse("Fq(5,1)((x))((y))").unwrap();
        let r = anisotropic_dimension_scan(&l, 8, 0, 1).unwrap();
        assert!(r.found_anisotropic);
        assert!(anisotropic_dimension_scan(&FieldTower::parse("Fq(5,1)(x)(y)").unwrap(), 3, 1, 1).is_err());
    }
}
