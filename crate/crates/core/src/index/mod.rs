//! Exact indices by recursion over the tower.
//!
//! The class is split into primary parts. On a Laurent layer `k((t))` a
//! part of prime order `l` is written `α = α₀ + (t, ρ)`; the index is
//! `|ρ| · ind(α₀ ⊗ k(ρ^(1/l)))` where `|ρ|` is the order of `ρ` in
//! `k^*/k^{*l}`. Restrictions to Kummer extensions are never materialized:
//! the recursion carries the list of radicals adjoined so far and
//! decomposes it layer by layer (unramified radicals extend the residue
//! field, a ramified one changes the uniformizer). At the bottom:
//! finite fields, `F̄_p` and `F̄_p(x)` have trivial Brauer groups; over
//! `F_q(x)` the index is the exponent, read off the local invariants
//! multiplied by the local degrees of the adjoined radicals.

mod scan;
mod split;

pub use scan::{period_index_scan, ScanCell, ScanReport};
pub use split::{exhibit_splitting_field, SplitStep, SplittingWitness, TranscriptRow};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::gf::{gcd, lcm};
use crate::field::place::{Place, ResidueElem};
use crate::field::power::{coords_scale, is_nth_power_residue, unit_coords, CoordKey, Coords};
use crate::field::{FieldElem, FieldTower, LayerKind};
use crate::symbol::{exponent, global_invariants, is_zero, laurent_decompose, BrauerClass};
use crate::witt::{albert_form, is_isotropic};

/// One recursion step of the index computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexStep {
    /// The field the step works over.
    pub field: String,
    /// `laurent-unramified`, `laurent-ramified`, `global`, `tsen`, `finite`.
    pub rule: String,
    /// Radicals adjoined to this field at this point.
    pub radicals: Vec<String>,
    /// Order of the residue character (Laurent steps) or of the largest
    /// surviving local invariant (global step).
    pub chi_order: u32,
    /// Contribution of the step to the index.
    pub factor: u32,
    /// Per-place data of the global step: `(place, invariant, local degree)`.
    pub places: Vec<(String, String, u32)>,
}

/// Index computation for one primary part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimaryCertificate {
    pub prime: u32,
    pub class: String,
    pub exponent: u32,
    pub index: u32,
    pub steps: Vec<IndexStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IndexResult {
    pub index: u32,
    pub exponent: u32,
    pub certificate: Vec<PrimaryCertificate>,
}

/// Sparse row reduction over `Z/l` on power-class coordinates.
#[derive(Default)]
struct Span {
    l: u32,
    rows: Vec<(CoordKey, Coords)>,
}

impl Span {
    fn new(l: u32) -> Span {
        Span { l, rows: Vec::new() }
    }

    fn reduce(&self, c: &Coords) -> Coords {
        let l = self.l as i64;
        let mut c = c.clone();
        for (pivot, row) in &self.rows {
            if let Some(&a) = c.get(pivot) {
                let scaled = coords_scale(row, -(a as i64), self.l);
                for (k, v) in scaled {
                    let cur = c.get(&k).copied().unwrap_or(0) as i64;
                    let nv = (cur + v as i64).rem_euclid(l) as u32;
                    if nv == 0 {
                        c.remove(&k);
                    } else {
                        c.insert(k, nv);
                    }
                }
            }
        }
        c
    }

    /// Add a vector; returns whether it enlarged the span.
    fn insert(&mut self, c: &Coords) -> bool {
        let r = self.reduce(c);
        let Some((pivot, &a)) = r.iter().next() else { return false };
        let inv = (1..self.l).find(|x| (a as u64 * *x as u64) % self.l as u64 == 1).unwrap();
        let row = coords_scale(&r, inv as i64, self.l);
        let pivot = pivot.clone();
        // keep earlier rows reduced against the new pivot
        for (_, old) in self.rows.iter_mut() {
            if let Some(&b) = old.get(&pivot) {
                let scaled = coords_scale(&row, -(b as i64), self.l);
                *old = crate::field::power::coords_add(old, &scaled, self.l);
            }
        }
        self.rows.push((pivot, row));
        true
    }

    fn contains(&self, c: &Coords) -> bool {
        self.reduce(c).is_empty()
    }
}

fn tower_elem(r: ResidueElem) -> FieldElem {
    match r {
        ResidueElem::Tower(e) => e,
        ResidueElem::Ext(_) => unreachable!("Laurent residues live in the tower below"),
    }
}

fn inv_mod(a: i64, l: u32) -> i64 {
    let a = a.rem_euclid(l as i64);
    (1..l as i64).find(|x| (a * x) % l as i64 == 1).expect("invertible")
}

fn check_index_tower(field: &FieldTower) -> Result<()> {
    let layers = field.layers();
    let bad = layers.iter().enumerate().any(|(i, l)| l.kind == LayerKind::Rational && i != 0);
    if bad {
        return Err(Error::UnsupportedTower(format!(
            "index over {field}: at most one rational layer, directly on the base"
        )));
    }
    Ok(())
}

/// Index of `α ⊗ F(R^(1/l))` for a class of prime order `l` over `F`.
fn prime_index(alpha: &BrauerClass, radicals: &[FieldElem], steps: &mut Vec<IndexStep>) -> Result<u32> {
    let field = alpha.field().clone();
    let l = alpha.n();
    let show = |r: &[FieldElem]| r.iter().map(|e| e.to_string()).collect::<Vec<_>>();
    let mut step = |rule: &str, chi: u32, factor: u32, places: Vec<(String, String, u32)>| {
        steps.push(IndexStep {
            field: field.to_string(),
            rule: rule.to_string(),
            radicals: show(radicals),
            chi_order: chi,
            factor,
            places,
        })
    };
    match field.top() {
        None => {
            step("finite", 1, 1, vec![]);
            Ok(1)
        }
        Some(layer) if layer.kind == LayerKind::Rational => {
            if field.is_closure() {
                step("tsen", 1, 1, vec![]);
                return Ok(1);
            }
            // index over a global field = exponent; invariants multiply by local degrees
            let mut factor = 1;
            let mut places = Vec::new();
            if !alpha.is_empty() {
                for inv in global_invariants(alpha)? {
                    if inv.j == 0 {
                        continue;
                    }
                    let local_degree = local_degree(&inv.place, radicals, l)?;
                    let survives = local_degree % l != 0;
                    if survives {
                        factor = l;
                    }
                    places.push((inv.place.to_string(), inv.to_string(), local_degree));
                }
            }
            step("global", factor, factor, places);
            Ok(factor)
        }
        Some(_) => {
            let k = field.sub(field.depth() - 1);
            let v = Place::laurent(&field)?;
            let split = laurent_decompose(alpha)?;
            let ramified = radicals.iter().position(|r| v.valuation(r).map(|a| a.rem_euclid(l as i64) != 0).unwrap_or(false));
            match ramified {
                None => {
                    let below: Vec<FieldElem> =
                        radicals.iter().map(|r| v.unit_residue(r).map(tower_elem)).collect::<Result<_>>()?;
                    let mut span = Span::new(l);
                    for r in &below {
                        span.insert(&unit_coords(r, l)?);
                    }
                    let rho = unit_coords(&split.rho, l)?;
                    if span.contains(&rho) {
                        step("laurent-unramified", 1, 1, vec![]);
                        prime_index(&split.alpha0, &below, steps)
                    } else {
                        step("laurent-unramified", l, l, vec![]);
                        let mut more = below;
                        more.push(split.rho.clone());
                        Ok(l * prime_index(&split.alpha0, &more, steps)?)
                    }
                }
                Some(i) => {
                    // t = π^l u₁^(-b) over F(r₁^(1/l)); (t, ρ) restricts to (u₁^(-b), ρ)
                    let r1 = &radicals[i];
                    let a1 = v.valuation(r1)?;
                    let b = inv_mod(a1, l);
                    let u1 = tower_elem(v.unit_residue(r1)?);
                    let mut below = Vec::new();
                    for (j, r) in radicals.iter().enumerate() {
                        if j == i {
                            continue;
                        }
                        let kj = (v.valuation(r)? * b).rem_euclid(l as i64);
                        let adj = r.checked_mul(&r1.pow(-kj)?)?;
                        below.push(tower_elem(v.unit_residue(&adj)?));
                    }
                    let mut terms: Vec<(i64, FieldElem, FieldElem)> =
                        split.alpha0.terms().iter().map(|t| (t.c as i64, t.f.clone(), t.g.clone())).collect();
                    terms.push((1, u1.pow(-b)?, split.rho.clone()));
                    let beta = BrauerClass::new(&k, l, terms)?;
                    step("laurent-ramified", 1, 1, vec![]);
                    prime_index(&beta, &below, steps)
                }
            }
        }
    }
}

/// Degree of `F_v(R^(1/l))` over the completion `F_v`: `l` unless every radical
/// is an `l`-th power locally, in which case 1 (only divisibility by `l` matters).
fn local_degree(v: &Place, radicals: &[FieldElem], l: u32) -> Result<u32> {
    for r in radicals {
        if v.valuation(r)?.rem_euclid(l as i64) != 0 {
            return Ok(l);
        }
        if !is_nth_power_residue(&v.unit_residue(r)?, l)?.is_power {
            return Ok(l);
        }
    }
    Ok(1)
}

fn primary_index(part: &BrauerClass, prime: u32) -> Result<PrimaryCertificate> {
    let field = part.field();
    let e = exponent(part)?;
    let mut steps = Vec::new();
    let index = if field.depth() == 0 {
        steps.push(IndexStep {
            field: field.to_string(),
            rule: "finite".into(),
            radicals: vec![],
            chi_order: 1,
            factor: 1,
            places: vec![],
        });
        1
    } else if field.depth() == 1 && field.layer(1).kind == LayerKind::Rational {
        // Hasse over F_q(t), Tsen over F̄_p(t): index = exponent
        let rule = if field.is_closure() { "tsen" } else { "global" };
        let places = if field.is_closure() || part.is_empty() {
            vec![]
        } else {
            global_invariants(part)?
                .into_iter()
                .filter(|i| i.j != 0)
                .map(|i| (i.place.to_string(), i.to_string(), 1))
                .collect()
        };
        steps.push(IndexStep { field: field.to_string(), rule: rule.into(), radicals: vec![], chi_order: e, factor: e, places });
        e
    } else {
        let prime_order = reduce_to_prime(part, prime)?;
        prime_index(&prime_order, &[], &mut steps)?
    };
    Ok(PrimaryCertificate { prime, class: part.to_string(), exponent: e, index, steps })
}

/// Present an `l`-primary part whose coefficients are multiples of `n/l`
/// as a class of order `l`.
fn reduce_to_prime(part: &BrauerClass, l: u32) -> Result<BrauerClass> {
    let n = part.n();
    part.reduce_modulus(l).map_err(|_| {
        Error::UnsupportedTower(format!(
            "index of {l}-primary parts of order greater than {l} over {} (n = {n})",
            part.field()
        ))
    })
}

/// The index of `α`, with its exponent and a per-primary-part certificate.
pub fn index(alpha: &BrauerClass) -> Result<IndexResult> {
    let field = alpha.field();
    check_index_tower(field)?;
    let p = field.characteristic();
    if gcd(p as u64, alpha.n() as u64) != 1 {
        return Err(Error::WildRamification { p, n: alpha.n() });
    }
    let mut index = 1u32;
    let mut certificate = Vec::new();
    for (l, part) in alpha.primary_decomposition() {
        let c = primary_index(&part, l)?;
        index *= c.index;
        certificate.push(c);
    }
    let exponent = certificate.iter().fold(1u64, |acc, c| lcm(acc, c.exponent as u64)) as u32;
    if !index.is_multiple_of(exponent) {
        return Err(Error::InvariantViolation(format!("exponent {exponent} does not divide index {index}")));
    }
    Ok(IndexResult { index, exponent, certificate })
}

/// Index of a sum of two quaternion symbols via its Albert form:
/// 1 if the class is zero, 2 if the Albert form is isotropic, 4 otherwise.
pub fn index_biquaternion_via_albert(alpha: &BrauerClass) -> Result<u32> {
    let terms = alpha.terms();
    if alpha.n() != 2 || terms.len() != 2 {
        return Err(Error::NotBiquaternion);
    }
    if is_zero(alpha)? {
        return Ok(1);
    }
    let q = albert_form(&terms[0].f, &terms[0].g, &terms[1].f, &terms[1].g)?;
    Ok(if is_isotropic(&q)? { 2 } else { 4 })
}
