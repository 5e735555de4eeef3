//! Ramification surgery: local adjustment of a class at a point of a line
//! arrangement in the plane, and the search for Kummer covers that swallow
//! the ramification of a family of classes.

mod kill;

pub use kill::{kummer_kill_ramification, KillReport, KillRow};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::gf::is_prime;
use crate::field::place::{Place, ResidueElem};
use crate::field::plane::{check_plane, elem_to_poly2, Line, Point};
use crate::field::upoly::UPoly;
use crate::field::FieldElem;
use crate::symbol::{tame_residue, BrauerClass};

/// The local ring of the plane at a rational point, with the local
/// parameters `s` and (optionally) `t`: lines through the center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalRingSpec {
    pub center: Point,
    pub s: Line,
    pub t: Option<Line>,
}

impl LocalRingSpec {
    pub fn new(center: Point, s: Line, t: Option<Line>, gf: &crate::field::Gf) -> Result<LocalRingSpec> {
        for l in std::iter::once(&s).chain(t.iter()) {
            if !l.contains(center, gf) {
                return Err(Error::InvalidInput(format!("parameter line {l} does not pass through {center}")));
            }
        }
        if t == Some(s) {
            return Err(Error::InvalidInput("local parameters must be non-proportional".into()));
        }
        Ok(LocalRingSpec { center, s, t })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SurgeryCase {
    /// Unramified on the local ring.
    I,
    /// Ramified along the single branch `s = 0`.
    Ii,
    /// Ramified along the normal crossing `st = 0`.
    Iii,
}

/// Residue of the adjusted class along one line through the center.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub line: String,
    pub residue: String,
    pub trivial: bool,
}

#[derive(Clone, Debug)]
pub struct SurgeryReport {
    pub case: SurgeryCase,
    pub u: Option<FieldElem>,
    pub v: Option<FieldElem>,
    pub r: Option<u32>,
    /// Second residues `∂_P(ξ_s)`, `∂_P(ξ_t)` (case iii).
    pub second_residues: Option<(u32, u32)>,
    pub adjusted: BrauerClass,
    /// Residues of the adjusted class along every line through the center.
    pub scan: Vec<ScanRow>,
    /// No prime divisor of an entry other than a line passes through the center.
    pub other_branches_clear: bool,
    pub verified: bool,
}

fn line_place(alpha: &BrauerClass, l: &Line) -> Result<Place> {
    Place::line(alpha.field(), *l)
}

fn line_residue(alpha: &BrauerClass, l: &Line) -> Result<(FieldElem, bool)> {
    let r = tame_residue(alpha, &line_place(alpha, l)?)?;
    let trivial = r.is_trivial();
    match r.rep {
        ResidueElem::Tower(e) => Ok((e, trivial)),
        ResidueElem::Ext(_) => unreachable!("line residue fields are rational function fields"),
    }
}

/// Valuation at the center of a function on the line `l`.
fn point_valuation(e: &FieldElem, l: &Line, p: Point) -> Result<i64> {
    let w = Place::poly(e.field(), &UPoly::linear(e.field().gf(), l.param_of(p)))?;
    w.valuation(e)
}

/// Residues along all lines through the center, and whether the remaining
/// prime divisors of the entries avoid the center.
pub fn local_residue_scan(alpha: &BrauerClass, center: Point) -> Result<(Vec<ScanRow>, bool)> {
    let gf = alpha.field().gf();
    let mut rows = Vec::new();
    for l in Line::through(center, gf) {
        let r = tame_residue(alpha, &line_place(alpha, &l)?)?;
        rows.push(ScanRow { line: l.to_elem(alpha.field()).to_string(), residue: r.rep.to_string(), trivial: r.is_trivial() });
    }
    let mut clear = true;
    for t in alpha.terms() {
        for e in [&t.f, &t.g] {
            let (num, den) = elem_to_poly2(e);
            for mut p in [num, den] {
                for l in Line::through(center, gf) {
                    p = p.line_multiplicity(&l, gf).1;
                }
                clear &= p.eval(center, gf) != 0;
            }
        }
    }
    Ok((rows, clear))
}

fn ramified_lines(alpha: &BrauerClass, center: Point) -> Result<Vec<Line>> {
    let mut out = Vec::new();
    for l in Line::through(center, alpha.field().gf()) {
        if !tame_residue(alpha, &line_place(alpha, &l)?)?.is_trivial() {
            out.push(l);
        }
    }
    Ok(out)
}

fn push_symbol(terms: &mut Vec<(i64, FieldElem, FieldElem)>, c: i64, f: &FieldElem, g: &FieldElem) {
    if !f.is_one() && !g.is_one() && c != 0 {
        terms.push((c, f.clone(), g.clone()));
    }
}

/// Adjust `α` by symbols with unit entries so that it becomes unramified on
/// the local ring at `spec.center`:
/// - case i: nothing ramifies, `α` is returned unchanged;
/// - case ii: ramified along `s` only, `α - (u, s)` with `u` the pull-back of
///   the residue `ξ_s` (made a unit at the center);
/// - case iii: ramified along `s` and `t`, with `r = ∂_P(ξ_s)`:
///   `α - (u, s) - (v, t) + r (s, t)` where `u` lifts `ξ_s · t̄^(-r)` and
///   `v` lifts `ξ_t · s̄^r`.
///
/// The result is verified by a residue scan over all lines through the center.
pub fn saltman_adjust(alpha: &BrauerClass, spec: &LocalRingSpec, l: u32) -> Result<SurgeryReport> {
    let field = alpha.field();
    check_plane(field)?;
    if l == field.characteristic() {
        return Err(Error::WildRamification { p: l, n: l });
    }
    if !is_prime(l as u64) || alpha.n() != l {
        return Err(Error::InvalidInput(format!("surgery needs n = l prime, got n = {} and l = {l}", alpha.n())));
    }
    let p = spec.center;
    let ramified = ramified_lines(alpha, p)?;
    let mut spec = spec.clone();
    let case = match ramified.as_slice() {
        [] => SurgeryCase::I,
        [a] if *a == spec.s => SurgeryCase::Ii,
        [a] if Some(*a) == spec.t => {
            spec.t = Some(spec.s);
            spec.s = *a;
            SurgeryCase::Ii
        }
        [a, b] if spec.t.is_some() && [*a, *b].contains(&spec.s) && [*a, *b].contains(&spec.t.unwrap()) => SurgeryCase::Iii,
        _ => {
            let names: Vec<String> = ramified.iter().map(|l| l.to_elem(field).to_string()).collect();
            return Err(Error::NotNormalCrossing(format!("ramified along {} at {p}", names.join(", "))));
        }
    };
    let s_elem = spec.s.to_elem(field);
    let s_place = line_place(alpha, &spec.s)?;
    let mut terms: Vec<(i64, FieldElem, FieldElem)> =
        alpha.terms().iter().map(|t| (t.c as i64, t.f.clone(), t.g.clone())).collect();
    let (mut u, mut v, mut r, mut second) = (None, None, None, None);
    match case {
        SurgeryCase::I => {}
        SurgeryCase::Ii => {
            let (xi, _) = line_residue(alpha, &spec.s)?;
            let k = point_valuation(&xi, &spec.s, p)?;
            if k.rem_euclid(l as i64) != 0 {
                return Err(Error::InvariantViolation(format!("second residue {k} of a single branch is not zero mod {l}")));
            }
            // divide out the l-th power (σ - σ_P)^k to get a unit at the center
            let sigma = FieldElem::var_at(xi.field(), 1);
            let shift = &sigma - &FieldElem::constant(xi.field(), spec.s.param_of(p));
            let unit = xi.checked_mul(&shift.pow(-k)?)?;
            let lifted = s_place.lift_residue(&ResidueElem::Tower(unit))?;
            push_symbol(&mut terms, -1, &lifted, &s_elem);
            u = Some(lifted);
        }
        SurgeryCase::Iii => {
            let t_line = spec.t.unwrap();
            let t_elem = t_line.to_elem(field);
            let t_place = line_place(alpha, &t_line)?;
            let (xi_s, _) = line_residue(alpha, &spec.s)?;
            let (xi_t, _) = line_residue(alpha, &t_line)?;
            let ds = point_valuation(&xi_s, &spec.s, p)?.rem_euclid(l as i64);
            let dt = point_valuation(&xi_t, &t_line, p)?.rem_euclid(l as i64);
            if (ds + dt) % l as i64 != 0 {
                return Err(Error::InvariantViolation(format!("second residues {ds} + {dt} do not cancel mod {l}")));
            }
            let rr = ds;
            let t_on_s = s_place.unit_residue(&t_elem)?;
            let s_on_t = t_place.unit_residue(&s_elem)?;
            let us = ResidueElem::Tower(xi_s).mul(&t_on_s.pow(-rr)?)?;
            let vt = ResidueElem::Tower(xi_t).mul(&s_on_t.pow(rr)?)?;
            let lu = s_place.lift_residue(&us)?;
            let lv = t_place.lift_residue(&vt)?;
            push_symbol(&mut terms, -1, &lu, &s_elem);
            push_symbol(&mut terms, -1, &lv, &t_elem);
            push_symbol(&mut terms, rr, &s_elem, &t_elem);
            u = Some(lu);
            v = Some(lv);
            r = Some(rr as u32);
            second = Some((ds as u32, dt as u32));
        }
    }
    let adjusted = BrauerClass::new(field, l, terms)?;
    let (scan, clear) = local_residue_scan(&adjusted, p)?;
    let verified = clear && scan.iter().all(|row| row.trivial);
    Ok(SurgeryReport { case, u, v, r, second_residues: second, adjusted, scan, other_branches_clear: clear, verified })
}
