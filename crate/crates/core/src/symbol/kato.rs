//! Residues of residues for classes over the plane `F_q(x)(y)` supported on
//! a line arrangement: at every intersection point the second residues
//! along the lines through it sum to zero.

use std::collections::BTreeSet;
use std::fmt;

use super::residue::{arrangement_lines, tame_residue};
use super::BrauerClass;
use crate::error::{Error, Result};
use crate::field::place::{Place, ResidueElem};
use crate::field::plane::{check_plane, Line, Point};
use crate::field::upoly::UPoly;
use crate::field::FieldElem;

/// Second residues at one intersection point.
#[derive(Clone, Debug)]
pub struct KatoPoint {
    pub point: Point,
    /// `(line, ∂_P(ξ_line) mod l)` for every arrangement line through the point.
    pub contributions: Vec<(Line, u32)>,
    /// Sum of the contributions in `Z/l`.
    pub sum: u32,
}

#[derive(Clone, Debug)]
pub struct KatoReport {
    pub l: u32,
    pub points: Vec<KatoPoint>,
    /// Whether every sum vanishes.
    pub ok: bool,
}

impl fmt::Display for KatoPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.contributions.iter().map(|(l, c)| format!("{l}: {c}")).collect();
        write!(f, "{}: [{}] sum {}", self.point, parts.join(", "), self.sum)
    }
}

fn is_prime(l: u32) -> bool {
    l >= 2 && (2..).take_while(|d| d * d <= l).all(|d| !l.is_multiple_of(d))
}

/// Second residue `∂_P(ξ_C)` of the line residue `ξ_C` at the point `P ∈ C`:
/// the valuation of a representative at `σ = σ(P)`, reduced mod `l`.
fn second_residue(alpha: &BrauerClass, line: &Line, p: Point) -> Result<u32> {
    let v = Place::line(alpha.field(), *line)?;
    let xi = tame_residue(alpha, &v)?;
    let rep: FieldElem = match xi.rep {
        ResidueElem::Tower(e) => e,
        ResidueElem::Ext(_) => unreachable!("line residue fields are rational function fields"),
    };
    let gf = alpha.field().gf();
    let w = Place::poly(rep.field(), &UPoly::linear(gf, line.param_of(p)))?;
    Ok(w.valuation(&rep)?.rem_euclid(alpha.n() as i64) as u32)
}

/// Check that residues of residues cancel at every rational intersection
/// point of the arrangement supporting `α`. Requires `n = l` prime.
pub fn second_residue_check(alpha: &BrauerClass) -> Result<KatoReport> {
    let field = alpha.field();
    check_plane(field)?;
    let l = alpha.n();
    if !is_prime(l) {
        return Err(Error::InvalidInput(format!("second residues need a prime order, got {l}")));
    }
    let gf = field.gf();
    let entries: Vec<&FieldElem> = alpha.terms().iter().flat_map(|t| [&t.f, &t.g]).collect();
    let lines = arrangement_lines(&entries)?;
    let mut points = BTreeSet::new();
    for (i, a) in lines.iter().enumerate() {
        for b in &lines[i + 1..] {
            if let Some(p) = a.intersect(b, gf) {
                points.insert((p.x, p.y));
            }
        }
    }
    let mut out = Vec::new();
    for (x, y) in points {
        let point = Point { x, y };
        let mut contributions = Vec::new();
        let mut sum = 0;
        for line in lines.iter().filter(|c| c.contains(point, gf)) {
            let c = second_residue(alpha, line, point)?;
            sum = (sum + c) % l;
            contributions.push((*line, c));
        }
        out.push(KatoPoint { point, contributions, sum });
    }
    let ok = out.iter().all(|p| p.sum == 0);
    Ok(KatoReport { l, points: out, ok })
}
