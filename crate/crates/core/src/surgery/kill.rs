//! Search for radicals `f^(1/l)` (one, or failing that two) whose adjunction
//! kills the residues of a family of classes at every place of their support.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::kummer::SplitType;
use crate::field::place::{Place, PlaceKind, ResidueElem};
use crate::field::power::{is_nth_power_residue, residue_coords, unit_coords};
use crate::field::{kummer_splitting, FieldElem, FieldTower, LayerKind};
use crate::symbol::{candidate_places, exponent, global_invariants, residue_transport, tame_residue, BrauerClass};

/// Transport data of one class at one place.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KillRow {
    pub class: usize,
    pub place: String,
    /// Residue below.
    pub residue: String,
    /// Ramification index of the extension at the place.
    pub e: u32,
    /// Residue degree.
    pub f: u32,
    /// Whether the residue becomes trivial above.
    pub trivial: bool,
}

#[derive(Clone, Debug)]
pub struct KillReport {
    pub roots: Vec<FieldElem>,
    pub transcript: Vec<KillRow>,
    /// Over `F_q(t)`: whether every restricted class has all invariants zero.
    pub restricted_zero: Option<bool>,
    pub candidates_tried: usize,
}

fn check_tower(field: &FieldTower) -> Result<bool> {
    let layers = field.layers();
    match layers.iter().map(|l| l.kind).collect::<Vec<_>>().as_slice() {
        [LayerKind::Rational] if !field.is_closure() => Ok(true),
        [LayerKind::Rational, LayerKind::Laurent] if !field.is_closure() => Ok(false),
        _ => Err(Error::UnsupportedTower(format!("ramification killing over {field}: expected F_q(t) or F_q(x)((y))"))),
    }
}

/// Transport rows for one radical, through `residue_transport`.
fn single_rows(classes: &[BrauerClass], places: &[Vec<Place>], f: &FieldElem, l: u32) -> Result<Vec<KillRow>> {
    let mut rows = Vec::new();
    for (i, (a, ps)) in classes.iter().zip(places).enumerate() {
        for v in ps {
            let t = residue_transport(a, v, f, l)?;
            let trivial = t.above.iter().all(|w| w.trivial);
            rows.push(KillRow {
                class: i,
                place: v.to_string(),
                residue: t.below.rep.to_string(),
                e: t.splitting.e,
                f: t.splitting.f,
                trivial,
            });
        }
    }
    Ok(rows)
}

/// Transport rows for two radicals: the residue dies when some element of
/// `⟨f₁, f₂⟩` ramifies, or when the residue field extension kills it (finite
/// residue fields: any inert radical; otherwise the residue must lie in the
/// span of the radicals' unit residues).
fn pair_rows(classes: &[BrauerClass], places: &[Vec<Place>], fs: &[FieldElem; 2], l: u32) -> Result<Vec<KillRow>> {
    let mut rows = Vec::new();
    for (i, (a, ps)) in classes.iter().zip(places).enumerate() {
        for v in ps {
            let below = tame_residue(a, v)?;
            let vals: Vec<i64> = fs.iter().map(|f| v.valuation(f)).collect::<Result<_>>()?;
            let ramified = vals.iter().any(|x| x.rem_euclid(l as i64) != 0);
            let (e, fdeg, trivial) = if ramified {
                (l, 1, true)
            } else {
                let units: Vec<ResidueElem> = fs.iter().map(|f| v.unit_residue(f)).collect::<Result<_>>()?;
                let inert: Vec<bool> =
                    units.iter().map(|u| is_nth_power_residue(u, l).map(|t| !t.is_power)).collect::<Result<_>>()?;
                let fdeg = if inert.iter().any(|&x| x) { l } else { 1 };
                let killed = if below.is_trivial() {
                    true
                } else if v.residue_size().is_some() {
                    fdeg == l
                } else {
                    let us: Vec<_> = units.iter().map(|u| residue_coords(u, l)).collect::<Result<_>>()?;
                    (0..l as i64).any(|a1| {
                        (0..l as i64).any(|a2| {
                            let c = crate::field::power::coords_add(
                                &crate::field::power::coords_scale(&us[0], a1, l),
                                &crate::field::power::coords_scale(&us[1], a2, l),
                                l,
                            );
                            c == below.coords
                        })
                    })
                };
                (1, fdeg, killed)
            };
            rows.push(KillRow { class: i, place: v.to_string(), residue: below.rep.to_string(), e, f: fdeg, trivial });
        }
    }
    Ok(rows)
}

/// Over `F_q(t)`: after adjoining `f^(1/l)`, every nonzero invariant is
/// multiplied by a local degree divisible by `l`.
fn restricted_classes_zero(classes: &[BrauerClass], f: &FieldElem, l: u32) -> Result<bool> {
    for a in classes {
        if a.is_empty() {
            continue;
        }
        for inv in global_invariants(a)? {
            if inv.j != 0 && kummer_splitting(&inv.place, f, l)?.kind == SplitType::Split {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Find `f` (or `f₁, f₂`) such that adjoining `l`-th roots kills every
/// residue of every class. The first candidate is the product of the
/// ramification-branch equations; then constant twists `g^i ·` that product,
/// then higher multiplicities; then pairs (branch product, constant or branch).
pub fn kummer_kill_ramification(classes: &[BrauerClass], l: u32, budget: usize) -> Result<KillReport> {
    if classes.is_empty() {
        return Ok(KillReport { roots: vec![], transcript: vec![], restricted_zero: Some(true), candidates_tried: 0 });
    }
    let field = classes[0].field().clone();
    let global = check_tower(&field)?;
    for a in classes {
        if a.field() != &field {
            return Err(Error::TowerMismatch(a.field().to_string(), field.to_string()));
        }
        if a.n() != l {
            return Err(Error::InvalidInput(format!("classes must have n = l = {l}")));
        }
        if !l.is_multiple_of(exponent(a)?) {
            return Err(Error::InvalidInput(format!("exponent of {a} does not divide {l}")));
        }
    }
    let places: Vec<Vec<Place>> = classes.iter().map(candidate_places).collect::<Result<_>>()?;
    // branch equations: finite places / the Laurent uniformizer carrying a nonzero residue
    let mut branches: Vec<FieldElem> = Vec::new();
    for (a, ps) in classes.iter().zip(&places) {
        for v in ps {
            let keep = matches!(v.kind(), PlaceKind::Poly(_) | PlaceKind::Laurent) && !tame_residue(a, v)?.is_trivial();
            let b = v.uniformizer();
            if keep && !branches.contains(&b) {
                branches.push(b);
            }
        }
    }
    let one = FieldElem::one(&field);
    let product = |mults: &[i64]| -> Result<FieldElem> {
        branches.iter().zip(mults).try_fold(one.clone(), |acc, (b, &m)| acc.checked_mul(&b.pow(m)?))
    };
    let twists: Vec<FieldElem> = (0..l as i64).map(|i| FieldElem::constant(&field, field.gf().gen_pow(i))).collect();
    let mut singles = Vec::new();
    let mut mults = vec![vec![1i64; branches.len()]];
    for h in 2..l as i64 {
        for i in 0..branches.len() {
            let mut m = vec![1; branches.len()];
            m[i] = h;
            mults.push(m);
        }
    }
    for m in &mults {
        let base = product(m)?;
        for c in &twists {
            singles.push(base.checked_mul(c)?);
        }
    }
    let mut tried = 0;
    let nontrivial = |f: &FieldElem| -> Result<bool> { Ok(!unit_coords(f, l)?.is_empty()) };
    for f in &singles {
        if tried >= budget {
            break;
        }
        tried += 1;
        if !nontrivial(f)? {
            continue;
        }
        let rows = single_rows(classes, &places, f, l)?;
        if rows.iter().all(|r| r.trivial) {
            let restricted_zero = if global { Some(restricted_classes_zero(classes, f, l)?) } else { None };
            return Ok(KillReport { roots: vec![f.clone()], transcript: rows, restricted_zero, candidates_tried: tried });
        }
    }
    let mut seconds: Vec<FieldElem> = twists[1..].to_vec();
    seconds.extend(branches.iter().cloned());
    for f1 in &singles {
        for f2 in &seconds {
            if tried >= budget {
                return Err(Error::SearchExhausted(format!("{tried} candidates for killing ramification")));
            }
            tried += 1;
            if !nontrivial(f1)? || !nontrivial(f2)? {
                continue;
            }
            let pair = [f1.clone(), f2.clone()];
            let rows = pair_rows(classes, &places, &pair, l)?;
            if rows.iter().all(|r| r.trivial) {
                return Ok(KillReport { roots: pair.to_vec(), transcript: rows, restricted_zero: None, candidates_tried: tried });
            }
        }
    }
    Err(Error::SearchExhausted(format!("{tried} candidates for killing ramification")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cls(field: &str, s: &str) -> BrauerClass {
        BrauerClass::parse(&FieldTower::parse(field).unwrap(), 2, s).unwrap()
    }

    #[test]
    fn single_symbol_over_global_field() {
        let r = kummer_kill_ramification(&[cls("Fq(5,1)(t)", "(t, g)")], 2, 100).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.roots[0].to_string(), "t");
        let ramified: Vec<_> = r.transcript.iter().filter(|row| row.residue != "1").collect();
        assert!(ramified.iter().all(|row| row.e == 2));
        assert_eq!(r.restricted_zero, Some(true));
    }

    #[test]
    fn empty_family() {
        assert!(kummer_kill_ramification(&[], 2, 10).unwrap().roots.is_empty());
    }

    #[test]
    fn two_branches_need_a_constant_twist() {
        let cs = [cls("Fq(5,1)(x)", "(x, g)"), cls("Fq(5,1)(x)", "(x+1, g)")];
        let r = kummer_kill_ramification(&cs, 2, 100).unwrap();
        assert_eq!(r.roots.len(), 1);
        assert_eq!(r.roots[0].to_string(), "2*x^2 + 2*x");
        assert!(r.transcript.iter().all(|row| row.trivial));
        assert_eq!(r.restricted_zero, Some(true));
    }

    #[test]
    fn laurent_family() {
        let cs = [cls("Fq(5,1)(x)((y))", "(x, g) + (x+1, y)"), cls("Fq(5,1)(x)((y))", "(y, x^2+2)")];
        let r = kummer_kill_ramification(&cs, 2, 100).unwrap();
        assert!(r.transcript.iter().all(|row| row.trivial));
        assert_eq!(r.restricted_zero, None);
    }
}
