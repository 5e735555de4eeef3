//! Splitting fields of degree equal to the exponent over `F_q(t)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::gf::lcm;
use crate::field::kummer::constant_splitting;
use crate::field::place::{Place, PlaceKind};
use crate::field::power::{coords_order, residue_coords, unit_coords};
use crate::field::{FieldElem, UPoly};
use crate::symbol::{exponent, global_invariants, BrauerClass, Invariant};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SplitStep {
    /// Constant-field extension `F_{q^m}(t)`.
    Constant { degree: u32 },
    /// Kummer extension `K(f^(1/degree))`.
    Kummer { radicand: String, degree: u32 },
}

/// One row of the verification transcript.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TranscriptRow {
    pub place: String,
    /// Invariant below, as `j/n`.
    pub invariant: String,
    /// Local degree of the extension at the place.
    pub local_degree: u32,
    /// Invariant above: `local_degree · inv` in `Q/Z`.
    pub transported: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SplittingWitness {
    pub steps: Vec<SplitStep>,
    pub degree: u32,
    pub transcript: Vec<TranscriptRow>,
    /// Number of candidate extensions examined.
    pub candidates_tried: usize,
}

fn transported(inv: &Invariant, local_degree: u32) -> Invariant {
    Invariant { j: ((inv.j as u64 * local_degree as u64) % inv.n as u64) as u32, ..inv.clone() }
}

fn transcript(invs: &[Invariant], local: impl Fn(&Place) -> Result<u32>) -> Result<Option<Vec<TranscriptRow>>> {
    let mut rows = Vec::new();
    let mut ok = true;
    for inv in invs {
        let d = local(&inv.place)?;
        let t = transported(inv, d);
        ok &= t.j == 0;
        rows.push(TranscriptRow { place: inv.place.to_string(), invariant: inv.to_string(), local_degree: d, transported: t.to_string() });
    }
    Ok(ok.then_some(rows))
}

/// Local degree of `K_v(f^(1/e))` over `K_v`: the order of `f` in `K_v^*/K_v^{*e}`.
fn kummer_local_degree(v: &Place, f: &FieldElem, e: u32) -> Result<u32> {
    let a = v.valuation(f)?.rem_euclid(e as i64) as u64;
    let val_order = e as u64 / crate::field::gf::gcd(a, e as u64);
    let unit_order = coords_order(&residue_coords(&v.unit_residue(f)?, e)?, e) as u64;
    Ok(lcm(val_order, unit_order) as u32)
}

/// Exhibit an extension of degree `exponent(α)` splitting `α` over `F_q(t)`,
/// verified place by place through local degrees. Tries the constant-field
/// extension, then Kummer extensions `K(f^(1/e))` with `f = c · Π P_v` over
/// the finite places carrying invariants (`c` a power of `g`), then with
/// higher multiplicities, within `budget` candidates.
pub fn exhibit_splitting_field(alpha: &BrauerClass, budget: usize) -> Result<SplittingWitness> {
    let field = alpha.field();
    let e = exponent(alpha)?;
    let invs: Vec<Invariant> = if alpha.is_empty() {
        vec![]
    } else {
        global_invariants(alpha)?.into_iter().filter(|i| i.j != 0).collect()
    };
    if e == 1 {
        return Ok(SplittingWitness { steps: vec![], degree: 1, transcript: vec![], candidates_tried: 0 });
    }
    let mut tried = 1;
    if let Some(rows) = transcript(&invs, |v| Ok(constant_splitting(v, e).f))? {
        return Ok(SplittingWitness { steps: vec![SplitStep::Constant { degree: e }], degree: e, transcript: rows, candidates_tried: tried });
    }
    let gf = field.gf();
    let finite: Vec<UPoly> = invs
        .iter()
        .filter_map(|i| match i.place.kind() {
            PlaceKind::Poly(p) => Some(p.clone()),
            _ => None,
        })
        .collect();
    // multiplicity vectors in increasing height: all ones, then one entry raised, ...
    let mut mults: Vec<Vec<u32>> = vec![vec![1; finite.len()]];
    for h in 2..e.max(2) {
        for i in 0..finite.len() {
            let mut m = vec![1; finite.len()];
            m[i] = h;
            mults.push(m);
        }
    }
    for m in mults {
        let base = finite.iter().zip(&m).fold(UPoly::constant(1), |acc, (p, &k)| acc.mul(&p.pow(k as u64, gf), gf));
        for c in 0..e as i64 {
            if tried >= budget {
                return Err(Error::SearchExhausted(format!("{tried} candidates for a degree-{e} splitting field of {alpha}")));
            }
            tried += 1;
            let f = FieldElem::from_upoly(field, &base.scale(gf.gen_pow(c), gf));
            if f.constant_value().is_some() || coords_order(&unit_coords(&f, e)?, e) != e {
                continue;
            }
            if let Some(rows) = transcript(&invs, |v| kummer_local_degree(v, &f, e))? {
                return Ok(SplittingWitness {
                    steps: vec![SplitStep::Kummer { radicand: f.to_string(), degree: e }],
                    degree: e,
                    transcript: rows,
                    candidates_tried: tried,
                });
            }
        }
    }
    Err(Error::SearchExhausted(format!("{tried} candidates for a degree-{e} splitting field of {alpha}")))
}
