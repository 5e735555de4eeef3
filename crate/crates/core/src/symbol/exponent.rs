//! Exponents by recursion over the tower.

use super::residue::global_invariants;
use super::BrauerClass;
use crate::error::{Error, Result};
use crate::field::gf::lcm;
use crate::field::place::{Place, ResidueElem};
use crate::field::power::{coords_order, unit_coords};
use crate::field::{FieldElem, LayerKind};

/// `α = α₀ + (t, ρ)` over `k((t))`, with `α₀` a class over `k` and `ρ ∈ k^*`.
/// The tame residue of `α` is `ρ^(-1)`.
#[derive(Clone, Debug)]
pub struct LaurentSplit {
    pub alpha0: BrauerClass,
    pub rho: FieldElem,
}

fn tower_residue(r: ResidueElem) -> FieldElem {
    match r {
        ResidueElem::Tower(e) => e,
        ResidueElem::Ext(_) => unreachable!("Laurent residues live in the tower below"),
    }
}

/// Split a class over a top Laurent layer. Uses `(t^a u, t^b w) =
/// (ū, w̄) + (t, (-1)^(ab) w̄^a ū^(-b))` for units `u, w`, valid because
/// one-units are `n`-th powers in the tame setting.
pub fn laurent_decompose(alpha: &BrauerClass) -> Result<LaurentSplit> {
    let field = alpha.field();
    let v = Place::laurent(field)?;
    let k = field.sub(field.depth() - 1);
    let mut rho = FieldElem::one(&k);
    let mut terms = Vec::new();
    for t in alpha.terms() {
        let a = v.valuation(&t.f)?;
        let b = v.valuation(&t.g)?;
        let u = tower_residue(v.unit_residue(&t.f)?);
        let w = tower_residue(v.unit_residue(&t.g)?);
        let mut r = w.pow(a)?.checked_mul(&u.pow(-b)?)?;
        if (a * b) % 2 != 0 {
            r = -r;
        }
        rho = rho.checked_mul(&r.pow(t.c as i64)?)?;
        terms.push((t.c as i64, u, w));
    }
    Ok(LaurentSplit { alpha0: BrauerClass::new(&k, alpha.n(), terms)?, rho })
}

/// Order of `α` in the Brauer group.
///
/// Finite and closure bases: 1. `F_q(t)`: lcm of local invariant orders.
/// `F̄_p(t)`: 1 (Tsen). Laurent layers: `lcm(order(ρ), exponent(α₀))`.
pub fn exponent(alpha: &BrauerClass) -> Result<u32> {
    if alpha.is_empty() {
        return Ok(1);
    }
    let field = alpha.field();
    let n = alpha.n();
    match field.top() {
        None => Ok(1),
        Some(l) if l.kind == LayerKind::Laurent => {
            let s = laurent_decompose(alpha)?;
            let chi = if s.rho.is_one() { 1 } else { coords_order(&unit_coords(&s.rho, n)?, n) };
            Ok(lcm(chi as u64, exponent(&s.alpha0)? as u64) as u32)
        }
        Some(_) if field.depth() == 1 => {
            if field.is_closure() {
                return Ok(1);
            }
            let invs = global_invariants(alpha)?;
            Ok(invs.iter().fold(1u64, |acc, i| lcm(acc, i.order() as u64)) as u32)
        }
        Some(_) => Err(Error::UnsupportedTower(format!("exponent over {field}"))),
    }
}

/// Whether the class is zero in the Brauer group.
pub fn is_zero(alpha: &BrauerClass) -> Result<bool> {
    Ok(exponent(alpha)? == 1)
}
