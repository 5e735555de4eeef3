//! Seeded generators for random elements, classes and line arrangements.
//!
//! Every sample of a scan draws from its own generator derived from the
//! pair `(seed, index)`, so results do not depend on how samples are
//! distributed across workers.

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::field::plane::Line;
use crate::field::{FieldElem, FieldTower};
use crate::symbol::BrauerClass;

/// The generator for sample `index` of a run seeded by `seed`.
pub fn sample_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn random_unit_const<R: Rng>(field: &FieldTower, rng: &mut R) -> FieldElem {
    let gf = field.gf();
    let e = rng.gen_range(0..gf.size() as i64 - 1);
    FieldElem::constant(field, gf.gen_pow(e))
}

/// A random nonzero polynomial in the tower's variables with total degree at
/// most `max_deg` and one to three monomials.
pub fn random_elem<R: Rng>(field: &FieldTower, max_deg: u32, rng: &mut R) -> FieldElem {
    let d = field.depth();
    loop {
        let mut acc = FieldElem::zero(field);
        for _ in 0..rng.gen_range(1..=3) {
            let mut term = random_unit_const(field, rng);
            let mut budget = rng.gen_range(0..=max_deg);
            for level in 1..=d {
                if budget == 0 {
                    break;
                }
                let e = if level == d { budget } else { rng.gen_range(0..=budget) };
                budget -= e;
                term = &term * &FieldElem::var_at(field, level).pow(e as i64).expect("nonnegative power");
            }
            acc = &acc + &term;
        }
        if !acc.is_zero() {
            return acc;
        }
    }
}

/// A random class `Σ c_i (f_i, g_i)` with `terms` symbols.
pub fn random_class<R: Rng>(field: &FieldTower, n: u32, terms: usize, max_deg: u32, rng: &mut R) -> Result<BrauerClass> {
    let ts = (0..terms)
        .map(|_| {
            let c = rng.gen_range(1..n as i64);
            (c, random_elem(field, max_deg, rng), random_elem(field, max_deg, rng))
        })
        .collect();
    BrauerClass::new(field, n, ts)
}

/// A random product of up to `max_lines` lines of `lines` times a constant.
pub fn random_line_product<R: Rng>(field: &FieldTower, lines: &[Line], max_lines: usize, rng: &mut R) -> FieldElem {
    let mut acc = random_unit_const(field, rng);
    for _ in 0..rng.gen_range(0..=max_lines) {
        let l = lines[rng.gen_range(0..lines.len())];
        acc = &acc * &l.to_elem(field);
    }
    acc
}

/// A random class over the plane whose entries are products of lines from a
/// random arrangement of `arrangement` lines.
pub fn random_arrangement_class<R: Rng>(field: &FieldTower, n: u32, terms: usize, arrangement: usize, rng: &mut R) -> Result<BrauerClass> {
    let all: Vec<Line> = Line::all(field.gf()).collect();
    let lines: Vec<Line> = (0..arrangement).map(|_| all[rng.gen_range(0..all.len())]).collect();
    let ts = (0..terms)
        .map(|_| {
            let c = rng.gen_range(1..n as i64);
            (c, random_line_product(field, &lines, 3, rng), random_line_product(field, &lines, 3, rng))
        })
        .collect();
    BrauerClass::new(field, n, ts)
}

/// A random class on the plane around the origin: `(u₀, x)` plus, when
/// `crossing` is set, `(v₀, y) + r (x, y)`, plus a noise symbol. The units
/// `u₀, v₀` and the noise entries are products of lines avoiding the origin,
/// so the class can only ramify through the origin along `x = 0` and `y = 0`.
pub fn random_origin_instance<R: Rng>(field: &FieldTower, l: u32, crossing: bool, rng: &mut R) -> Result<BrauerClass> {
    let gf = field.gf();
    let origin = crate::field::plane::Point { x: 0, y: 0 };
    let away: Vec<Line> = Line::all(gf).filter(|ln| !ln.contains(origin, gf)).collect();
    let x = FieldElem::var_at(field, 1);
    let y = FieldElem::var_at(field, 2);
    let mut ts = vec![(1, random_line_product(field, &away, 2, rng), x.clone())];
    if crossing {
        ts.push((rng.gen_range(1..l as i64), random_line_product(field, &away, 2, rng), y.clone()));
        ts.push((rng.gen_range(0..l as i64), x, y));
    }
    ts.push((rng.gen_range(1..l as i64), random_line_product(field, &away, 2, rng), random_line_product(field, &away, 2, rng)));
    ts.retain(|(c, f, g)| *c != 0 && !f.is_one() && !g.is_one());
    BrauerClass::new(field, l, ts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn samples_are_reproducible_and_independent() {
        let k = FieldTower::parse("Fq(5,1)(t)").unwrap();
        let a = random_elem(&k, 3, &mut sample_rng(9, 4));
        let b = random_elem(&k, 3, &mut sample_rng(9, 4));
        assert_eq!(a, b);
        let distinct: std::collections::HashSet<String> =
            (0..20).map(|i| random_elem(&k, 3, &mut sample_rng(9, i)).to_string()).collect();
        assert!(distinct.len() > 10);
    }

    #[test]
    fn arrangement_classes_factor_into_lines() {
        let k = FieldTower::parse("Fq(5,1)(x)(y)").unwrap();
        let mut rng = sample_rng(1, 0);
        for _ in 0..10 {
            let a = random_arrangement_class(&k, 2, 2, 4, &mut rng).unwrap();
            assert!(crate::symbol::candidate_places(&a).is_ok());
        }
    }
}
