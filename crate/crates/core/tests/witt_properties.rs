//! Isotropy decisions: invariances, Pfister and Albert forms, and Springer's
//! criterion against a Hensel-lifting search over `F_5((t))`.

use brauer::field::{FieldElem, FieldTower};
use brauer::random::{random_elem, sample_rng};
use brauer::symbol::{exponent, BrauerClass};
use brauer::witt::{albert_form, is_hyperbolic, is_isotropic, pfister, random_form, QuadForm};
use rand::seq::SliceRandom;
use rand::Rng;

fn field(s: &str) -> FieldTower {
    FieldTower::parse(s).unwrap()
}

const FIELDS: [&str; 4] = ["Fq(5,1)(t)", "Fq(5,1)((x))((y))", "Fq(7,1)(x)((y))", "Fq(5,1)((t))"];

#[test]
fn isotropy_is_invariant_under_scaling_and_permutation() {
    for k in FIELDS {
        let k = field(k);
        for i in 0..40 {
            let mut rng = sample_rng(31, i);
            let dim = rng.gen_range(2..=4);
            let q = random_form(&k, dim, 2, &mut rng).unwrap();
            let iso = is_isotropic(&q).unwrap();
            let c = random_elem(&k, 2, &mut rng);
            assert_eq!(is_isotropic(&q.scale(&c).unwrap()).unwrap(), iso, "{q} scaled by {c}");
            let mut entries = q.entries().to_vec();
            entries.shuffle(&mut rng);
            assert_eq!(is_isotropic(&QuadForm::new(&k, entries).unwrap()).unwrap(), iso, "{q} permuted");
        }
    }
}

#[test]
fn hyperbolic_forms_are_isotropic() {
    for k in FIELDS {
        let k = field(k);
        for i in 0..40 {
            let mut rng = sample_rng(32, i);
            let q = random_form(&k, 2 * rng.gen_range(1..=2), 2, &mut rng).unwrap();
            if is_hyperbolic(&q).unwrap() {
                assert!(is_isotropic(&q).unwrap(), "{q}");
            }
            // q ⊥ -q is always hyperbolic
            let neg = q.scale(&FieldElem::from_int(&k, -1)).unwrap();
            assert!(is_hyperbolic(&q.orthogonal_sum(&neg).unwrap()).unwrap(), "{q} ⊥ -{q}");
        }
    }
}

#[test]
fn pfister_forms_are_isotropic_only_when_hyperbolic() {
    for k in FIELDS {
        let k = field(k);
        let mut seen = [false; 2];
        for i in 0..60 {
            let mut rng = sample_rng(33, i);
            let m = if k.depth() == 2 { rng.gen_range(1..=3) } else { rng.gen_range(1..=2) };
            let vars: Vec<FieldElem> = (0..m).map(|_| random_elem(&k, 2, &mut rng)).collect();
            let q = pfister(&vars).unwrap();
            let iso = is_isotropic(&q).unwrap();
            assert_eq!(iso, is_hyperbolic(&q).unwrap(), "{q}");
            seen[iso as usize] = true;
        }
        assert!(seen[0] && seen[1], "both outcomes over {k}");
    }
}

#[test]
fn albert_form_detects_split_biquaternions() {
    for k in ["Fq(5,1)(t)", "Fq(5,1)((x))((y))", "Fq(5,1)(x)((y))"] {
        let k = field(k);
        for i in 0..40 {
            let mut rng = sample_rng(34, i);
            let e: Vec<FieldElem> = (0..4).map(|_| random_elem(&k, 2, &mut rng)).collect();
            let a = BrauerClass::new(&k, 2, vec![(1, e[0].clone(), e[1].clone()), (1, e[2].clone(), e[3].clone())]).unwrap();
            let q = albert_form(&e[0], &e[1], &e[2], &e[3]).unwrap();
            assert_eq!(is_hyperbolic(&q).unwrap(), exponent(&a).unwrap() == 1, "{a}");
        }
    }
}

// --- Hensel search over F_5((t)) ---

const P: i64 = 5;

/// Entry `c t^e (1 + d t)`.
#[derive(Clone, Copy, Debug)]
struct Entry {
    c: i64,
    e: usize,
    d: i64,
}

fn poly_mul(a: &[i64], b: &[i64]) -> Vec<i64> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y).rem_euclid(P);
        }
    }
    out
}

fn valuation(a: &[i64]) -> Option<usize> {
    a.iter().position(|&c| c != 0)
}

/// A zero modulo a high enough power of `t`, with a nonvanishing partial
/// derivative, lifts to a true zero by Hensel's lemma. Vectors with
/// components `w + z t` suffice for entries with `e ∈ {0, 1}`.
fn hensel_isotropic(entries: &[Entry]) -> bool {
    let n = entries.len();
    let total = (P * P).pow(n as u32);
    (1..total).any(|mut code| {
        let mut q = vec![0i64; 6];
        let mut comps = Vec::with_capacity(n);
        for ent in entries {
            let (w, z) = (code % P, (code / P) % P);
            code /= P * P;
            let x = [w, z];
            let mut a = vec![0; ent.e];
            a.extend([ent.c, (ent.c * ent.d).rem_euclid(P)]);
            let term = poly_mul(&a, &poly_mul(&x, &x));
            for (i, c) in term.iter().enumerate() {
                q[i] = (q[i] + c).rem_euclid(P);
            }
            comps.push((ent.e, valuation(&x)));
        }
        let vq = valuation(&q);
        comps.iter().any(|&(e, vx)| match (vq, vx) {
            (_, None) => false,
            (None, Some(_)) => true,
            (Some(vq), Some(vx)) => vq > 2 * (e + vx),
        })
    })
}

#[test]
fn springer_agrees_with_hensel_search() {
    let k = field("Fq(5,1)((t))");
    let mut outcomes = [0usize; 2];
    for i in 0..150 {
        let mut rng = sample_rng(35, i);
        let dim = rng.gen_range(1..=3);
        let entries: Vec<Entry> = (0..dim).map(|_| Entry { c: rng.gen_range(1..P), e: rng.gen_range(0..=1), d: rng.gen_range(0..P) }).collect();
        let elems: Vec<FieldElem> = entries
            .iter()
            .map(|en| FieldElem::parse(&k, &format!("{}*t^{}*(1 + {}*t)", en.c, en.e, en.d)).unwrap())
            .collect();
        let q = QuadForm::new(&k, elems).unwrap();
        let expected = hensel_isotropic(&entries);
        assert_eq!(is_isotropic(&q).unwrap(), expected, "{q}");
        outcomes[expected as usize] += 1;
    }
    assert!(outcomes[0] > 10 && outcomes[1] > 10, "{outcomes:?}");
}
