//! Polynomials in two variables over `F_q` and affine lines, for classes over
//! `F_q(x)(y)` whose entries are products of affine-linear forms.

use std::fmt;

use super::elem::FieldElem;
use super::gf::{Fq, Gf};
use super::tower::{FieldTower, LayerKind};
use super::upoly::UPoly;
use super::value::Value;
use crate::error::{Error, Result};

/// `sum_j c_j(x) y^j`, trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Poly2(pub Vec<UPoly>);

/// The affine line `a x + b y + c = 0`, normalized so that `b = 1`, or
/// `b = 0, a = 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Line {
    pub a: Fq,
    pub b: Fq,
    pub c: Fq,
}

/// A rational point of the affine plane.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Point {
    pub x: Fq,
    pub y: Fq,
}

impl Poly2 {
    fn trimmed(mut self) -> Poly2 {
        while self.0.last().is_some_and(|c| c.is_zero()) {
            self.0.pop();
        }
        self
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn constant(c: Fq) -> Poly2 {
        Poly2(vec![UPoly::constant(c)]).trimmed()
    }
    pub fn mul(&self, o: &Poly2, gf: &Gf) -> Poly2 {
        if self.is_zero() || o.is_zero() {
            return Poly2(vec![]);
        }
        let mut out = vec![UPoly::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b, gf), gf);
            }
        }
        Poly2(out).trimmed()
    }
    /// Total degree.
    pub fn degree(&self) -> Option<usize> {
        self.0.iter().enumerate().filter_map(|(j, c)| c.degree().map(|d| d + j)).max()
    }
    /// Constant, if the polynomial is one.
    pub fn as_constant(&self) -> Option<Fq> {
        match self.0.as_slice() {
            [] => Some(0),
            [c] if c.degree() == Some(0) => Some(c.lead()),
            _ => None,
        }
    }

    pub fn eval(&self, p: Point, gf: &Gf) -> Fq {
        self.0.iter().rev().fold(0, |acc, c| gf.add(gf.mul(acc, p.y), c.eval(p.x, gf)))
    }

    /// Exact quotient by the line, if it divides.
    pub fn div_line(&self, l: &Line, gf: &Gf) -> Option<Poly2> {
        if self.is_zero() {
            return None;
        }
        if l.b == 0 {
            // divide every coefficient by x + c
            let lin = UPoly::from_coeffs(vec![l.c, 1]);
            let mut out = Vec::with_capacity(self.0.len());
            for c in &self.0 {
                let (q, r) = c.divrem(&lin, gf).ok()?;
                if !r.is_zero() {
                    return None;
                }
                out.push(q);
            }
            return Some(Poly2(out).trimmed());
        }
        // synthetic division by y - y0 with y0 = -(a x + c)
        let y0 = UPoly::from_coeffs(vec![gf.neg(l.c), gf.neg(l.a)]);
        let n = self.0.len() - 1;
        if n == 0 {
            return None;
        }
        let mut q = vec![UPoly::zero(); n];
        q[n - 1] = self.0[n].clone();
        for j in (1..n).rev() {
            q[j - 1] = self.0[j].add(&y0.mul(&q[j], gf), gf);
        }
        let rem = self.0[0].add(&y0.mul(&q[0], gf), gf);
        rem.is_zero().then(|| Poly2(q).trimmed())
    }

    /// `(m, self / l^m)` with `l^m` the exact power dividing `self`.
    pub fn line_multiplicity(&self, l: &Line, gf: &Gf) -> (u32, Poly2) {
        let mut p = self.clone();
        let mut m = 0;
        while let Some(q) = p.div_line(l, gf) {
            p = q;
            m += 1;
        }
        (m, p)
    }

    /// Restriction to the line, as a polynomial in its parameter.
    pub fn restrict(&self, l: &Line, gf: &Gf) -> UPoly {
        if l.b == 0 {
            let x0 = gf.neg(l.c);
            return UPoly::from_coeffs(self.0.iter().map(|c| c.eval(x0, gf)).collect());
        }
        let y0 = UPoly::from_coeffs(vec![gf.neg(l.c), gf.neg(l.a)]);
        self.0.iter().rev().fold(UPoly::zero(), |acc, c| acc.mul(&y0, gf).add(c, gf))
    }

    /// Factor into lines times a constant; `None` if some factor is not linear.
    pub fn line_factors(&self, gf: &Gf) -> Option<(Fq, Vec<(Line, u32)>)> {
        let mut p = self.clone();
        let mut out = Vec::new();
        for l in Line::all(gf) {
            if p.as_constant().is_some() {
                break;
            }
            let (m, rest) = p.line_multiplicity(&l, gf);
            if m > 0 {
                out.push((l, m));
                p = rest;
            }
        }
        p.as_constant().filter(|&c| c != 0).map(|c| (c, out))
    }
}

impl Line {
    /// Normalized line through `a x + b y + c`.
    pub fn new(a: Fq, b: Fq, c: Fq, gf: &Gf) -> Result<Line> {
        if b != 0 {
            let i = gf.inv(b)?;
            Ok(Line { a: gf.mul(a, i), b: 1, c: gf.mul(c, i) })
        } else if a != 0 {
            let i = gf.inv(a)?;
            Ok(Line { a: 1, b: 0, c: gf.mul(c, i) })
        } else {
            Err(Error::NotALineArrangement("degenerate linear form".into()))
        }
    }

    /// Every affine line over `F_q`, in a fixed order.
    pub fn all(gf: &Gf) -> impl Iterator<Item = Line> + '_ {
        let q = gf.size();
        let vertical = (0..q).map(|c| Line { a: 1, b: 0, c });
        let other = (0..q).flat_map(move |a| (0..q).map(move |c| Line { a, b: 1, c }));
        vertical.chain(other)
    }

    /// The `q + 1` lines through a point.
    pub fn through(p: Point, gf: &Gf) -> Vec<Line> {
        let mut out = vec![Line { a: 1, b: 0, c: gf.neg(p.x) }];
        for a in 0..gf.size() {
            // y + a x + c = 0 through p: c = -(y0 + a x0)
            out.push(Line { a, b: 1, c: gf.neg(gf.add(p.y, gf.mul(a, p.x))) });
        }
        out
    }

    pub fn contains(&self, p: Point, gf: &Gf) -> bool {
        gf.add(gf.add(gf.mul(self.a, p.x), gf.mul(self.b, p.y)), self.c) == 0
    }

    pub fn intersect(&self, o: &Line, gf: &Gf) -> Option<Point> {
        // solve a1 x + b1 y = -c1, a2 x + b2 y = -c2
        let det = gf.sub(gf.mul(self.a, o.b), gf.mul(self.b, o.a));
        if det == 0 {
            return None;
        }
        let inv = gf.inv(det).ok()?;
        let (r1, r2) = (gf.neg(self.c), gf.neg(o.c));
        let x = gf.mul(gf.sub(gf.mul(r1, o.b), gf.mul(self.b, r2)), inv);
        let y = gf.mul(gf.sub(gf.mul(self.a, r2), gf.mul(r1, o.a)), inv);
        Some(Point { x, y })
    }

    /// Whether the line is parametrized by `x` (otherwise by `y`).
    pub fn param_is_x(&self) -> bool {
        self.b != 0
    }

    /// Parameter value of a point on the line.
    pub fn param_of(&self, p: Point) -> Fq {
        if self.param_is_x() {
            p.x
        } else {
            p.y
        }
    }

    pub fn as_poly2(&self) -> Poly2 {
        Poly2(vec![UPoly::from_coeffs(vec![self.c, self.a]), UPoly::constant(self.b)]).trimmed()
    }

    /// The linear form as an element of `F_q(x)(y)`.
    pub fn to_elem(&self, field: &FieldTower) -> FieldElem {
        poly2_to_elem(field, &self.as_poly2())
    }
}

/// Check that the field is `F_q(x)(y)` with a finite base.
pub fn check_plane(field: &FieldTower) -> Result<()> {
    let ok = field.depth() == 2
        && !field.is_closure()
        && field.layers().iter().all(|l| l.kind == LayerKind::Rational);
    if !ok {
        return Err(Error::UnsupportedTower(format!("expected a plane F_q(x)(y), got {field}")));
    }
    Ok(())
}

/// Numerator and denominator of a plane element as polynomials (up to a
/// common constant).
pub fn elem_to_poly2(a: &FieldElem) -> (Poly2, Poly2) {
    let gf = a.field().gf();
    let (num, den) = a.top_parts();
    let dens = num.iter().chain(den.iter()).map(|v| upolys(v).1);
    let common = dens.fold(UPoly::constant(1), |acc, d| {
        let g = acc.gcd(&d, gf);
        acc.mul(&d, gf).exact_div(&g, gf)
    });
    let conv = |p: &Vec<Value>| {
        Poly2(
            p.iter()
                .map(|v| {
                    let (n, d) = upolys(v);
                    n.mul(&common.exact_div(&d, gf), gf)
                })
                .collect(),
        )
        .trimmed()
    };
    (conv(&num), conv(&den))
}

fn upolys(v: &Value) -> (UPoly, UPoly) {
    let f = v.frac();
    let conv = |p: &Vec<Value>| UPoly::from_coeffs(p.iter().map(|c| c.as_const()).collect());
    (conv(&f.num), conv(&f.den))
}

pub fn poly2_to_elem(field: &FieldTower, p: &Poly2) -> FieldElem {
    let k1 = field.sub(1);
    let coeffs = p.0.iter().map(|c| FieldElem::from_upoly(&k1, c).value().clone()).collect();
    let one = vec![FieldElem::one(&k1).value().clone()];
    FieldElem::from_top_parts(field, coeffs, one).expect("nonzero denominator")
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn plane() -> FieldTower {
        FieldTower::parse("Fq(5,1)(x)(y)").unwrap()
    }

    #[test]
    fn line_factorization() {
        let k = plane();
        let gf = k.gf().clone();
        let e = FieldElem::parse(&k, "2*x*(y-x)^2/(x+1)").unwrap();
        let (n, d) = elem_to_poly2(&e);
        let (cn, fnum) = n.line_factors(&gf).unwrap();
        let (cd, fden) = d.line_factors(&gf).unwrap();
        assert_eq!(gf.div(cn, cd).unwrap(), 2);
        assert_eq!(fnum.len(), 2);
        assert_eq!(fden, vec![(Line { a: 1, b: 0, c: 1 }, 1)]);
        let conic = FieldElem::parse(&k, "x^2+y^2+1").unwrap();
        assert!(elem_to_poly2(&conic).0.line_factors(&gf).is_none());
    }

    #[test]
    fn restriction_and_intersections() {
        let gf = Gf::get(5, 1).unwrap();
        let l1 = Line::new(1, 4, 0, &gf).unwrap(); // x - y
        let l2 = Line::new(1, 0, 3, &gf).unwrap(); // x + 3
        assert_eq!(l1.intersect(&l2, &gf), Some(Point { x: 2, y: 2 }));
        assert!(Line::through(Point { x: 2, y: 2 }, &gf).iter().all(|l| l.contains(Point { x: 2, y: 2 }, &gf)));
        assert_eq!(Line::through(Point { x: 0, y: 0 }, &gf).len(), 6);
        // y restricted to the line y = x is the parameter x
        let y = Poly2(vec![UPoly::zero(), UPoly::constant(1)]);
        assert_eq!(y.restrict(&l1, &gf), UPoly::x());
        assert_eq!(y.restrict(&l2, &gf), UPoly::x());
        assert_eq!(Line::all(&gf).count(), 30);
    }

    #[test]
    fn round_trip_through_elements() {
        let k = plane();
        let e = FieldElem::parse(&k, "(x*y + 3)/(y^2 + x)").unwrap();
        let (n, d) = elem_to_poly2(&e);
        let back = poly2_to_elem(&k, &n).checked_div(&poly2_to_elem(&k, &d)).unwrap();
        assert_eq!(back, e);
    }
}
