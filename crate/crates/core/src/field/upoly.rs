//! Dense univariate polynomials over a finite field, with factorization.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::gf::{Fq, Gf};
use crate::error::{Error, Result};

/// Coefficients low to high, no trailing zeros; the zero polynomial is empty.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct UPoly(pub Vec<Fq>);

impl UPoly {
    pub fn zero() -> UPoly {
        UPoly(Vec::new())
    }
    pub fn constant(c: Fq) -> UPoly {
        UPoly(vec![c]).trimmed()
    }
    pub fn x() -> UPoly {
        UPoly(vec![0, 1])
    }
    /// `x - r`
    pub fn linear(gf: &Gf, r: Fq) -> UPoly {
        UPoly(vec![gf.neg(r), 1])
    }
    pub fn from_coeffs(c: Vec<Fq>) -> UPoly {
        UPoly(c).trimmed()
    }
    fn trimmed(mut self) -> UPoly {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
        self
    }
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }
    pub fn lead(&self) -> Fq {
        self.0.last().copied().unwrap_or(0)
    }
    pub fn coeff(&self, i: usize) -> Fq {
        self.0.get(i).copied().unwrap_or(0)
    }
    pub fn is_one(&self) -> bool {
        self.0 == [1]
    }

    pub fn add(&self, o: &UPoly, gf: &Gf) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly((0..n).map(|i| gf.add(self.coeff(i), o.coeff(i))).collect()).trimmed()
    }
    pub fn sub(&self, o: &UPoly, gf: &Gf) -> UPoly {
        let n = self.0.len().max(o.0.len());
        UPoly((0..n).map(|i| gf.sub(self.coeff(i), o.coeff(i))).collect()).trimmed()
    }
    pub fn neg(&self, gf: &Gf) -> UPoly {
        UPoly(self.0.iter().map(|&c| gf.neg(c)).collect())
    }
    pub fn scale(&self, c: Fq, gf: &Gf) -> UPoly {
        UPoly(self.0.iter().map(|&a| gf.mul(a, c)).collect()).trimmed()
    }
    pub fn mul(&self, o: &UPoly, gf: &Gf) -> UPoly {
        if self.is_zero() || o.is_zero() {
            return UPoly::zero();
        }
        let mut out = vec![0; self.0.len() + o.0.len() - 1];
        for (i, &a) in self.0.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.0.iter().enumerate() {
                out[i + j] = gf.add(out[i + j], gf.mul(a, b));
            }
        }
        UPoly(out).trimmed()
    }
    pub fn pow(&self, e: u64, gf: &Gf) -> UPoly {
        let mut r = UPoly::constant(1);
        let mut b = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, gf);
            }
            b = b.mul(&b, gf);
            e >>= 1;
        }
        r
    }

    pub fn divrem(&self, d: &UPoly, gf: &Gf) -> Result<(UPoly, UPoly)> {
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let dd = d.0.len() - 1;
        let inv = gf.inv(d.lead())?;
        let mut r = self.0.clone();
        if r.len() <= dd {
            return Ok((UPoly::zero(), self.clone()));
        }
        let mut q = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = gf.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for j in 0..=dd {
                r[i - dd + j] = gf.sub(r[i - dd + j], gf.mul(c, d.0[j]));
            }
        }
        r.truncate(dd);
        Ok((UPoly(q).trimmed(), UPoly(r).trimmed()))
    }
    pub fn rem(&self, d: &UPoly, gf: &Gf) -> UPoly {
        self.divrem(d, gf).expect("nonzero modulus").1
    }
    /// Exact quotient; panics if `d` does not divide.
    pub fn exact_div(&self, d: &UPoly, gf: &Gf) -> UPoly {
        let (q, r) = self.divrem(d, gf).expect("nonzero divisor");
        assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self, gf: &Gf) -> UPoly {
        if self.is_zero() {
            return UPoly::zero();
        }
        let inv = gf.inv(self.lead()).unwrap();
        self.scale(inv, gf)
    }
    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn gcd(&self, o: &UPoly, gf: &Gf) -> UPoly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b, gf);
            a = b;
            b = r;
        }
        a.monic(gf)
    }

    pub fn eval(&self, x: Fq, gf: &Gf) -> Fq {
        self.0.iter().rev().fold(0, |acc, &c| gf.add(gf.mul(acc, x), c))
    }

    pub fn derivative(&self, gf: &Gf) -> UPoly {
        UPoly(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| gf.mul(c, gf.from_int(i as i64)))
                .collect(),
        )
        .trimmed()
    }

    pub fn mulmod(&self, o: &UPoly, m: &UPoly, gf: &Gf) -> UPoly {
        self.mul(o, gf).rem(m, gf)
    }

    pub fn powmod(&self, e: u128, m: &UPoly, gf: &Gf) -> UPoly {
        let mut r = UPoly::constant(1).rem(m, gf);
        let mut b = self.rem(m, gf);
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mulmod(&b, m, gf);
            }
            b = b.mulmod(&b, m, gf);
            e >>= 1;
        }
        r
    }

    /// Inverse modulo `m` (which must be coprime to `self`).
    pub fn invmod(&self, m: &UPoly, gf: &Gf) -> Result<UPoly> {
        let (mut r0, mut r1) = (m.clone(), self.rem(m, gf));
        let (mut s0, mut s1) = (UPoly::zero(), UPoly::constant(1));
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, gf)?;
            let s = s0.sub(&q.mul(&s1, gf), gf);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.degree() != Some(0) {
            return Err(Error::DivisionByZero);
        }
        let inv = gf.inv(r0.lead())?;
        Ok(s0.scale(inv, gf).rem(m, gf))
    }

    /// `p`-th root of a polynomial whose derivative vanishes.
    fn pth_root(&self, gf: &Gf) -> UPoly {
        let p = gf.p() as usize;
        // c^(q/p) is the p-th root in F_q
        let e = (gf.size() / gf.p()) as i64;
        UPoly((0..self.0.len()).step_by(p).map(|i| gf.pow(self.0[i], e)).collect()).trimmed()
    }

    /// Square-free factorization of a monic polynomial: `(g_i, i)` with `self = prod g_i^i`.
    pub fn squarefree(&self, gf: &Gf) -> Vec<(UPoly, u32)> {
        let mut out = Vec::new();
        squarefree_rec(&self.monic(gf), 1, gf, &mut out);
        out.sort_by_key(|a| a.1);
        out
    }

    pub fn is_irreducible(&self, gf: &Gf) -> bool {
        let Some(n) = self.degree() else { return false };
        if n == 0 {
            return false;
        }
        if n == 1 {
            return true;
        }
        let f = self.monic(gf);
        let q = gf.size() as u128;
        // x^(q^n) = x mod f and gcd(x^(q^(n/r)) - x, f) = 1 for primes r | n
        let x = UPoly::x();
        let frob = |k: usize| -> UPoly {
            let mut y = x.clone();
            for _ in 0..k {
                y = y.powmod(q, &f, gf);
            }
            y
        };
        if frob(n) != x.rem(&f, gf) {
            return false;
        }
        for r in super::gf::prime_divisors(n as u64) {
            let h = frob(n / r as usize).sub(&x, gf);
            if h.gcd(&f, gf).degree() != Some(0) {
                return false;
            }
        }
        true
    }

    /// Full factorization into monic irreducibles with multiplicity, sorted.
    /// The leading coefficient is returned separately.
    pub fn factor(&self, gf: &Gf) -> Result<(Fq, Vec<(UPoly, u32)>)> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let lead = self.lead();
        let mut out = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_f00d);
        for (g, mult) in self.squarefree(gf) {
            for (d, part) in distinct_degree(&g, gf) {
                for f in equal_degree(&part, d, gf, &mut rng) {
                    out.push((f, mult));
                }
            }
        }
        out.sort();
        Ok((lead, out))
    }
}

fn squarefree_rec(f: &UPoly, mult: u32, gf: &Gf, out: &mut Vec<(UPoly, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let df = f.derivative(gf);
    if df.is_zero() {
        squarefree_rec(&f.pth_root(gf), mult * gf.p(), gf, out);
        return;
    }
    let mut c = f.gcd(&df, gf);
    let mut w = f.exact_div(&c, gf);
    let mut i = 1;
    while w.degree().unwrap_or(0) > 0 {
        let y = w.gcd(&c, gf);
        let z = w.exact_div(&y, gf);
        if z.degree().unwrap_or(0) > 0 {
            out.push((z.monic(gf), i * mult));
        }
        w = y;
        c = c.exact_div(&w, gf);
        i += 1;
    }
    if c.degree().unwrap_or(0) > 0 {
        squarefree_rec(&c.pth_root(gf), mult * gf.p(), gf, out);
    }
}

fn distinct_degree(f: &UPoly, gf: &Gf) -> Vec<(usize, UPoly)> {
    let mut out = Vec::new();
    let mut f = f.monic(gf);
    let q = gf.size() as u128;
    let x = UPoly::x();
    let mut h = x.rem(&f, gf);
    let mut d = 0;
    while f.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.powmod(q, &f, gf);
        let g = h.sub(&x, gf).gcd(&f, gf);
        if g.degree().unwrap_or(0) > 0 {
            f = f.exact_div(&g, gf);
            h = h.rem(&f, gf);
            out.push((d, g));
        }
    }
    if f.degree().unwrap_or(0) > 0 {
        let deg = f.degree().unwrap();
        out.push((deg, f));
    }
    out
}

fn equal_degree(f: &UPoly, d: usize, gf: &Gf, rng: &mut ChaCha8Rng) -> Vec<UPoly> {
    let n = f.degree().unwrap_or(0);
    if n == d {
        return vec![f.monic(gf)];
    }
    let q = gf.size() as u128;
    loop {
        let a = UPoly::from_coeffs((0..n).map(|_| rng.gen_range(0..gf.size())).collect());
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = if gf.p() == 2 {
            // trace map a + a^2 + ... + a^(2^(kd-1))
            let mut t = a.rem(f, gf);
            let mut acc = t.clone();
            for _ in 1..(gf.k() as usize * d) {
                t = t.mulmod(&t, f, gf);
                acc = acc.add(&t, gf);
            }
            acc
        } else {
            let e = (q.pow(d as u32) - 1) / 2;
            a.powmod(e, f, gf).sub(&UPoly::constant(1), gf)
        };
        let g = b.gcd(f, gf);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut out = equal_degree(&g, d, gf, rng);
            out.extend(equal_degree(&f.exact_div(&g, gf), d, gf, rng));
            return out;
        }
    }
}
