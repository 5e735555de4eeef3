//! Finite fields `F_{p^k}` presented by Conway polynomials.
//!
//! Elements are packed as base-`p` digit strings: the value `sum c_i p^i` stands
//! for `sum c_i a^i`, where `a` is the root of the Conway polynomial. For `k = 1`
//! this is just the residue mod `p`. The root `a` is primitive, so it is the
//! canonical generator `g` of the multiplicative group.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use std::sync::LazyLock;

use crate::error::{Error, Result};

/// Largest field size backed by log/exp tables.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

/// A finite field element in packed digit form.
pub type Fq = u32;

pub struct Gf {
    p: u32,
    k: u32,
    q: u32,
    conway: Vec<u32>,
    gen: Fq,
    exp: Vec<Fq>,
    log: Vec<u32>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf({}^{})", self.p, self.k)
    }
}

/// Fields are determined by `(p, k)`: the Conway modulus is canonical.
impl PartialEq for Gf {
    fn eq(&self, o: &Self) -> bool {
        self.p == o.p && self.k == o.k
    }
}
impl Eq for Gf {}

type Cache<T> = LazyLock<Mutex<HashMap<(u32, u32), T>>>;

static FIELDS: Cache<Arc<Gf>> = LazyLock::new(|| Mutex::new(HashMap::new()));
static CONWAY: Cache<Vec<u32>> = LazyLock::new(|| Mutex::new(HashMap::new()));

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Distinct prime divisors, ascending.
pub fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

impl Gf {
    /// The field with `p^k` elements, cached process-wide.
    pub fn get(p: u32, k: u32) -> Result<Arc<Gf>> {
        if !is_prime(p as u64) {
            return Err(Error::InvalidField(format!("{p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidField("extension degree must be positive".into()));
        }
        let q = (p as u64).checked_pow(k).filter(|q| *q <= MAX_FIELD_SIZE).ok_or_else(|| {
            Error::InvalidField(format!("{p}^{k} exceeds the supported field size {MAX_FIELD_SIZE}"))
        })?;
        if let Some(f) = FIELDS.lock().unwrap().get(&(p, k)) {
            return Ok(f.clone());
        }
        let conway = conway_polynomial(p, k);
        let gf = Arc::new(Gf::build(p, k, q as u32, conway));
        FIELDS.lock().unwrap().entry((p, k)).or_insert(gf.clone());
        Ok(gf)
    }

    fn build(p: u32, k: u32, q: u32, conway: Vec<u32>) -> Gf {
        let gen = if k == 1 { (p - conway[0]) % p } else { p };
        let mut gf = Gf { p, k, q, conway, gen, exp: Vec::new(), log: Vec::new() };
        let mut exp = Vec::with_capacity(q as usize - 1);
        let mut log = vec![u32::MAX; q as usize];
        let mut x: Fq = 1;
        for i in 0..q - 1 {
            exp.push(x);
            log[x as usize] = i;
            x = gf.mul_slow(x, gen);
        }
        debug_assert_eq!(x, 1);
        gf.exp = exp;
        gf.log = log;
        gf
    }

    pub fn p(&self) -> u32 {
        self.p
    }
    pub fn k(&self) -> u32 {
        self.k
    }
    pub fn size(&self) -> u32 {
        self.q
    }
    /// Coefficients (low to high, monic) of the defining Conway polynomial.
    pub fn conway(&self) -> &[u32] {
        &self.conway
    }
    /// The canonical generator of the multiplicative group.
    pub fn generator(&self) -> Fq {
        self.gen
    }

    pub fn zero(&self) -> Fq {
        0
    }
    pub fn one(&self) -> Fq {
        1
    }

    /// Image of an integer under `Z -> F_p -> F_q`.
    pub fn from_int(&self, n: i64) -> Fq {
        n.rem_euclid(self.p as i64) as Fq
    }

    /// Packed value of `sum digits[i] a^i`.
    pub fn from_digits(&self, digits: &[u32]) -> Fq {
        let mut v = 0u32;
        for (i, &d) in digits.iter().enumerate().take(self.k as usize) {
            v += (d % self.p) * self.p.pow(i as u32);
        }
        v
    }

    pub fn digits(&self, a: Fq) -> Vec<u32> {
        let mut out = Vec::with_capacity(self.k as usize);
        let mut a = a;
        for _ in 0..self.k {
            out.push(a % self.p);
            a /= self.p;
        }
        out
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b, mut out, mut w) = (a, b, 0u32, 1u32);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * w;
            a /= self.p;
            b /= self.p;
            w *= self.p;
        }
        out
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let (mut a, mut out, mut w) = (a, 0u32, 1u32);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * w;
            a /= self.p;
            w *= self.p;
        }
        out
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a == 0 || b == 0 {
            return 0;
        }
        let s = self.log[a as usize] as u64 + self.log[b as usize] as u64;
        self.exp[(s % (self.q as u64 - 1)) as usize]
    }

    pub fn inv(&self, a: Fq) -> Result<Fq> {
        if a == 0 {
            return Err(Error::DivisionByZero);
        }
        let l = self.log[a as usize];
        Ok(self.exp[((self.q - 1 - l) % (self.q - 1)) as usize])
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, e: i64) -> Fq {
        if a == 0 {
            return if e == 0 { 1 } else { 0 };
        }
        let m = self.q as i64 - 1;
        let l = self.log[a as usize] as i64;
        self.exp[((l * e.rem_euclid(m)) % m) as usize]
    }

    /// Discrete logarithm to the canonical generator.
    pub fn log(&self, a: Fq) -> Result<u32> {
        if a == 0 {
            return Err(Error::ZeroElement);
        }
        Ok(self.log[a as usize])
    }

    pub fn gen_pow(&self, e: i64) -> Fq {
        let m = self.q as i64 - 1;
        self.exp[e.rem_euclid(m) as usize]
    }

    /// Fixed primitive `n`-th root of unity `g^((q-1)/n)`.
    pub fn root_of_unity(&self, n: u32) -> Result<Fq> {
        if n == 0 || !(self.q - 1).is_multiple_of(n) {
            return Err(Error::RootsOfUnityMissing { n, q: self.q as u64 });
        }
        Ok(self.gen_pow(((self.q - 1) / n) as i64))
    }

    pub fn is_square(&self, a: Fq) -> bool {
        a == 0 || self.p == 2 || self.log[a as usize].is_multiple_of(2)
    }

    /// Elements in increasing packed order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        0..self.q
    }

    fn mul_slow(&self, a: Fq, b: Fq) -> Fq {
        let pa = self.digits(a);
        let pb = self.digits(b);
        let prod = poly_mulmod(&pa, &pb, &self.conway, self.p);
        self.from_digits(&prod)
    }
}

// --- small dense polynomial helpers over F_p, used for field construction ---

fn poly_trim(mut a: Vec<u32>) -> Vec<u32> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let pp = p as u64;
    let mut prod = vec![0u64; a.len() + b.len()];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % pp;
        }
    }
    let mut prod: Vec<u32> = prod.into_iter().map(|x| x as u32).collect();
    poly_reduce(&mut prod, m, p);
    poly_trim(prod)
}

/// Reduce modulo a monic polynomial.
fn poly_reduce(a: &mut Vec<u32>, m: &[u32], p: u32) {
    let d = m.len() - 1;
    let pp = p as u64;
    while a.len() > d {
        let top = a.pop().unwrap() as u64;
        if top == 0 {
            continue;
        }
        let base = a.len() - d;
        for i in 0..d {
            let t = (top * m[i] as u64) % pp;
            a[base + i] = ((a[base + i] as u64 + pp - t) % pp) as u32;
        }
    }
}

fn poly_powmod_x(e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut base = vec![0u32, 1u32];
    poly_reduce(&mut base, m, p);
    let mut base = poly_trim(base);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            result = poly_mulmod(&result, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        e >>= 1;
    }
    result
}

/// Evaluate `c(x^e)` modulo `m`.
fn poly_compose_power(c: &[u32], e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let xe = poly_powmod_x(e, m, p);
    let mut acc: Vec<u32> = Vec::new();
    for &coef in c.iter().rev() {
        acc = poly_mulmod(&acc, &xe, m, p);
        if acc.is_empty() {
            acc.push(0);
        }
        acc[0] = (acc[0] + coef) % p;
        acc = poly_trim(acc);
    }
    acc
}

fn is_primitive_poly(m: &[u32], p: u32) -> bool {
    let n = (m.len() - 1) as u32;
    let order = (p as u64).pow(n) - 1;
    if poly_powmod_x(order, m, p) != vec![1] {
        return false;
    }
    prime_divisors(order)
        .into_iter()
        .all(|r| poly_powmod_x(order / r, m, p) != vec![1])
}

/// Conway polynomial `C_{p,n}`, coefficients low to high (monic).
///
/// Found by exhaustive search in Conway's order, so only practical for the
/// small fields this crate targets.
pub fn conway_polynomial(p: u32, n: u32) -> Vec<u32> {
    if let Some(c) = CONWAY.lock().unwrap().get(&(p, n)) {
        return c.clone();
    }
    let subs: Vec<(u32, Vec<u32>)> = (1..n)
        .filter(|m| n.is_multiple_of(*m))
        .map(|m| (m, conway_polynomial(p, m)))
        .collect();
    let qn = (p as u64).pow(n) - 1;
    let total = (p as u64).pow(n);
    let mut found = None;
    // index enumerates (a_{n-1}, ..., a_0) lexicographically
    for idx in 0..total {
        let mut a = vec![0u32; n as usize];
        let mut t = idx;
        for i in 0..n as usize {
            a[i] = (t % p as u64) as u32;
            t /= p as u64;
        }
        // a[0] is the least significant digit = a_0 coefficient slot
        let mut poly = vec![0u32; n as usize + 1];
        poly[n as usize] = 1;
        for i in 0..n as usize {
            let ai = a[i];
            poly[i] = if (n as usize - i).is_multiple_of(2) { ai } else { (p - ai) % p };
        }
        if !is_primitive_poly(&poly, p) {
            continue;
        }
        let compatible = subs.iter().all(|(m, cm)| {
            let e = qn / ((p as u64).pow(*m) - 1);
            poly_compose_power(cm, e, &poly, p).is_empty()
        });
        if compatible {
            found = Some(poly);
            break;
        }
    }
    let poly = found.expect("a Conway polynomial always exists");
    CONWAY.lock().unwrap().insert((p, n), poly.clone());
    poly
}
