//! Finite fields `F_{p^e}` for odd `p`, built as `Z/p[t]` modulo a deterministic
//! irreducible polynomial.
//!
//! Elements are stored by their integer encoding `sum c_i p^i`, which doubles as
//! the total order used for every "least"/"first" choice in the crate.
//! Multiplication goes through discrete-log tables and the quadratic character
//! is tabulated once per field.

use std::fmt;

use crate::arith;
use crate::error::{param, Error, Result};

/// An element of some [`FieldDesc`], identified by its encoding.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    pub const ZERO: FieldElement = FieldElement(0);
    pub const ONE: FieldElement = FieldElement(1);

    pub fn encoding(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Largest field for which a full addition table is kept.
const ADD_TABLE_LIMIT: u32 = 1024;

/// A finite field of odd characteristic.
#[derive(Clone)]
pub struct FieldDesc {
    p: u32,
    e: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    add_table: Option<Vec<u32>>,
    chi: Vec<i8>,
}

impl fmt::Debug for FieldDesc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldDesc")
            .field("p", &self.p)
            .field("e", &self.e)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl PartialEq for FieldDesc {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.e == other.e && self.modulus == other.modulus
    }
}

impl Eq for FieldDesc {}

/// Builds `F_{p^e}` with the irreducible monic modulus of least encoding.
pub fn make_field(p: u32, e: u32) -> Result<FieldDesc> {
    if p == 2 || !arith::is_prime(p as u64) {
        return param(format!("characteristic {p} is not an odd prime"));
    }
    if e < 1 {
        return param("extension degree must be at least 1");
    }
    let q64 = (p as u64).pow(e);
    if q64 > (1 << 24) {
        return param(format!("field of size {q64} is too large"));
    }
    let q = q64 as u32;
    let modulus = least_irreducible(p, e);
    let mut field = FieldDesc {
        p,
        e,
        q,
        modulus,
        exp: Vec::new(),
        log: Vec::new(),
        add_table: None,
        chi: Vec::new(),
    };
    field.build_tables();
    Ok(field)
}

impl FieldDesc {
    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.e
    }

    pub fn order(&self) -> u32 {
        self.q
    }

    /// Monic modulus, low coefficient first, length `e + 1`.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement::ZERO
    }

    pub fn one(&self) -> FieldElement {
        FieldElement::ONE
    }

    /// The class of `t` (equal to 0 when `e = 1`, where the modulus is `t`).
    pub fn generator(&self) -> FieldElement {
        if self.e == 1 {
            FieldElement(0)
        } else {
            FieldElement(self.p)
        }
    }

    pub fn from_int(&self, n: i64) -> FieldElement {
        FieldElement(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_encoding(&self, enc: u32) -> Result<FieldElement> {
        if enc >= self.q {
            return param(format!("encoding {enc} out of range for field of size {}", self.q));
        }
        Ok(FieldElement(enc))
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<FieldElement> {
        if coeffs.len() > self.e as usize || coeffs.iter().any(|&c| c >= self.p) {
            return param("coefficient vector is not reduced for this field");
        }
        Ok(FieldElement(encode(coeffs, self.p)))
    }

    /// Coefficient vector of length `e`, low coefficient first.
    pub fn coeffs(&self, a: FieldElement) -> Vec<u32> {
        decode(a.0, self.p, self.e as usize)
    }

    pub fn add(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if self.e == 1 {
            let s = a.0 + b.0;
            return FieldElement(if s >= self.p { s - self.p } else { s });
        }
        if let Some(t) = &self.add_table {
            return FieldElement(t[(a.0 * self.q + b.0) as usize]);
        }
        self.add_digits(a.0, b.0)
    }

    fn add_digits(&self, mut a: u32, mut b: u32) -> FieldElement {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            let d = (a % self.p + b % self.p) % self.p;
            out += d * place;
            place *= self.p;
            a /= self.p;
            b /= self.p;
        }
        FieldElement(out)
    }

    pub fn neg(&self, a: FieldElement) -> FieldElement {
        let mut x = a.0;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.e {
            let d = x % self.p;
            out += ((self.p - d) % self.p) * place;
            place *= self.p;
            x /= self.p;
        }
        FieldElement(out)
    }

    pub fn sub(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: FieldElement, b: FieldElement) -> FieldElement {
        if a.0 == 0 || b.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = self.q - 1;
        let s = self.log[a.0 as usize] + self.log[b.0 as usize];
        FieldElement(self.exp[(if s >= n { s - n } else { s }) as usize])
    }

    pub fn inv(&self, a: FieldElement) -> Result<FieldElement> {
        if a.0 == 0 {
            return Err(Error::DivisionByZero);
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Ok(FieldElement(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: FieldElement, b: FieldElement) -> Result<FieldElement> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: FieldElement, k: u64) -> FieldElement {
        if k == 0 {
            return FieldElement::ONE;
        }
        if a.0 == 0 {
            return FieldElement::ZERO;
        }
        let n = (self.q - 1) as u64;
        let l = self.log[a.0 as usize] as u64;
        FieldElement(self.exp[((l * (k % n)) % n) as usize])
    }

    /// Quadratic character: 0, +1 for nonzero squares, -1 otherwise.
    #[inline]
    pub fn chi(&self, a: FieldElement) -> i8 {
        self.chi[a.0 as usize]
    }

    /// The full character table indexed by encoding.
    pub fn chi_table(&self) -> &[i8] {
        &self.chi
    }

    /// All `q` elements in encoding order.
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.q).map(FieldElement)
    }

    /// The least non-square, used to normalize leading coefficients.
    pub fn least_nonsquare(&self) -> FieldElement {
        self.elements()
            .find(|&a| self.chi(a) == -1)
            .expect("odd-order field has non-squares")
    }

    fn build_tables(&mut self) {
        let q = self.q as usize;
        let p = self.p;
        let e = self.e as usize;
        if self.e > 1 && self.q <= ADD_TABLE_LIMIT {
            let mut t = vec![0u32; q * q];
            for a in 0..self.q {
                for b in 0..self.q {
                    t[(a * self.q + b) as usize] = self.add_digits(a, b).0;
                }
            }
            self.add_table = Some(t);
        }
        // multiplicative generator: least element of full order
        let n = self.q - 1;
        let prime_factors: Vec<u64> = arith::factor(n as u64).iter().map(|&(r, _)| r).collect();
        let mut g = None;
        for cand in 1..self.q {
            let c = decode(cand, p, e);
            if prime_factors.iter().all(|&r| {
                let pw = poly_powmod(&c, (n as u64) / r, &self.modulus, p);
                !(pw.len() == 1 && pw[0] == 1)
            }) {
                g = Some(c);
                break;
            }
        }
        let g = g.expect("multiplicative group is cyclic");
        let mut exp = vec![0u32; q];
        let mut log = vec![0u32; q];
        let mut cur = vec![1u32];
        for i in 0..n {
            let enc = encode(&cur, p);
            exp[i as usize] = enc;
            log[enc as usize] = i;
            cur = poly_mulmod(&cur, &g, &self.modulus, p);
        }
        self.exp = exp;
        self.log = log;
        let half = ((self.q - 1) / 2) as u64;
        let mut chi = vec![0i8; q];
        for a in 1..self.q {
            let r = self.pow(FieldElement(a), half);
            chi[a as usize] = if r == FieldElement::ONE { 1 } else { -1 };
        }
        self.chi = chi;
    }
}

/// Embedding `F_q -> F_{q^2}` sending the class of `t` to the least root of
/// the modulus of `F_q` in the target.
#[derive(Clone, Debug)]
pub struct Embedding {
    image: Vec<FieldElement>,
}

impl Embedding {
    pub fn new(source: &FieldDesc, target: &FieldDesc) -> Result<Embedding> {
        if source.p != target.p || target.e != 2 * source.e {
            return param(format!(
                "cannot embed F_{}^{} into F_{}^{}",
                source.p, source.e, target.p, target.e
            ));
        }
        let root = target
            .elements()
            .find(|&r| {
                let mut acc = FieldElement::ZERO;
                for &c in source.modulus.iter().rev() {
                    acc = target.add(target.mul(acc, r), target.from_int(c as i64));
                }
                acc.is_zero()
            })
            .ok_or_else(|| Error::Internal("modulus has no root in the extension".into()))?;
        let mut image = Vec::with_capacity(source.q as usize);
        for a in source.elements() {
            let mut acc = FieldElement::ZERO;
            for &c in source.coeffs(a).iter().rev() {
                acc = target.add(target.mul(acc, root), target.from_int(c as i64));
            }
            image.push(acc);
        }
        Ok(Embedding { image })
    }

    #[inline]
    pub fn apply(&self, a: FieldElement) -> FieldElement {
        self.image[a.0 as usize]
    }
}

/// One-shot embedding of a single element.
pub fn embed(a: FieldElement, source: &FieldDesc, target: &FieldDesc) -> Result<FieldElement> {
    Ok(Embedding::new(source, target)?.apply(a))
}

pub fn quadratic_character(field: &FieldDesc, a: FieldElement) -> i8 {
    field.chi(a)
}

pub fn enumerate_elements(field: &FieldDesc) -> Vec<FieldElement> {
    field.elements().collect()
}

fn encode(coeffs: &[u32], p: u32) -> u32 {
    coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
}

fn decode(mut enc: u32, p: u32, len: usize) -> Vec<u32> {
    let mut v = Vec::with_capacity(len);
    for _ in 0..len {
        v.push(enc % p);
        enc /= p;
    }
    v
}

// ---- polynomials over Z/p, low coefficient first, no trailing zeros ----

fn trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = a.to_vec();
    trim(&mut r);
    let dm = m.len() - 1;
    let inv_lead = arith::pow_mod(m[dm] as u64, p as u64 - 2, p as u64) as u32;
    while r.len() > dm {
        let lead = r[r.len() - 1] as u64 * inv_lead as u64 % p as u64;
        let shift = r.len() - 1 - dm;
        for (i, &c) in m.iter().enumerate() {
            let sub = lead * c as u64 % p as u64;
            r[shift + i] = ((r[shift + i] as u64 + p as u64 - sub) % p as u64) as u32;
        }
        trim(&mut r);
    }
    r
}

fn poly_mulmod(a: &[u32], b: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut prod = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    let prod: Vec<u32> = prod.into_iter().map(|c| c as u32).collect();
    poly_rem(&prod, m, p)
}

fn poly_powmod(a: &[u32], mut k: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut result = vec![1u32];
    let mut base = poly_rem(a, m, p);
    while k > 0 {
        if k & 1 == 1 {
            result = poly_mulmod(&result, &base, m, p);
        }
        base = poly_mulmod(&base, &base, m, p);
        k >>= 1;
    }
    result
}

fn poly_gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// Rabin-style test: `m` (monic, degree e) is irreducible iff
/// gcd(m, t^{p^i} - t) = 1 for i <= e/2.
fn is_irreducible(m: &[u32], p: u32) -> bool {
    let e = m.len() - 1;
    if e == 1 {
        return true;
    }
    let t = vec![0u32, 1];
    let mut tp = t.clone();
    for _ in 1..=e / 2 {
        tp = poly_powmod(&tp, p as u64, m, p);
        let mut diff = tp.clone();
        diff.resize(diff.len().max(2), 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(&mut diff);
        let g = poly_gcd(m, &diff, p);
        if g.len() != 1 {
            return false;
        }
    }
    true
}

fn least_irreducible(p: u32, e: u32) -> Vec<u32> {
    let count = (p as u64).pow(e);
    for enc in 0..count {
        let mut m = decode(enc as u32, p, e as usize);
        m.push(1);
        if is_irreducible(&m, p) {
            return m;
        }
    }
    unreachable!("irreducible polynomials exist in every degree")
}
