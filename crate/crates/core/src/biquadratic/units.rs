//! Unit groups of `R_1` and `R_f`.
//!
//! Elements of `K` are handled as `a + b sqrt(-2)` with `a, b` in
//! `K+ = Q(sqrt(2D))`, over exact rationals. Square roots are found in closed
//! form and confirmed by squaring, so no decision depends on floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::quadratic::{pell_fundamental, totally_positive_generator, unit_index_plus, PellSolution};

use super::order::{check_d, CMOrderBasis, Coords, OrderElement};

/// `r + s sqrt(N)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KPlus {
    pub r: BigRational,
    pub s: BigRational,
}

/// `a + b sqrt(-2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KElt {
    pub a: KPlus,
    pub b: KPlus,
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn rational_sqrt(x: &BigRational) -> Option<BigRational> {
    if x.is_negative() {
        return None;
    }
    let (n, d) = (x.numer(), x.denom());
    let (rn, rd) = (n.sqrt(), d.sqrt());
    (&rn * &rn == *n && &rd * &rd == *d).then(|| BigRational::new(rn, rd))
}

impl KPlus {
    pub fn rational(r: BigRational) -> KPlus {
        KPlus { r, s: BigRational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    fn add(&self, o: &KPlus) -> KPlus {
        KPlus { r: &self.r + &o.r, s: &self.s + &o.s }
    }

    fn sub(&self, o: &KPlus) -> KPlus {
        KPlus { r: &self.r - &o.r, s: &self.s - &o.s }
    }

    fn scale(&self, c: &BigRational) -> KPlus {
        KPlus { r: &self.r * c, s: &self.s * c }
    }

    fn mul(&self, o: &KPlus, n: i64) -> KPlus {
        KPlus { r: &self.r * &o.r + q(n) * &self.s * &o.s, s: &self.r * &o.s + &self.s * &o.r }
    }

    fn inv(&self, n: i64) -> Option<KPlus> {
        let nm = &self.r * &self.r - q(n) * &self.s * &self.s;
        (!nm.is_zero()).then(|| KPlus { r: &self.r / &nm, s: -&self.s / &nm })
    }

    pub fn norm(&self, n: i64) -> BigRational {
        &self.r * &self.r - q(n) * &self.s * &self.s
    }

    /// Sign under `sqrt(N) -> sqrt(N)`, exactly.
    pub fn sign(&self, n: i64) -> i32 {
        let (sr, ss) = (sign_of(&self.r), sign_of(&self.s));
        if ss == 0 || sr == ss {
            return if sr == 0 { ss } else { sr };
        }
        if sr == 0 {
            return ss;
        }
        // opposite signs: compare r^2 with N s^2
        match (&self.r * &self.r).cmp(&(q(n) * &self.s * &self.s)) {
            std::cmp::Ordering::Greater => sr,
            std::cmp::Ordering::Less => ss,
            std::cmp::Ordering::Equal => 0,
        }
    }

    pub fn conj(&self) -> KPlus {
        KPlus { r: self.r.clone(), s: -&self.s }
    }

    pub fn is_totally_positive(&self, n: i64) -> bool {
        self.sign(n) > 0 && self.conj().sign(n) > 0
    }

    pub fn sqrt(&self, n: i64) -> Option<KPlus> {
        if self.s.is_zero() {
            if let Some(r) = rational_sqrt(&self.r) {
                return Some(KPlus::rational(r));
            }
            return rational_sqrt(&(&self.r / q(n))).map(|s| KPlus { r: BigRational::zero(), s });
        }
        let nm = rational_sqrt(&self.norm(n))?;
        for sign in [1, -1] {
            let p2 = (&self.r + q(sign) * &nm) / q(2);
            if let Some(p) = rational_sqrt(&p2) {
                if p.is_zero() {
                    continue;
                }
                let cand = KPlus { s: &self.s / (q(2) * &p), r: p };
                if cand.mul(&cand, n) == *self {
                    return Some(cand);
                }
            }
        }
        None
    }
}

fn sign_of(x: &BigRational) -> i32 {
    if x.is_positive() {
        1
    } else if x.is_negative() {
        -1
    } else {
        0
    }
}

impl KElt {
    pub fn from_kplus(a: KPlus) -> KElt {
        KElt { a, b: KPlus::rational(BigRational::zero()) }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn mul(&self, o: &KElt, n: i64) -> KElt {
        KElt {
            a: self.a.mul(&o.a, n).sub(&self.b.mul(&o.b, n).scale(&q(2))),
            b: self.a.mul(&o.b, n).add(&self.b.mul(&o.a, n)),
        }
    }

    pub fn conj(&self) -> KElt {
        KElt { a: self.a.clone(), b: self.b.scale(&q(-1)) }
    }

    /// `z * conj(z)`, which lies in `K+`.
    pub fn rel_norm(&self, n: i64) -> KPlus {
        let t = self.mul(&self.conj(), n);
        debug_assert!(t.b.is_zero());
        t.a
    }

    pub fn sqrt(&self, n: i64) -> Option<KElt> {
        let zero = || KPlus::rational(BigRational::zero());
        let cands: Vec<KElt> = if self.b.is_zero() {
            let mut v = Vec::new();
            if let Some(p) = self.a.sqrt(n) {
                v.push(KElt { a: p, b: zero() });
            }
            if let Some(t) = self.a.scale(&BigRational::new((-1).into(), 2.into())).sqrt(n) {
                v.push(KElt { a: zero(), b: t });
            }
            v
        } else {
            // p^2 - 2 t^2 = a, 2 p t = b
            let disc = self.a.mul(&self.a, n).add(&self.b.mul(&self.b, n).scale(&q(2)));
            let Some(s) = disc.sqrt(n) else { return None };
            let mut v = Vec::new();
            for s in [s.clone(), s.scale(&q(-1))] {
                let p2 = self.a.add(&s).scale(&BigRational::new(1.into(), 2.into()));
                if let Some(p) = p2.sqrt(n) {
                    if let Some(pi) = p.scale(&q(2)).inv(n) {
                        v.push(KElt { b: self.b.mul(&pi, n), a: p });
                    }
                }
            }
            v
        };
        cands.into_iter().find(|c| c.mul(c, n) == *self)
    }
}

/// The element with coordinates `c` in the basis of `order`.
pub fn to_field(order: &CMOrderBasis, c: &[BigInt; 4]) -> KElt {
    let f = BigRational::from_integer(BigInt::from(order.f));
    let half = BigRational::new(1.into(), 2.into());
    let [c0, c1, c2, c3] = c.clone().map(BigRational::from_integer);
    KElt {
        a: KPlus { r: &c0 - &c3 * &f, s: &c2 * &f * &half },
        b: KPlus { r: &c1 + &c2 * &f * &half, s: &c3 * &f * &half },
    }
}

/// Coordinates of `z` in the basis of `order`, if `z` lies in the order.
pub fn from_field(order: &CMOrderBasis, z: &KElt) -> Option<[BigInt; 4]> {
    let f = BigRational::from_integer(BigInt::from(order.f));
    let two = q(2);
    let c2 = &two * &z.a.s / &f;
    let c3 = &two * &z.b.s / &f;
    let c0 = &z.a.r + &c3 * &f;
    let c1 = &z.b.r - &c2 * &f / &two;
    let out = [c0, c1, c2, c3];
    out.iter().all(|c| c.is_integer()).then(|| out.map(|c| c.to_integer()))
}

/// Fundamental units and roots of unity of `K`.
#[derive(Clone, Debug)]
pub struct UnitDescription {
    pub d: u64,
    /// Number of roots of unity in `K`.
    pub mu: u32,
    /// Generator of the roots of unity, in `R_1` coordinates.
    pub zeta: OrderElement,
    pub case: u8,
    /// Fundamental unit of `K+`, positive at the identity embedding.
    pub u: PellSolution,
    /// Fundamental unit of `K` modulo roots of unity.
    pub v: OrderElement,
    /// `[U+_1 : N(U_1)]`.
    pub norm_index: u64,
}

impl UnitDescription {
    pub fn u_field(&self) -> KPlus {
        KPlus { r: BigRational::from_integer(self.u.x.clone()), s: BigRational::from_integer(self.u.y.clone()) }
    }
}

fn generator_of_roots(n: i64) -> Result<(u32, KElt)> {
    let minus_one = KElt::from_kplus(KPlus::rational(q(-1)));
    let Some(i) = minus_one.sqrt(n) else { return Ok((2, minus_one)) };
    if KElt::from_kplus(KPlus::rational(q(-3))).sqrt(n).is_some() {
        return Err(Error::Internal("unexpected cube roots of unity".into()));
    }
    match i.sqrt(n) {
        Some(z8) => {
            if z8.sqrt(n).is_some() {
                return Err(Error::Internal("unexpected 16th roots of unity".into()));
            }
            Ok((8, z8))
        }
        None => Ok((4, i)),
    }
}

/// Units of the maximal order `R_1` of `K = Q(sqrt(-2), sqrt(-D))`.
pub fn quartic_unit(d: u64) -> Result<UnitDescription> {
    check_d(d)?;
    let order = CMOrderBasis::new(d, 1)?;
    let n = 2 * d as i64;
    let (mu, zeta) = generator_of_roots(n)?;
    if (mu == 8) != (d == 1) || (mu != 2 && mu != 8) {
        return Err(Error::Internal(format!("unexpected roots of unity for D = {d}")));
    }
    let pell = pell_fundamental(2 * d)?;
    let u = KPlus { r: BigRational::from_integer(pell.x.clone()), s: BigRational::from_integer(pell.y.clone()) };
    let ue = KElt::from_kplus(u.clone());

    let mut case3 = None;
    let mut z = KElt::from_kplus(KPlus::rational(q(1)));
    for _ in 0..mu {
        if let Some(v) = z.mul(&ue, n).sqrt(n) {
            case3 = Some(v);
            break;
        }
        z = z.mul(&zeta, n);
    }
    let (case, v) = match case3 {
        Some(v) => {
            if v.rel_norm(n) != u && v.rel_norm(n) != u.scale(&q(-1)) {
                return Err(Error::Internal("square root of a unit has the wrong norm".into()));
            }
            // N(v) is totally positive, so it must be u itself
            if !u.is_totally_positive(n) || v.rel_norm(n) != u {
                return Err(Error::Internal("case 3 with u not totally positive".into()));
            }
            (3, v)
        }
        None if u.is_totally_positive(n) => (1, ue.clone()),
        None => (2, ue.clone()),
    };
    let to_coords = |e: &KElt| {
        from_field(&order, e)
            .map(|coords| OrderElement { coords })
            .ok_or_else(|| Error::Internal("unit is not integral".into()))
    };
    let v_coords = to_coords(&v)?;
    let one = BigInt::one();
    if v_coords.norm(&order) != one {
        return Err(Error::Internal("fundamental unit has norm other than 1".into()));
    }

    let tp = totally_positive_generator(2 * d)?;
    let tp = KPlus { r: BigRational::from_integer(tp.x), s: BigRational::from_integer(tp.y) };
    let nv = v.rel_norm(n);
    let norm_index = if nv == tp {
        1
    } else if nv == tp.mul(&tp, n) {
        2
    } else {
        return Err(Error::Internal("norm of the fundamental unit is not a power of the positive generator".into()));
    };
    let expected = if case == 1 { 2 } else { 1 };
    if norm_index != expected {
        return Err(Error::Internal("norm index disagrees with the case".into()));
    }
    Ok(UnitDescription { d, mu, zeta: to_coords(&zeta)?, case, u: pell, v: v_coords, norm_index })
}

fn reduce_mod(c: &[BigInt; 4], f: u64) -> Coords {
    let fb = BigInt::from(f);
    c.clone().map(|x| {
        let r = x.mod_floor(&fb);
        i128::try_from(r).expect("residue fits")
    })
}

fn mul_mod(order: &CMOrderBasis, a: &Coords, b: &Coords, f: i128) -> Coords {
    order.mul(a, b).map(|c| c.rem_euclid(f))
}

/// Membership of an `R_1` element in `R_f`.
pub fn in_rf(c: &Coords, f: i128) -> bool {
    c[2] % f == 0 && c[3] % f == 0
}

/// The pieces of `[U_1 : U_f]` and `[U+_f : N(U_f)]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitIndices {
    pub d: u64,
    pub f: u64,
    /// Least `k` with some `zeta^a v^k` in `R_f`; equals `[N(U_1) : N(U_f)]`.
    pub k: u64,
    pub mu: u64,
    pub mu_f: u64,
    /// `[U+_1 : U+_f]`.
    pub m: u64,
    /// `[U+_1 : N(U_1)]`.
    pub j: u64,
    /// `[U+_f : N(U_f)]`.
    pub idx: u64,
    /// `[U_1 : U_f]`.
    pub unit_index: u64,
}

pub fn unit_indices(d: u64, f: u64) -> Result<UnitIndices> {
    let desc = quartic_unit(d)?;
    unit_indices_from(&desc, f)
}

pub fn unit_indices_from(desc: &UnitDescription, f: u64) -> Result<UnitIndices> {
    let d = desc.d;
    if f == 0 || f % 2 == 0 {
        return Err(Error::Parameter(format!("conductor {f} must be odd and positive")));
    }
    let order = CMOrderBasis::new(d, 1)?;
    let fi = f as i128;
    let one: Coords = [1, 0, 0, 0].map(|c: i128| c.rem_euclid(fi));
    let zeta = reduce_mod(&desc.zeta.coords, f);
    let v = reduce_mod(&desc.v.coords, f);
    let mut roots = vec![one];
    for _ in 1..desc.mu {
        let next = mul_mod(&order, roots.last().unwrap(), &zeta, fi);
        roots.push(next);
    }
    let mu_f = roots.iter().filter(|z| in_rf(z, fi)).count() as u64;
    let mut k = 1u64;
    let mut p = v;
    let limit = 8 * (f as u64).pow(4);
    while !roots.iter().any(|z| in_rf(&mul_mod(&order, z, &p, fi), fi)) {
        p = mul_mod(&order, &p, &v, fi);
        k += 1;
        if k > limit {
            return Err(Error::Internal("unit power search did not terminate".into()));
        }
    }
    let m = unit_index_plus(d, f)?;
    let j = desc.norm_index;
    if (j * k) % m != 0 {
        return Err(Error::Internal(format!("[U+_f : N(U_f)] is not integral for D = {d}, f = {f}")));
    }
    let idx = j * k / m;
    let mu = desc.mu as u64;
    if mu % mu_f != 0 {
        return Err(Error::Internal("roots of unity in R_f do not form a subgroup".into()));
    }
    Ok(UnitIndices { d, f, k, mu, mu_f, m, j, idx, unit_index: k * mu / mu_f })
}

/// `[U+_f : N(U_f)]`.
pub fn norm_unit_index(d: u64, f: u64) -> Result<u64> {
    Ok(unit_indices(d, f)?.idx)
}
