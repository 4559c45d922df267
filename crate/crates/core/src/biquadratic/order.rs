//! The orders `R_f = O + f w O` in `K = Q(sqrt(-2), sqrt(-D))` with basis
//! `{1, x, y, xy}`, `x = sqrt(-2)`, `y = f w`, `w = (sqrt(2D) + sqrt(-2)) / 2`.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{param, Error, Result};

/// Coordinates over `{1, x, y, xy}`.
pub type Coords = [i128; 4];

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CMOrderBasis {
    pub d: u64,
    pub f: u64,
}

/// Sign of `a + b sqrt(n)` for integers `a, b` and non-square `n > 0`.
pub fn sign_quad(a: i128, b: i128, n: i128) -> i32 {
    let sa = a.signum();
    let sb = b.signum();
    if sa >= 0 && sb >= 0 {
        return (sa + sb).signum() as i32;
    }
    if sa <= 0 && sb <= 0 {
        return -((-(sa + sb)).signum() as i32);
    }
    // opposite signs: compare a^2 with b^2 n
    let lhs = a * a;
    let rhs = b * b * n;
    if sa > 0 {
        (lhs - rhs).signum() as i32
    } else {
        (rhs - lhs).signum() as i32
    }
}

pub(crate) fn check_d(d: u64) -> Result<()> {
    if d == 0 || d % 4 != 1 || !arith::is_squarefree(d) {
        return param(format!("D = {d} must be a positive squarefree integer congruent to 1 mod 4"));
    }
    Ok(())
}

/// Structure-constant multiplication, shared by the fixed-width and big-integer paths.
fn mul_generic<T>(a: &[T; 4], b: &[T; 4], f: &T, k: &T) -> [T; 4]
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + From<i32>,
{
    let two = || T::from(2);
    let p = |i: usize, j: usize| a[i].clone() * b[j].clone();
    let c0 = p(0, 0) - two() * p(1, 1) + k.clone() * p(2, 2) - two() * k.clone() * p(3, 3);
    let c1 = p(0, 1) + p(1, 0) + k.clone() * (p(2, 3) + p(3, 2));
    let c2 = p(0, 2) + p(2, 0) - two() * (p(1, 3) + p(3, 1)) - two() * f.clone() * (p(2, 3) + p(3, 2));
    let c3 = p(0, 3) + p(3, 0) + p(1, 2) + p(2, 1) + f.clone() * p(2, 2) - two() * f.clone() * p(3, 3);
    [c0, c1, c2, c3]
}

fn sigma_generic<T>(c: &[T; 4], f: &T) -> [T; 4]
where
    T: Clone + Sub<Output = T> + Mul<Output = T> + Neg<Output = T> + From<i32>,
{
    [
        c[0].clone() - T::from(2) * f.clone() * c[3].clone(),
        -c[1].clone() - f.clone() * c[2].clone(),
        c[2].clone(),
        -c[3].clone(),
    ]
}

fn tau_generic<T>(c: &[T; 4], f: &T) -> [T; 4]
where
    T: Clone + Add<Output = T> + Sub<Output = T> + Mul<Output = T> + Neg<Output = T> + From<i32>,
{
    [
        c[0].clone() - T::from(2) * f.clone() * c[3].clone(),
        c[1].clone() + f.clone() * c[2].clone(),
        -c[2].clone(),
        -c[3].clone(),
    ]
}

impl CMOrderBasis {
    pub fn new(d: u64, f: u64) -> Result<CMOrderBasis> {
        check_d(d)?;
        if f == 0 || f % 2 == 0 {
            return param(format!("conductor f = {f} must be odd and positive"));
        }
        let b = CMOrderBasis { d, f };
        b.check_structure()?;
        Ok(b)
    }

    pub fn fi(&self) -> i128 {
        self.f as i128
    }

    /// `2D`, the radicand of the real subfield.
    pub fn n(&self) -> i128 {
        2 * self.d as i128
    }

    /// `f^2 (D+1) / 2`, the constant term of `y^2`.
    pub fn k(&self) -> i128 {
        self.fi() * self.fi() * (self.d as i128 + 1) / 2
    }

    pub fn one(&self) -> Coords {
        [1, 0, 0, 0]
    }

    pub fn mul(&self, a: &Coords, b: &Coords) -> Coords {
        mul_generic(a, b, &self.fi(), &self.k())
    }

    pub fn mul_big(&self, a: &[BigInt; 4], b: &[BigInt; 4]) -> [BigInt; 4] {
        let f = BigInt::from(self.f);
        let k = BigInt::from(self.k());
        let a = a.clone();
        let b = b.clone();
        mul_generic(&a.map(Big), &b.map(Big), &Big(f), &Big(k)).map(|c| c.0)
    }

    /// Complex conjugation: `x -> -x`, `y -> y - f x`.
    pub fn sigma(&self, c: &Coords) -> Coords {
        sigma_generic(c, &self.fi())
    }

    /// The automorphism fixing `sqrt(-2)`: `y -> -y + f x`.
    pub fn tau(&self, c: &Coords) -> Coords {
        tau_generic(c, &self.fi())
    }

    /// The automorphism fixing `sqrt(-D)`: `x -> -x`, `y -> -y`.
    pub fn sigma_tau(&self, c: &Coords) -> Coords {
        [c[0], -c[1], -c[2], c[3]]
    }

    pub fn sigma_big(&self, c: &[BigInt; 4]) -> [BigInt; 4] {
        sigma_generic(&c.clone().map(Big), &Big(BigInt::from(self.f))).map(|c| c.0)
    }

    /// Row `i` holds the coordinates of `e_i * a`, so `z * a = z . M`.
    pub fn mul_matrix(&self, a: &Coords) -> [[i128; 4]; 4] {
        let mut m = [[0; 4]; 4];
        for (i, row) in m.iter_mut().enumerate() {
            let mut e = [0; 4];
            e[i] = 1;
            *row = self.mul(&e, a);
        }
        m
    }

    pub fn trace(&self, a: &Coords) -> i128 {
        let m = self.mul_matrix(a);
        (0..4).map(|i| m[i][i]).sum()
    }

    /// `N_{K/Q}(a)`, as the determinant of the multiplication matrix.
    pub fn norm(&self, a: &Coords) -> i128 {
        det4(&self.mul_matrix(a))
    }

    pub fn norm_big(&self, a: &[BigInt; 4]) -> BigInt {
        let s = self.sigma_big(a);
        let n = self.mul_big(a, &s);
        // n = c0 + c2 (y - f x / 2) lies in K+; its norm to Q is c0^2 - (c2 f / 2)^2 2D
        let f = BigInt::from(self.f);
        let c0 = &n[0];
        let b = &n[2] * &f;
        (BigInt::from(4) * c0 * c0 - &b * &b * BigInt::from(self.n())) / BigInt::from(4)
    }

    /// `a * conj(a)` as `(A + B sqrt(2D)) / 2`, returned as `(A, B)`.
    pub fn rel_norm(&self, a: &Coords) -> (i128, i128) {
        let n = self.mul(a, &self.sigma(a));
        debug_assert!(n[3] == 0 && 2 * n[1] == -self.fi() * n[2]);
        (2 * n[0], n[2] * self.fi())
    }

    /// `(Re phi_1, Im phi_1, Re phi_2, Im phi_2)` for the two embeddings
    /// with `sqrt(-2) -> i sqrt 2` and `sqrt(2D) -> ±sqrt(2D)`.
    pub fn embed(&self, a: &Coords) -> [f64; 4] {
        let f = self.f as f64;
        let rn = (self.n() as f64).sqrt();
        let rd = (self.d as f64).sqrt();
        let r2 = std::f64::consts::SQRT_2;
        let (a0, a1, a2, a3) = (a[0] as f64, a[1] as f64, a[2] as f64, a[3] as f64);
        let re_common = a0 - a3 * f;
        let re_s = a2 * f * rn / 2.0;
        let im_common = a1 * r2 + a2 * f * r2 / 2.0;
        let im_s = a3 * f * rd;
        [re_common + re_s, im_common + im_s, re_common - re_s, im_common - im_s]
    }

    /// `Tr(e_i e_j)`.
    pub fn trace_form(&self) -> [[i128; 4]; 4] {
        let mut t = [[0; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                let mut a = [0; 4];
                let mut b = [0; 4];
                a[i] = 1;
                b[j] = 1;
                t[i][j] = self.trace(&self.mul(&a, &b));
            }
        }
        t
    }

    fn check_structure(&self) -> Result<()> {
        let e = |i: usize| {
            let mut v = [0i128; 4];
            v[i] = 1;
            v
        };
        for i in 0..4 {
            for j in 0..4 {
                if self.mul(&e(i), &e(j)) != self.mul(&e(j), &e(i)) {
                    return Err(Error::Internal("structure constants not commutative".into()));
                }
                for k in 0..4 {
                    let l = self.mul(&self.mul(&e(i), &e(j)), &e(k));
                    let r = self.mul(&e(i), &self.mul(&e(j), &e(k)));
                    if l != r {
                        return Err(Error::Internal("structure constants not associative".into()));
                    }
                }
            }
        }
        let f = self.fi();
        let want = 256 * (self.d as i128).pow(2) * f.pow(4);
        if det4(&self.trace_form()) != want {
            return Err(Error::Internal("trace form has the wrong discriminant".into()));
        }
        Ok(())
    }

    /// Frobenius element `((1 - F)/2) x + (F / f) y` for `2q - 1 = F^2 D`, `f | F`.
    pub fn frobenius(&self, big_f: u64) -> Result<Coords> {
        if big_f % self.f != 0 || big_f % 2 == 0 {
            return param(format!("f = {} must divide the odd integer F = {big_f}", self.f));
        }
        let bf = big_f as i128;
        Ok([0, (1 - bf) / 2, bf / self.fi(), 0])
    }

    /// Characteristic polynomial of multiplication by `a`, low degree first.
    pub fn char_poly(&self, a: &Coords) -> [i128; 5] {
        let m = self.mul_matrix(a);
        charpoly4(&m)
    }
}

/// Newtype letting `mul_generic` run over big integers.
#[derive(Clone)]
struct Big(BigInt);

impl Add for Big {
    type Output = Big;
    fn add(self, o: Big) -> Big {
        Big(self.0 + o.0)
    }
}
impl Sub for Big {
    type Output = Big;
    fn sub(self, o: Big) -> Big {
        Big(self.0 - o.0)
    }
}
impl Mul for Big {
    type Output = Big;
    fn mul(self, o: Big) -> Big {
        Big(self.0 * o.0)
    }
}
impl Neg for Big {
    type Output = Big;
    fn neg(self) -> Big {
        Big(-self.0)
    }
}
impl From<i32> for Big {
    fn from(v: i32) -> Big {
        Big(BigInt::from(v))
    }
}

pub fn det3(m: [[i128; 3]; 3]) -> i128 {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

fn minor(m: &[[i128; 4]; 4], r: usize, c: usize) -> [[i128; 3]; 3] {
    let mut out = [[0; 3]; 3];
    let mut oi = 0;
    for i in 0..4 {
        if i == r {
            continue;
        }
        let mut oj = 0;
        for j in 0..4 {
            if j == c {
                continue;
            }
            out[oi][oj] = m[i][j];
            oj += 1;
        }
        oi += 1;
    }
    out
}

pub fn det4(m: &[[i128; 4]; 4]) -> i128 {
    (0..4)
        .map(|j| {
            let s = if j % 2 == 0 { 1 } else { -1 };
            s * m[0][j] * det3(minor(m, 0, j))
        })
        .sum()
}

/// Adjugate, so that `m * adj(m) = det(m) I`.
pub fn adj4(m: &[[i128; 4]; 4]) -> [[i128; 4]; 4] {
    let mut a = [[0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let s = if (i + j) % 2 == 0 { 1 } else { -1 };
            a[j][i] = s * det3(minor(m, i, j));
        }
    }
    a
}

/// Faddeev-LeVerrier characteristic polynomial, low degree first.
pub fn charpoly4(m: &[[i128; 4]; 4]) -> [i128; 5] {
    let mut c = [0i128; 5];
    c[4] = 1;
    let mut mk = [[0i128; 4]; 4];
    for k in 1..=4usize {
        // mk = m * (mk_prev + c_{n-k+1} I)
        let mut prev = mk;
        for (i, row) in prev.iter_mut().enumerate() {
            row[i] += c[4 - k + 1];
        }
        let mut next = [[0i128; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                next[i][j] = (0..4).map(|t| m[i][t] * prev[t][j]).sum();
            }
        }
        let tr: i128 = (0..4).map(|i| next[i][i]).sum();
        c[4 - k] = -tr / k as i128;
        mk = next;
    }
    c
}

/// An element of `R_f` with big-integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct OrderElement {
    pub coords: [BigInt; 4],
}

impl OrderElement {
    pub fn from_small(c: Coords) -> OrderElement {
        OrderElement { coords: c.map(BigInt::from) }
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &OrderElement) -> OrderElement {
        let mut c = self.coords.clone();
        for (a, b) in c.iter_mut().zip(&other.coords) {
            *a += b;
        }
        OrderElement { coords: c }
    }

    pub fn mul(&self, order: &CMOrderBasis, other: &OrderElement) -> OrderElement {
        OrderElement { coords: order.mul_big(&self.coords, &other.coords) }
    }

    pub fn conj_complex(&self, order: &CMOrderBasis) -> OrderElement {
        OrderElement { coords: order.sigma_big(&self.coords) }
    }

    /// `N_{K/Q}`; always nonnegative since `K` is CM.
    pub fn norm(&self, order: &CMOrderBasis) -> BigInt {
        order.norm_big(&self.coords)
    }

    /// `N_{K/K+}` as `(a, b)` with value `a + b sqrt(2D) / 2`.
    pub fn norm_kplus(&self, order: &CMOrderBasis) -> (BigInt, BigInt) {
        let n = order.mul_big(&self.coords, &order.sigma_big(&self.coords));
        (n[0].clone(), &n[2] * BigInt::from(order.f))
    }

    pub fn trace(&self, order: &CMOrderBasis) -> BigInt {
        // Tr(1) = 4, Tr(x) = Tr(w) = 0, Tr(xw) = -4f
        BigInt::from(4) * (&self.coords[0] - BigInt::from(order.f) * &self.coords[3])
    }

    pub fn to_small(&self) -> Option<Coords> {
        use num_traits::ToPrimitive;
        let mut out = [0i128; 4];
        for (o, c) in out.iter_mut().zip(&self.coords) {
            *o = c.to_i128()?;
        }
        Some(out)
    }

    pub fn is_negative_unit(&self) -> bool {
        self.coords[0].is_negative() && self.coords[1..].iter().all(|c| c.is_zero())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn structure() {
        let o = CMOrderBasis::new(5, 1).unwrap();
        let x = [0, 1, 0, 0];
        let y = [0, 0, 1, 0];
        let xy = [0, 0, 0, 1];
        assert_eq!(o.mul(&x, &x), [-2, 0, 0, 0]);
        // y^2 = x y + 3
        assert_eq!(o.mul(&y, &y), [3, 0, 0, 1]);
        assert_eq!(o.mul(&x, &y), xy);
        assert!(CMOrderBasis::new(3, 1).is_err());
        assert!(CMOrderBasis::new(5, 2).is_err());
        assert!(CMOrderBasis::new(45, 1).is_err());
        for (d, f) in [(1, 1), (5, 3), (13, 5), (21, 9)] {
            let o = CMOrderBasis::new(d, f).unwrap();
            let want = 256 * (d as i128).pow(2) * (f as i128).pow(4);
            assert_eq!(det4(&o.trace_form()), want);
        }
    }

    #[test]
    fn norms_traces_conjugates() {
        let o = CMOrderBasis::new(5, 3).unwrap();
        assert_eq!(o.norm(&[0, 1, 0, 0]), 4);
        assert_eq!(o.trace(&[1, 0, 0, 0]), 4);
        assert_eq!(o.sigma(&[0, 0, 1, 0]), [0, -3, 1, 0]);
        let a = [3, -1, 2, 5];
        let big = OrderElement::from_small(a);
        assert_eq!(big.norm(&o), BigInt::from(o.norm(&a)));
        assert_eq!(big.trace(&o), BigInt::from(o.trace(&a)));
        // sigma and tau are ring automorphisms of order 2
        let b = [-4, 7, 1, -2];
        for g in [CMOrderBasis::sigma, CMOrderBasis::tau, CMOrderBasis::sigma_tau] {
            assert_eq!(g(&o, &o.mul(&a, &b)), o.mul(&g(&o, &a), &g(&o, &b)));
            assert_eq!(g(&o, &g(&o, &a)), a);
        }
    }

    #[test]
    fn embeddings_are_multiplicative() {
        let o = CMOrderBasis::new(13, 3).unwrap();
        let a = [2, -1, 3, 1];
        let b = [-5, 2, 1, -1];
        let (ea, eb, ec) = (o.embed(&a), o.embed(&b), o.embed(&o.mul(&a, &b)));
        for s in 0..2 {
            let (ar, ai, br, bi) = (ea[2 * s], ea[2 * s + 1], eb[2 * s], eb[2 * s + 1]);
            assert!((ar * br - ai * bi - ec[2 * s]).abs() < 1e-6);
            assert!((ar * bi + ai * br - ec[2 * s + 1]).abs() < 1e-6);
        }
        let n = o.norm(&a) as f64;
        let prod = (ea[0].powi(2) + ea[1].powi(2)) * (ea[2].powi(2) + ea[3].powi(2));
        assert!((n - prod).abs() / n < 1e-9);
    }

    #[test]
    fn frobenius_element() {
        // q = 13: 2q - 1 = 25 = 5^2 * 1
        for (q, d, big_f) in [(13i128, 1u64, 5u64), (3, 5, 1), (5, 1, 3), (7, 13, 1), (41, 1, 9)] {
            for f in crate::arith::divisors(big_f) {
                let o = CMOrderBasis::new(d, f).unwrap();
                let pi = o.frobenius(big_f).unwrap();
                assert_eq!(o.mul(&pi, &o.sigma(&pi)), [q, 0, 0, 0]);
                assert_eq!(o.char_poly(&pi), [q * q, 0, 2 - 2 * q, 0, 1]);
            }
        }
    }
}
