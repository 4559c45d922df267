//! Quadratic orders through binary quadratic forms: class numbers of
//! imaginary orders, narrow class numbers of real orders, and units.

use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, isqrt, is_square};
use crate::error::{param, Error, Result};

/// A quadratic discriminant: `0` or `1 mod 4`, and not a square when positive.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadDisc(i64);

impl QuadDisc {
    pub fn new(d: i64) -> Result<QuadDisc> {
        if d == 0 || !matches!(d.rem_euclid(4), 0 | 1) {
            return param(format!("{d} is not a quadratic discriminant"));
        }
        if d > 0 && is_square(d as u64) {
            return param(format!("{d} is a perfect square"));
        }
        Ok(QuadDisc(d))
    }

    pub fn value(self) -> i64 {
        self.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QuadForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
}

impl QuadForm {
    pub fn discriminant(&self) -> i64 {
        self.b * self.b - 4 * self.a * self.c
    }

    pub fn is_primitive(&self) -> bool {
        gcd(gcd(self.a, self.b), self.c) == 1
    }
}

/// Reduced primitive positive definite forms of discriminant `disc < 0`.
pub fn reduced_forms_imag(disc: i64) -> Result<Vec<QuadForm>> {
    let d = QuadDisc::new(disc)?;
    if d.is_positive() {
        return param(format!("expected a negative discriminant, got {disc}"));
    }
    let n = -disc;
    let mut out = Vec::new();
    let mut a = 1i64;
    // a <= sqrt(|disc| / 3)
    while 3 * a * a <= n {
        for b in -a..=a {
            if (b - disc).rem_euclid(2) != 0 {
                continue;
            }
            let num = b * b - disc;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if b < 0 && (-b == a || a == c) {
                continue;
            }
            let f = QuadForm { a, b, c };
            if f.is_primitive() {
                out.push(f);
            }
        }
        a += 1;
    }
    Ok(out)
}

/// `#Cl` of the imaginary quadratic order of discriminant `disc`.
pub fn h_imag(disc: i64) -> Result<u64> {
    Ok(reduced_forms_imag(disc)?.len() as u64)
}

fn positive_disc(disc: i64) -> Result<QuadDisc> {
    let d = QuadDisc::new(disc)?;
    if !d.is_positive() {
        return param(format!("expected a positive discriminant, got {disc}"));
    }
    Ok(d)
}

/// `sqrt(disc) - b < 2|a| < sqrt(disc) + b` and `0 < b < sqrt(disc)`, exactly.
fn is_reduced_indefinite(disc: i64, f: &QuadForm) -> bool {
    let (a2, b) = (2 * f.a.abs(), f.b);
    if b <= 0 || b * b >= disc {
        return false;
    }
    let upper = a2 + b;
    let lower = a2 - b;
    upper * upper > disc && (lower <= 0 || lower * lower < disc)
}

/// All reduced primitive indefinite forms of discriminant `disc > 0`.
pub fn reduced_forms_real(disc: i64) -> Result<Vec<QuadForm>> {
    positive_disc(disc)?;
    let s = isqrt(disc as u64) as i64;
    let mut out = Vec::new();
    for b in 1..=s {
        if (b - disc).rem_euclid(2) != 0 {
            continue;
        }
        let n = (disc - b * b) / 4;
        for a0 in crate::arith::divisors(n as u64) {
            for a in [a0 as i64, -(a0 as i64)] {
                let f = QuadForm { a, b, c: -n / a };
                if is_reduced_indefinite(disc, &f) && f.is_primitive() {
                    out.push(f);
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// One reduction step on a reduced indefinite form.
pub fn rho(disc: i64, f: &QuadForm) -> QuadForm {
    let s = isqrt(disc as u64) as i64;
    let m = 2 * f.c.abs();
    // r = -b mod m, taken in [s + 1 - m, s]
    let r = s - (s + f.b).rem_euclid(m);
    QuadForm { a: f.c, b: r, c: (r * r - disc) / (4 * f.c) }
}

/// Narrow class number of the real quadratic order of discriminant `disc`,
/// as the number of ρ-cycles of reduced forms.
pub fn narrow_class_real(disc: i64) -> Result<u64> {
    let forms = reduced_forms_real(disc)?;
    let index: HashMap<QuadForm, usize> = forms.iter().enumerate().map(|(i, f)| (*f, i)).collect();
    let mut seen = vec![false; forms.len()];
    let mut cycles = 0;
    for start in 0..forms.len() {
        if seen[start] {
            continue;
        }
        cycles += 1;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            let next = rho(disc, &forms[i]);
            i = *index.get(&next).ok_or_else(|| {
                Error::Internal(format!("reduction step left the reduced set at {next:?}"))
            })?;
        }
        if i != start {
            return Err(Error::Internal("reduction step is not a permutation".into()));
        }
    }
    Ok(cycles)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PellSolution {
    pub x: BigInt,
    pub y: BigInt,
    pub norm: i8,
}

/// Least positive solution of `x^2 - n y^2 = ±1`, from the continued fraction of `sqrt(n)`.
pub fn pell_fundamental(n: u64) -> Result<PellSolution> {
    if n == 0 || is_square(n) {
        return param(format!("{n} must be a positive non-square"));
    }
    let a0 = isqrt(n);
    let big_n = BigInt::from(n);
    let (mut m, mut d, mut a) = (0u64, 1u64, a0);
    let (mut p_prev, mut p) = (BigInt::one(), BigInt::from(a0));
    let (mut q_prev, mut q) = (BigInt::zero(), BigInt::one());
    loop {
        let norm = &p * &p - &big_n * &q * &q;
        if norm.abs().is_one() {
            return Ok(PellSolution { x: p, y: q, norm: if norm.is_positive() { 1 } else { -1 } });
        }
        m = d * a - m;
        d = (n - m * m) / d;
        a = (a0 + m) / d;
        let p_next = BigInt::from(a) * &p + &p_prev;
        let q_next = BigInt::from(a) * &q + &q_prev;
        p_prev = std::mem::replace(&mut p, p_next);
        q_prev = std::mem::replace(&mut q, q_next);
    }
}

/// Norm sign of the fundamental unit of the order of discriminant `disc > 0`.
///
/// For `disc = 1 mod 4` the unit of `Z[sqrt(disc)]` is the fundamental unit
/// or its cube, which has the same norm.
pub fn fundamental_unit_norm(disc: i64) -> Result<i8> {
    positive_disc(disc)?;
    let n = if disc % 4 == 0 { disc / 4 } else { disc };
    Ok(pell_fundamental(n as u64)?.norm)
}

/// `(h, h+)` for a real quadratic order.
pub fn wide_from_narrow(disc: i64) -> Result<(u64, u64)> {
    let hp = narrow_class_real(disc)?;
    if fundamental_unit_norm(disc)? == -1 {
        return Ok((hp, hp));
    }
    if hp % 2 != 0 {
        return Err(Error::Internal(format!(
            "odd narrow class number {hp} with a norm +1 unit at discriminant {disc}"
        )));
    }
    Ok((hp / 2, hp))
}

/// `x + y sqrt(n)` with big integer coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RealQuadUnit {
    pub x: BigInt,
    pub y: BigInt,
    pub n: u64,
}

impl RealQuadUnit {
    pub fn mul(&self, other: &RealQuadUnit) -> RealQuadUnit {
        RealQuadUnit {
            x: &self.x * &other.x + BigInt::from(self.n) * &self.y * &other.y,
            y: &self.x * &other.y + &self.y * &other.x,
            n: self.n,
        }
    }

    pub fn norm(&self) -> BigInt {
        &self.x * &self.x - BigInt::from(self.n) * &self.y * &self.y
    }
}

/// Generator of the totally positive units of `Z[sqrt(n)]`.
pub fn totally_positive_generator(n: u64) -> Result<RealQuadUnit> {
    let e = pell_fundamental(n)?;
    let u = RealQuadUnit { x: e.x, y: e.y, n };
    Ok(if e.norm == 1 { u } else { u.mul(&u) })
}

/// `[U+_1 : U+_f]` for `Z[sqrt(2D)] ⊇ Z[f sqrt(2D)]`.
pub fn unit_index_plus(d: u64, f: u64) -> Result<u64> {
    if f == 0 {
        return param("conductor must be positive");
    }
    if f == 1 {
        return Ok(1);
    }
    let n = 2 * d;
    let eta = totally_positive_generator(n)?;
    let fb = BigInt::from(f);
    let ex = (&eta.x % &fb).to_u128().expect("reduced mod f");
    let ey = (&eta.y % &fb).to_u128().expect("reduced mod f");
    let (f, n) = (f as u128, n as u128);
    let (mut x, mut y) = (ex, ey);
    let mut k = 1;
    while y % f != 0 {
        let nx = (x * ex + n % f * (y * ey % f)) % f;
        let ny = (x * ey + y * ex) % f;
        x = nx;
        y = ny;
        k += 1;
        if k > 4 * f * f {
            return Err(Error::Internal("unit index search did not terminate".into()));
        }
    }
    Ok(k as u64)
}
