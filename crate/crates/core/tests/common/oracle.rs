//! Independent oracles, each computing a value by a method that shares no
//! code path with the library routine it checks.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use g2census::biquadratic::{
    class_number_max, is_principal, ring_class_number, CMOrderBasis, OrderIdeal,
};
use g2census::curves::{counts_pair, field_for_q, quadratic_extension, GenusTwoModel};
use g2census::fields::{embed, FieldDesc, FieldElement};
use g2census::quadratic::{h_imag, pell_fundamental};

// ---- (a) class numbers of negative discriminants by SL2(Z) reduction ----

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// Reduces a positive definite form with explicit `S` and `T` moves.
fn sl2_reduce(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
    loop {
        // T^k: bring b into (-a, a]
        let k = (a - b).div_euclid(2 * a);
        c += k * b + k * k * a;
        b += 2 * k * a;
        if a > c {
            // S: (a, b, c) -> (c, -b, a)
            (a, b, c) = (c, -b, a);
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        return (a, b, c);
    }
}

/// Distinct reduced forms among every primitive form with `|b| <= |disc|`.
pub fn h_by_reduction(disc: i64) -> u64 {
    let n = disc.abs();
    let mut seen = BTreeSet::new();
    for b in -n..=n {
        let t = b * b - disc;
        if t % 4 != 0 {
            continue;
        }
        let ac = t / 4;
        for a in 1..=ac {
            if ac % a != 0 {
                continue;
            }
            let c = ac / a;
            if gcd(gcd(a, b), c) != 1 {
                continue;
            }
            seen.insert(sl2_reduce(a, b, c));
        }
    }
    seen.len() as u64
}

pub fn check_h_imag_oracle(max_abs: i64) -> Result<usize, String> {
    let mut checked = 0;
    for n in 3..=max_abs {
        let disc = -n;
        if disc.rem_euclid(4) > 1 {
            continue;
        }
        let lib = h_imag(disc).map_err(|e| e.to_string())?;
        let oracle = h_by_reduction(disc);
        if lib != oracle {
            return Err(format!("h({disc}): library {lib}, reduction oracle {oracle}"));
        }
        checked += 1;
    }
    Ok(checked)
}


// ---- (b) genus-2 point counts by a naive double loop ----

fn eval(field: &FieldDesc, coeffs: &[FieldElement], x: FieldElement) -> FieldElement {
    coeffs.iter().rev().fold(field.zero(), |acc, &c| field.add(field.mul(acc, x), c))
}

/// Affine solutions of `y^2 = f(x)` plus the points at infinity, all by
/// brute force over the field.
pub fn naive_count(field: &FieldDesc, coeffs: &[FieldElement]) -> u64 {
    let els: Vec<FieldElement> = field.elements().collect();
    let mut n = 0u64;
    for &x in &els {
        let fx = eval(field, coeffs, x);
        n += els.iter().filter(|&&y| field.mul(y, y) == fx).count() as u64;
    }
    if coeffs.len() == 6 {
        n + 1
    } else {
        let lead = *coeffs.last().unwrap();
        n + els.iter().filter(|&&y| field.mul(y, y) == lead).count() as u64
    }
}

fn random_model(rng: &mut StdRng, field: &Arc<FieldDesc>) -> GenusTwoModel {
    let q = field.order();
    loop {
        let len = if rng.gen_bool(0.5) { 6 } else { 7 };
        let mut c: Vec<FieldElement> =
            (0..len).map(|_| field.from_encoding(rng.gen_range(0..q)).unwrap()).collect();
        if c[len - 1].is_zero() {
            c[len - 1] = field.one();
        }
        if let Ok(m) = GenusTwoModel::new(field.clone(), c) {
            return m;
        }
    }
}

pub fn check_point_count_oracle(models_per_q: usize) -> Result<usize, String> {
    let mut rng = StdRng::seed_from_u64(0x6732);
    let mut checked = 0;
    for q in [3u64, 5, 7, 9] {
        let fq = field_for_q(q).map_err(|e| e.to_string())?;
        let fq2 = quadratic_extension(q).map_err(|e| e.to_string())?;
        for _ in 0..models_per_q {
            let m = random_model(&mut rng, &fq);
            let lifted: Vec<FieldElement> =
                m.coeffs().iter().map(|&c| embed(c, &fq, &fq2).unwrap()).collect();
            let want = (naive_count(&fq, m.coeffs()), naive_count(&fq2, &lifted));
            let got = counts_pair(&m).map_err(|e| e.to_string())?;
            if (got.n1, got.n2) != want {
                return Err(format!("q = {q}, model {:?}: library {got:?}, naive {want:?}", m.encodings()));
            }
            checked += 1;
        }
    }
    Ok(checked)
}



// ---- (c) ring class number at conductor 1 against the class group ----

pub fn check_level_one_class_numbers(ds: &[u64]) -> Result<(), String> {
    for &d in ds {
        let a = ring_class_number(d, 1).map_err(|e| e.to_string())?;
        let b = class_number_max(d).map_err(|e| e.to_string())?;
        if a != b {
            return Err(format!("D = {d}: ring class number {a}, class group {b}"));
        }
    }
    Ok(())
}


// ---- (d) Pell minimality ----

/// Exhaustive search bound on `y`.
const PELL_SEARCH: u64 = 20_000;

fn is_square_big(n: &BigInt) -> bool {
    n >= &BigInt::zero() && {
        let r = n.sqrt();
        &r * &r == *n
    }
}

fn pow_unit(a: &BigInt, b: &BigInt, n: u64, k: u32) -> (BigInt, BigInt) {
    let nn = BigInt::from(n);
    let (mut x, mut y) = (BigInt::one(), BigInt::zero());
    for _ in 0..k {
        (x, y) = (&x * a + &y * b * &nn, &x * b + &y * a);
    }
    (x, y)
}

fn small_primes(limit: u32) -> Vec<u32> {
    (2..=limit).filter(|&p| (2..p).take_while(|d| d * d <= p).all(|d| p % d != 0)).collect()
}

/// True if `x + y sqrt(n)` is the `k`-th power of some `a + b sqrt(n)` for
/// a prime `k`. Since the conjugate is tiny, `2a` is the real `k`-th root of
/// `x + y sqrt(n) ~ 2x`, so only a few candidates for `a` need testing.
pub fn is_proper_power(x: &BigInt, y: &BigInt, n: u64) -> bool {
    let bits = (BigInt::from(2) * x).bits() as u32;
    for k in small_primes(bits + 1) {
        let r: BigInt = (BigInt::from(2) * x).nth_root(k);
        let base: BigInt = &r / 2;
        for da in -2i32..=2 {
            let a = &base + da;
            if a <= BigInt::zero() {
                continue;
            }
            for s in [-1i32, 1] {
                let t = &a * &a + s;
                if t.is_zero() || &t % n != BigInt::zero() || !is_square_big(&(&t / n)) {
                    continue;
                }
                let b = (&t / n).sqrt();
                if pow_unit(&a, &b, n, k) == (x.clone(), y.clone()) {
                    return true;
                }
            }
        }
    }
    false
}

/// Returns `(checked, exhaustively searched)`.
pub fn check_pell_oracle(max_n: u64) -> Result<(usize, usize), String> {
    let mut checked = 0;
    let mut exhaustive = 0;
    for n in 2..=max_n {
        let r = (n as f64).sqrt() as u64;
        if (r - 1..=r + 1).any(|s| s * s == n) {
            continue;
        }
        let s = pell_fundamental(n).map_err(|e| e.to_string())?;
        let lhs = &s.x * &s.x - BigInt::from(n) * &s.y * &s.y;
        if lhs != BigInt::from(s.norm) || s.x <= BigInt::zero() || s.y <= BigInt::zero() {
            return Err(format!("N = {n}: {s:?} is not a solution"));
        }
        let limit = if s.y <= BigInt::from(PELL_SEARCH) {
            exhaustive += 1;
            u64::try_from(&s.y).unwrap() - 1
        } else {
            PELL_SEARCH
        };
        for y in 1..=limit {
            let t = n as u128 * (y as u128) * (y as u128);
            for v in [t - 1, t + 1] {
                let r = (v as f64).sqrt() as u128;
                if (r.saturating_sub(2)..=r + 2).any(|x| x * x == v) {
                    return Err(format!("N = {n}: smaller solution at y = {y}"));
                }
            }
        }
        if is_proper_power(&s.x, &s.y, n) {
            return Err(format!("N = {n}: returned unit is a proper power"));
        }
        checked += 1;
    }
    Ok((checked, exhaustive))
}



// ---- (e) ideal classes of R_3 for D = 1 by sublattice enumeration ----

/// Every upper-triangular HNF lattice of index at most `max_index`.
fn hnf_lattices(max_index: i128) -> Vec<[[i128; 4]; 4]> {
    let mut out = Vec::new();
    for d0 in 1..=max_index {
        for d1 in 1..=max_index / d0 {
            for d2 in 1..=max_index / (d0 * d1) {
                for d3 in 1..=max_index / (d0 * d1 * d2) {
                    let diag = [d0, d1, d2, d3];
                    let mut h = [[0i128; 4]; 4];
                    for i in 0..4 {
                        h[i][i] = diag[i];
                    }
                    let slots: Vec<(usize, usize)> =
                        (0..4).flat_map(|i| (i + 1..4).map(move |j| (i, j))).collect();
                    let total: i128 = slots.iter().map(|&(_, j)| diag[j]).product();
                    for mut code in 0..total {
                        for &(i, j) in &slots {
                            h[i][j] = code % diag[j];
                            code /= diag[j];
                        }
                        out.push(h);
                    }
                }
            }
        }
    }
    out
}

/// Ideal classes met by invertible ideals of `R_f` with norm at most `max_index`.
pub fn classes_by_enumeration(d: u64, f: u64, max_index: i128) -> Result<usize, String> {
    let order = CMOrderBasis::new(d, f).map_err(|e| e.to_string())?;
    let mut reps: Vec<OrderIdeal> = Vec::new();
    for h in hnf_lattices(max_index) {
        let Ok(i) = OrderIdeal::from_hnf(&order, h) else { continue };
        let n = i.norm();
        let mut unit = [[0i128; 4]; 4];
        for k in 0..4 {
            unit[k][k] = n;
        }
        let prod = i.mul(&i.norm_adjoint());
        if prod != OrderIdeal::from_hnf(&order, unit).unwrap() {
            continue;
        }
        let adj = i.norm_adjoint();
        let mut new_class = true;
        for r in &reps {
            if is_principal(&r.mul(&adj)).map_err(|e| e.to_string())?.is_some() {
                new_class = false;
                break;
            }
        }
        if new_class {
            reps.push(i);
        }
    }
    Ok(reps.len())
}
