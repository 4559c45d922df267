//! Ideals of `R_f` as full-rank sublattices of `Z^4` in Hermite normal form.

use crate::error::{param, Error, Result};

use super::order::{adj4, CMOrderBasis, Coords};

/// Upper-triangular, positive diagonal, entries above each pivot reduced into `[0, pivot)`.
pub type Hnf = [[i128; 4]; 4];

pub const IDENTITY: Hnf = [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]];

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

fn reduce_tail(v: &mut Coords, from: usize, m: i128) {
    for c in v.iter_mut().skip(from) {
        *c = c.rem_euclid(m);
    }
}

/// HNF of the lattice spanned by `gens` together with `m Z^4`.
pub fn hnf_mod(gens: &[Coords], m: i128) -> Hnf {
    assert!(m > 0, "HNF modulus must be positive");
    let mut rows: Vec<Coords> = gens
        .iter()
        .map(|g| {
            let mut r = *g;
            reduce_tail(&mut r, 0, m);
            r
        })
        .filter(|r| r.iter().any(|&c| c != 0))
        .collect();
    let mut h = [[0i128; 4]; 4];
    for col in 0..4 {
        let mut pivot = [0i128; 4];
        pivot[col] = m;
        for r in rows.iter_mut() {
            if r[col] == 0 {
                continue;
            }
            let (g, s, t) = ext_gcd(pivot[col], r[col]);
            let (pa, ra) = (pivot[col] / g, r[col] / g);
            let mut np = [0i128; 4];
            let mut nr = [0i128; 4];
            for j in col..4 {
                np[j] = s * pivot[j] + t * r[j];
                nr[j] = ra * pivot[j] - pa * r[j];
            }
            reduce_tail(&mut np, col + 1, m);
            reduce_tail(&mut nr, col + 1, m);
            pivot = np;
            *r = nr;
        }
        debug_assert!(pivot[col] > 0 && m % pivot[col] == 0);
        // the implicit generator m e_col minus its multiple of the pivot
        let mult = m / pivot[col];
        let mut extra = [0i128; 4];
        for j in col + 1..4 {
            extra[j] = mult * pivot[j];
        }
        reduce_tail(&mut extra, col + 1, m);
        rows.retain(|r| r.iter().any(|&c| c != 0));
        if extra.iter().any(|&c| c != 0) {
            rows.push(extra);
        }
        h[col] = pivot;
    }
    for i in 1..4 {
        for j in 0..i {
            let q = h[j][i].div_euclid(h[i][i]);
            if q != 0 {
                for t in i..4 {
                    h[j][t] -= q * h[i][t];
                }
            }
        }
    }
    h
}

pub fn hnf_det(h: &Hnf) -> i128 {
    (0..4).map(|i| h[i][i]).product()
}

/// Coefficients of `v` over the rows of `h`, if `v` lies in the lattice.
pub fn solve(h: &Hnf, v: &Coords) -> Option<[i128; 4]> {
    let mut r = *v;
    let mut u = [0i128; 4];
    for i in 0..4 {
        if r[i] % h[i][i] != 0 {
            return None;
        }
        u[i] = r[i] / h[i][i];
        for t in i..4 {
            r[t] -= u[i] * h[i][t];
        }
    }
    Some(u)
}

pub fn lattice_contains(h: &Hnf, v: &Coords) -> bool {
    solve(h, v).is_some()
}

/// `gcd` of all entries.
pub fn content(h: &Hnf) -> i128 {
    h.iter()
        .flatten()
        .fold(0i128, |g, &c| crate::arith::gcd_u64(g as u64, c.unsigned_abs() as u64) as i128)
}

pub fn divide(h: &Hnf, g: i128) -> Hnf {
    h.map(|row| row.map(|c| c / g))
}

/// Product lattice of two integral ideals; `m` must be a positive integer in the product.
pub fn mul_lattices(order: &CMOrderBasis, a: &Hnf, b: &Hnf, m: i128) -> Hnf {
    let mut gens = Vec::with_capacity(16);
    for ra in a {
        for rb in b {
            gens.push(order.mul(ra, rb));
        }
    }
    hnf_mod(&gens, m)
}

/// `v^{-1} L`, scaled by `N(v)`: returns `(N(v), HNF of N(v) v^{-1} L)`.
///
/// Requires `v` in `L`, which makes `1` lie in `v^{-1} L` and `N(v) Z^4` lie in
/// the scaled lattice.
pub fn divide_by_element(order: &CMOrderBasis, l: &Hnf, v: &Coords) -> (i128, Hnf) {
    let mv = order.mul_matrix(v);
    let n = super::order::det4(&mv);
    let adj = adj4(&mv);
    let gens: Vec<Coords> = l
        .iter()
        .map(|row| {
            let mut out = [0i128; 4];
            for (j, o) in out.iter_mut().enumerate() {
                let mut acc = 0i128;
                for t in 0..4 {
                    acc = (acc + (row[t] * adj[t][j]).rem_euclid(n)) % n;
                }
                *o = acc;
            }
            out
        })
        .collect();
    (n, hnf_mod(&gens, n))
}

/// An integral ideal of `R_f`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OrderIdeal {
    pub order: CMOrderBasis,
    pub hnf: Hnf,
}

impl OrderIdeal {
    /// The ideal generated by `gens`; `multiple` must be a positive integer in it.
    pub fn from_generators(order: &CMOrderBasis, gens: &[Coords], multiple: i128) -> Result<OrderIdeal> {
        if multiple <= 0 {
            return param("an ideal needs a positive integer multiple");
        }
        let mut all = Vec::new();
        for g in gens {
            for e in 0..4 {
                let mut b = [0i128; 4];
                b[e] = 1;
                all.push(order.mul(g, &b));
            }
        }
        let id = OrderIdeal { order: order.clone(), hnf: hnf_mod(&all, multiple) };
        if !id.contains(&[multiple, 0, 0, 0]) {
            return Err(Error::Internal("declared multiple is not in the ideal".into()));
        }
        Ok(id)
    }

    pub fn unit(order: &CMOrderBasis) -> OrderIdeal {
        OrderIdeal { order: order.clone(), hnf: IDENTITY }
    }

    pub fn principal(order: &CMOrderBasis, a: &Coords) -> Result<OrderIdeal> {
        let n = order.norm(a);
        if n == 0 {
            return param("the zero ideal is not allowed");
        }
        OrderIdeal::from_generators(order, &[*a], n.abs())
    }

    /// Wraps an HNF after checking closure under `x` and `y`.
    pub fn from_hnf(order: &CMOrderBasis, hnf: Hnf) -> Result<OrderIdeal> {
        if (0..4).any(|i| hnf[i][i] <= 0) {
            return param("not a full-rank lattice");
        }
        let id = OrderIdeal { order: order.clone(), hnf };
        if !id.is_ideal() {
            return param("lattice is not closed under multiplication by the order");
        }
        Ok(id)
    }

    pub fn norm(&self) -> i128 {
        hnf_det(&self.hnf)
    }

    pub fn contains(&self, v: &Coords) -> bool {
        lattice_contains(&self.hnf, v)
    }

    pub fn is_ideal(&self) -> bool {
        let gens = [[0, 1, 0, 0], [0, 0, 1, 0]];
        self.hnf
            .iter()
            .all(|row| gens.iter().all(|g| self.contains(&self.order.mul(row, g))))
    }

    pub fn mul(&self, other: &OrderIdeal) -> OrderIdeal {
        OrderIdeal { order: self.order.clone(), hnf: mul_lattices(&self.order, &self.hnf, &other.hnf, self.norm() * other.norm()) }
    }

    /// Image under complex conjugation.
    pub fn conjugate(&self) -> OrderIdeal {
        let gens: Vec<Coords> = self.hnf.iter().map(|r| self.order.sigma(r)).collect();
        OrderIdeal { order: self.order.clone(), hnf: hnf_mod(&gens, self.norm()) }
    }

    /// Image under an arbitrary automorphism given as a coordinate map.
    pub fn map(&self, g: impl Fn(&CMOrderBasis, &Coords) -> Coords) -> OrderIdeal {
        let gens: Vec<Coords> = self.hnf.iter().map(|r| g(&self.order, r)).collect();
        OrderIdeal { order: self.order.clone(), hnf: hnf_mod(&gens, self.norm()) }
    }

    /// `N(I) I^{-1}` for invertible `I`, as the product of the three other conjugates.
    pub fn norm_adjoint(&self) -> OrderIdeal {
        let a = self.conjugate();
        let b = self.map(CMOrderBasis::tau);
        let c = self.map(CMOrderBasis::sigma_tau);
        a.mul(&b).mul(&c)
    }
}
