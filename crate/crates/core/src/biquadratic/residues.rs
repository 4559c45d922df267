//! Unit counts of residue rings `R / fR` for the orders around `K`.

use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};

use super::order::CMOrderBasis;

/// Largest conductor counted by direct enumeration unless told otherwise.
pub const DEFAULT_BUDGET: u64 = 15;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ResidueRing {
    Z,
    /// `Z[sqrt(-2)]`
    O,
    /// `Z[sqrt(-D)]`
    S1,
    /// `Z[sqrt(2D)]`
    RPlus1,
    R1,
    /// `R_f` modulo `f R_1`
    Rf,
}

impl ResidueRing {
    pub fn rank(self) -> u32 {
        match self {
            ResidueRing::Z => 1,
            ResidueRing::O | ResidueRing::S1 | ResidueRing::RPlus1 | ResidueRing::Rf => 2,
            ResidueRing::R1 => 4,
        }
    }
}

fn coprime(n: i128, f: u64) -> bool {
    arith::gcd_u64(n.rem_euclid(f as i128) as u64, f) == 1
}

fn quadratic_count(c: i128, f: u64) -> u64 {
    let fi = f as i128;
    let mut n = 0;
    for a in 0..fi {
        for b in 0..fi {
            if coprime(a * a - c * b * b, f) {
                n += 1;
            }
        }
    }
    n
}

fn direct(ring: ResidueRing, d: u64, f: u64) -> Result<u64> {
    if f == 1 {
        return Ok(1);
    }
    let di = d as i128;
    Ok(match ring {
        ResidueRing::Z => arith::euler_phi(f),
        ResidueRing::O => quadratic_count(-2, f),
        ResidueRing::S1 => quadratic_count(-di, f),
        ResidueRing::RPlus1 => quadratic_count(2 * di, f),
        ResidueRing::R1 | ResidueRing::Rf => {
            // invertible iff the norm is prime to f
            let o = CMOrderBasis::new(d, 1)?;
            let fi = f as i128;
            let mut n = 0;
            let top = if ring == ResidueRing::R1 { fi } else { 1 };
            for c0 in 0..fi {
                for c1 in 0..fi {
                    for c2 in 0..top {
                        for c3 in 0..top {
                            if coprime(o.norm(&[c0, c1, c2, c3]) % fi, f) {
                                n += 1;
                            }
                        }
                    }
                }
            }
            n
        }
    })
}

/// `#(ring / f)^*` by enumerating every residue, refused above `budget`.
pub fn residue_unit_count(ring: ResidueRing, d: u64, f: u64, budget: u64) -> Result<u64> {
    if f == 0 || f % 2 == 0 {
        return Err(Error::Parameter(format!("conductor {f} must be odd and positive")));
    }
    if f > budget {
        return Err(Error::Budget { f, budget });
    }
    direct(ring, d, f)
}

/// `#(ring / f)^*` from the prime factorization: `#(R/p^e)^* = p^{n(e-1)} #(R/p)^*`
/// for a ring of rank `n`.
pub fn residue_unit_count_factored(ring: ResidueRing, d: u64, f: u64) -> Result<u64> {
    if f == 0 || f % 2 == 0 {
        return Err(Error::Parameter(format!("conductor {f} must be odd and positive")));
    }
    let mut total = 1u64;
    for (p, e) in arith::factor(f) {
        total *= p.pow(ring.rank() * (e - 1)) * direct(ring, d, p)?;
    }
    Ok(total)
}

/// Both sides of `#(R_1/f)^* phi(f)^2 = #(O/f)^* #(R+_1/f)^* #(S_1/f)^*`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueLemma {
    pub d: u64,
    pub f: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

pub fn verify_lemma_residues(d: u64, f: u64) -> Result<ResidueLemma> {
    verify_lemma_residues_with(d, f, DEFAULT_BUDGET)
}

pub fn verify_lemma_residues_with(d: u64, f: u64, budget: u64) -> Result<ResidueLemma> {
    let c = |r| residue_unit_count(r, d, f, budget);
    let phi = c(ResidueRing::Z)?;
    let lhs = c(ResidueRing::R1)? * phi * phi;
    let rhs = c(ResidueRing::O)? * c(ResidueRing::RPlus1)? * c(ResidueRing::S1)?;
    Ok(ResidueLemma { d, f, lhs, rhs, holds: lhs == rhs })
}
