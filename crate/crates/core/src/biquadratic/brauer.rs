//! Class numbers of `R_f` and the identity
//! `[U+_f : N(U_f)] #Cl R_f / #Cl+ R+_f = (eps(fD) + #Cl S_f) / 2`.

use std::collections::HashSet;

use num_bigint::BigInt;
use num_integer::Integer;
use serde::Serialize;

use crate::arith;
use crate::error::{Error, Result};
use crate::quadratic::{h_imag, narrow_class_real, totally_positive_generator};

use super::classgroup::class_number_max;
use super::order::{check_d, CMOrderBasis, Coords};
use super::residues::{residue_unit_count, residue_unit_count_factored, ResidueRing, DEFAULT_BUDGET};
use super::units::{in_rf, quartic_unit, unit_indices_from, UnitDescription, UnitIndices};

fn exact_div(a: u64, b: u64, what: &str) -> Result<u64> {
    if b == 0 || a % b != 0 {
        return Err(Error::Internal(format!("{what}: {a} is not divisible by {b}")));
    }
    Ok(a / b)
}

/// Per-`D` data shared by every conductor.
#[derive(Clone, Debug)]
pub struct BrauerContext {
    pub d: u64,
    pub h_k: u64,
    pub units: UnitDescription,
}

impl BrauerContext {
    pub fn new(d: u64) -> Result<BrauerContext> {
        check_d(d)?;
        Ok(BrauerContext { d, h_k: class_number_max(d)?, units: quartic_unit(d)? })
    }

    pub fn unit_indices(&self, f: u64) -> Result<UnitIndices> {
        unit_indices_from(&self.units, f)
    }

    /// `#Cl R_f = h_K #(R_1/f)^* / (#(O/f)^* [U_1 : U_f])`.
    pub fn ring_class_number(&self, f: u64) -> Result<u64> {
        let ui = self.unit_indices(f)?;
        let r1 = residue_unit_count_factored(ResidueRing::R1, self.d, f)?;
        let o = residue_unit_count_factored(ResidueRing::O, self.d, f)?;
        exact_div(self.h_k * r1, o * ui.unit_index, "ring class number")
    }

    pub fn breakdown(&self, f: u64, budget: u64) -> Result<BrauerBreakdown> {
        let d = self.d;
        let ui = self.unit_indices(f)?;
        let h_rf = self.ring_class_number(f)?;
        let h_plus = narrow_class_real(8 * (d * f * f) as i64)?;
        let h_sf = h_imag(-4 * (d * f * f) as i64)?;
        let h_plus1 = narrow_class_real(8 * d as i64)?;
        let a = exact_div(self.h_k, h_plus1, "#A")?;
        let lhs = exact_div(ui.idx * h_rf, h_plus, "left side")?;
        let rhs = exact_div(arith::epsilon(f * d) + h_sf, 2, "right side")?;
        let diagnostics = if f <= budget { Some(self.diagnostics(f, budget)?) } else { None };
        Ok(BrauerBreakdown {
            d,
            f,
            h_k: self.h_k,
            h_rf,
            h_plus,
            h_sf,
            idx: ui.idx,
            a,
            diagnostics,
            lhs,
            rhs,
            equal: lhs == rhs,
        })
    }

    fn diagnostics(&self, f: u64, budget: u64) -> Result<Diagnostics> {
        let d = self.d;
        let g = unit_group_images(&self.units, f)?;
        let r1 = residue_unit_count(ResidueRing::R1, d, f, budget)?;
        let rf = residue_unit_count(ResidueRing::Rf, d, f, budget)?;
        let rp = residue_unit_count(ResidueRing::RPlus1, d, f, budget)?;
        let phi = residue_unit_count(ResidueRing::Z, d, f, budget)?;
        Ok(Diagnostics {
            e: exact_div(norm_kernel_count(d, f)?, rf, "#E")?,
            g_f: g.g_f,
            g_plus_f: g.g_plus_f,
            d_f: exact_div(r1, rf * g.g_f, "#D_f")?,
            d_plus_f: exact_div(rp, phi * g.g_plus_f, "#D+_f")?,
        })
    }
}

/// Cardinalities from the residue diagrams, available when `f` is within the
/// enumeration budget.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Diagnostics {
    pub e: u64,
    pub g_f: u64,
    pub g_plus_f: u64,
    pub d_f: u64,
    pub d_plus_f: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BrauerBreakdown {
    pub d: u64,
    pub f: u64,
    pub h_k: u64,
    pub h_rf: u64,
    /// Narrow class number of `R+_f`.
    pub h_plus: u64,
    pub h_sf: u64,
    /// `[U+_f : N(U_f)]`.
    pub idx: u64,
    /// `h_K / h+(8D)`.
    pub a: u64,
    pub diagnostics: Option<Diagnostics>,
    pub lhs: u64,
    pub rhs: u64,
    pub equal: bool,
}

pub fn ring_class_number(d: u64, f: u64) -> Result<u64> {
    BrauerContext::new(d)?.ring_class_number(f)
}

pub fn verify_brauer(d: u64, f: u64) -> Result<BrauerBreakdown> {
    BrauerContext::new(d)?.breakdown(f, DEFAULT_BUDGET)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct GroupImages {
    g_f: u64,
    g_plus_f: u64,
}

fn mul_mod(o: &CMOrderBasis, a: &Coords, b: &Coords, f: i128) -> Coords {
    o.mul(a, b).map(|c| c.rem_euclid(f))
}

fn coords_mod(c: &[BigInt; 4], f: u64) -> Coords {
    let fb = BigInt::from(f);
    c.clone().map(|x| i128::try_from(x.mod_floor(&fb)).expect("residue fits"))
}

/// `#G_f` and `#G+_f`, straight from their definitions as quotients of the
/// images of global units.
fn unit_group_images(units: &UnitDescription, f: u64) -> Result<GroupImages> {
    if f == 1 {
        return Ok(GroupImages { g_f: 1, g_plus_f: 1 });
    }
    let o = CMOrderBasis::new(units.d, 1)?;
    let fi = f as i128;
    let one: Coords = [1, 0, 0, 0];
    let zeta = coords_mod(&units.zeta.coords, f);
    let v = coords_mod(&units.v.coords, f);
    let limit = (f as usize).pow(4);

    let mut powers = vec![one];
    let mut p = v;
    while p != one {
        powers.push(p);
        p = mul_mod(&o, &p, &v, fi);
        if powers.len() > limit {
            return Err(Error::Internal("unit is not invertible modulo f".into()));
        }
    }
    let mut image: HashSet<Coords> = HashSet::new();
    let mut z = one;
    for _ in 0..units.mu {
        for p in &powers {
            image.insert(mul_mod(&o, &z, p, fi));
        }
        z = mul_mod(&o, &z, &zeta, fi);
    }
    let inside = image.iter().filter(|c| in_rf(c, fi)).count() as u64;
    let g_f = exact_div(image.len() as u64, inside, "#G_f")?;

    let eta = totally_positive_generator(2 * units.d)?;
    let n = 2 * units.d as i128;
    let ex = i128::try_from(eta.x.mod_floor(&BigInt::from(f))).expect("fits");
    let ey = i128::try_from(eta.y.mod_floor(&BigInt::from(f))).expect("fits");
    let (mut x, mut y) = (ex, ey);
    let (mut order, mut inside) = (1u64, u64::from(ey == 0));
    while (x, y) != (1, 0) {
        (x, y) = ((x * ex + n * y % fi * ey) % fi, (x * ey + y * ex) % fi);
        order += 1;
        inside += u64::from(y == 0);
        if order as usize > limit {
            return Err(Error::Internal("positive unit is not invertible modulo f".into()));
        }
    }
    let g_plus_f = exact_div(order, inside, "#G+_f")?;
    Ok(GroupImages { g_f, g_plus_f })
}

/// Residues `z` in `(R_1/f)^*` whose norm `z conj(z)` lies in `R+_f` mod `f`.
fn norm_kernel_count(d: u64, f: u64) -> Result<u64> {
    let o = CMOrderBasis::new(d, 1)?;
    let fi = f as i128;
    let mut n = 0;
    for c0 in 0..fi {
        for c1 in 0..fi {
            for c2 in 0..fi {
                for c3 in 0..fi {
                    let z = [c0, c1, c2, c3];
                    if arith::gcd_u64(o.norm(&z).rem_euclid(fi) as u64, f) != 1 {
                        continue;
                    }
                    // z conj(z) = t0 + t2 sqrt(2D) / 2
                    let t = mul_mod(&o, &z, &o.sigma(&z), fi);
                    if t[2] == 0 {
                        n += 1;
                    }
                }
            }
        }
    }
    Ok(n)
}

/// The unit lemmas: `#G_f = [N(U_1) : N(U_f)]` (four times that for `D = 1`,
/// `f > 1`) and `#G+_f = [U+_1 : U+_f]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct UnitLemmas {
    pub d: u64,
    pub f: u64,
    pub g_f: u64,
    pub g_plus_f: u64,
    pub d_f: u64,
    pub d_plus_f: u64,
    /// `[N(U_1) : N(U_f)]`
    pub norm_index: u64,
    /// `[U+_1 : U+_f]`
    pub plus_index: u64,
    pub holds: bool,
}

pub fn verify_unit_lemmas(d: u64, f: u64) -> Result<UnitLemmas> {
    if f > DEFAULT_BUDGET {
        return Err(Error::Budget { f, budget: DEFAULT_BUDGET });
    }
    let ctx = BrauerContext { d, h_k: 0, units: quartic_unit(d)? };
    let ui = ctx.unit_indices(f)?;
    let diag = ctx.diagnostics(f, DEFAULT_BUDGET)?;
    let factor = if d == 1 && f > 1 { 4 } else { 1 };
    Ok(UnitLemmas {
        d,
        f,
        g_f: diag.g_f,
        g_plus_f: diag.g_plus_f,
        d_f: diag.d_f,
        d_plus_f: diag.d_plus_f,
        norm_index: ui.k,
        plus_index: ui.m,
        holds: diag.g_f == factor * ui.k && diag.g_plus_f == ui.m,
    })
}

/// `[U+_1 : N(U_1)] #A = #Cl S_1 / 2` for `D > 1`, and `= #Cl S_1` for `D = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelOne {
    pub d: u64,
    pub h_k: u64,
    pub h_plus: u64,
    pub h_s1: u64,
    pub idx: u64,
    pub a: u64,
    pub lhs: u64,
    pub rhs: u64,
    pub holds: bool,
}

pub fn verify_level_one(d: u64) -> Result<LevelOne> {
    let ctx = BrauerContext::new(d)?;
    let h_plus = narrow_class_real(8 * d as i64)?;
    let h_s1 = h_imag(-4 * d as i64)?;
    let a = exact_div(ctx.h_k, h_plus, "#A")?;
    let idx = ctx.units.norm_index;
    let rhs = if d == 1 { h_s1 } else { exact_div(h_s1, 2, "#Cl S_1 / 2")? };
    Ok(LevelOne { d, h_k: ctx.h_k, h_plus, h_s1, idx, a, lhs: idx * a, rhs, holds: idx * a == rhs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_examples() {
        let l = verify_level_one(5).unwrap();
        assert_eq!((l.h_k, l.h_plus, l.h_s1, l.idx), (2, 2, 2, 1));
        assert!(l.holds);
        let l = verify_level_one(1).unwrap();
        assert_eq!((l.h_k, l.h_plus, l.h_s1, l.idx, l.lhs), (1, 1, 1, 1, 1));
        assert!(verify_level_one(13).unwrap().holds);
    }

    #[test]
    fn brauer_examples() {
        for d in [5u64, 1, 13] {
            let b = verify_brauer(d, 1).unwrap();
            assert_eq!((b.lhs, b.rhs), (1, 1), "{b:?}");
        }
        let b = verify_brauer(5, 3).unwrap();
        assert_eq!(b.h_sf, 4);
        assert_eq!(b.rhs, 2);
        assert!(b.equal, "{b:?}");
        assert_eq!(ring_class_number(5, 1).unwrap(), 2);
    }

    #[test]
    fn unit_lemmas() {
        for d in [1u64, 5, 13, 17] {
            for f in [1u64, 3, 5, 9] {
                let u = verify_unit_lemmas(d, f).unwrap();
                assert!(u.holds, "{u:?}");
            }
        }
        assert_eq!(verify_unit_lemmas(5, 3).unwrap().g_plus_f, 1);
    }

    #[test]
    fn class_number_adjustment() {
        // #E = #Cl S_f / #Cl S_1, doubled for D = 1
        for d in [1u64, 5, 13] {
            let ctx = BrauerContext::new(d).unwrap();
            for f in [3u64, 5, 9] {
                let e = ctx.breakdown(f, 15).unwrap().diagnostics.unwrap().e;
                let ratio = h_imag(-4 * (d * f * f) as i64).unwrap() / h_imag(-4 * d as i64).unwrap();
                assert_eq!(e, if d == 1 { 2 * ratio } else { ratio }, "D={d} f={f}");
            }
        }
    }
}
