//! Hyperelliptic and elliptic models over small finite fields: point counts,
//! Weil-polynomial coefficients, exhaustive genus-2 searches and the
//! `F_{q^2}`-isomorphism classes of elliptic curves in the target isogeny class.

use std::collections::{BTreeMap, HashSet};
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{param, Error, Result};
use crate::fields::{make_field, Embedding, FieldDesc, FieldElement};

// ---------------------------------------------------------------------------
// polynomials over a FieldDesc, low coefficient first

fn trim(v: &mut Vec<FieldElement>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

fn poly_eval(field: &FieldDesc, f: &[FieldElement], x: FieldElement) -> FieldElement {
    f.iter()
        .rev()
        .fold(FieldElement::ZERO, |acc, &c| field.add(field.mul(acc, x), c))
}

fn poly_derivative(field: &FieldDesc, f: &[FieldElement]) -> Vec<FieldElement> {
    let mut d: Vec<FieldElement> = f
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, &c)| field.mul(field.from_int(i as i64), c))
        .collect();
    trim(&mut d);
    d
}

fn poly_rem(field: &FieldDesc, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut r = a.to_vec();
    trim(&mut r);
    let db = b.len() - 1;
    let inv_lead = field.inv(b[db]).expect("trimmed divisor has nonzero lead");
    while r.len() > db {
        let lead = field.mul(r[r.len() - 1], inv_lead);
        let shift = r.len() - 1 - db;
        for (i, &c) in b.iter().enumerate() {
            r[shift + i] = field.sub(r[shift + i], field.mul(lead, c));
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(field: &FieldDesc, a: &[FieldElement], b: &[FieldElement]) -> Vec<FieldElement> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let r = poly_rem(field, &a, &b);
        a = b;
        b = r;
    }
    a
}

/// `gcd(f, f')` is a nonzero constant.
pub fn is_squarefree(field: &FieldDesc, f: &[FieldElement]) -> bool {
    let mut f = f.to_vec();
    trim(&mut f);
    if f.is_empty() {
        return false;
    }
    let d = poly_derivative(field, &f);
    if d.is_empty() {
        return f.len() == 1;
    }
    poly_gcd(field, &f, &d).len() == 1
}

// ---------------------------------------------------------------------------
// genus 2

/// `y^2 = f(x)` with `deg f` in {5, 6} and `f` squarefree.
#[derive(Clone, Debug)]
pub struct GenusTwoModel {
    field: Arc<FieldDesc>,
    coeffs: Vec<FieldElement>,
}

impl PartialEq for GenusTwoModel {
    fn eq(&self, other: &Self) -> bool {
        *self.field == *other.field && self.coeffs == other.coeffs
    }
}

impl Eq for GenusTwoModel {}

impl GenusTwoModel {
    pub fn new(field: Arc<FieldDesc>, coeffs: Vec<FieldElement>) -> Result<GenusTwoModel> {
        let deg = coeffs.len().checked_sub(1);
        if !matches!(deg, Some(5) | Some(6)) || coeffs.last().is_some_and(|c| c.is_zero()) {
            return Err(Error::InvalidModel(format!(
                "need a degree 5 or 6 polynomial with nonzero leading coefficient, got {} coefficients",
                coeffs.len()
            )));
        }
        if !is_squarefree(&field, &coeffs) {
            return Err(Error::InvalidModel("f is not squarefree".into()));
        }
        Ok(GenusTwoModel { field, coeffs })
    }

    /// Builds a model from integer coefficients (reduced mod p), low first.
    pub fn from_ints(field: Arc<FieldDesc>, coeffs: &[i64]) -> Result<GenusTwoModel> {
        let c = coeffs.iter().map(|&a| field.from_int(a)).collect();
        GenusTwoModel::new(field, c)
    }

    pub fn field(&self) -> &FieldDesc {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn leading(&self) -> FieldElement {
        *self.coeffs.last().unwrap()
    }

    pub fn encodings(&self) -> Vec<u32> {
        self.coeffs.iter().map(|c| c.encoding()).collect()
    }
}

/// Point counts of a genus-2 curve over `F_q` and `F_{q^2}`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PointCounts {
    pub n1: u64,
    pub n2: u64,
}

impl PointCounts {
    /// `N1 <= N2`, `|N1 - (q+1)| <= 4 sqrt(q)` and `|N2 - (q^2+1)| <= 4q`,
    /// all in exact integer arithmetic.
    pub fn within_weil_bounds(&self, q: u64) -> bool {
        let d1 = self.n1 as i128 - (q as i128 + 1);
        let d2 = self.n2 as i128 - (q as i128 * q as i128 + 1);
        self.n1 <= self.n2 && d1 * d1 <= 16 * q as i128 && d2.abs() <= 4 * q as i128
    }
}

/// Coefficients of `x^4 + a1 x^3 + a2 x^2 + a1 q x + q^2`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct WeilQuartic {
    pub q: u64,
    pub a1: i64,
    pub a2: i64,
}

impl WeilQuartic {
    /// The class `x^4 + (2-2q)x^2 + q^2`.
    pub fn target(q: u64) -> WeilQuartic {
        WeilQuartic { q, a1: 0, a2: 2 - 2 * q as i64 }
    }

    pub fn coefficients(&self) -> [i64; 5] {
        let q = self.q as i64;
        [q * q, self.a1 * q, self.a2, self.a1, 1]
    }
}

/// Points at infinity over the base field of `field`.
fn points_at_infinity(field: &FieldDesc, degree: usize, lead: FieldElement) -> u64 {
    if degree % 2 == 1 {
        1
    } else if field.chi(lead) == 1 {
        2
    } else {
        0
    }
}

/// `sum_x (1 + chi(f(x))) + n_inf` over the field of the model.
pub fn count_points_g2(model: &GenusTwoModel) -> u64 {
    let f = model.field();
    let affine: i64 = f
        .elements()
        .map(|x| 1 + f.chi(poly_eval(f, model.coeffs(), x)) as i64)
        .sum();
    affine as u64 + points_at_infinity(f, model.degree(), model.leading())
}

/// Counting context for a fixed `F_q` together with `F_{q^2}`.
pub struct G2Counter {
    fq: Arc<FieldDesc>,
    fq2: FieldDesc,
    emb: Embedding,
    powers2: Vec<[FieldElement; 7]>,
}

impl G2Counter {
    pub fn new(fq: Arc<FieldDesc>) -> Result<G2Counter> {
        let fq2 = make_field(fq.p(), 2 * fq.degree())?;
        let emb = Embedding::new(&fq, &fq2)?;
        let powers2 = fq2
            .elements()
            .map(|x| {
                let mut row = [FieldElement::ONE; 7];
                for i in 1..7 {
                    row[i] = fq2.mul(row[i - 1], x);
                }
                row
            })
            .collect();
        Ok(G2Counter { fq, fq2, emb, powers2 })
    }

    pub fn base(&self) -> &FieldDesc {
        &self.fq
    }

    pub fn extension(&self) -> &FieldDesc {
        &self.fq2
    }

    /// Count over `F_{q^2}` of `y^2 = f(x)` with `f` given over `F_q`.
    pub fn count_extension(&self, coeffs: &[FieldElement]) -> u64 {
        let embedded: Vec<FieldElement> = coeffs.iter().map(|&c| self.emb.apply(c)).collect();
        let s = self.char_sum_extension(&embedded, None);
        let deg = coeffs.len() - 1;
        let lead = embedded[deg];
        (self.fq2.order() as i64 + s) as u64 + points_at_infinity(&self.fq2, deg, lead)
    }

    /// `sum_x chi(f(x))` over `F_{q^2}`. With `target = Some(t)`, stops as
    /// soon as the sum can no longer reach `t` and returns a value != t.
    fn char_sum_extension(&self, embedded: &[FieldElement], target: Option<i64>) -> i64 {
        let f2 = &self.fq2;
        let total = f2.order() as i64;
        let mut s = 0i64;
        for (i, row) in self.powers2.iter().enumerate() {
            let mut v = embedded[0];
            for k in 1..embedded.len() {
                v = f2.add(v, f2.mul(embedded[k], row[k]));
            }
            s += f2.chi(v) as i64;
            if let Some(t) = target {
                let remaining = total - i as i64 - 1;
                if (s - t).abs() > remaining {
                    return if s > t { t + remaining + 1 } else { t - remaining - 1 };
                }
            }
        }
        s
    }

    pub fn counts_pair(&self, model: &GenusTwoModel) -> PointCounts {
        PointCounts {
            n1: count_points_g2(model),
            n2: self.count_extension(model.coeffs()),
        }
    }
}

/// `(N1, N2)` for a model; builds the extension field on the fly.
pub fn counts_pair(model: &GenusTwoModel) -> Result<PointCounts> {
    let counter = G2Counter::new(model.field.clone())?;
    Ok(counter.counts_pair(model))
}

pub fn weil_from_counts(n1: u64, n2: u64, q: u64) -> Result<WeilQuartic> {
    let a1 = n1 as i64 - q as i64 - 1;
    let num = n2 as i64 - (q * q) as i64 - 1 + a1 * a1;
    if num % 2 != 0 {
        return Err(Error::InconsistentCounts { n1, n2, q });
    }
    Ok(WeilQuartic { q, a1, a2: num / 2 })
}

/// Options shared by the exhaustive searches.
#[derive(Copy, Clone, Debug)]
pub struct SearchOptions {
    pub jobs: usize,
    /// Abandon a model as soon as its running character sum cannot reach the target.
    pub prune: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions { jobs: 1, prune: false }
    }
}

pub(crate) fn run_pool<T: Send>(jobs: usize, op: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Internal(format!("thread pool: {e}")))?;
    Ok(pool.install(op))
}

/// Makes the odd field of order `q`, rejecting even or non-prime-power `q`.
pub fn field_for_q(q: u64) -> Result<Arc<FieldDesc>> {
    if q % 2 == 0 {
        return param(format!("q = {q} is even; only odd prime powers are supported"));
    }
    let (p, e) = arith::prime_power(q)
        .ok_or_else(|| Error::Parameter(format!("q = {q} is not a prime power")))?;
    Ok(Arc::new(make_field(p as u32, e)?))
}

/// One block of the genus-2 model space: fixed degree, leading and
/// sub-leading coefficients.
#[derive(Copy, Clone, Debug)]
struct Block {
    degree: usize,
    lead: FieldElement,
    sub: FieldElement,
}

fn blocks(field: &FieldDesc) -> Vec<Block> {
    let c = field.least_nonsquare();
    let mut out = Vec::new();
    for degree in [5usize, 6] {
        for lead in [FieldElement::ONE, c] {
            for sub in field.elements() {
                out.push(Block { degree, lead, sub });
            }
        }
    }
    out
}

/// Visits every model of a block, calling `visit(coeffs, n1)` with the exact
/// `F_q` count, or skipping models whose count cannot equal `want_n1`.
fn scan_block(
    field: &FieldDesc,
    block: Block,
    want_n1: Option<u64>,
    prune: bool,
    mut visit: impl FnMut(&[FieldElement], u64),
) {
    let q = field.order() as usize;
    let d = block.degree;
    let n_inf = points_at_infinity(field, d, block.lead);
    // free middle coefficients c_1..c_{d-2}; c_0 innermost
    let free = d - 2;
    let total = q.pow(free as u32);
    let xs: Vec<FieldElement> = field.elements().collect();
    let mut pw = vec![[FieldElement::ONE; 7]; q];
    for (i, &x) in xs.iter().enumerate() {
        for k in 1..7 {
            pw[i][k] = field.mul(pw[i][k - 1], x);
        }
    }
    let mut coeffs = vec![FieldElement::ZERO; d + 1];
    coeffs[d] = block.lead;
    coeffs[d - 1] = block.sub;
    let mut partial = vec![FieldElement::ZERO; q];
    let chi = field.chi_table();
    for idx in 0..total {
        let mut r = idx;
        for k in 1..=free {
            coeffs[k] = elem(field, (r % q) as u32);
            r /= q;
        }
        for (i, row) in pw.iter().enumerate() {
            let mut v = FieldElement::ZERO;
            for k in 1..=d {
                v = field.add(v, field.mul(coeffs[k], row[k]));
            }
            partial[i] = v;
        }
        for c0 in field.elements() {
            coeffs[0] = c0;
            let n1 = match want_n1 {
                Some(want) if prune => {
                    let target = want as i64 - q as i64 - n_inf as i64;
                    let mut s = 0i64;
                    let mut ok = true;
                    for (i, &v) in partial.iter().enumerate() {
                        s += chi[field.add(v, c0).encoding() as usize] as i64;
                        if (s - target).abs() > (q - i - 1) as i64 {
                            ok = false;
                            break;
                        }
                    }
                    if !ok {
                        continue;
                    }
                    (q as i64 + s) as u64 + n_inf
                }
                _ => {
                    let s: i64 = partial
                        .iter()
                        .map(|&v| chi[field.add(v, c0).encoding() as usize] as i64)
                        .sum();
                    (q as i64 + s) as u64 + n_inf
                }
            };
            if want_n1.is_some_and(|w| w != n1) {
                continue;
            }
            visit(&coeffs, n1);
        }
    }
}

fn elem(field: &FieldDesc, enc: u32) -> FieldElement {
    field.from_encoding(enc).expect("index below field order")
}

fn model_key(m: &GenusTwoModel) -> (usize, Vec<u32>) {
    let mut enc = m.encodings();
    enc.reverse();
    (m.degree(), enc)
}

/// All enumerated squarefree models whose Weil quartic equals `target`.
///
/// Leading coefficients are restricted to {1, least non-square}; every other
/// coefficient runs over the whole field. The result is sorted and does not
/// depend on `opts.jobs`.
pub fn search_g2(q: u64, target: (i64, i64), opts: SearchOptions) -> Result<Vec<GenusTwoModel>> {
    let fq = field_for_q(q)?;
    let counter = G2Counter::new(fq.clone())?;
    let want_n1 = target.0 + q as i64 + 1;
    // N2 = q^2 + 1 + 2 a2 - a1^2
    let want_n2 = (q * q) as i64 + 1 + 2 * target.1 - target.0 * target.0;
    if want_n1 < 0 || want_n2 < 0 {
        return Ok(Vec::new());
    }
    let want_n1 = want_n1 as u64;
    let all_blocks = blocks(&fq);
    let mut hits: Vec<GenusTwoModel> = run_pool(opts.jobs, || {
        all_blocks
            .par_iter()
            .map(|&block| {
                let mut found = Vec::new();
                let n_inf2 = if block.degree == 5 { 1 } else { 2 };
                let chi_target = want_n2 - counter.extension().order() as i64 - n_inf2;
                scan_block(&fq, block, Some(want_n1), opts.prune, |coeffs, _| {
                    let embedded: Vec<FieldElement> =
                        coeffs.iter().map(|&c| counter.emb.apply(c)).collect();
                    let s = counter
                        .char_sum_extension(&embedded, opts.prune.then_some(chi_target));
                    if s == chi_target && is_squarefree(&fq, coeffs) {
                        found.push(GenusTwoModel {
                            field: fq.clone(),
                            coeffs: coeffs.to_vec(),
                        });
                    }
                });
                found
            })
            .reduce(Vec::new, |mut a, mut b| {
                a.append(&mut b);
                a
            })
    })?;
    hits.sort_by_key(model_key);
    Ok(hits)
}

/// Model-level census: number of enumerated squarefree models per `(a1, a2)`.
///
/// Counts models, not isomorphism classes of curves.
pub fn census_g2(q: u64, jobs: usize) -> Result<BTreeMap<(i64, i64), u64>> {
    let fq = field_for_q(q)?;
    let counter = G2Counter::new(fq.clone())?;
    let all_blocks = blocks(&fq);
    let merged = run_pool(jobs, || {
        all_blocks
            .par_iter()
            .map(|&block| {
                let mut local: BTreeMap<(i64, i64), u64> = BTreeMap::new();
                let mut err = None;
                scan_block(&fq, block, None, false, |coeffs, n1| {
                    if !is_squarefree(&fq, coeffs) {
                        return;
                    }
                    let n2 = counter.count_extension(coeffs);
                    match weil_from_counts(n1, n2, q) {
                        Ok(w) => *local.entry((w.a1, w.a2)).or_default() += 1,
                        Err(e) => err = Some(e.to_string()),
                    }
                });
                (local, err)
            })
            .reduce(
                || (BTreeMap::new(), None),
                |(mut a, ea), (b, eb)| {
                    for (k, v) in b {
                        *a.entry(k).or_default() += v;
                    }
                    (a, ea.or(eb))
                },
            )
    })?;
    match merged {
        (_, Some(e)) => Err(Error::Internal(e)),
        (m, None) => Ok(m),
    }
}

// ---------------------------------------------------------------------------
// elliptic curves over F_{q^2}

/// `y^2 = x^3 + a2 x^2 + a1 x + a0`, squarefree right-hand side.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EllipticModel {
    /// `(a2, a1, a0)`; the derived ordering is the coefficient encoding order.
    pub coeffs: (FieldElement, FieldElement, FieldElement),
}

impl EllipticModel {
    pub fn poly(&self) -> [FieldElement; 4] {
        let (a2, a1, a0) = self.coeffs;
        [a0, a1, a2, FieldElement::ONE]
    }

    pub fn is_squarefree(&self, field: &FieldDesc) -> bool {
        is_squarefree(field, &self.poly())
    }

    pub fn count_points(&self, field: &FieldDesc) -> u64 {
        let g = self.poly();
        let s: i64 = field
            .elements()
            .map(|x| field.chi(poly_eval(field, &g, x)) as i64)
            .sum();
        (field.order() as i64 + 1 + s) as u64
    }

    /// Applies `x -> s x + r` (with `s = u^2`) and rescales to a monic model.
    fn transform(&self, field: &FieldDesc, s: FieldElement, r: FieldElement) -> EllipticModel {
        let (a2, a1, _) = self.coeffs;
        let three = field.from_int(3);
        let two = field.from_int(2);
        let s_inv = field.inv(s).expect("s is nonzero");
        let s2_inv = field.mul(s_inv, s_inv);
        let s3_inv = field.mul(s2_inv, s_inv);
        let r2 = field.mul(r, r);
        let n2 = field.add(field.mul(three, r), a2);
        let n1 = field.add(
            field.add(field.mul(three, r2), field.mul(two, field.mul(a2, r))),
            a1,
        );
        let n0 = poly_eval(field, &self.poly(), r);
        EllipticModel {
            coeffs: (
                field.mul(n2, s_inv),
                field.mul(n1, s2_inv),
                field.mul(n0, s3_inv),
            ),
        }
    }

    /// Raises every coefficient to the `q`-th power.
    pub fn frobenius(&self, field: &FieldDesc, q: u64) -> EllipticModel {
        let (a2, a1, a0) = self.coeffs;
        EllipticModel {
            coeffs: (field.pow(a2, q), field.pow(a1, q), field.pow(a0, q)),
        }
    }
}

fn nonzero_squares(field: &FieldDesc) -> Vec<FieldElement> {
    field.elements().filter(|&a| field.chi(a) == 1).collect()
}

fn orbit(field: &FieldDesc, squares: &[FieldElement], m: &EllipticModel) -> HashSet<EllipticModel> {
    let mut out = HashSet::new();
    for &s in squares {
        for r in field.elements() {
            out.insert(m.transform(field, s, r));
        }
    }
    out
}

/// Least model (in encoding order) isomorphic to `m` over `field`.
pub fn canonical_model(field: &FieldDesc, m: &EllipticModel) -> EllipticModel {
    let squares = nonzero_squares(field);
    let mut best = *m;
    for &s in &squares {
        for r in field.elements() {
            let t = m.transform(field, s, r);
            if t < best {
                best = t;
            }
        }
    }
    best
}

/// One `F_{q^2}`-isomorphism class of elliptic curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EcClass {
    pub rep: EllipticModel,
    pub points: u64,
    pub orbit_size: u64,
    /// `|Aut(E)|`, from the orbit-stabilizer relation.
    pub aut_order: u64,
}

/// Every isomorphism class of elliptic curves over `field`, as orbits of
/// squarefree monic cubics under `x -> u^2 x + r`, `y -> u^3 y`.
pub fn enumerate_ec_classes(field: &FieldDesc) -> Vec<EcClass> {
    let q = field.order() as usize;
    let squares = nonzero_squares(field);
    let group = ((q - 1) * q) as u64;
    let mut visited = vec![false; q * q * q];
    let mut out = Vec::new();
    let key = |m: &EllipticModel| {
        let (a2, a1, a0) = m.coeffs;
        (a2.encoding() as usize * q + a1.encoding() as usize) * q + a0.encoding() as usize
    };
    for idx in 0..q * q * q {
        if visited[idx] {
            continue;
        }
        let m = EllipticModel {
            coeffs: (
                elem(field, (idx / (q * q)) as u32),
                elem(field, ((idx / q) % q) as u32),
                elem(field, (idx % q) as u32),
            ),
        };
        if !m.is_squarefree(field) {
            visited[idx] = true;
            continue;
        }
        let orb = orbit(field, &squares, &m);
        for t in &orb {
            visited[key(t)] = true;
        }
        // scanning in encoding order makes m the least member of its orbit
        let size = orb.len() as u64;
        out.push(EcClass {
            rep: m,
            points: m.count_points(field),
            orbit_size: size,
            aut_order: group / size,
        });
    }
    out
}

/// The endomorphism-order data of the isogeny class with trace `2q - 2`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EcIsogenyClass {
    pub q: u64,
    pub trace: u64,
    /// Conductors `f | F` of the endomorphism orders `Z[f sqrt(-D)]`.
    pub conductors: Vec<u64>,
    /// `(2q-2)^2 - 4q^2 = -4 F^2 D`.
    pub discriminant: i64,
}

impl EcIsogenyClass {
    pub fn new(q: u64) -> Result<EcIsogenyClass> {
        field_for_q(q)?;
        let (big_f, _) = arith::squarefree_decomposition(2 * q - 1);
        let t = 2 * q as i64 - 2;
        Ok(EcIsogenyClass {
            q,
            trace: 2 * q - 2,
            conductors: arith::divisors(big_f),
            discriminant: t * t - 4 * (q * q) as i64,
        })
    }
}

/// The extension field `F_{q^2}` for odd `q`.
pub fn quadratic_extension(q: u64) -> Result<FieldDesc> {
    let base = field_for_q(q)?;
    make_field(base.p(), 2 * base.degree())
}

/// Classes over `F_{q^2}` with `#E = q^2 - 2q + 3`, i.e. trace `2q - 2`.
pub fn ec_target_classes(q: u64) -> Result<(FieldDesc, Vec<EcClass>)> {
    let f2 = quadratic_extension(q)?;
    let want = q * q - 2 * q + 3;
    let classes = enumerate_ec_classes(&f2)
        .into_iter()
        .filter(|c| c.points == want)
        .collect();
    Ok((f2, classes))
}

/// Galois-orbit decomposition `(n1, n2)` of a set of classes over `F_{q^2}`
/// under coefficient-wise `q`-th powering.
pub fn galois_orbit_structure(field: &FieldDesc, classes: &[EcClass], q: u64) -> Result<(u64, u64)> {
    let reps: HashSet<EllipticModel> = classes.iter().map(|c| c.rep).collect();
    let mut n1 = 0;
    let mut paired = 0;
    for c in classes {
        let conj = canonical_model(field, &c.rep.frobenius(field, q));
        if conj == c.rep {
            n1 += 1;
        } else if reps.contains(&conj) {
            paired += 1;
        } else {
            return Err(Error::Internal(
                "Galois conjugate of a class fell outside the class list".into(),
            ));
        }
    }
    if paired % 2 != 0 {
        return Err(Error::Internal("conjugation is not an involution on classes".into()));
    }
    Ok((n1, paired / 2))
}

/// Fixed classes under conjugation, with their automorphism group orders.
pub fn galois_fixed_classes(field: &FieldDesc, classes: &[EcClass], q: u64) -> Vec<EcClass> {
    classes
        .iter()
        .filter(|c| canonical_model(field, &c.rep.frobenius(field, q)) == c.rep)
        .cloned()
        .collect()
}
