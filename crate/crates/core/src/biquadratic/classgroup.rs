//! Class groups of the orders `R_f` through reduced ideals.
//!
//! A fractional ideal `B` is reduced when `1` is a relative minimum of `B`: no
//! nonzero element is strictly smaller than `1` at both complex places. The
//! reduced ideals in one class are `g^{-1} A` for the minima `g` of any `A` in
//! the class, and the minima of a lattice in a field with unit rank one form a
//! chain, so walking successive minima visits every reduced ideal of a class.
//! Exact decisions use `|g|_s^2 = phi_s(g conj(g))`, computed in `Z[sqrt(2D)]`.

use std::collections::{HashMap, HashSet, VecDeque};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{Error, Result};
use crate::fields::make_field;

use super::ideal::{content, divide, divide_by_element, hnf_mod, mul_lattices, Hnf, OrderIdeal, IDENTITY};
use super::lattice::{lll, short_vectors};
use super::order::{sign_quad, CMOrderBasis, Coords, OrderElement};

const SLACK: f64 = 1e-9;

/// `num / den` with `gcd(den, content(num)) = 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FracIdeal {
    pub den: i128,
    pub num: Hnf,
}

impl FracIdeal {
    pub fn new(den: i128, num: Hnf) -> FracIdeal {
        let g = arith::gcd_u64(den as u64, content(&num) as u64) as i128;
        FracIdeal { den: den / g, num: divide(&num, g) }
    }

    pub fn unit() -> FracIdeal {
        FracIdeal { den: 1, num: IDENTITY }
    }

    pub fn is_unit(&self) -> bool {
        self.den == 1 && self.num == IDENTITY
    }
}

/// Shortest nonzero element of an integral lattice under `|.|_1^2 + |.|_2^2`,
/// with the exact trace form deciding between numerical candidates.
pub fn shortest_element(order: &CMOrderBasis, l: &Hnf) -> Result<Coords> {
    let embed = |c: &Coords| order.embed(c);
    let mut rows = *l;
    lll(&mut rows, &embed)?;
    let len = |c: &Coords| embed(c).iter().map(|t| t * t).sum::<f64>();
    let bound = rows.iter().map(len).fold(f64::INFINITY, f64::min);
    let cands = short_vectors(&rows, &embed, bound * (1.0 + SLACK) + SLACK)?;
    cands
        .into_iter()
        // the trace form is 2 c0 of g conj(g)
        .min_by_key(|v| (order.rel_norm(v).0, *v))
        .ok_or_else(|| Error::Internal("no short vector found".into()))
}

/// The reduced ideal `v^{-1} L` for the shortest `v` of the integral lattice `L`.
pub fn reduce(order: &CMOrderBasis, l: &Hnf) -> Result<(FracIdeal, Coords)> {
    let v = shortest_element(order, l)?;
    let (n, h) = divide_by_element(order, l, &v);
    Ok((FracIdeal::new(n, h), v))
}

/// The next minima after `1` in a reduced ideal, with the reduced ideals they give.
pub fn successors(order: &CMOrderBasis, b: &FracIdeal) -> Result<Vec<(FracIdeal, Coords)>> {
    let d = b.den;
    let n = order.n();
    let d2 = d * d;
    let df = d as f64;
    let mut x: i128 = 2;
    loop {
        let xf = x as f64;
        let embed = |c: &Coords| {
            let e = order.embed(c);
            [e[0] / (xf * df), e[1] / (xf * df), e[2] / df, e[3] / df]
        };
        let mut rows = b.num;
        lll(&mut rows, &embed)?;
        let cands = short_vectors(&rows, &embed, 2.0 * (1.0 + SLACK))?;
        let mut best: Vec<(Coords, (i128, i128))> = Vec::new();
        for v in cands {
            let (a, bb) = order.rel_norm(&v);
            // |v/d|_2 < 1
            if sign_quad(2 * d2 - a, bb, n) <= 0 {
                continue;
            }
            match best.first() {
                None => best.push((v, (a, bb))),
                Some(&(_, (a0, b0))) => match sign_quad(a - a0, bb - b0, n) {
                    s if s < 0 => best = vec![(v, (a, bb))],
                    0 => best.push((v, (a, bb))),
                    _ => {}
                },
            }
        }
        if let Some(&(_, (a0, b0))) = best.first() {
            // |v/d|_1 <= X guarantees nothing smaller escaped the ellipsoid
            if sign_quad(2 * x * x * d2 - a0, -b0, n) >= 0 {
                if sign_quad(a0 - 2 * d2, b0, n) <= 0 {
                    return Err(Error::Internal("ideal passed as reduced is not reduced".into()));
                }
                let mut out: Vec<(FracIdeal, Coords)> = best
                    .into_iter()
                    .map(|(v, _)| {
                        let (nv, h) = divide_by_element(order, &b.num, &v);
                        (FracIdeal::new(nv, h), v)
                    })
                    .collect();
                out.sort();
                out.dedup_by(|a, b| a.0 == b.0);
                return Ok(out);
            }
        }
        x *= 2;
        if x > 1 << 40 {
            return Err(Error::Internal("successor search did not terminate".into()));
        }
    }
}

/// Registry of classes: every reduced ideal seen, mapped to its class index.
pub struct Infrastructure {
    order: CMOrderBasis,
    index: HashMap<FracIdeal, usize>,
    reps: Vec<FracIdeal>,
    cycle_sizes: Vec<usize>,
}

impl Infrastructure {
    pub fn new(order: &CMOrderBasis) -> Result<Infrastructure> {
        let mut inf = Infrastructure {
            order: order.clone(),
            index: HashMap::new(),
            reps: Vec::new(),
            cycle_sizes: Vec::new(),
        };
        inf.register(FracIdeal::unit())?;
        Ok(inf)
    }

    pub fn order(&self) -> &CMOrderBasis {
        &self.order
    }

    pub fn class_count(&self) -> usize {
        self.reps.len()
    }

    pub fn rep(&self, class: usize) -> &FracIdeal {
        &self.reps[class]
    }

    /// Number of reduced ideals in each registered class.
    pub fn cycle_sizes(&self) -> &[usize] {
        &self.cycle_sizes
    }

    fn register(&mut self, start: FracIdeal) -> Result<usize> {
        let id = self.reps.len();
        self.index.insert(start.clone(), id);
        let mut queue = VecDeque::from([start.clone()]);
        let mut size = 1;
        while let Some(b) = queue.pop_front() {
            for (s, _) in successors(&self.order, &b)? {
                match self.index.get(&s) {
                    Some(&c) if c == id => {}
                    Some(_) => {
                        return Err(Error::Internal("reduced ideal reached from two classes".into()))
                    }
                    None => {
                        self.index.insert(s.clone(), id);
                        size += 1;
                        queue.push_back(s);
                    }
                }
            }
        }
        self.reps.push(start);
        self.cycle_sizes.push(size);
        Ok(id)
    }

    fn class_of_reduced(&mut self, key: FracIdeal) -> Result<usize> {
        match self.index.get(&key) {
            Some(&c) => Ok(c),
            None => self.register(key),
        }
    }

    /// Class of an integral ideal given by its HNF.
    pub fn class_of(&mut self, l: &Hnf) -> Result<usize> {
        let (key, _) = reduce(&self.order, l)?;
        self.class_of_reduced(key)
    }

    /// Class of `rep(class) * P`, where `m` is a positive integer in `P`.
    pub fn class_times(&mut self, class: usize, p: &Hnf, m: i128) -> Result<usize> {
        let rep = self.reps[class].clone();
        // rep.num contains rep.den because the reduced ideal contains R
        let prod = mul_lattices(&self.order, &rep.num, p, rep.den * m);
        self.class_of(&prod)
    }
}

/// Generator of a principal ideal, or `None`.
pub fn is_principal(ideal: &OrderIdeal) -> Result<Option<OrderElement>> {
    let order = &ideal.order;
    if ideal.norm() == 1 {
        return Ok(Some(OrderElement::from_small(order.one())));
    }
    let v0 = shortest_element(order, &ideal.hnf)?;
    let (n0, h0) = divide_by_element(order, &ideal.hnf, &v0);
    let start = FracIdeal::new(n0, h0);
    // generator so far as (numerator coords, denominator): ideal = g * B
    let mut seen: HashSet<FracIdeal> = HashSet::from([start.clone()]);
    let mut queue = VecDeque::from([(start, v0.map(BigInt::from), BigInt::one())]);
    while let Some((b, g, gden)) = queue.pop_front() {
        if b.is_unit() {
            return verify_generator(ideal, g, gden).map(Some);
        }
        for (s, v) in successors(order, &b)? {
            if seen.insert(s.clone()) {
                let prod = order.mul_big(&g, &v.map(BigInt::from));
                let den = &gden * BigInt::from(b.den);
                let g_all = prod.iter().fold(den.clone(), |acc, c| acc.gcd(c));
                let prod = prod.map(|c| c / &g_all);
                queue.push_back((s, prod, den / g_all));
            }
        }
    }
    Ok(None)
}

fn verify_generator(ideal: &OrderIdeal, g: [BigInt; 4], den: BigInt) -> Result<OrderElement> {
    if g.iter().any(|c| !(c % &den).is_zero()) {
        return Err(Error::Internal("generator is not integral".into()));
    }
    let e = OrderElement { coords: g.map(|c| c / &den) };
    let small = e
        .to_small()
        .ok_or_else(|| Error::Internal("generator does not fit machine integers".into()))?;
    let n = ideal.order.norm(&small);
    if n != ideal.norm() || !ideal.contains(&small) {
        return Err(Error::Internal("generator failed exact verification".into()));
    }
    Ok(e)
}

/// A prime ideal of `R_1` with the rational prime below it.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct PrimeIdeal {
    pub norm: i128,
    pub p: u64,
    pub hnf: Hnf,
}

/// Lattice of `c` with `sum c_i r_i = 0` over `F_p`, where `r_i` are the
/// images of the basis in `F_p^k`.
fn kernel_lattice(images: &[Vec<i64>; 4], p: i64) -> (Hnf, usize) {
    let k = images[0].len();
    // rows of the k x 4 system
    let mut a: Vec<Vec<i64>> = (0..k).map(|t| (0..4).map(|i| images[i][t].rem_euclid(p)).collect()).collect();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..4 {
        let Some(pr) = (r..k).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let inv = arith::pow_mod(a[r][c] as u64, p as u64 - 2, p as u64) as i64;
        for j in 0..4 {
            a[r][j] = a[r][j] * inv % p;
        }
        for i in 0..k {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..4 {
                    a[i][j] = (a[i][j] - f * a[r][j]).rem_euclid(p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut gens = Vec::new();
    for free in (0..4).filter(|c| !pivots.contains(c)) {
        let mut v = [0i128; 4];
        v[free] = 1;
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = (-a[row][free]).rem_euclid(p) as i128;
        }
        gens.push(v);
    }
    (hnf_mod(&gens, p as i128), pivots.len())
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| arith::is_prime(p)).collect()
}

/// All prime ideals of `R_1` of norm at most `bound`.
pub fn prime_ideals(order: &CMOrderBasis, bound: u64) -> Result<Vec<PrimeIdeal>> {
    if order.f != 1 {
        return Err(Error::Parameter("prime ideals are enumerated for the maximal order only".into()));
    }
    let d = order.d as i64;
    let mut out = Vec::new();
    for p in primes_up_to(bound) {
        let pi = p as i64;
        let mut found: Vec<(Hnf, usize)> = Vec::new();
        if p == 2 {
            // x -> 0, w -> 1
            found.push(kernel_lattice(&[vec![1], vec![0], vec![1], vec![0]], 2));
        } else if p * p <= bound {
            let fp2 = make_field(p as u32, 2)?;
            let minus_two = fp2.from_int(-2);
            let c = fp2.from_int((d + 1) / 2);
            for a in fp2.elements().filter(|&a| fp2.mul(a, a) == minus_two) {
                for b in fp2.elements() {
                    let val = fp2.sub(fp2.sub(fp2.mul(b, b), fp2.mul(a, b)), c);
                    if !val.is_zero() {
                        continue;
                    }
                    let img = |e| fp2.coeffs(e).iter().map(|&t| t as i64).collect::<Vec<_>>();
                    let images = [img(fp2.one()), img(a), img(b), img(fp2.mul(a, b))];
                    found.push(kernel_lattice(&images, pi));
                }
            }
        } else {
            let inv2 = (pi + 1) / 2;
            for a in arith::sqrt_mod_prime(-2, p) {
                for s in arith::sqrt_mod_prime(2 * d, p) {
                    let a = a as i64;
                    let b = (a + s as i64) % pi * inv2 % pi;
                    let images = [vec![1], vec![a], vec![b], vec![a * b % pi]];
                    found.push(kernel_lattice(&images, pi));
                }
            }
        }
        found.sort();
        found.dedup();
        for (h, rank) in found {
            let norm = (p as i128).pow(rank as u32);
            if norm <= bound as i128 {
                out.push(PrimeIdeal { norm, p, hnf: h });
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Upper bound for `24 D f^2 / pi^2`, rounded up.
pub fn minkowski_bound(d: u64, f: u64) -> u64 {
    // 9.8696 < pi^2
    let num = 24u128 * d as u128 * (f as u128).pow(2) * 10_000;
    num.div_ceil(98_696) as u64
}

/// Class group data of the maximal order.
#[derive(Clone, Debug)]
pub struct ClassGroupSummary {
    pub d: u64,
    pub h: u64,
    pub bound: u64,
    pub primes_used: usize,
    /// Norms of the primes that enlarged the generated subgroup.
    pub generator_norms: Vec<i128>,
    pub reduced_ideals: usize,
}

/// `h_K` for `K = Q(sqrt(-2), sqrt(-D))`: classes of the primes below the
/// Minkowski bound, closed under multiplication.
pub fn class_group_max(d: u64) -> Result<ClassGroupSummary> {
    let order = CMOrderBasis::new(d, 1)?;
    let bound = minkowski_bound(d, 1);
    let primes = prime_ideals(&order, bound)?;
    let mut inf = Infrastructure::new(&order)?;
    let mut members: Vec<usize> = vec![0];
    let mut in_h: HashSet<usize> = HashSet::from([0]);
    let mut gens: Vec<&PrimeIdeal> = Vec::new();
    for pr in &primes {
        let c = inf.class_of(&pr.hnf)?;
        if in_h.contains(&c) {
            continue;
        }
        let m = pr.p as i128;
        let mut layer = members.clone();
        let mut added = Vec::new();
        loop {
            let next: Vec<usize> =
                layer.iter().map(|&h| inf.class_times(h, &pr.hnf, m)).collect::<Result<_>>()?;
            let inside = next.iter().filter(|c| in_h.contains(c)).count();
            if inside == next.len() {
                break;
            }
            if inside != 0 || next.iter().any(|c| added.contains(c)) {
                return Err(Error::Internal("coset layers overlap".into()));
            }
            added.extend(next.iter().copied());
            layer = next;
        }
        for c in added {
            in_h.insert(c);
            members.push(c);
        }
        gens.push(pr);
    }
    // closure: every generator maps the subgroup into itself
    for g in &gens {
        for &c in &members.clone() {
            let t = inf.class_times(c, &g.hnf, g.p as i128)?;
            if !in_h.contains(&t) {
                return Err(Error::Internal("class set is not closed under a generator".into()));
            }
        }
    }
    if inf.class_count() != members.len() {
        return Err(Error::Internal("a class was found outside the generated group".into()));
    }
    Ok(ClassGroupSummary {
        d,
        h: members.len() as u64,
        bound,
        primes_used: primes.len(),
        generator_norms: gens.iter().map(|g| g.norm).collect(),
        reduced_ideals: inf.cycle_sizes().iter().sum(),
    })
}

/// `#Cl R_1`.
pub fn class_number_max(d: u64) -> Result<u64> {
    Ok(class_group_max(d)?.h)
}
