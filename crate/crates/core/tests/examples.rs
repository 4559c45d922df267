//! Worked input/output pairs for each module, with values fixed by hand.

use std::sync::Arc;

use num_bigint::BigInt;

use g2census::biquadratic::{
    class_number_max, norm_unit_index, quartic_unit, residue_unit_count, ring_class_number, verify_brauer,
    verify_lemma_residues, verify_level_one, verify_unit_lemmas, CMOrderBasis, OrderElement, OrderIdeal, ResidueRing,
};
use g2census::census::{decompose, ec_class_count, ppas_count, split_count, verify_theorem, VerifyOptions};
use g2census::curves::{
    census_g2, count_points_g2, counts_pair, ec_target_classes, enumerate_ec_classes, field_for_q,
    galois_orbit_structure, quadratic_extension, search_g2, weil_from_counts, GenusTwoModel, SearchOptions,
    WeilQuartic,
};
use g2census::fields::{embed, enumerate_elements, make_field, quadratic_character};
use g2census::quadratic::{
    h_imag, narrow_class_real, pell_fundamental, totally_positive_generator, unit_index_plus, wide_from_narrow,
};
use g2census::Error;

#[test]
fn fields() {
    assert_eq!(make_field(3, 1).unwrap().modulus(), &[0, 1]);
    assert_eq!(make_field(3, 2).unwrap().modulus(), &[1, 0, 1]);
    assert_eq!(make_field(5, 2).unwrap().modulus(), &[2, 0, 1]);
    assert!(matches!(make_field(4, 1), Err(Error::Parameter(_))));
    assert!(matches!(make_field(2, 3), Err(Error::Parameter(_))));
    assert!(matches!(make_field(3, 0), Err(Error::Parameter(_))));

    let f5 = make_field(5, 1).unwrap();
    assert_eq!(f5.inv(f5.from_int(2)).unwrap(), f5.from_int(3));
    assert_eq!(quadratic_character(&f5, f5.from_int(4)), 1);

    let f9 = make_field(3, 2).unwrap();
    let t = f9.from_coeffs(&[0, 1]).unwrap();
    assert_eq!(f9.mul(t, t), f9.from_int(2));
    assert_eq!(enumerate_elements(&f9).len(), 9);

    let f3 = make_field(3, 1).unwrap();
    assert!(matches!(f3.inv(f3.zero()), Err(Error::DivisionByZero)));
    assert_eq!(quadratic_character(&f3, f3.from_int(2)), -1);
    assert_eq!(quadratic_character(&f3, f3.zero()), 0);
    assert_eq!(enumerate_elements(&f3).iter().map(|a| a.encoding()).collect::<Vec<_>>(), [0, 1, 2]);
    assert_eq!(embed(f3.zero(), &f3, &f9).unwrap(), f9.zero());
    assert!(embed(f3.one(), &f3, &f5).is_err());
}

fn model(q: u64, coeffs: &[i64]) -> GenusTwoModel {
    GenusTwoModel::from_ints(field_for_q(q).unwrap(), coeffs).unwrap()
}

#[test]
fn point_counts() {
    let x5_plus_1 = model(3, &[1, 0, 0, 0, 0, 1]);
    assert_eq!(count_points_g2(&x5_plus_1), 4);
    assert_eq!(count_points_g2(&model(5, &[0, -1, 0, 0, 0, 1])), 6);
    let c = counts_pair(&x5_plus_1).unwrap();
    assert_eq!((c.n1, c.n2), (4, 10));
    let c = counts_pair(&model(5, &[0, -1, 0, 0, 0, 1])).unwrap();
    assert_eq!((c.n1, c.n2), (6, 6));

    let f3 = field_for_q(3).unwrap();
    // x^6 + 1 = (x^2 + 1)^3 over F_3
    assert!(matches!(GenusTwoModel::from_ints(f3.clone(), &[1, 0, 0, 0, 0, 0, 1]), Err(Error::InvalidModel(_))));
    assert!(GenusTwoModel::from_ints(f3, &[1, 0, 0, 1]).is_err());
}

#[test]
fn weil_coefficients() {
    for q in [3u64, 5, 7, 9, 25] {
        assert_eq!(weil_from_counts(q + 1, q * q + 5 - 4 * q, q).unwrap(), WeilQuartic::target(q));
        let w = weil_from_counts(q + 1, q * q + 1, q).unwrap();
        assert_eq!((w.a1, w.a2), (0, 0));
    }
    let w = weil_from_counts(4, 10, 3).unwrap();
    assert_eq!((w.a1, w.a2), (0, 0));
    assert!(matches!(weil_from_counts(4, 11, 3), Err(Error::InconsistentCounts { .. })));
}

#[test]
fn genus_two_search() {
    assert!(search_g2(3, (0, -4), SearchOptions::default()).unwrap().is_empty());
    assert!(search_g2(5, (0, -8), SearchOptions::default()).unwrap().is_empty());
    let hits = search_g2(3, (0, 0), SearchOptions::default()).unwrap();
    assert!(hits.contains(&model(3, &[1, 0, 0, 0, 0, 1])));
    assert!(matches!(search_g2(4, (0, -6), SearchOptions::default()), Err(Error::Parameter(_))));
}

/// Squarefree test by Euclid's algorithm over `F_p`, coefficients low first.
fn squarefree_mod_p(f: &[i64], p: i64) -> bool {
    fn trim(mut a: Vec<i64>) -> Vec<i64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }
    fn inv(a: i64, p: i64) -> i64 {
        (1..p).find(|x| a * x % p == 1).unwrap()
    }
    fn rem(mut a: Vec<i64>, b: &[i64], p: i64) -> Vec<i64> {
        let lead = inv(*b.last().unwrap(), p);
        while a.len() >= b.len() {
            let c = a.last().unwrap() * lead % p;
            let shift = a.len() - b.len();
            for (i, &bi) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] - c * bi).rem_euclid(p);
            }
            a = trim(a);
        }
        a
    }
    let df: Vec<i64> = trim(f.iter().enumerate().skip(1).map(|(i, &c)| i as i64 * c % p).collect());
    if df.is_empty() {
        return false;
    }
    let (mut a, mut b) = (trim(f.to_vec()), df);
    while !b.is_empty() {
        let r = rem(a, &b, p);
        a = b;
        b = r;
    }
    a.len() == 1
}

#[test]
fn model_census_size_q3() {
    // leading coefficient 1 or 2, degree 5 or 6, every lower coefficient free
    let mut want = 0;
    for deg in [5usize, 6] {
        for lead in [1i64, 2] {
            for code in 0..3i64.pow(deg as u32) {
                let mut f: Vec<i64> = (0..deg).map(|i| code / 3i64.pow(i as u32) % 3).collect();
                f.push(lead);
                if squarefree_mod_p(&f, 3) {
                    want += 1;
                }
            }
        }
    }
    let got: u64 = census_g2(3, 1).unwrap().values().sum();
    assert_eq!(got, want);
}

#[test]
fn elliptic_classes() {
    let f9 = quadratic_extension(3).unwrap();
    let all = enumerate_ec_classes(&f9);
    assert!(all.iter().all(|c| c.rep.is_squarefree(&f9)));
    // orbit sizes add up to the number of squarefree monic cubics, q^3 - q^2
    assert_eq!(all.iter().map(|c| c.orbit_size).sum::<u64>(), 9 * 9 * 9 - 9 * 9);
    assert_eq!(all.iter().filter(|c| c.points == 6).count(), 2);

    for (q, n, orbits) in [(3u64, 2usize, (0u64, 1u64)), (5, 3, (1, 1)), (7, 2, (0, 1))] {
        let (field, classes) = ec_target_classes(q).unwrap();
        assert_eq!(classes.len(), n, "q = {q}");
        assert_eq!(galois_orbit_structure(&field, &classes, q).unwrap(), orbits, "q = {q}");
    }
}

#[test]
fn quadratic_orders() {
    assert_eq!(h_imag(-20).unwrap(), 2);
    assert_eq!(h_imag(-4).unwrap(), 1);
    assert_eq!(h_imag(-36).unwrap(), 2);
    assert_eq!(h_imag(-180).unwrap(), 4);
    assert!(h_imag(5).is_err());
    assert!(h_imag(-6).is_err());

    assert_eq!(narrow_class_real(5).unwrap(), 1);
    assert_eq!(narrow_class_real(8).unwrap(), 1);
    assert_eq!(narrow_class_real(40).unwrap(), 2);
    assert!(narrow_class_real(16).is_err());
    assert!(narrow_class_real(-4).is_err());

    let big = |n: i64| BigInt::from(n);
    for (n, x, y, norm) in [(2u64, 1, 1, -1i8), (10, 3, 1, -1), (90, 19, 2, 1)] {
        let s = pell_fundamental(n).unwrap();
        assert_eq!((s.x, s.y, s.norm), (big(x), big(y), norm), "N = {n}");
    }
    assert!(pell_fundamental(9).is_err());

    assert_eq!(wide_from_narrow(40).unwrap(), (2, 2));
    assert_eq!(wide_from_narrow(8).unwrap(), (1, 1));
    let hp = narrow_class_real(360).unwrap();
    assert_eq!(wide_from_narrow(360).unwrap(), (hp / 2, hp));

    for (n, x, y) in [(10u64, 19, 6), (2, 3, 2), (3, 2, 1)] {
        let u = totally_positive_generator(n).unwrap();
        assert_eq!((u.x, u.y), (big(x), big(y)), "N = {n}");
    }

    assert_eq!(unit_index_plus(5, 1).unwrap(), 1);
    assert_eq!(unit_index_plus(5, 3).unwrap(), 1);
    assert_eq!(unit_index_plus(1, 3).unwrap(), 2);
}

#[test]
fn quartic_orders() {
    assert!(CMOrderBasis::new(3, 1).is_err());
    assert!(CMOrderBasis::new(9, 1).is_err());
    assert!(CMOrderBasis::new(5, 2).is_err());

    for d in [1u64, 5, 13] {
        let o = CMOrderBasis::new(d, 1).unwrap();
        let r1 = OrderIdeal::unit(&o);
        assert_eq!(g2census::biquadratic::is_principal(&r1).unwrap().unwrap().to_small(), Some([1, 0, 0, 0]));
        let x = OrderIdeal::principal(&o, &[0, 1, 0, 0]).unwrap();
        assert_eq!(x.norm(), 4);
        assert!(g2census::biquadratic::is_principal(&x).unwrap().is_some());
    }

    assert_eq!(class_number_max(1).unwrap(), 1);
    assert_eq!(class_number_max(5).unwrap(), 2);
    for d in [1u64, 5, 13, 17] {
        assert_eq!(ring_class_number(d, 1).unwrap(), class_number_max(d).unwrap());
    }
    let h53 = ring_class_number(5, 3).unwrap();
    assert_eq!(norm_unit_index(5, 3).unwrap() * h53, 2 * narrow_class_real(360).unwrap());
}

#[test]
fn order_arithmetic() {
    let o = CMOrderBasis::new(5, 1).unwrap();
    let (x, y) = ([0, 1, 0, 0], [0, 0, 1, 0]);
    // y^2 = x y + 3
    assert_eq!(o.mul(&y, &y), [3, 0, 0, 1]);
    assert_eq!(o.norm(&x), 4);
    assert_eq!(o.trace(&o.one()), 4);
    for (d, f) in [(1u64, 1u64), (5, 1), (5, 3), (13, 5), (29, 9)] {
        let o = CMOrderBasis::new(d, f).unwrap();
        let fi = f as i128;
        assert_eq!(o.mul(&x, &x), [-2, 0, 0, 0]);
        let tf = o.trace_form();
        assert_eq!(g2census::biquadratic::order::det4(&tf), 256 * (d * d) as i128 * fi.pow(4));
        let yc = OrderElement::from_small(y).conj_complex(&o);
        assert_eq!(yc.to_small(), Some([0, -fi, 1, 0]));
    }
    for q in [3u64, 5, 7, 13, 41] {
        let dq = decompose(q).unwrap();
        let o = CMOrderBasis::new(dq.d, 1).unwrap();
        let pi = OrderElement::from_small(o.frobenius(dq.big_f).unwrap());
        assert_eq!(pi.mul(&o, &pi.conj_complex(&o)).to_small(), Some([q as i128, 0, 0, 0]));
    }
}

#[test]
fn ideal_arithmetic() {
    for (d, f) in [(5u64, 1u64), (5, 3), (13, 1)] {
        let o = CMOrderBasis::new(d, f).unwrap();
        let i = OrderIdeal::from_generators(&o, &[[0, 1, 0, 0], [3, 0, 0, 0]], 3).unwrap();
        assert_eq!(i.mul(&OrderIdeal::unit(&o)), i);
    }
    let o = CMOrderBasis::new(13, 1).unwrap();
    for f in [1i128, 3, 5] {
        assert_eq!(OrderIdeal::principal(&o, &[f, 0, 0, 0]).unwrap().norm(), f.pow(4));
    }
    // D = 5: a prime of norm 3 that is not principal
    let o = CMOrderBasis::new(5, 1).unwrap();
    let primes = g2census::biquadratic::prime_ideals(&o, 3).unwrap();
    let p3: Vec<_> = primes.iter().filter(|p| p.norm == 3).collect();
    assert!(!p3.is_empty());
    for p in p3 {
        let i = OrderIdeal::from_hnf(&o, p.hnf).unwrap();
        assert!(g2census::biquadratic::is_principal(&i).unwrap().is_none());
    }
}

#[test]
fn units() {
    let u1 = quartic_unit(1).unwrap();
    assert_eq!((u1.case, u1.mu), (2, 8));
    assert_eq!((u1.u.x.clone(), u1.u.y.clone(), u1.u.norm), (BigInt::from(1), BigInt::from(1), -1));

    let u13 = quartic_unit(13).unwrap();
    let tp = totally_positive_generator(26).unwrap();
    assert_eq!((tp.x, tp.y), (BigInt::from(51), BigInt::from(10)));
    assert_eq!((u13.u.x.clone(), u13.u.y.clone(), u13.u.norm), (BigInt::from(5), BigInt::from(1), -1));

    assert_eq!(norm_unit_index(1, 1).unwrap(), 1);
    assert_eq!(norm_unit_index(5, 1).unwrap(), 1);
    for d in [1u64, 5, 13, 17, 21, 29, 33, 37, 41] {
        for f in [1u64, 3, 5, 7, 9] {
            assert!(matches!(norm_unit_index(d, f).unwrap(), 1 | 2));
        }
    }
}

#[test]
fn residues() {
    for f in [1u64, 3, 5, 9, 15] {
        let phi = (1..=f).filter(|k| g2census::arith::gcd_u64(*k, f) == 1).count() as u64;
        assert_eq!(residue_unit_count(ResidueRing::Z, 5, f, 15).unwrap(), phi);
    }
    assert_eq!(residue_unit_count(ResidueRing::O, 5, 3, 15).unwrap(), 4);
    assert!(matches!(residue_unit_count(ResidueRing::R1, 5, 21, 15), Err(Error::Budget { .. })));

    let r = verify_lemma_residues(5, 1).unwrap();
    assert_eq!((r.lhs, r.rhs), (1, 1));
    assert!(verify_lemma_residues(5, 3).unwrap().holds);
    let r = verify_lemma_residues(5, 3).unwrap();
    assert_eq!(r.lhs, 2u64.pow(6));

    let u = verify_unit_lemmas(5, 1).unwrap();
    assert_eq!((u.g_f, u.g_plus_f, u.d_f, u.d_plus_f), (1, 1, 1, 1));
    let u = verify_unit_lemmas(5, 3).unwrap();
    assert_eq!(u.g_plus_f, 1);
    let u = verify_unit_lemmas(1, 3).unwrap();
    assert_eq!(u.g_f, 4 * u.norm_index);
    assert!(u.holds);
}

#[test]
fn level_one_and_brauer() {
    let l = verify_level_one(5).unwrap();
    assert_eq!((l.h_k, l.h_plus, l.h_s1, l.idx, l.lhs, l.rhs), (2, 2, 2, 1, 1, 1));
    let l = verify_level_one(1).unwrap();
    assert_eq!((l.h_k, l.h_plus, l.h_s1, l.idx, l.lhs, l.rhs), (1, 1, 1, 1, 1, 1));
    assert!(verify_level_one(13).unwrap().holds);

    for d in [5u64, 1, 13] {
        let b = verify_brauer(d, 1).unwrap();
        assert_eq!((b.lhs, b.rhs, b.equal), (1, 1, true), "D = {d}");
    }
}

#[test]
fn census() {
    let dq = |q| {
        let d = decompose(q).unwrap();
        (d.big_f, d.d)
    };
    assert_eq!(dq(3), (1, 5));
    assert_eq!(dq(13), (5, 1));
    assert_eq!(dq(41), (9, 1));
    assert!(decompose(4).unwrap_err().to_string().contains("Honda-Tate"));
    assert!(decompose(2).unwrap_err().to_string().contains("q = 2"));
    assert!(matches!(decompose(15), Err(Error::Parameter(_))));

    for (q, n) in [(3u64, 1u64), (5, 2), (7, 1)] {
        assert_eq!(ppas_count(q).unwrap(), n);
        assert_eq!(split_count(q).unwrap(), n);
    }
    for (q, n) in [(3u64, 2u64), (5, 3), (7, 2)] {
        assert_eq!(ec_class_count(q).unwrap(), n);
    }

    let both = VerifyOptions { brute_force_ec: true, brute_force_g2: true, ..VerifyOptions::default() };
    let r = verify_theorem(3, &both).unwrap();
    assert!(r.passed && r.checks.iter().all(|c| c.passed));
    let r = verify_theorem(5, &both).unwrap();
    assert!(r.passed);
    let ec = r.ec_brute_force.unwrap();
    assert_eq!((ec.n1, ec.n2), (1, 1));
    assert_eq!(r.g2_search.unwrap().models_found, 0);
}

#[test]
fn models_share_one_field() {
    let f = field_for_q(9).unwrap();
    let m = GenusTwoModel::from_ints(Arc::clone(&f), &[0, -1, 0, 0, 0, 1]).unwrap();
    assert_eq!(m.field(), &*f);
    assert_eq!(m.degree(), 5);
}
