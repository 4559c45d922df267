//! One line per acceptance criterion. Runs without the libtest harness so the
//! verdicts are printed even when everything passes.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use g2census::arith::is_squarefree;
use g2census::biquadratic::{
    residue_unit_count, verify_brauer, verify_lemma_residues, verify_level_one, verify_unit_lemmas, ResidueRing,
};
use g2census::cache::ClassCache;
use g2census::census::{decompose, odd_prime_powers, Census, VerifyOptions};
use g2census::cli::{EXIT_MISMATCH, EXIT_OK};
use g2census::curves::{ec_target_classes, galois_orbit_structure, search_g2, SearchOptions};
use g2census::quadratic::h_imag;

use common::oracle::*;
use common::run::{fault_injection_codes, outputs_identical_across_jobs};

/// Every criterion is an exact integer comparison.
const TOLERANCE: u64 = 0;
const JOBS: usize = 8;
const SEARCH_QS: [u64; 6] = [3, 5, 7, 9, 11, 13];
const LEMMA_DS: [u64; 6] = [1, 5, 13, 17, 21, 29];
const LEMMA_FS: [u64; 5] = [1, 3, 5, 9, 15];

type Verdict = Result<String, String>;

fn exact(what: &str, got: u64, want: u64) -> Result<(), String> {
    if got.abs_diff(want) > TOLERANCE {
        Err(format!("{what}: got {got}, expected {want}"))
    } else {
        Ok(())
    }
}

fn criterion_1() -> Verdict {
    for q in SEARCH_QS {
        let target = (0, 2 - 2 * q as i64);
        let prunes: &[bool] = if q <= 7 { &[true, false] } else { &[true] };
        for &prune in prunes {
            let hits = search_g2(q, target, SearchOptions { jobs: JOBS, prune }).map_err(|e| e.to_string())?;
            exact(&format!("models for q = {q}, prune = {prune}"), hits.len() as u64, 0)?;
        }
    }
    Ok(format!("no genus-2 model for q in {SEARCH_QS:?}"))
}

fn criterion_2() -> Verdict {
    let qs = odd_prime_powers(3, 500);
    let cache = ClassCache::in_memory();
    let reports = Census::new(&cache).sweep(&qs, &VerifyOptions::default(), JOBS).map_err(|e| e.to_string())?;
    let mut terms = 0;
    for r in &reports {
        for t in &r.terms {
            if t.lhs != t.rhs {
                return Err(format!("q = {}, f = {}: {} vs {}", r.decomposition.q, t.f, t.lhs, t.rhs));
            }
            terms += 1;
        }
        if r.ppas_count != r.split_count || !r.passed {
            return Err(format!("q = {}: {} vs {}", r.decomposition.q, r.ppas_count, r.split_count));
        }
    }
    Ok(format!("{} values of q, {terms} terms", reports.len()))
}

fn criterion_3() -> Verdict {
    let mut n = 0;
    for d in (1..=101).filter(|&d| d % 4 == 1 && is_squarefree(d)) {
        for f in [1, 3, 5, 7, 9] {
            let b = verify_brauer(d, f).map_err(|e| format!("D = {d}, f = {f}: {e}"))?;
            exact(&format!("D = {d}, f = {f}"), b.lhs, b.rhs)?;
            n += 1;
        }
    }
    Ok(format!("{n} pairs (D, f)"))
}

fn criterion_4() -> Verdict {
    for q in SEARCH_QS {
        let dq = decompose(q).map_err(|e| e.to_string())?;
        let (field, classes) = ec_target_classes(q).map_err(|e| e.to_string())?;
        let mut want = 0;
        for f in g2census::arith::divisors(dq.big_f) {
            let f = f as i64;
            want += h_imag(-4 * dq.d as i64 * f * f).map_err(|e| e.to_string())?;
        }
        exact(&format!("classes for q = {q}"), classes.len() as u64, want)?;
        let (n1, n2) = galois_orbit_structure(&field, &classes, q).map_err(|e| e.to_string())?;
        exact(&format!("n1 for q = {q}"), n1, u64::from(dq.d == 1))?;
        exact(&format!("orbit sizes for q = {q}"), n1 + 2 * n2, want)?;
    }
    Ok("class counts and Galois orbits match for q in 3..=13".into())
}

fn criterion_5() -> Verdict {
    let a = check_h_imag_oracle(500)?;
    let b = check_point_count_oracle(100)?;
    check_level_one_class_numbers(&LEMMA_DS)?;
    let (d, exhaustive) = check_pell_oracle(1000)?;
    let e1 = classes_by_enumeration(1, 3, 21)? as u64;
    exact("classes of R_3, D = 1", e1, g2census::biquadratic::ring_class_number(1, 3).map_err(|e| e.to_string())?)?;
    Ok(format!(
        "{a} discriminants, {b} models, {} conductor-1 fields, {d} Pell equations ({exhaustive} searched in full)",
        LEMMA_DS.len()
    ))
}

fn criterion_6() -> Verdict {
    let mut n = 0;
    for d in LEMMA_DS {
        let l = verify_level_one(d).map_err(|e| e.to_string())?;
        exact(&format!("level one, D = {d}"), l.lhs, l.rhs)?;
        for f in LEMMA_FS {
            let r = verify_lemma_residues(d, f).map_err(|e| format!("D = {d}, f = {f}: {e}"))?;
            exact(&format!("residues, D = {d}, f = {f}"), r.lhs, r.rhs)?;
            let u = verify_unit_lemmas(d, f).map_err(|e| format!("D = {d}, f = {f}: {e}"))?;
            if !u.holds {
                return Err(format!("unit lemmas fail for D = {d}, f = {f}: {u:?}"));
            }
            n += 3;
        }
    }
    // 3 splits completely in Q(sqrt -2, sqrt -5) and Q(sqrt -2, sqrt -17)
    for d in [5, 17] {
        for (f, e) in [(3u64, 1u32), (9, 2)] {
            let want = 2u64.pow(6) * 3u64.pow(6 * e - 6);
            let r = verify_lemma_residues(d, f).map_err(|e| e.to_string())?;
            exact(&format!("split value, D = {d}, f = {f}"), r.lhs, want)?;
            exact(&format!("split value, D = {d}, f = {f}"), r.rhs, want)?;
            let direct = residue_unit_count(ResidueRing::R1, d, f, f).map_err(|e| e.to_string())?;
            exact(&format!("(R_1/{f})^*, D = {d}"), direct, 2u64.pow(4) * 3u64.pow(4 * e - 4))?;
            n += 1;
        }
    }
    Ok(format!("{n} identities"))
}

fn criterion_7() -> Verdict {
    outputs_identical_across_jobs()?;
    let codes = fault_injection_codes();
    if codes != (EXIT_OK, EXIT_MISMATCH, EXIT_OK) {
        return Err(format!("exit codes clean/tampered/corrupt = {codes:?}"));
    }
    Ok("bytes identical for jobs 1, 4, 8; tampered cache exits 2".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 7] = [
        ("exhaustive genus-2 search", criterion_1),
        ("termwise identity for q < 500", criterion_2),
        ("class-number identity sweep", criterion_3),
        ("elliptic curve brute force", criterion_4),
        ("oracle equivalences", criterion_5),
        ("lemma suite", criterion_6),
        ("determinism and fault injection", criterion_7),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let verdict = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match verdict {
            Ok(detail) => println!("criterion {}: PASS  {name}: {detail} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {}: FAIL  {name}: {why} ({secs:.1}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
