//! Command-line front end. Exit status: 0 when every check passes, 1 for
//! usage and parameter errors, 2 for a failed verification or an unexpected
//! search hit.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arith;
use crate::biquadratic::BrauerContext;
use crate::cache::{ClassCache, CACHE_ENV};
use crate::census::{decompose, ec_class_count, odd_prime_powers, Census, IsogenyClassReport, VerifyOptions};
use crate::curves::{ec_target_classes, galois_orbit_structure, search_g2, SearchOptions};
use crate::error::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_MISMATCH: i32 = 2;

pub const CSV_HEADER: &str = "q,p,e,F,D,f,idx,h_Rf,h_plus,h_Sf,lhs,rhs,equal";

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Emit {
    Table,
    Csv,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "g2census", version, about = "Exact verification for the genus-2 isogeny class x^4 + (2-2q)x^2 + q^2")]
pub struct Cli {
    /// Cache file (defaults to $G2V_CACHE; in memory when neither is given).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Ignore any cache file.
    #[arg(long, global = true)]
    no_cache: bool,
    /// Print phase timings to standard error.
    #[arg(long, global = true)]
    timings: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compare polarized-surface and split-surface counts for one q or a range.
    Census {
        #[arg(long, conflicts_with = "q_range", required_unless_present = "q_range")]
        q: Option<u64>,
        /// Half-open range `LO..HI` of q values; only odd prime powers are used.
        #[arg(long)]
        q_range: Option<String>,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Also count elliptic curves over F_{q^2} by enumeration.
        #[arg(long)]
        brute_force_ec: bool,
        /// Also search all genus-2 models over F_q.
        #[arg(long)]
        brute_force_g2: bool,
        /// Run the residue and unit lemma checks for conductors up to this size.
        #[arg(long, default_value_t = 0)]
        f_budget: u64,
    },
    /// Check the class-number identity for one D and every odd f up to f-max.
    Brauer {
        #[arg(long = "D")]
        d: u64,
        #[arg(long, default_value_t = 1)]
        f_max: u64,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
        /// Enumeration budget for the residue diagnostics.
        #[arg(long, default_value_t = 15)]
        budget: u64,
    },
    /// Enumerate genus-2 models over F_q with a given Weil polynomial.
    SearchG2 {
        #[arg(long)]
        q: u64,
        /// `a1,a2` of x^4 + a1 x^3 + a2 x^2 + q a1 x + q^2; defaults to 0,2-2q.
        #[arg(long, allow_hyphen_values = true)]
        target: Option<String>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Count every model in full instead of abandoning hopeless ones early.
        #[arg(long)]
        no_prune: bool,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Enumerate elliptic curves over F_{q^2} with trace 2q-2.
    SearchEc {
        #[arg(long)]
        q: u64,
        #[arg(long, value_enum, default_value = "table")]
        emit: Emit,
    },
    /// Inspect or clear the cache.
    Cache {
        #[command(subcommand)]
        action: CacheAction,
    },
}

#[derive(Debug, Subcommand)]
enum CacheAction {
    /// Print the cache location.
    Path,
    /// List every record.
    Show,
    /// Remove every record.
    Clear,
}

/// Runs the CLI on `args` (including the program name).
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(text.as_bytes()) } else { out.write_all(text.as_bytes()) };
            return code;
        }
    };
    match execute(&cli, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Internal(_) | Error::InconsistentCounts { .. } => EXIT_MISMATCH,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn open_cache(cli: &Cli) -> Result<ClassCache> {
    if cli.no_cache {
        return Ok(ClassCache::in_memory());
    }
    match &cli.cache {
        Some(p) => ClassCache::open(p),
        None => ClassCache::from_env(),
    }
}

fn execute(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32> {
    let cache = open_cache(cli)?;
    if cache.discarded() > 0 {
        writeln!(err, "cache: discarded {} corrupt record(s)", cache.discarded())?;
    }
    let code = match &cli.command {
        Command::Census { q, q_range, emit, jobs, brute_force_ec, brute_force_g2, f_budget } => {
            let single = q.is_some();
            let qs = match (q, q_range) {
                (Some(q), _) => vec![*q],
                (None, Some(r)) => parse_range(r)?,
                (None, None) => unreachable!("clap requires one of --q, --q-range"),
            };
            let opts = VerifyOptions {
                brute_force_ec: *brute_force_ec,
                brute_force_g2: *brute_force_g2,
                f_budget: *f_budget,
                jobs: *jobs,
            };
            let census = Census::new(&cache);
            let reports = if single {
                vec![census.verify(qs[0], &opts)?]
            } else {
                census.sweep(&qs, &opts, *jobs)?
            };
            if cli.timings {
                for r in &reports {
                    for (name, t) in &r.timings {
                        writeln!(err, "timing q={} {name}: {:.3}s", r.decomposition.q, t.as_secs_f64())?;
                    }
                }
            }
            emit_census(&reports, single, *emit, out)?;
            if reports.iter().all(|r| r.passed) { EXIT_OK } else { EXIT_MISMATCH }
        }
        Command::Brauer { d, f_max, emit, budget } => {
            let ctx = BrauerContext::new(*d)?;
            let rows = (1..=*f_max)
                .step_by(2)
                .map(|f| ctx.breakdown(f, *budget))
                .collect::<Result<Vec<_>>>()?;
            match emit {
                Emit::Json => writeln!(out, "{}", to_json(&rows)?)?,
                Emit::Csv => {
                    writeln!(out, "{CSV_HEADER}")?;
                    for b in &rows {
                        writeln!(out, ",,,,{},{},{},{},{},{},{},{},{}", b.d, b.f, b.idx, b.h_rf, b.h_plus, b.h_sf, b.lhs, b.rhs, b.equal)?;
                    }
                }
                Emit::Table => {
                    writeln!(out, "D = {}  h_K = {}", d, ctx.h_k)?;
                    writeln!(out, "{:>4} {:>4} {:>6} {:>7} {:>6} {:>5} {:>5}", "f", "idx", "h_Rf", "h_plus", "h_Sf", "lhs", "rhs")?;
                    for b in &rows {
                        writeln!(
                            out,
                            "{:>4} {:>4} {:>6} {:>7} {:>6} {:>5} {:>5}  {}",
                            b.f, b.idx, b.h_rf, b.h_plus, b.h_sf, b.lhs, b.rhs,
                            if b.equal { "ok" } else { "FAIL" }
                        )?;
                    }
                    writeln!(out, "{}", if rows.iter().all(|b| b.equal) { "PASS" } else { "FAIL" })?;
                }
            }
            if rows.iter().all(|b| b.equal) { EXIT_OK } else { EXIT_MISMATCH }
        }
        Command::SearchG2 { q, target, jobs, no_prune, emit } => {
            let default = (0, 2 - 2 * *q as i64);
            let tgt = match target {
                Some(t) => parse_target(t)?,
                None => default,
            };
            let hits = search_g2(*q, tgt, SearchOptions { jobs: *jobs, prune: !*no_prune })?;
            let report = SearchReport {
                q: *q,
                target: tgt,
                models_found: hits.len(),
                models: hits.iter().map(|m| m.encodings()).collect(),
            };
            match emit {
                Emit::Json => writeln!(out, "{}", to_json(&report)?)?,
                Emit::Csv => {
                    writeln!(out, "q,a1,a2,models_found,models")?;
                    let models: Vec<String> = report
                        .models
                        .iter()
                        .map(|m| m.iter().map(|c| c.to_string()).collect::<Vec<_>>().join(" "))
                        .collect();
                    writeln!(out, "{},{},{},{},{}", q, tgt.0, tgt.1, hits.len(), models.join(";"))?;
                }
                Emit::Table => {
                    writeln!(out, "q = {q}, target (a1, a2) = ({}, {}): {} models found", tgt.0, tgt.1, hits.len())?;
                    for m in &report.models {
                        writeln!(out, "  coefficients (constant first): {m:?}")?;
                    }
                }
            }
            if tgt == default && !hits.is_empty() {
                writeln!(err, "unexpected genus-2 model(s) in the target class; see output")?;
                EXIT_MISMATCH
            } else {
                EXIT_OK
            }
        }
        Command::SearchEc { q, emit } => {
            let dq = decompose(*q)?;
            let (field, classes) = ec_target_classes(*q)?;
            let (n1, n2) = galois_orbit_structure(&field, &classes, *q)?;
            let expected = ec_class_count(*q)?;
            let report = EcReport {
                q: *q,
                classes: classes.len() as u64,
                expected,
                n1,
                n2,
                passed: classes.len() as u64 == expected && n1 == arith::epsilon(dq.d),
            };
            match emit {
                Emit::Json => writeln!(out, "{}", to_json(&report)?)?,
                Emit::Csv => {
                    writeln!(out, "q,classes,expected,n1,n2,passed")?;
                    writeln!(out, "{},{},{},{},{},{}", q, report.classes, expected, n1, n2, report.passed)?;
                }
                Emit::Table => writeln!(
                    out,
                    "q = {q}: {} classes (expected {expected}), n1 = {n1}, n2 = {n2}  {}",
                    report.classes,
                    if report.passed { "PASS" } else { "FAIL" }
                )?,
            }
            if report.passed { EXIT_OK } else { EXIT_MISMATCH }
        }
        Command::Cache { action } => {
            match action {
                CacheAction::Path => match cache.path() {
                    Some(p) => writeln!(out, "{}", p.display())?,
                    None => writeln!(out, "(in memory; set --cache or {CACHE_ENV})")?,
                },
                CacheAction::Show => {
                    for (tag, params, value) in cache.entries() {
                        let p: Vec<String> = params.iter().map(|x| x.to_string()).collect();
                        writeln!(out, "{tag}({}) = {value}", p.join(","))?;
                    }
                }
                CacheAction::Clear => {
                    cache.clear();
                    writeln!(out, "cleared")?;
                }
            }
            EXIT_OK
        }
    };
    cache.save()?;
    Ok(code)
}

#[derive(Debug, Serialize)]
struct SearchReport {
    q: u64,
    target: (i64, i64),
    models_found: usize,
    models: Vec<Vec<u32>>,
}

#[derive(Debug, Serialize)]
struct EcReport {
    q: u64,
    classes: u64,
    expected: u64,
    n1: u64,
    n2: u64,
    passed: bool,
}

fn to_json<T: Serialize>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v).map_err(|e| Error::Internal(format!("json: {e}")))
}

fn parse_range(r: &str) -> Result<Vec<u64>> {
    let bad = || Error::Parameter(format!("range `{r}` must look like LO..HI"));
    let (lo, hi) = r.split_once("..").ok_or_else(bad)?;
    let lo: u64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: u64 = hi.trim().parse().map_err(|_| bad())?;
    let qs = odd_prime_powers(lo, hi);
    if qs.is_empty() {
        return Err(Error::Parameter(format!("no odd prime powers in {r}")));
    }
    Ok(qs)
}

fn parse_target(t: &str) -> Result<(i64, i64)> {
    let bad = || Error::Parameter(format!("target `{t}` must look like a1,a2"));
    let (a, b) = t.split_once(',').ok_or_else(bad)?;
    Ok((a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?))
}

/// Writes reports in the requested format.
pub fn emit_census(reports: &[IsogenyClassReport], single: bool, emit: Emit, out: &mut dyn Write) -> Result<()> {
    match emit {
        Emit::Json if single => writeln!(out, "{}", to_json(&reports[0])?)?,
        Emit::Json => writeln!(out, "{}", to_json(&reports)?)?,
        Emit::Csv => {
            writeln!(out, "{CSV_HEADER}")?;
            for r in reports {
                let dq = &r.decomposition;
                for t in &r.terms {
                    writeln!(
                        out,
                        "{},{},{},{},{},{},{},{},{},{},{},{},{}",
                        dq.q, dq.p, dq.e, dq.big_f, dq.d, t.f, t.idx, t.h_rf, t.h_plus, t.h_sf, t.lhs, t.rhs, t.equal
                    )?;
                }
            }
        }
        Emit::Table => {
            for r in reports {
                let dq = &r.decomposition;
                writeln!(
                    out,
                    "q = {} = {}^{}   2q-1 = {}^2 * {}   ppas = {}   split = {}   elliptic classes = {}   {}",
                    dq.q, dq.p, dq.e, dq.big_f, dq.d, r.ppas_count, r.split_count, r.ec_class_count,
                    if r.passed { "ok" } else { "FAIL" }
                )?;
                for c in r.checks.iter().filter(|c| single || !c.passed) {
                    writeln!(out, "    {:<28} {:<8} {}", c.name, if c.passed { "ok" } else { "MISMATCH" }, c.detail)?;
                }
            }
            let failed = reports.iter().filter(|r| !r.passed).count();
            if failed == 0 {
                writeln!(out, "PASS ({} value(s) of q)", reports.len())?;
            } else {
                writeln!(out, "FAIL ({failed} of {} value(s) of q)", reports.len())?;
            }
        }
    }
    Ok(())
}
