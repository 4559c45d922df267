//! Drives the command line in process.

use std::fs;

use g2census::cache::{format_record, HEADER};
use g2census::cli::{run, EXIT_OK};

pub fn g2v(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run(std::iter::once("g2census").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

pub fn outputs_identical_across_jobs() -> Result<(), String> {
    let variants: [&[&str]; 5] = [
        &["census", "--q-range", "3..60", "--emit", "csv"],
        &["census", "--q-range", "3..60", "--emit", "json"],
        &["census", "--q", "7", "--brute-force-ec", "--brute-force-g2", "--emit", "json"],
        &["search-g2", "--q", "5", "--target", "0,0", "--emit", "json"],
        &["search-g2", "--q", "7", "--emit", "csv"],
    ];
    for args in variants {
        let mut first: Option<String> = None;
        for jobs in ["1", "4", "8"] {
            let mut full = vec!["--no-cache"];
            full.extend_from_slice(args);
            full.extend_from_slice(&["--jobs", jobs]);
            let (code, out, err) = g2v(&full);
            if code != EXIT_OK {
                return Err(format!("{args:?} --jobs {jobs}: exit {code}: {err}"));
            }
            match &first {
                None => first = Some(out),
                Some(f) if *f != out => return Err(format!("{args:?}: output differs at --jobs {jobs}")),
                _ => {}
            }
        }
    }
    Ok(())
}

/// Runs `census --q 7` against a cache whose `h(-52)` record has been
/// rewritten, with a valid checksum, to the wrong value. Returns the exit
/// codes of a clean run, the tampered run, and a run whose record carries a
/// broken checksum.
pub fn fault_injection_codes() -> (i32, i32, i32) {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cache.txt");
    let p = path.to_str().unwrap();
    let (clean, _, _) = g2v(&["--cache", p, "census", "--q", "7"]);

    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with(HEADER));
    let good = format_record("h_imag", &[-52], 2);
    assert!(text.contains(&good), "{text}");
    fs::write(&path, text.replace(&good, &format_record("h_imag", &[-52], 3))).unwrap();
    let (tampered, _, _) = g2v(&["--cache", p, "census", "--q", "7"]);

    let broken = good.replacen("\t2\t", "\t3\t", 1);
    fs::write(&path, text.replace(&good, &broken)).unwrap();
    let (discarded, _, _) = g2v(&["--cache", p, "census", "--q", "7"]);
    (clean, tampered, discarded)
}
