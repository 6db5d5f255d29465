//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use anyhow::{bail, ensure, Context, Result};
use seccache_core::analysis::{
    compare_same_access, compare_same_cache, curve_secrecy_only, curve_secrecy_privacy, decimal, feasibility_floor,
    gap_certificate, lower_bound, memory_corner, memory_share, memory_sp, sample_envelope, CompareRow, Regime,
};
use seccache_core::combinatorics::binom;
use seccache_core::scheme::{
    decode, deliver, draw_randomness, place, DemandVector, Library, SchemeParams, Topology, Variant,
};
use seccache_core::verifier::{
    verify_cache_secrecy_rank, verify_privacy_exhaustive, verify_secrecy_exhaustive, Fault, Outcome,
};
use seccache_core::Rational;

fn q(n: i128, d: i128) -> Rational {
    Rational::new(n, d)
}

fn z(n: i128) -> Rational {
    Rational::from_integer(n)
}

fn b(n: usize, k: usize) -> i128 {
    binom(n as u64, k as i64).unwrap() as i128
}

fn params(c: usize, r: usize, n: usize, t: usize, variant: Variant) -> Result<SchemeParams> {
    Ok(SchemeParams::new(Topology::new(c, r, n)?, t, variant, 1)?)
}

fn within(limit: Duration, start: Instant) -> Result<()> {
    let took = start.elapsed();
    ensure!(took < limit, "took {took:?}, limit {limit:?}");
    Ok(())
}

fn bin(args: &[&str]) -> Result<Output> {
    let out = Command::new(env!("CARGO_BIN_EXE_seccache")).args(args).output()?;
    Ok(out)
}

fn bin_ok(args: &[&str]) -> Result<Vec<u8>> {
    let out = bin(args)?;
    ensure!(out.status.success(), "{args:?} exited {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
    Ok(out.stdout)
}

/// Places, delivers and decodes for every user; returns the number of users
/// that recovered their file bit for bit.
fn run_once(p: &SchemeParams, library: &Library, seed: u64, demands: &DemandVector) -> Result<usize> {
    let randomness = draw_randomness(p, seed);
    let placement = place(p, library, &randomness)?;
    let bc = deliver(p, &randomness, &placement.shares, demands)?;
    let mut ok = 0;
    for (gi, g) in p.users().enumerate() {
        let out = decode(p, g, &bc, &placement.caches_of(g), demands.of(gi), Some(demands))?;
        ok += usize::from(out.as_slice() == library.file(demands.of(gi)));
    }
    Ok(ok)
}

fn criterion_1() -> Result<()> {
    let start = Instant::now();
    let p = params(4, 2, 6, 1, Variant::SecrecyPrivacy)?;
    ensure!((p.sharing().m(), p.sharing().n()) == (2, 4), "sharing is ({}, {})", p.sharing().m(), p.sharing().n());
    let library = Library::random(&p, 11);
    let randomness = draw_randomness(&p, 12);
    let placement = place(&p, &library, &randomness)?;
    for z in &placement.caches {
        ensure!(z.size_in_files(&p) == self::z(6), "cache {} holds {}", z.cache, z.size_in_files(&p));
    }
    let fixed = DemandVector::new(&p, vec![1, 2, 3, 4, 5, 6])?;
    let bc = deliver(&p, &randomness, &placement.shares, &fixed)?;
    ensure!(bc.payloads.len() == 4, "{} payloads", bc.payloads.len());
    ensure!(run_once(&p, &library, 12, &fixed)? == 6, "fixed demand vector");
    for trial in 0..100 {
        let d = DemandVector::random(&p, 1000 + trial);
        ensure!(run_once(&p, &library, 2000 + trial, &d)? == 6, "random demand vector {:?}", d.as_slice());
    }
    within(Duration::from_secs(1), start)?;

    let dir = tempfile::tempdir()?;
    let out = dir.path().to_str().context("utf-8 temp path")?;
    bin_ok(&["simulate", "--C", "4", "--r", "2", "--N", "6", "--t", "1", "--demands", "1,2,3,4,5,6", "--out", out])?;
    let summary: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json"))?)?;
    ensure!(summary["payloads"] == 4 && summary["cache_size"] == "6", "summary {summary}");
    ensure!(summary["m"] == 2 && summary["n"] == 4 && summary["decoded_ok"] == 6, "summary {summary}");
    Ok(())
}

fn criterion_2() -> Result<()> {
    let start = Instant::now();
    for c in 1..=6 {
        for r in 1..=c {
            for t in 0..=c - r {
                for n in [2, 3] {
                    for variant in [Variant::SecrecyPrivacy, Variant::SecrecyOnly] {
                        let p = params(c, r, n, t, variant)?;
                        let library = Library::random(&p, 5);
                        let randomness = draw_randomness(&p, 6);
                        let placement = place(&p, &library, &randomness)?;
                        let (memory, rate) = if p.is_corner() {
                            (memory_corner(c, r, n)?, z(1))
                        } else {
                            (memory_sp(c, r, n, t)?, q(b(c, t + r), b(c - r, t)))
                        };
                        for cache in &placement.caches {
                            let got = cache.size_in_files(&p);
                            ensure!(got == memory, "{variant} C={c} r={r} N={n} t={t}: cache {got} vs {memory}");
                        }
                        let d = DemandVector::random(&p, 7);
                        let got = deliver(&p, &randomness, &placement.shares, &d)?.rate(&p);
                        ensure!(got == rate, "{variant} C={c} r={r} N={n} t={t}: rate {got} vs {rate}");
                    }
                }
            }
        }
    }
    within(Duration::from_secs(30), start)
}

fn criterion_3() -> Result<()> {
    let (k, n) = (5i128, 7i128);
    let mut expected: Vec<(Rational, Rational)> = (0..=k - 2).map(|t| (q(n * t, k - t) + 1, q(k, t + 1))).collect();
    expected.push((z(n * (k - 1)), z(1)));
    let got: Vec<_> = curve_secrecy_only(5, 1, 7)?.envelope.iter().map(|p| (p.m, p.r)).collect();
    ensure!(got == expected, "vertices {got:?}");
    Ok(())
}

fn criterion_4() -> Result<()> {
    let (c, n) = (5i128, 7i128);
    let sp = curve_secrecy_privacy(5, 1, 7)?;
    let so = curve_secrecy_only(5, 1, 7)?;
    let lo = q(n * (c - 2), 2) + 1;
    let hi = z(n * (c - 1) + 1);
    let mut grid: Vec<Rational> = sp.envelope.iter().chain(&so.envelope).map(|p| p.m).collect();
    grid.extend((0..=256).map(|i| z(1) + (hi + 4) * q(i, 256)));
    grid.extend([lo, hi, lo + q(1, 1000), hi - q(1, 1000)]);
    for m in grid {
        let (a, s) = (memory_share(&sp, m)?, memory_share(&so, m)?);
        if m <= lo || m >= hi {
            ensure!(a == s, "M={m}: {a} vs {s} should agree");
        } else {
            ensure!(a > s, "M={m}: {a} vs {s} should differ");
        }
    }
    Ok(())
}

fn criterion_5() -> Result<()> {
    for c in 1..=6 {
        for r in 1..=c {
            for n in 1..=12 {
                let floor = if r == c { z(0) } else { feasibility_floor(c, r, n)? };
                let cv = curve_secrecy_privacy(c, r, n)?;
                let top = cv.max_memory() + 2;
                for i in 0..=40 {
                    let m = floor + (top - floor) * q(i, 40);
                    let lb = lower_bound(c, r, n, m)?;
                    ensure!(lb >= z(1), "C={c} r={r} N={n} M={m}: bound {lb}");
                }
            }
        }
    }
    for t in [0, 1] {
        let m = memory_sp(4, 3, 8, t)?;
        let cert = gap_certificate(4, 3, 8, m)?;
        ensure!(cert.ratio == z(1) && cert.regime == Regime::Optimal, "t={t} M={m}: {cert:?}");
    }
    let threshold = q(20, 2) + b(3, 1);
    let cv = curve_secrecy_privacy(4, 2, 20)?;
    let grid = sample_envelope(&cv, 64).into_iter().map(|p| p.m).filter(|&m| m >= threshold);
    for m in grid.chain([threshold, cv.max_memory() * 3]) {
        let cert = gap_certificate(4, 2, 20, m)?;
        ensure!(cert.ratio <= z(5), "M={m}: ratio {}", cert.ratio);
    }
    Ok(())
}

fn criterion_6() -> Result<()> {
    let start = Instant::now();
    let p = params(2, 1, 2, 0, Variant::SecrecyPrivacy)?;
    ensure!(p.spec().degree() == 1 && p.s() == 1, "micro instance uses l={} s={}", p.spec().degree(), p.s());
    for g in [[1], [2]] {
        for report in [verify_secrecy_exhaustive(&p, &g, Fault::None)?, verify_privacy_exhaustive(&p, &g, Fault::None)?]
        {
            ensure!(report.outcome == Outcome::Pass, "{} user {g:?}: {:?}", report.check, report.outcome);
            ensure!(report.exact_distance == Some(z(0)), "{} distance {:?}", report.check, report.exact_distance);
        }
    }
    let leaky = params(2, 1, 2, 1, Variant::SecrecyOnly)?;
    let report = verify_privacy_exhaustive(&leaky, &[1], Fault::None)?;
    ensure!(
        report.exact_distance.is_some_and(|d| d > z(0)),
        "secrecy-only privacy distance {:?}",
        report.exact_distance
    );
    ensure!(report.expected_fail, "leak should be flagged as expected");
    within(Duration::from_secs(10), start)
}

fn criterion_7() -> Result<()> {
    let start = Instant::now();
    let mut detected = 0;
    for c in 1..=6 {
        for r in 1..=c {
            for t in 0..=c - r {
                for variant in [Variant::SecrecyPrivacy, Variant::SecrecyOnly] {
                    let p = params(c, r, 2, t, variant)?;
                    let report = verify_cache_secrecy_rank(&p, Fault::None)?;
                    ensure!(report.outcome == Outcome::Pass, "{}: {:?}", report.instance, report.witness);
                }
                let p = params(c, r, 2, t, Variant::SecrecyPrivacy)?;
                if p.sharing().m() > 0 {
                    let report = verify_cache_secrecy_rank(&p, Fault::RankDeficientGenerator)?;
                    ensure!(report.outcome == Outcome::Fail, "fault missed on {}", report.instance);
                    detected += 1;
                }
            }
        }
    }
    ensure!(detected > 0, "no fault-injection instance");
    within(Duration::from_secs(30), start)
}

/// Checks that the binary prints exactly the rows the library computes.
fn cli_matches(args: &[&str], rows: &[CompareRow]) -> Result<()> {
    let stdout = String::from_utf8(bin_ok(args)?)?;
    let mut lines = stdout.lines();
    ensure!(lines.next() == Some("mode,C,N,r,M_axis,RPU"), "header");
    let body: Vec<&str> = lines.collect();
    ensure!(body.len() == rows.len(), "{} rows from the binary, {} expected", body.len(), rows.len());
    for (line, row) in body.iter().zip(rows) {
        let want = format!("{},{},{},{},{},{}", row.mode, row.c, row.n, row.r, decimal(row.m_axis), decimal(row.rpu));
        ensure!(*line == want, "{line} vs {want}");
    }
    Ok(())
}

fn criterion_8() -> Result<()> {
    let rows = compare_same_cache(5, 10, &[1, 2, 3])?;
    cli_matches(&["compare", "--mode", "same-cache", "--C", "5", "--N", "10"], &rows)?;
    let mut aligned = 0;
    for row in rows.iter().filter(|x| x.r == 3 && x.m_axis >= q(63, 2)) {
        if let Some(r2) = rows.iter().find(|x| x.r == 2 && x.m_axis == row.m_axis) {
            ensure!(row.rpu < r2.rpu, "same-cache M={}: r=3 {} vs r=2 {}", row.m_axis, row.rpu, r2.rpu);
            aligned += 1;
        }
    }
    ensure!(aligned > 0, "no aligned same-cache grid points above 31.5");

    let rows = compare_same_access(5, 50, &[1, 2, 3])?;
    cli_matches(&["compare", "--mode", "same-access", "--C", "5", "--N", "50"], &rows)?;
    for r in [2, 3] {
        let mut aligned = 0;
        for row in rows.iter().filter(|x| x.r == r) {
            if let Some(d) = rows.iter().find(|x| x.r == 1 && x.m_axis == row.m_axis) {
                ensure!(d.rpu <= row.rpu, "same-access axis {}: dedicated {} vs r={r} {}", row.m_axis, d.rpu, row.rpu);
                aligned += 1;
            }
        }
        ensure!(aligned > 0, "no aligned same-access points for r={r}");
    }
    Ok(())
}

fn read_dir_bytes(dir: &Path) -> Result<Vec<(String, Vec<u8>)>> {
    let mut files: Vec<_> = fs::read_dir(dir)?
        .map(|e| {
            let e = e?;
            Ok((e.file_name().to_string_lossy().into_owned(), fs::read(e.path())?))
        })
        .collect::<Result<_>>()?;
    files.sort();
    Ok(files)
}

fn criterion_9() -> Result<()> {
    let cases: &[&[&str]] = &[
        &["tradeoff", "--C", "5", "--r", "2", "--N", "15", "--samples", "9"],
        &["tradeoff", "--C", "4", "--r", "2", "--N", "6", "--format", "json"],
        &["bounds", "--C", "4", "--r", "2", "--N", "20", "--grid", "13,27/2,40.5"],
        &["compare", "--mode", "same-cache", "--C", "5", "--N", "10"],
        &["compare", "--mode", "same-access", "--C", "5", "--N", "50"],
        &["field-table"],
        &["verify", "--C", "2", "--r", "1", "--N", "2", "--t", "0", "--seed", "3"],
        &["verify", "--C", "4", "--r", "2", "--N", "6", "--t", "1", "--trials", "20", "--seed", "3"],
    ];
    for args in cases {
        let (a, b) = (bin(args)?, bin(args)?);
        ensure!(a.status == b.status && a.stdout == b.stdout, "{args:?} differs between runs");
        ensure!(!a.stdout.is_empty(), "{args:?} printed nothing");
    }
    for cmd in ["simulate", "figures"] {
        let mut runs = Vec::new();
        for _ in 0..2 {
            let dir = tempfile::tempdir()?;
            let out = dir.path().to_str().context("utf-8 temp path")?.to_string();
            let args: Vec<&str> = match cmd {
                "simulate" => {
                    vec!["simulate", "--C", "4", "--r", "2", "--N", "6", "--t", "1", "--seed", "9", "--out", &out]
                }
                _ => vec!["figures", "--out", &out],
            };
            let stdout = bin_ok(&args)?;
            runs.push((stdout, read_dir_bytes(dir.path())?));
        }
        ensure!(!runs[0].1.is_empty(), "{cmd} wrote no files");
        ensure!(runs[0] == runs[1], "{cmd} differs between runs");
    }
    let dir = tempfile::tempdir()?;
    let config = dir.path().join("run.json");
    fs::write(&config, r#"{"command": "simulate", "C": 3, "r": 1, "N": 3, "t": 1, "seed": 4}"#)?;
    let config = config.to_str().context("utf-8 temp path")?;
    ensure!(bin_ok(&["--config", config])? == bin_ok(&["--config", config])?, "config-file run differs");
    Ok(())
}

type Check = fn() -> Result<()>;

fn main() {
    let criteria: [(&str, Check); 9] = [
        ("C=4 r=2 N=6 t=1 end to end", criterion_1),
        ("rate and memory accounting grid", criterion_2),
        ("r=1 reduction to the dedicated baseline", criterion_3),
        ("SP vs S gap localisation", criterion_4),
        ("lower bound soundness and tightness", criterion_5),
        ("exhaustive information checks", criterion_6),
        ("rank secrecy suite", criterion_7),
        ("comparison reproduction", criterion_8),
        ("determinism", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            bail!("panicked: {}", msg.unwrap_or_default())
        });
        let took = start.elapsed();
        match result {
            Ok(()) => println!("criterion {}: PASS  {name} ({took:.2?})", i + 1),
            Err(e) => {
                failed += 1;
                println!("criterion {}: FAIL  {name} ({took:.2?}): {e:#}", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
