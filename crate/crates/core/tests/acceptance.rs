//! Acceptance run: one line per criterion, non-zero exit if any fails.
//!
//! Every random corpus is drawn from a fixed ChaCha seed, so a failure here is
//! reproducible by rerunning the target.

mod common;

use std::time::{Duration, Instant};

use common::{cofactor_det, q, random_covered, random_f, random_f_covered, random_signed};
use common::{random_covered_by_f, random_spectrum};
use metric_spectra::cover::{
    check_det_bound, decompose, family, is_covered_by, is_f_covered, refine, row_reduce_step,
    sum_cover, SignedVector,
};
use metric_spectra::polytope::{cramer_solve, det_exact};
use metric_spectra::search::{
    enumerate_classes, enumerate_classes_by_profile, verify_conant, verify_conant_with,
    ConantStatus, SearchError, VerifyOptions,
};
use metric_spectra::{
    canonicalize_batch, integral_representative, profile, scale, CanonReport, Exec,
    IntegralSpectrum, Spectrum,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Outcome + 'a>);

fn pow2(e: usize) -> BigInt {
    BigInt::one() << e
}

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed <= limit, || {
        format!("{what} took {elapsed:.1?}, limit {limit:?}")
    })
}

/// 1,000 random spectra per n in 1..=8, canonicalized once and shared by the
/// first two criteria.
struct Corpus {
    reports: Vec<(Spectrum, CanonReport)>,
    elapsed: Duration,
}

fn build_corpus() -> Result<Corpus, String> {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0_4A47);
    let inputs: Vec<Spectrum> = (1..=8)
        .flat_map(|n| (0..1000).map(move |_| n))
        .map(|n| random_spectrum(&mut rng, n))
        .collect();
    let started = Instant::now();
    let results = canonicalize_batch(&inputs, &Exec::available());
    let elapsed = started.elapsed();
    let mut reports = Vec::with_capacity(inputs.len());
    for (x, r) in inputs.into_iter().zip(results) {
        let r = r.map_err(|e| format!("canonicalize({x}) failed: {e}"))?;
        reports.push((x, r));
    }
    Ok(Corpus { reports, elapsed })
}

fn bounded_representatives(corpus: &Corpus) -> Outcome {
    for (x, report) in &corpus.reports {
        let y: &IntegralSpectrum = &report.lifted;
        let n = x.len();
        ensure(profile(&y.to_spectrum()) == profile(x), || {
            format!("{x}: lift {y} changes profile")
        })?;
        ensure(y.last() <= &pow2(n), || {
            format!("{x}: lift {y} exceeds 2^{n}")
        })?;
        for i in 1..n {
            let lhs = pow2(n - i + 1) * &y.entries()[i - 1];
            ensure(&lhs >= y.last(), || {
                format!("{x}: lift {y} fails internal bound at i = {i}")
            })?;
        }
    }
    // The public single-call entry point agrees with the batch.
    for (x, report) in corpus.reports.iter().step_by(97) {
        let y = integral_representative(x).map_err(|e| e.to_string())?;
        ensure(y == report.lifted, || {
            format!("{x}: batch and single call disagree")
        })?;
    }
    within(
        corpus.elapsed,
        Duration::from_secs(120),
        "8,000 canonicalizations",
    )?;
    Ok(format!(
        "{} spectra, {:.1?}",
        corpus.reports.len(),
        corpus.elapsed
    ))
}

fn band_construction(corpus: &Corpus) -> Outcome {
    for (x, report) in &corpus.reports {
        let y = &report.conant_band;
        let n = x.len();
        ensure(y.last() == &pow2(n + 1), || {
            format!("{x}: band {y} does not end at 2^{}", n + 1)
        })?;
        for i in 1..=n {
            let v = &y.entries()[i - 1];
            ensure(v >= &pow2(i) && v <= &pow2(n + 1), || {
                format!("{x}: band {y} leaves [2^{i}, 2^{}] at i = {i}", n + 1)
            })?;
        }
        ensure(profile(&y.to_spectrum()) == profile(x), || {
            format!("{x}: band {y} changes profile")
        })?;
    }
    Ok(format!("{} bands", corpus.reports.len()))
}

fn conant_verification() -> Outcome {
    let exec = Exec::with_jobs(8);
    let started = Instant::now();
    let mut counts = Vec::new();
    for n in 1..=5 {
        let report = verify_conant(n, &exec, None).map_err(|e| e.to_string())?;
        let bad: Vec<_> = report
            .atlas
            .records
            .iter()
            .filter(|r| r.status != ConantStatus::Satisfied)
            .collect();
        ensure(bad.is_empty(), || {
            format!(
                "n = {n}: {} classes without a witness, first {:?}",
                bad.len(),
                bad[0].profile
            )
        })?;
        counts.push(report.class_count());
    }
    let elapsed = started.elapsed();
    within(elapsed, Duration::from_secs(300), "n = 1..5 at 8 workers")?;
    Ok(format!(
        "class counts {counts:?}, all satisfied, {elapsed:.1?}"
    ))
}

fn f_sum_matrix(rng: &mut ChaCha8Rng, n: usize, m: usize) -> Vec<Vec<BigRational>> {
    (0..n)
        .map(|r| {
            let first = random_f(rng, n).to_signed();
            let row = if r < m {
                first
            } else {
                &first + &random_f(rng, n).to_signed()
            };
            row.0
        })
        .collect()
}

fn determinant_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDE7_B0D);
    let started = Instant::now();
    let mut tight = 0;
    for n in 2..=8 {
        for _ in 0..10_000 {
            let m = rng.gen_range(0..=n);
            let mat = f_sum_matrix(&mut rng, n, m);
            let check = check_det_bound(&mat).map_err(|e| format!("n = {n}: {e}"))?;
            ensure(check.m >= m, || {
                format!("{mat:?}: only {} rows counted in F", check.m)
            })?;
            ensure(check.holds, || {
                format!(
                    "|det| = {} exceeds {} for {mat:?}",
                    check.det_abs, check.bound
                )
            })?;
            if check.det_abs == BigRational::from_integer(check.bound.clone()) {
                tight += 1;
            }
        }
    }
    let elapsed = started.elapsed();
    within(
        elapsed,
        Duration::from_secs(60),
        "70,000 determinant checks",
    )?;
    Ok(format!(
        "70000 matrices, {tight} attain the bound, {elapsed:.1?}"
    ))
}

fn covered(x: &SignedVector, y: &SignedVector) -> bool {
    is_covered_by(x, y).unwrap_or(false)
}

fn decomposition_calculus() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xDEC0);
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=8);
        let u = random_signed(&mut rng, n);
        let v = random_signed(&mut rng, n);
        let x = random_covered(&mut rng, &(&u + &v).0);
        let (xu, xv) = decompose(&x, &u, &v).map_err(|e| format!("decompose {x}: {e}"))?;
        ensure(
            covered(&xu, &u) && covered(&xv, &v) && &xu + &xv == x,
            || format!("decompose({x}, {u}, {v}) = ({xu}, {xv})"),
        )?;
    }
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=8);
        let (p1, p2) = (random_f(&mut rng, n), random_f(&mut rng, n));
        let x = random_covered_by_f(&mut rng, &p1);
        let y = random_covered_by_f(&mut rng, &p2);
        let (q1, q2) = refine(&x, &y, &p1, &p2).map_err(|e| format!("refine {x} {y}: {e}"))?;
        let v1 = SignedVector::from_integers(&q1.vector());
        let v2 = SignedVector::from_integers(&q2.vector());
        ensure(
            covered(&v1, &p1.to_signed())
                && covered(&v2, &p2.to_signed())
                && covered(&(&x + &y), &(&v1 + &v2))
                && is_f_covered(&v1)
                && is_f_covered(&v2),
            || format!("refine({x}, {y}, {p1}, {p2}) = ({v1}, {v2})"),
        )?;
    }
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=8);
        let x = random_f_covered(&mut rng, n);
        let y = random_f_covered(&mut rng, n);
        let (f1, f2) = sum_cover(&x, &y).map_err(|e| format!("sum_cover {x} {y}: {e}"))?;
        let fam = family(n);
        ensure(
            fam.contains(&f1)
                && fam.contains(&f2)
                && covered(&(&x + &y), &(&f1.to_signed() + &f2.to_signed())),
            || format!("sum_cover({x}, {y}) = ({f1}, {f2})"),
        )?;
    }
    let mut reduced = 0;
    while reduced < 10_000 {
        let n = rng.gen_range(1..=8);
        let x = random_f_covered(&mut rng, n);
        if x.is_zero() {
            continue;
        }
        let y = random_f_covered(&mut rng, n);
        let out = row_reduce_step(&x, &y).map_err(|e| format!("row_reduce_step {x} {y}: {e}"))?;
        ensure(is_f_covered(&out), || {
            format!("row_reduce_step({x}, {y}) = {out}")
        })?;
        reduced += 1;
    }
    Ok("4 x 10000 instances".into())
}

fn random_int_matrix(rng: &mut ChaCha8Rng, n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|_| {
            (0..n)
                .map(|_| BigInt::from(rng.gen_range(-9..=9)))
                .collect()
        })
        .collect()
}

fn oracle_equivalences() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0_7AC1E);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=5);
        let m = random_int_matrix(&mut rng, n);
        let d = det_exact(&m).map_err(|e| e.to_string())?;
        ensure(d == cofactor_det(&m), || format!("det mismatch on {m:?}"))?;
    }
    for n in 1..=4 {
        let a = enumerate_classes(n, None, &Exec::with_jobs(4)).map_err(|e| e.to_string())?;
        let b = enumerate_classes_by_profile(n, None, &Exec::with_jobs(4))
            .map_err(|e| e.to_string())?;
        ensure(a.records == b.records, || {
            format!("strategies disagree at n = {n}")
        })?;
    }
    let mut solved = 0;
    while solved < 1000 {
        let n = rng.gen_range(1..=6);
        let m = random_int_matrix(&mut rng, n);
        if det_exact(&m).map_err(|e| e.to_string())?.is_zero() {
            continue;
        }
        let rhs: Vec<BigInt> = (0..n)
            .map(|_| BigInt::from(rng.gen_range(-20..=20)))
            .collect();
        let y = cramer_solve(&m, &rhs).map_err(|e| e.to_string())?;
        for (row, b) in m.iter().zip(&rhs) {
            let lhs = row
                .iter()
                .zip(&y.coords)
                .fold(BigRational::zero(), |acc, (a, v)| {
                    acc + BigRational::from_integer(a.clone()) * v
                });
            ensure(lhs == BigRational::from_integer(b.clone()), || {
                format!("cramer_solve({m:?}, {rhs:?}) does not back-substitute")
            })?;
        }
        solved += 1;
    }
    Ok("1000 determinants, strategies n <= 4, 1000 systems".into())
}

fn cone_invariance() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0DE);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let x = random_spectrum(&mut rng, n);
        let alpha = q(rng.gen_range(1..=1000), rng.gen_range(1..=64));
        let y = scale(&x, &alpha).map_err(|e| e.to_string())?;
        ensure(profile(&y) == profile(&x), || {
            format!("{x} scaled by {alpha}")
        })?;
    }
    for _ in 0..1000 {
        let n = rng.gen_range(1..=8);
        let x = random_spectrum(&mut rng, n);
        // An equivalent partner that is not a multiple of x.
        let y = metric_spectra::conant_band(&x)
            .map_err(|e| e.to_string())?
            .to_spectrum();
        let (a, b) = (
            q(rng.gen_range(1..=500), rng.gen_range(1..=32)),
            q(rng.gen_range(1..=500), rng.gen_range(1..=32)),
        );
        let z = Spectrum::new(
            x.entries()
                .iter()
                .zip(y.entries())
                .map(|(u, v)| &a * u + &b * v)
                .collect(),
        )
        .map_err(|e| e.to_string())?;
        ensure(
            profile(&y) == profile(&x) && profile(&z) == profile(&x),
            || format!("{a}*({x}) + {b}*({y}) leaves the class"),
        )?;
    }
    Ok("1000 scalings, 1000 combinations".into())
}

fn determinism_and_resume() -> Outcome {
    let run = |jobs: usize| {
        verify_conant(4, &Exec::with_jobs(jobs), None)
            .map(|r| (r.atlas.to_lines(), r.summary_json()))
            .map_err(|e| e.to_string())
    };
    let reference = run(1)?;
    for jobs in [4, 8] {
        ensure(run(jobs)? == reference, || {
            format!("{jobs} workers differ from 1 worker")
        })?;
    }

    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let path = dir.path().join("n4.checkpoint");
    let mut options = VerifyOptions::new(4, Exec::with_jobs(4));
    options.checkpoint = Some(path.clone());
    let mut interruptions = 0;
    for budget in [4, 7, 25] {
        options.budget = Some(budget);
        match verify_conant_with(&options) {
            Err(SearchError::BudgetExhausted { .. }) => interruptions += 1,
            other => return Err(format!("expected an interrupted run, got {other:?}")),
        }
    }
    // A crash in the middle of a write leaves a torn final line.
    let mut text = std::fs::read_to_string(&path).map_err(|e| e.to_string())?;
    text.push_str("{\"kind\":\"class\",\"bits\":\"12");
    std::fs::write(&path, text).map_err(|e| e.to_string())?;
    options.budget = None;
    options.exec = Exec::with_jobs(8);
    let resumed = verify_conant_with(&options).map_err(|e| e.to_string())?;
    ensure(
        (resumed.atlas.to_lines(), resumed.summary_json()) == reference,
        || "resumed atlas differs from the uninterrupted one".into(),
    )?;
    Ok(format!(
        "1/4/8 workers identical; resumed after {interruptions} interruptions and a torn line"
    ))
}

fn main() {
    let corpus = build_corpus();
    let from_corpus = |f: fn(&Corpus) -> Outcome| -> Outcome {
        match &corpus {
            Ok(c) => f(c),
            Err(e) => Err(e.clone()),
        }
    };
    let criteria: Vec<Criterion> = vec![
        (
            "bounded integral representatives",
            Box::new(|| from_corpus(bounded_representatives)),
        ),
        (
            "band construction",
            Box::new(|| from_corpus(band_construction)),
        ),
        ("Conant verification n <= 5", Box::new(conant_verification)),
        ("determinant bound", Box::new(determinant_bound)),
        ("decomposition calculus", Box::new(decomposition_calculus)),
        ("oracle equivalences", Box::new(oracle_equivalences)),
        ("cone and scale invariance", Box::new(cone_invariance)),
        (
            "determinism and resumability",
            Box::new(determinism_and_resume),
        ),
    ];
    let mut failures = 0;
    for (index, (name, check)) in criteria.iter().enumerate() {
        match check() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", index + 1),
            Err(reason) => {
                failures += 1;
                println!("criterion {} ({name}): FAIL - {reason}", index + 1);
            }
        }
    }
    println!(
        "acceptance: {} of {} criteria pass",
        criteria.len() - failures,
        criteria.len()
    );
    if failures > 0 {
        std::process::exit(1);
    }
}
