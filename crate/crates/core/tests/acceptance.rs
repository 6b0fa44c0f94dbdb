//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::{
    as_coefficients, homogeneous, nonzero, polynomial, polynomial_pair, random_arrangement,
    random_invertible,
};
use homaloid_core::oracle::{
    check_contraction, scan, scan_exhaustive, scan_stable, OracleConfig, ProjectivePoint,
};
use homaloid_core::parser::{
    format_canonical, parse_arrangement, parse_arrangement_with, parse_polynomial,
    parse_polynomial_with, ParseOptions, ScanMode,
};
use homaloid_core::polar::{is_cone, moving_part, moving_part_factored, restrict_arrangement};
use homaloid_core::poly::{gcd, Coefficient, Field, LinearFormProduct, Polynomial};
use homaloid_core::theorems::{
    canonical_rows, census, full_verdict, monomial_moving_part, span_condition_square_free,
    standard_cremona, structural_verdict, CensusOptions, VerdictParams,
};
use itertools::Itertools;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn fail<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn params(primes: &[u64]) -> VerdictParams {
    VerdictParams {
        primes: primes.to_vec(),
        timing: false,
        ..VerdictParams::default()
    }
}

fn poly(text: &str, n_vars: usize) -> Polynomial {
    parse_polynomial_with(text, &ParseOptions::with_vars(n_vars)).expect("fixture parses")
}

fn change_coordinates(f: &Polynomial, matrix: &[Vec<i64>]) -> Polynomial {
    let images: Vec<Polynomial> = as_coefficients(matrix)
        .iter()
        .map(|row| Polynomial::linear(Field::Rational, row).unwrap())
        .collect();
    f.substitute(&images).unwrap()
}

fn standard_cremona_degree_one() -> Outcome {
    let config = OracleConfig::default();
    let mut notes = Vec::new();
    for n in 1..=3 {
        let started = Instant::now();
        let report =
            scan_exhaustive(&standard_cremona(n).map_err(fail)?, 101, &config).map_err(fail)?;
        let elapsed = started.elapsed();
        ensure!(report.degree == 1, "n={n}: degree {}", report.degree);
        ensure!(
            report.dominant && report.homaloidal,
            "n={n}: dominant {} homaloidal {}",
            report.dominant,
            report.homaloidal
        );
        if n == 3 {
            ensure!(elapsed < Duration::from_secs(60), "n=3 took {elapsed:?}");
            notes.push(format!(
                "n=3 in {:.2}s over {} points",
                elapsed.as_secs_f64(),
                report.domain_size
            ));
        }
    }
    Ok(notes.join(", "))
}

fn monomial_family() -> Outcome {
    let config = OracleConfig::default();
    for n in [2usize, 3] {
        for m in [2u32, 3] {
            let mut exps = vec![1; n + 1];
            exps[0] = m;
            let text = exps
                .iter()
                .enumerate()
                .map(|(i, e)| format!("x{i}^{e}"))
                .join("*");
            let moving = moving_part(&poly(&text, n + 1)).map_err(fail)?.moving;
            let closed = monomial_moving_part(&exps).map_err(fail)?;
            ensure!(
                moving == closed,
                "{text}: moving part {:?} vs closed form {:?}",
                moving,
                closed
            );
            let report = scan_exhaustive(&moving, 101, &config).map_err(fail)?;
            ensure!(report.degree == 1, "{text}: degree {}", report.degree);
        }
    }
    Ok("m in {2,3}, n in {2,3}".into())
}

fn census_options(
    n: usize,
    r: usize,
    primes: &[u64],
    oracle_limit: Option<usize>,
) -> CensusOptions {
    CensusOptions {
        n,
        r,
        coeffs: vec![-1, 0, 1],
        oracle_limit,
        seed: 2024,
        params: params(primes),
    }
}

fn arrangement_census() -> Outcome {
    let mut total = 0;
    let mut oracle = 0;
    for r in 1..=3 {
        let report = census(&census_options(2, r, &[101, 211], None)).map_err(fail)?;
        ensure!(
            report.oracle_checked == report.arrangements,
            "n=2 r={r}: oracle skipped arrangements"
        );
        ensure!(
            report.agreements == report.arrangements,
            "n=2 r={r}: {} disagreements",
            report.arrangements - report.agreements
        );
        let expected = if r == 2 { report.full_rank } else { 0 };
        ensure!(
            report.structural_homaloidal == expected,
            "n=2 r={r}: structural {}",
            report.structural_homaloidal
        );
        ensure!(
            report.oracle_homaloidal == expected,
            "n=2 r={r}: oracle {}",
            report.oracle_homaloidal
        );
        total += report.arrangements;
        oracle += report.oracle_checked;
    }
    // In P^3 the structural verdict covers the whole census; the oracle runs
    // on a seeded subset at both primes.
    for r in 3..=4 {
        let report = census(&census_options(3, r, &[101, 211], Some(12))).map_err(fail)?;
        let expected = if r == 3 { report.full_rank } else { 0 };
        ensure!(
            report.structural_homaloidal == expected,
            "n=3 r={r}: structural {}",
            report.structural_homaloidal
        );
        ensure!(
            report.agreements == report.oracle_checked,
            "n=3 r={r}: disagreement"
        );
        if r == 4 {
            ensure!(
                report.oracle_homaloidal == 0,
                "n=3 r=4: oracle found a homaloidal arrangement"
            );
        }
        total += report.arrangements;
        oracle += report.oracle_checked;
    }
    Ok(format!(
        "{total} arrangements, {oracle} oracle-checked at p=101 and p=211, 0 disagreements"
    ))
}

fn multiplicity_blindness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0xb);
    let mut homaloidal = 0;
    for k in 0..50 {
        let n_vars = if k % 2 == 0 { 3 } else { 4 };
        let forms = n_vars + (k % 5 == 4) as usize;
        let a = random_arrangement(&mut rng, n_vars, forms);
        let doc = full_verdict(&a, &params(&[101])).map_err(|e| format!("{a}: {e}"))?;
        let v = doc.verdicts.expect("full verdict records all routes");
        let reduced = structural_verdict(&a.reduced());
        ensure!(
            v.structural == reduced && v.oracle == v.structural && v.oracle_reduced == v.structural,
            "{a}: structural {} reduced {} oracle {} oracle on reduced part {}",
            v.structural,
            reduced,
            v.oracle,
            v.oracle_reduced
        );
        homaloidal += v.structural as u32;
    }
    ensure!(
        homaloidal > 0 && homaloidal < 50,
        "sample is one-sided: {homaloidal} homaloidal of 50"
    );
    Ok(format!(
        "50 arrangements, {homaloidal} homaloidal, all four verdicts agree"
    ))
}

fn cones() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for n_vars in [3, 4] {
        let f = poly("x0*x1", n_vars);
        ensure!(is_cone(&f), "x0*x1 in {n_vars} variables not flagged");
        let a = parse_arrangement_with("x0*x1", Some(n_vars)).map_err(fail)?;
        let map = moving_part_factored(&a).map_err(fail)?.moving;
        let report = scan_exhaustive(&map, 101, &OracleConfig::default()).map_err(fail)?;
        ensure!(
            !report.dominant,
            "x0*x1 in {n_vars} variables reported dominant"
        );
        for _ in 0..20 {
            let m = random_invertible(&mut rng, n_vars);
            ensure!(
                is_cone(&change_coordinates(&f, &m)),
                "cone lost under {m:?}"
            );
        }
    }
    Ok("P^2 and P^3, 20 coordinate changes each".into())
}

fn contraction() -> Outcome {
    let a = parse_arrangement("x0*x1*x2*x3").map_err(fail)?;
    let mut images = BTreeSet::new();
    for i in 0..4 {
        let check = check_contraction(&a, i, 101, 128, 7 + i as u64).map_err(fail)?;
        ensure!(
            check.samples >= 100,
            "hyperplane {i}: {} samples",
            check.samples
        );
        ensure!(
            check.contracted,
            "hyperplane {i} not contracted: {:?}",
            check.images
        );
        ensure!(
            check.dual_point == ProjectivePoint::coordinate(3, i, 101),
            "hyperplane {i}: dual point {:?}",
            check.dual_point
        );
        images.extend(check.images);
    }
    let expected: BTreeSet<_> = (0..4)
        .map(|i| ProjectivePoint::coordinate(3, i, 101))
        .collect();
    ensure!(images == expected, "images {images:?}");
    Ok("4 hyperplanes, 128 samples each, images are the 4 coordinate points".into())
}

fn census_arrangements(n: usize, r: usize) -> Vec<LinearFormProduct> {
    let rows = canonical_rows(n + 1, &[-1, 0, 1]);
    (0..rows.len())
        .combinations(r + 1)
        .map(|c| {
            LinearFormProduct::square_free(&c.iter().map(|&i| rows[i].clone()).collect::<Vec<_>>())
                .unwrap()
        })
        .collect()
}

fn restrictions() -> Outcome {
    let mut restricted = 0;
    let mut homaloidal = 0;
    for (n, r) in [(2, 2), (2, 3), (3, 3)] {
        for a in census_arrangements(n, r) {
            let verdict = structural_verdict(&a);
            homaloidal += verdict as u32;
            for i in 0..a.num_forms() {
                let g = restrict_arrangement(&a, i).map_err(fail)?;
                restricted += 1;
                ensure!(
                    !verdict || structural_verdict(&g),
                    "{a}: restriction to form {i} is {g}"
                );
                ensure!(
                    g.is_square_free() == span_condition_square_free(&a, i),
                    "{a}: square-freeness at {i}"
                );
            }
        }
    }
    Ok(format!(
        "{homaloidal} homaloidal arrangements, {restricted} restrictions checked"
    ))
}

fn non_arrangements() -> Outcome {
    let config = OracleConfig::default();
    let quadric = moving_part(&poly("x0*x3 - x1*x2", 4)).map_err(fail)?.moving;
    let reports =
        scan_stable(&quadric, &[101, 211], ScanMode::Exhaustive, 64, 0, &config).map_err(fail)?;
    ensure!(
        reports[0].degree == 1 && reports[0].homaloidal,
        "quadric: degree {}",
        reports[0].degree
    );
    let cubic = poly("x0*x3*x5 - x0*x4^2 - x1^2*x5 + 2*x1*x2*x4 - x2^2*x3", 6);
    let map = moving_part(&cubic).map_err(fail)?.moving;
    let started = Instant::now();
    let reports = scan_stable(&map, &[31, 61], ScanMode::Sample, 64, 11, &config).map_err(fail)?;
    ensure!(
        reports
            .iter()
            .all(|r| r.degree == 1 && r.dominant && r.homaloidal),
        "determinant cubic: {:?}",
        reports
    );
    let single = scan(&map, 31, ScanMode::Sample, 64, 11, &config).map_err(fail)?;
    ensure!(single == reports[0], "sampled report is not reproducible");
    Ok(format!(
        "quadric degree 1 at 101/211; determinant cubic degree 1 at 31/61 in {:.1}s",
        started.elapsed().as_secs_f64()
    ))
}

fn run_property<S: Strategy>(
    cases: u32,
    name: &str,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&strategy, test)
        .map_err(|e| format!("{name}: {e}"))
}

fn poly_properties() -> Outcome {
    run_property(
        1000,
        "euler",
        (1usize..=4, 0u32..=4).prop_flat_map(|(n, d)| (Just(d), homogeneous(n, d, 6))),
        |(d, f)| {
            let sum =
                (0..f.n_vars()).fold(Polynomial::zero(f.n_vars(), Field::Rational), |acc, i| {
                    acc.add(
                        &Polynomial::var(f.n_vars(), Field::Rational, i)
                            .multiply(&f.derivative(i).unwrap())
                            .unwrap(),
                    )
                    .unwrap()
                });
            prop_assert_eq!(
                sum,
                f.scale(&Coefficient::from_i64(Field::Rational, d as i64))
            );
            Ok(())
        },
    )?;
    run_property(
        1000,
        "leibniz",
        (polynomial_pair(3), 0usize..3),
        |((f, g), var)| {
            let i = var % f.n_vars();
            let lhs = f.multiply(&g).unwrap().derivative(i).unwrap();
            let rhs = f
                .derivative(i)
                .unwrap()
                .multiply(&g)
                .unwrap()
                .add(&f.multiply(&g.derivative(i).unwrap()).unwrap())
                .unwrap();
            prop_assert_eq!(lhs, rhs);
            Ok(())
        },
    )?;
    run_property(
        1000,
        "division",
        (polynomial(3, 3, 5), nonzero(polynomial(3, 3, 4))),
        |(a, b)| {
            prop_assert_eq!(a.multiply(&b).unwrap().exact_divide(&b).unwrap(), a);
            Ok(())
        },
    )?;
    let small = || nonzero(polynomial(3, 2, 3));
    run_property(1000, "gcd", (small(), small(), small()), |(a, b, c)| {
        let (ac, bc) = (a.multiply(&c).unwrap(), b.multiply(&c).unwrap());
        let g = gcd(&ac, &bc).unwrap();
        prop_assert!(ac.exact_divide(&g).is_ok() && bc.exact_divide(&g).is_ok());
        prop_assert!(g.exact_divide(&c).is_ok());
        Ok(())
    })?;
    Ok("euler, leibniz, division, gcd: 1000 cases each".into())
}

fn parser_round_trip() -> Outcome {
    run_property(
        200,
        "round trip",
        (1usize..=4).prop_flat_map(|n| (Just(n), polynomial(n, 4, 6))),
        |(n, f)| {
            let text = format_canonical(&f);
            prop_assert_eq!(
                parse_polynomial_with(&text, &ParseOptions::with_vars(n)).unwrap(),
                f
            );
            Ok(())
        },
    )?;
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/corpus/parser");
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut inputs = 0;
    for entry in std::fs::read_dir(dir).map_err(fail)? {
        let bytes = std::fs::read(entry.map_err(fail)?.path()).map_err(fail)?;
        for round in 0..500 {
            let mut m = bytes.clone();
            if round > 0 {
                for _ in 0..rng.gen_range(1..=6) {
                    if !m.is_empty() && rng.gen_bool(0.5) {
                        let i = rng.gen_range(0..m.len());
                        m[i] = rng.gen();
                    } else {
                        let i = rng.gen_range(0..=m.len());
                        m.insert(i, b"()+-*^/x0123456789 "[rng.gen_range(0..19)]);
                    }
                }
            }
            let text = String::from_utf8_lossy(&m);
            let _ = parse_polynomial(&text);
            let _ = parse_arrangement(&text);
            inputs += 1;
        }
    }
    Ok(format!(
        "200 round trips, {inputs} corpus inputs without a crash"
    ))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("standard Cremona has degree 1", standard_cremona_degree_one),
        ("monomial family moving part and degree", monomial_family),
        (
            "census: n+2 forms never, n+1 independent forms always",
            arrangement_census,
        ),
        (
            "multiplicities do not change the verdict",
            multiplicity_blindness,
        ),
        ("cones are flagged and not dominant", cones),
        (
            "coordinate hyperplanes contract to dual points",
            contraction,
        ),
        (
            "restrictions stay homaloidal; square-free iff span condition",
            restrictions,
        ),
        ("smooth quadric and determinant cubic", non_arrangements),
        ("polynomial identities", poly_properties),
        ("parser round trip and fuzz corpus", parser_round_trip),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            Err(e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default())
        });
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {detail} ({secs:.1}s)", i + 1);
            }
        }
    }
    println!(
        "{} of {} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
