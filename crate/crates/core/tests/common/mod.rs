#![allow(dead_code)]

use homaloid_core::poly::{Coefficient, Field, LinearFormProduct, Polynomial};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use rand::Rng;

pub fn rational(num: i64, den: i64) -> Coefficient {
    Coefficient::Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
}

/// Coefficients with small numerators and denominators.
pub fn coefficient() -> impl Strategy<Value = Coefficient> {
    (-9i64..=9, 1i64..=4).prop_map(|(n, d)| rational(n, d))
}

fn build(n_vars: usize, terms: Vec<(Vec<u32>, Coefficient)>) -> Polynomial {
    Polynomial::from_terms(n_vars, Field::Rational, terms).expect("well formed terms")
}

/// Polynomials in `n_vars` variables of total degree at most `max_degree`.
pub fn polynomial(
    n_vars: usize,
    max_degree: u32,
    max_terms: usize,
) -> impl Strategy<Value = Polynomial> {
    let exps = prop::collection::vec(0..=max_degree, n_vars)
        .prop_filter("degree bound", move |e| e.iter().sum::<u32>() <= max_degree);
    prop::collection::vec((exps, coefficient()), 0..=max_terms).prop_map(move |t| build(n_vars, t))
}

/// Homogeneous polynomials of exactly `degree` (possibly zero).
pub fn homogeneous(
    n_vars: usize,
    degree: u32,
    max_terms: usize,
) -> impl Strategy<Value = Polynomial> {
    let exps = prop::collection::vec(0..=degree, n_vars - 1).prop_filter_map(
        "degree bound",
        move |mut e| {
            let used: u32 = e.iter().sum();
            (used <= degree).then(|| {
                e.push(degree - used);
                e
            })
        },
    );
    prop::collection::vec((exps, coefficient()), 0..=max_terms).prop_map(move |t| build(n_vars, t))
}

pub fn nonzero(s: impl Strategy<Value = Polynomial>) -> impl Strategy<Value = Polynomial> {
    s.prop_filter("nonzero", |p| !p.is_zero())
}

/// Any number of variables from 1 to 3 with a matching polynomial pair.
pub fn polynomial_pair(max_degree: u32) -> impl Strategy<Value = (Polynomial, Polynomial)> {
    (1usize..=3)
        .prop_flat_map(move |n| (polynomial(n, max_degree, 5), polynomial(n, max_degree, 5)))
}

/// Random arrangement in `n_vars` variables: `forms` distinct primitive rows
/// with entries in `-3..=3` and multiplicities in `1..=3`.
pub fn random_arrangement<R: Rng>(rng: &mut R, n_vars: usize, forms: usize) -> LinearFormProduct {
    loop {
        let rows: Vec<Vec<i64>> = (0..forms)
            .map(|_| (0..n_vars).map(|_| rng.gen_range(-3..=3)).collect())
            .collect();
        if rows.iter().any(|r| r.iter().all(|&c| c == 0)) {
            continue;
        }
        let mults: Vec<u32> = (0..forms).map(|_| rng.gen_range(1..=3)).collect();
        if let Ok(a) = LinearFormProduct::from_integer_rows(&rows, &mults) {
            if a.num_forms() == forms {
                return a;
            }
        }
    }
}

/// Invertible integer matrix with small entries.
pub fn random_invertible<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<i64>> {
    loop {
        let m: Vec<Vec<i64>> = (0..n)
            .map(|_| (0..n).map(|_| rng.gen_range(-2..=2)).collect())
            .collect();
        let rows = m
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| Coefficient::from_i64(Field::Rational, v))
                    .collect()
            })
            .collect();
        if !homaloid_core::poly::linalg::determinant(rows).is_zero() {
            return m;
        }
    }
}

pub fn as_coefficients(m: &[Vec<i64>]) -> Vec<Vec<Coefficient>> {
    m.iter()
        .map(|r| {
            r.iter()
                .map(|&v| Coefficient::from_i64(Field::Rational, v))
                .collect()
        })
        .collect()
}
