//! Homaloidality of products of linear forms: the rank criterion, the
//! standard Cremona family, an inductive restriction certificate, and the
//! cross-check of all of them against the fiber-counting oracle.

mod census;
mod certificate;
mod verdict;

use thiserror::Error;

use crate::oracle::OracleError;
use crate::polar::{PolarError, RationalMap};
use crate::poly::{Coefficient, Field, LinearFormProduct, Monomial, Polynomial};

pub use census::{canonical_rows, census, CensusOptions, CensusReport};
pub use certificate::{
    inductive_certificate, span_condition_square_free, Certificate, CertificateStep, Refutation,
    Terminal,
};
pub use verdict::{certify, full_verdict, polynomial_verdict, VerdictParams};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoremError {
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error("exponents must be positive and there must be at least two")]
    InvalidExponents,
    #[error("the ambient space must have dimension at least 1")]
    DimensionZero,
    #[error("inconsistent verdicts for {input}: {detail}")]
    Inconsistent { input: String, detail: String },
}

impl TheoremError {
    pub fn is_inconsistency(&self) -> bool {
        match self {
            TheoremError::Inconsistent { .. } => true,
            TheoremError::Oracle(e) => e.is_inconsistency(),
            _ => false,
        }
    }

    pub fn is_resource_bound(&self) -> bool {
        matches!(self, TheoremError::Oracle(e) if e.is_resource_bound())
    }
}

/// True iff there are exactly `n+1` forms and they are independent.
/// Multiplicities play no role.
pub fn structural_verdict(arrangement: &LinearFormProduct) -> bool {
    arrangement.num_forms() == arrangement.n_vars() && arrangement.rank() == arrangement.n_vars()
}

/// The monomial `X_0^{m_0} ... X_n^{m_n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CremonaMap {
    exponents: Vec<u32>,
}

impl CremonaMap {
    pub fn new(exponents: Vec<u32>) -> Result<Self, TheoremError> {
        if exponents.len() < 2 || exponents.contains(&0) {
            return Err(TheoremError::InvalidExponents);
        }
        Ok(CremonaMap { exponents })
    }

    pub fn standard(n: usize) -> Result<Self, TheoremError> {
        if n == 0 {
            return Err(TheoremError::DimensionZero);
        }
        Self::new(vec![1; n + 1])
    }

    pub fn n(&self) -> usize {
        self.exponents.len() - 1
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn polynomial(&self) -> Polynomial {
        Polynomial::monomial(
            Monomial::new(self.exponents.clone()),
            Coefficient::one(Field::Rational),
        )
    }

    pub fn arrangement(&self) -> LinearFormProduct {
        let n_vars = self.exponents.len();
        let rows: Vec<Vec<i64>> = (0..n_vars)
            .map(|i| (0..n_vars).map(|j| (i == j) as i64).collect())
            .collect();
        LinearFormProduct::from_integer_rows(&rows, &self.exponents)
            .expect("coordinate forms are valid")
    }

    /// `(m_i prod_{j != i} X_j)_i`.
    pub fn moving_part(&self) -> RationalMap {
        let n_vars = self.exponents.len();
        let comps = (0..n_vars)
            .map(|i| {
                let exps = (0..n_vars).map(|j| (j != i) as u32).collect();
                Polynomial::monomial(
                    Monomial::new(exps),
                    Coefficient::from_i64(Field::Rational, self.exponents[i] as i64),
                )
            })
            .collect();
        RationalMap::new(comps).expect("components share a degree")
    }
}

/// `(prod_{j != i} X_j)_i` on `P^n`.
pub fn standard_cremona(n: usize) -> Result<RationalMap, TheoremError> {
    Ok(CremonaMap::standard(n)?.moving_part())
}

/// `(m_i prod_{j != i} X_j)_i`, the moving part of `X_0^{m_0} ... X_n^{m_n}`.
pub fn monomial_moving_part(exponents: &[u32]) -> Result<RationalMap, TheoremError> {
    Ok(CremonaMap::new(exponents.to_vec())?.moving_part())
}

/// Whether the standard Cremona map composed with itself is the identity
/// once the common factor is removed.
pub fn cremona_involution_check(n: usize) -> Result<bool, TheoremError> {
    let c = standard_cremona(n)?;
    let (_, square) = c.compose(&c)?.strip_common_factor()?;
    let scalar = square.components()[0].coefficient(&Monomial::var(n + 1, 0));
    if scalar.is_zero() {
        return Ok(false);
    }
    Ok(square.components().iter().enumerate().all(|(i, comp)| {
        let expected = Polynomial::monomial(Monomial::var(n + 1, i), scalar.clone());
        *comp == expected
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{
        parse_arrangement, parse_arrangement_with, parse_polynomial_with, ParseOptions,
    };
    use crate::polar::{moving_part, polar_system, reduced_part};

    #[test]
    fn structural_examples() {
        assert!(structural_verdict(
            &parse_arrangement("x0*x1*x2*x3").unwrap()
        ));
        assert!(!structural_verdict(
            &parse_arrangement("x0*x1*x2*(x0 + x1 + x2)").unwrap()
        ));
        assert!(structural_verdict(
            &parse_arrangement("x0^3*x1*x2").unwrap()
        ));
        assert!(!structural_verdict(
            &parse_arrangement_with("x0*x1*(x0 + x1)", Some(3)).unwrap()
        ));
        let f = parse_arrangement("x0^2*x1^3*(x0 + x1 + x2)^2").unwrap();
        assert_eq!(
            structural_verdict(&f),
            structural_verdict(&reduced_part(&f))
        );
    }

    fn map(texts: &[&str]) -> RationalMap {
        let opts = ParseOptions::with_vars(texts.len());
        RationalMap::new(
            texts
                .iter()
                .map(|t| parse_polynomial_with(t, &opts).unwrap())
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn cremona_family() {
        assert_eq!(
            standard_cremona(2).unwrap(),
            map(&["x1*x2", "x0*x2", "x0*x1"])
        );
        assert_eq!(
            monomial_moving_part(&[2, 1, 1, 1]).unwrap(),
            map(&["2*x1*x2*x3", "x0*x2*x3", "x0*x1*x3", "x0*x1*x2"])
        );
        assert_eq!(
            monomial_moving_part(&[1, 1, 1, 1]).unwrap(),
            standard_cremona(3).unwrap()
        );
        assert_eq!(standard_cremona(1).unwrap(), map(&["x1", "x0"]));
        assert_eq!(
            monomial_moving_part(&[2, 0, 1]),
            Err(TheoremError::InvalidExponents)
        );
        assert_eq!(standard_cremona(0), Err(TheoremError::DimensionZero));
    }

    #[test]
    fn closed_form_matches_gcd_route() {
        for m in [vec![2, 1, 1], vec![3, 1, 1, 1], vec![2, 3, 1, 4]] {
            let c = CremonaMap::new(m.clone()).unwrap();
            assert_eq!(
                moving_part(&c.polynomial()).unwrap().moving,
                c.moving_part()
            );
            assert_eq!(c.arrangement().expand(), c.polynomial());
        }
        assert_eq!(
            polar_system(&CremonaMap::standard(2).unwrap().polynomial()).unwrap(),
            standard_cremona(2).unwrap()
        );
    }

    #[test]
    fn involution() {
        for n in 1..=4 {
            assert!(cremona_involution_check(n).unwrap(), "n={n}");
        }
    }
}
