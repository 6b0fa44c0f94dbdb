use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{linalg, Coefficient, Field, PolyError, Polynomial};

/// A product `prod L_i^{m_i}` of linear forms, kept in factored form.
///
/// Rows are stored as primitive integer vectors whose first nonzero entry is
/// positive, so the product is only defined up to a nonzero scalar (which does
/// not change the polar map). Projectively equal rows are merged on
/// construction by summing their multiplicities; first occurrences keep their
/// position.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearFormProduct {
    n_vars: usize,
    forms: Vec<Vec<BigInt>>,
    multiplicities: Vec<u32>,
}

/// Primitive integer representative of the projective class of `row`.
pub fn normalize_row(row: &[BigRational]) -> Option<Vec<BigInt>> {
    let first = row.iter().find(|c| !c.is_zero())?;
    let lcm = row.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let mut ints: Vec<BigInt> = row
        .iter()
        .map(|c| (c * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    let sign = if first.is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    for c in ints.iter_mut() {
        *c = (&*c / &g) * &sign;
    }
    Some(ints)
}

impl LinearFormProduct {
    pub fn new(rows: Vec<Vec<BigRational>>, multiplicities: Vec<u32>) -> Result<Self, PolyError> {
        if rows.is_empty() {
            return Err(PolyError::EmptyArrangement);
        }
        if rows.len() != multiplicities.len() {
            return Err(PolyError::VariableCountMismatch {
                left: rows.len(),
                right: multiplicities.len(),
            });
        }
        let n_vars = rows[0].len();
        let mut forms: Vec<Vec<BigInt>> = Vec::new();
        let mut mults: Vec<u32> = Vec::new();
        for (row, m) in rows.iter().zip(multiplicities) {
            if row.len() != n_vars {
                return Err(PolyError::VariableCountMismatch {
                    left: n_vars,
                    right: row.len(),
                });
            }
            if m == 0 {
                return Err(PolyError::InvalidMultiplicity);
            }
            let normalized = normalize_row(row).ok_or(PolyError::ZeroForm)?;
            match forms.iter().position(|f| *f == normalized) {
                Some(i) => mults[i] += m,
                None => {
                    forms.push(normalized);
                    mults.push(m);
                }
            }
        }
        Ok(LinearFormProduct {
            n_vars,
            forms,
            multiplicities: mults,
        })
    }

    pub fn from_integer_rows(rows: &[Vec<i64>], multiplicities: &[u32]) -> Result<Self, PolyError> {
        let rows = rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|&v| BigRational::from_integer(v.into()))
                    .collect()
            })
            .collect();
        Self::new(rows, multiplicities.to_vec())
    }

    /// All multiplicities one.
    pub fn square_free(rows: &[Vec<i64>]) -> Result<Self, PolyError> {
        Self::from_integer_rows(rows, &vec![1; rows.len()])
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    /// Projective dimension `n` of the ambient space.
    pub fn dim(&self) -> usize {
        self.n_vars - 1
    }

    pub fn num_forms(&self) -> usize {
        self.forms.len()
    }

    /// `r`, with forms indexed `0..=r`.
    pub fn r(&self) -> usize {
        self.forms.len() - 1
    }

    pub fn degree(&self) -> u32 {
        self.multiplicities.iter().sum()
    }

    pub fn forms(&self) -> &[Vec<BigInt>] {
        &self.forms
    }

    pub fn multiplicities(&self) -> &[u32] {
        &self.multiplicities
    }

    pub fn is_square_free(&self) -> bool {
        self.multiplicities.iter().all(|&m| m == 1)
    }

    pub fn form_coefficients(&self, i: usize) -> Vec<Coefficient> {
        self.forms[i]
            .iter()
            .map(|c| Coefficient::from_bigint(Field::Rational, c))
            .collect()
    }

    pub fn form(&self, i: usize) -> Polynomial {
        Polynomial::linear(Field::Rational, &self.form_coefficients(i))
            .expect("rows have n_vars entries")
    }

    /// `prod_{i in subset} L_i^{exponent(i)}` over `Q`.
    pub(crate) fn product_with<F>(&self, exponent: F) -> Polynomial
    where
        F: Fn(usize) -> u32,
    {
        (0..self.forms.len()).fold(Polynomial::one(self.n_vars, Field::Rational), |acc, i| {
            match exponent(i) {
                0 => acc,
                e => acc.multiply(&self.form(i).pow(e)).expect("same ring"),
            }
        })
    }

    /// The expanded polynomial `prod L_i^{m_i}`.
    pub fn expand(&self) -> Polynomial {
        self.product_with(|i| self.multiplicities[i])
    }

    /// Same forms, all multiplicities one.
    pub fn reduced(&self) -> Self {
        LinearFormProduct {
            n_vars: self.n_vars,
            forms: self.forms.clone(),
            multiplicities: vec![1; self.forms.len()],
        }
    }

    /// Rank of the coefficient matrix.
    pub fn rank(&self) -> usize {
        linalg::rank(
            (0..self.forms.len())
                .map(|i| self.form_coefficients(i))
                .collect(),
        )
    }

    /// Rank of the rows with the given indices.
    pub fn rank_of(&self, indices: &[usize]) -> usize {
        linalg::rank(indices.iter().map(|&i| self.form_coefficients(i)).collect())
    }

    /// Forms and multiplicities sorted by row, a canonical key for deduplication.
    pub fn sorted(&self) -> Self {
        let mut pairs: Vec<_> = self
            .forms
            .iter()
            .cloned()
            .zip(self.multiplicities.iter().copied())
            .collect();
        pairs.sort();
        let (forms, multiplicities) = pairs.into_iter().unzip();
        LinearFormProduct {
            n_vars: self.n_vars,
            forms,
            multiplicities,
        }
    }
}

impl fmt::Display for LinearFormProduct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, m) in self.multiplicities.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            let form = self.form(i);
            if form.num_terms() == 1 && form.leading_term().is_some_and(|(_, c)| c.is_one()) {
                write!(f, "{form}")?;
            } else {
                write!(f, "({form})")?;
            }
            if *m > 1 {
                write!(f, "^{m}")?;
            }
        }
        Ok(())
    }
}
