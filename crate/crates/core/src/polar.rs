//! Polar systems, base divisors, moving parts, cone tests and hyperplane
//! restrictions of arrangements.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use crate::poly::{
    gcd_all, linalg, Coefficient, Field, LinearFormProduct, Monomial, PolyError, Polynomial,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolarError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("the polar map of a constant is undefined")]
    ConstantInput,
    #[error("input is not homogeneous")]
    NotHomogeneous,
    #[error("a rational map needs at least one nonzero component")]
    AllComponentsZero,
    #[error("components must be homogeneous of one common degree")]
    InconsistentDegrees,
    #[error(
        "a self-map of P^n needs n+1 components in n+1 variables, got {components} in {n_vars}"
    )]
    ComponentCount { components: usize, n_vars: usize },
    #[error("form {index} is out of range")]
    IndexOutOfRange { index: usize },
    #[error("restricting to form {index} annihilates form {other}")]
    DegenerateRestriction { index: usize, other: usize },
    #[error("restricting a single form leaves no forms")]
    EmptyRestriction,
    #[error("cannot restrict an arrangement on P^0")]
    NoHyperplane,
}

/// A rational self-map of `P^n` given by `n+1` homogeneous components of one
/// degree. Components may vanish identically (the image then sits in a
/// coordinate hyperplane).
#[derive(Debug, Clone)]
pub struct RationalMap {
    components: Vec<Polynomial>,
    degree: u32,
    base_divisor_free: OnceLock<bool>,
}

impl PartialEq for RationalMap {
    fn eq(&self, other: &Self) -> bool {
        self.components == other.components
    }
}

impl Eq for RationalMap {}

impl RationalMap {
    pub fn new(components: Vec<Polynomial>) -> Result<Self, PolarError> {
        let n_vars = components.first().map(Polynomial::n_vars).unwrap_or(0);
        if components.is_empty() || components.len() != n_vars {
            return Err(PolarError::ComponentCount {
                components: components.len(),
                n_vars,
            });
        }
        let field = components[0].field();
        for c in &components {
            if c.n_vars() != n_vars {
                return Err(PolyError::VariableCountMismatch {
                    left: n_vars,
                    right: c.n_vars(),
                }
                .into());
            }
            if c.field() != field {
                return Err(PolyError::FieldMismatch.into());
            }
        }
        let mut degrees = components
            .iter()
            .filter(|c| !c.is_zero())
            .map(Polynomial::homogeneous_degree);
        let degree = match degrees.next() {
            None => return Err(PolarError::AllComponentsZero),
            Some(None) => return Err(PolarError::InconsistentDegrees),
            Some(Some(d)) => d,
        };
        if degrees.any(|d| d != Some(degree)) {
            return Err(PolarError::InconsistentDegrees);
        }
        Ok(RationalMap {
            components,
            degree,
            base_divisor_free: OnceLock::new(),
        })
    }

    pub fn components(&self) -> &[Polynomial] {
        &self.components
    }

    pub fn into_components(self) -> Vec<Polynomial> {
        self.components
    }

    /// Projective dimension `n` of source and target.
    pub fn dim(&self) -> usize {
        self.components.len() - 1
    }

    pub fn n_vars(&self) -> usize {
        self.components.len()
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn field(&self) -> Field {
        self.components[0].field()
    }

    /// Whether the nonzero components have no common factor. Computed once.
    pub fn is_base_divisor_free(&self) -> bool {
        *self.base_divisor_free.get_or_init(|| {
            gcd_all(&self.components)
                .map(|g| g.is_constant())
                .unwrap_or(false)
        })
    }

    /// Divides all components by their monic GCD.
    pub fn strip_common_factor(&self) -> Result<(Polynomial, RationalMap), PolarError> {
        let g = gcd_all(&self.components)?;
        let comps = self
            .components
            .iter()
            .map(|c| c.exact_divide(&g))
            .collect::<Result<Vec<_>, _>>()?;
        let map = RationalMap::new(comps)?;
        let _ = map.base_divisor_free.set(true);
        Ok((g, map))
    }

    pub fn scale(&self, c: &Coefficient) -> Result<Self, PolarError> {
        RationalMap::new(self.components.iter().map(|p| p.scale(c)).collect())
    }

    /// `self ∘ inner`: substitutes the components of `inner` for the variables.
    pub fn compose(&self, inner: &RationalMap) -> Result<Self, PolarError> {
        let comps = self
            .components
            .iter()
            .map(|c| c.substitute(inner.components()))
            .collect::<Result<Vec<_>, _>>()?;
        RationalMap::new(comps)
    }

    /// Composition with the linear change of variables `x_i -> sum_j m[i][j] x_j`.
    pub fn precompose_linear(&self, matrix: &[Vec<Coefficient>]) -> Result<Self, PolarError> {
        let lin = linear_map(matrix)?;
        self.compose(&lin)
    }

    pub fn reduce_mod(&self, p: u64) -> Result<Self, PolarError> {
        RationalMap::new(
            self.components
                .iter()
                .map(|c| c.reduce_mod(p))
                .collect::<Result<Vec<_>, _>>()?,
        )
    }

    pub fn evaluate(&self, point: &[Coefficient]) -> Result<Vec<Coefficient>, PolarError> {
        Ok(self
            .components
            .iter()
            .map(|c| c.evaluate(point))
            .collect::<Result<Vec<_>, _>>()?)
    }
}

/// The projectivity with rows `matrix`, as a rational map of degree one.
pub fn linear_map(matrix: &[Vec<Coefficient>]) -> Result<RationalMap, PolarError> {
    let field = matrix
        .first()
        .and_then(|r| r.first())
        .map(Coefficient::field)
        .unwrap_or(Field::Rational);
    let comps = matrix
        .iter()
        .map(|row| Polynomial::linear(field, row))
        .collect::<Result<Vec<_>, _>>()?;
    RationalMap::new(comps)
}

/// Base divisor, moving part and reduced part of a polar system.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarDecomposition {
    /// `F'`, monic.
    pub base_divisor: Polynomial,
    pub moving: RationalMap,
    /// `F / F'`.
    pub reduced: Polynomial,
}

fn check_polar_input(f: &Polynomial) -> Result<(), PolarError> {
    if f.is_zero() || f.is_constant() {
        return Err(PolarError::ConstantInput);
    }
    if !f.is_homogeneous() {
        return Err(PolarError::NotHomogeneous);
    }
    Ok(())
}

/// The gradient `(df/dx0, ..., df/dxn)`.
pub fn polar_system(f: &Polynomial) -> Result<RationalMap, PolarError> {
    check_polar_input(f)?;
    let partials = (0..f.n_vars())
        .map(|i| f.derivative(i))
        .collect::<Result<Vec<_>, _>>()?;
    RationalMap::new(partials)
}

/// `prod L_i^{m_i - 1}`, built from the factors and normalized to be monic.
pub fn base_divisor_factored(arrangement: &LinearFormProduct) -> Polynomial {
    arrangement
        .product_with(|i| arrangement.multiplicities()[i] - 1)
        .monic()
}

/// Moving part through the GCD of the partials.
pub fn moving_part(f: &Polynomial) -> Result<PolarDecomposition, PolarError> {
    let polar = polar_system(f)?;
    let (base_divisor, moving) = polar.strip_common_factor()?;
    let reduced = f.exact_divide(&base_divisor)?;
    Ok(PolarDecomposition {
        base_divisor,
        moving,
        reduced,
    })
}

/// Moving part of a product of linear forms, dividing the partials of the
/// expansion by [`base_divisor_factored`] instead of computing a GCD.
pub fn moving_part_factored(
    arrangement: &LinearFormProduct,
) -> Result<PolarDecomposition, PolarError> {
    let f = arrangement.expand();
    let polar = polar_system(&f)?;
    let base_divisor = base_divisor_factored(arrangement);
    let comps = polar
        .components()
        .iter()
        .map(|c| c.exact_divide(&base_divisor))
        .collect::<Result<Vec<_>, _>>()?;
    let moving = RationalMap::new(comps)?;
    let reduced = f.exact_divide(&base_divisor)?;
    Ok(PolarDecomposition {
        base_divisor,
        moving,
        reduced,
    })
}

/// The same forms with every multiplicity set to one.
pub fn reduced_part(arrangement: &LinearFormProduct) -> LinearFormProduct {
    arrangement.reduced()
}

/// Whether the partial derivatives of `f` are linearly dependent, i.e. `f`
/// omits a variable after a linear change of coordinates.
pub fn is_cone(f: &Polynomial) -> bool {
    let partials: Vec<Polynomial> = (0..f.n_vars())
        .map(|i| f.derivative(i).expect("index in range"))
        .collect();
    let mut columns: BTreeMap<&Monomial, usize> = BTreeMap::new();
    for p in &partials {
        for (m, _) in p.terms() {
            let next = columns.len();
            columns.entry(m).or_insert(next);
        }
    }
    let rows: Vec<Vec<Coefficient>> = partials
        .iter()
        .map(|p| {
            let mut row = vec![Coefficient::zero(f.field()); columns.len()];
            for (m, c) in p.terms() {
                row[columns[m]] = c.clone();
            }
            row
        })
        .collect();
    linalg::rank(rows) < f.n_vars()
}

/// Restricts every form other than `L_index` to the hyperplane `{L_index = 0}`
/// using the pivot substitution of [`Polynomial::restrict_to_hyperplane`], and
/// merges forms that become projectively equal.
pub fn restrict_arrangement(
    arrangement: &LinearFormProduct,
    index: usize,
) -> Result<LinearFormProduct, PolarError> {
    if index >= arrangement.num_forms() {
        return Err(PolarError::IndexOutOfRange { index });
    }
    if arrangement.n_vars() < 2 {
        return Err(PolarError::NoHyperplane);
    }
    let hyperplane = &arrangement.forms()[index];
    let pivot = hyperplane
        .iter()
        .position(|c| !c.is_zero())
        .expect("forms are nonzero");
    let a_k = BigRational::from_integer(hyperplane[pivot].clone());
    let mut rows = Vec::new();
    let mut mults = Vec::new();
    for (j, (form, &m)) in arrangement
        .forms()
        .iter()
        .zip(arrangement.multiplicities())
        .enumerate()
    {
        if j == index {
            continue;
        }
        let b_k = BigRational::from_integer(form[pivot].clone());
        let row: Vec<BigRational> = form
            .iter()
            .zip(hyperplane)
            .enumerate()
            .filter(|&(t, _)| t != pivot)
            .map(|(_, (b_t, a_t))| {
                BigRational::from_integer(b_t.clone())
                    - &b_k * BigRational::from_integer(a_t.clone()) / &a_k
            })
            .collect();
        if row.iter().all(BigRational::is_zero) {
            return Err(PolarError::DegenerateRestriction { index, other: j });
        }
        rows.push(row);
        mults.push(m);
    }
    if rows.is_empty() {
        return Err(PolarError::EmptyRestriction);
    }
    Ok(LinearFormProduct::new(rows, mults)?)
}
