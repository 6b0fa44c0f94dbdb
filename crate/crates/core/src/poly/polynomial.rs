use std::collections::BTreeMap;
use std::fmt;

use super::{Coefficient, Field, Monomial, PolyError};

/// Sparse polynomial in `n_vars` variables. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    n_vars: usize,
    field: Field,
    terms: BTreeMap<Monomial, Coefficient>,
}

impl Polynomial {
    pub fn zero(n_vars: usize, field: Field) -> Self {
        Polynomial {
            n_vars,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n_vars: usize, c: Coefficient) -> Self {
        let mut p = Self::zero(n_vars, c.field());
        if !c.is_zero() {
            p.terms.insert(Monomial::one(n_vars), c);
        }
        p
    }

    pub fn one(n_vars: usize, field: Field) -> Self {
        Self::constant(n_vars, Coefficient::one(field))
    }

    /// The coordinate `x_index`. Panics if `index >= n_vars`.
    pub fn var(n_vars: usize, field: Field, index: usize) -> Self {
        assert!(index < n_vars, "variable x{index} out of range");
        Self::monomial(Monomial::var(n_vars, index), Coefficient::one(field))
    }

    pub fn monomial(m: Monomial, c: Coefficient) -> Self {
        let n_vars = m.n_vars();
        let mut p = Self::zero(n_vars, c.field());
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs, summing repeats.
    pub fn from_terms<I>(n_vars: usize, field: Field, terms: I) -> Result<Self, PolyError>
    where
        I: IntoIterator<Item = (Vec<u32>, Coefficient)>,
    {
        let mut p = Self::zero(n_vars, field);
        for (exps, c) in terms {
            if exps.len() != n_vars {
                return Err(PolyError::VariableCountMismatch {
                    left: n_vars,
                    right: exps.len(),
                });
            }
            if c.field() != field {
                return Err(PolyError::FieldMismatch);
            }
            p.add_term(Monomial::new(exps), c);
        }
        Ok(p)
    }

    /// Linear form `sum coeffs[i] * x_i`.
    pub fn linear(field: Field, coeffs: &[Coefficient]) -> Result<Self, PolyError> {
        let n = coeffs.len();
        Self::from_terms(
            n,
            field,
            coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| (Monomial::var(n, i).exponents().to_vec(), c.clone())),
        )
    }

    fn add_term(&mut self, m: Monomial, c: Coefficient) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                let sum = existing.add(&c);
                if sum.is_zero() {
                    self.terms.remove(&m);
                } else {
                    *existing = sum;
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn n_vars(&self) -> usize {
        self.n_vars
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Terms in ascending graded-lex order.
    pub fn terms(
        &self,
    ) -> impl DoubleEndedIterator<Item = (&Monomial, &Coefficient)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> Coefficient {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Coefficient::zero(self.field))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Largest term under graded-lex order.
    pub fn leading_term(&self) -> Option<(&Monomial, &Coefficient)> {
        self.terms.iter().next_back()
    }

    /// Maximum total degree; `None` for the zero polynomial.
    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Common degree of all terms, or `None` if the polynomial is zero or not homogeneous.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(Monomial::degree);
        let d = degrees.next()?;
        degrees.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.homogeneous_degree().is_some()
    }

    pub fn involves(&self, var: usize) -> bool {
        self.terms.keys().any(|m| m.exponents()[var] > 0)
    }

    pub fn degree_in(&self, var: usize) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponents()[var])
            .max()
            .unwrap_or(0)
    }

    fn check_compatible(&self, other: &Self) -> Result<(), PolyError> {
        if self.n_vars != other.n_vars {
            return Err(PolyError::VariableCountMismatch {
                left: self.n_vars,
                right: other.n_vars,
            });
        }
        if self.field != other.field {
            return Err(PolyError::FieldMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> Self {
        Polynomial {
            n_vars: self.n_vars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    /// Multiplies every coefficient by `c` (which must lie in the same field).
    pub fn scale(&self, c: &Coefficient) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars, self.field);
        }
        Polynomial {
            n_vars: self.n_vars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(m, a)| (m.clone(), a.mul(c)))
                .collect(),
        }
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, PolyError> {
        self.check_compatible(other)?;
        let mut out = Self::zero(self.n_vars, self.field);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), ca.mul(cb));
            }
        }
        Ok(out)
    }

    pub(crate) fn mul_monomial(&self, m: &Monomial, c: &Coefficient) -> Self {
        if c.is_zero() {
            return Self::zero(self.n_vars, self.field);
        }
        Polynomial {
            n_vars: self.n_vars,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(k, a)| (k.mul(m), a.mul(c)))
                .collect(),
        }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = Self::one(self.n_vars, self.field);
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.multiply(&base).expect("same ring");
            }
            e >>= 1;
            if e > 0 {
                base = base.multiply(&base).expect("same ring");
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `x_index`.
    pub fn derivative(&self, index: usize) -> Result<Self, PolyError> {
        if index >= self.n_vars {
            return Err(PolyError::VariableOutOfRange {
                index,
                n_vars: self.n_vars,
            });
        }
        let mut out = Self::zero(self.n_vars, self.field);
        for (m, c) in &self.terms {
            let e = m.exponents()[index];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            *dm.exponent_mut(index) -= 1;
            out.add_term(dm, c.mul(&Coefficient::from_i64(self.field, e as i64)));
        }
        Ok(out)
    }

    /// Quotient `q` with `q * divisor == self`. A nonzero remainder is reported
    /// as [`PolyError::InexactDivision`], distinct from division by zero.
    pub fn exact_divide(&self, divisor: &Self) -> Result<Self, PolyError> {
        self.check_compatible(divisor)?;
        let (lead_m, lead_c) = divisor.leading_term().ok_or(PolyError::DivisionByZero)?;
        let lead_inv = lead_c.inverse().expect("nonzero leading coefficient");
        let mut rem = self.clone();
        let mut quotient = Self::zero(self.n_vars, self.field);
        while let Some((m, c)) = rem.leading_term() {
            let qm = m.div(lead_m).ok_or(PolyError::InexactDivision)?;
            let qc = c.mul(&lead_inv);
            let step = divisor.mul_monomial(&qm, &qc.neg());
            for (sm, sc) in step.terms {
                rem.add_term(sm, sc);
            }
            quotient.add_term(qm, qc);
        }
        Ok(quotient)
    }

    /// Scales so the graded-lex leading coefficient is 1. Zero stays zero.
    pub fn monic(&self) -> Self {
        match self.leading_term() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inverse().expect("nonzero")),
            _ => self.clone(),
        }
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Option<Monomial> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, m| acc.gcd(m)))
    }

    pub fn evaluate(&self, point: &[Coefficient]) -> Result<Coefficient, PolyError> {
        if point.len() != self.n_vars {
            return Err(PolyError::PointLength {
                expected: self.n_vars,
                found: point.len(),
            });
        }
        if point.iter().any(|c| c.field() != self.field) {
            return Err(PolyError::FieldMismatch);
        }
        let mut acc = Coefficient::zero(self.field);
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                if e > 0 {
                    t = t.mul(&x.pow(e));
                }
            }
            acc = acc.add(&t);
        }
        Ok(acc)
    }

    /// Replaces `x_i` by `images[i]`. All images share a ring, which may have a
    /// different number of variables than `self`.
    pub fn substitute(&self, images: &[Polynomial]) -> Result<Self, PolyError> {
        if images.len() != self.n_vars {
            return Err(PolyError::PointLength {
                expected: self.n_vars,
                found: images.len(),
            });
        }
        let (target_vars, field) = match images.first() {
            Some(g) => (g.n_vars, g.field),
            None => (0, self.field),
        };
        for g in images {
            if g.n_vars != target_vars {
                return Err(PolyError::VariableCountMismatch {
                    left: target_vars,
                    right: g.n_vars,
                });
            }
            if g.field != self.field {
                return Err(PolyError::FieldMismatch);
            }
        }
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|g| vec![Self::one(target_vars, field), g.clone()])
            .collect();
        let mut out = Self::zero(target_vars, field);
        for (m, c) in &self.terms {
            let mut t = Self::constant(target_vars, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let table = &mut powers[i];
                while table.len() <= e as usize {
                    let next = table.last().unwrap().multiply(&images[i])?;
                    table.push(next);
                }
                t = t.multiply(&table[e as usize])?;
            }
            for (tm, tc) in t.terms {
                out.add_term(tm, tc);
            }
        }
        Ok(out)
    }

    /// Coefficient-wise image in `F_p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Self, PolyError> {
        let field = Field::prime(p)?;
        let mut out = Self::zero(self.n_vars, field);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), c.reduce_mod(p)?);
        }
        Ok(out)
    }

    /// Coefficients of `form` when it is a nonzero homogeneous linear form.
    pub fn linear_coefficients(&self) -> Result<Vec<Coefficient>, PolyError> {
        if self.is_zero() {
            return Err(PolyError::ZeroForm);
        }
        if self.homogeneous_degree() != Some(1) {
            return Err(PolyError::NotLinear);
        }
        Ok((0..self.n_vars)
            .map(|i| self.coefficient(&Monomial::var(self.n_vars, i)))
            .collect())
    }

    /// Restriction to the hyperplane `{form = 0}`.
    ///
    /// With `k` the first variable carrying a nonzero coefficient `a_k` of the
    /// form, substitutes `x_k = -(1/a_k) * sum_{j != k} a_j x_j`, then drops `x_k`
    /// and renumbers the remaining variables in order. The result lives in
    /// `n_vars - 1` variables and is zero when the form divides `self`.
    pub fn restrict_to_hyperplane(&self, form: &Polynomial) -> Result<Self, PolyError> {
        self.check_compatible(form)?;
        let coeffs = form.linear_coefficients()?;
        let images = hyperplane_substitution(&coeffs)?;
        self.substitute(&images)
    }
}

/// Images of the old coordinates under the pivot substitution used by
/// [`Polynomial::restrict_to_hyperplane`], as polynomials in one fewer variable.
pub(crate) fn hyperplane_substitution(
    coeffs: &[Coefficient],
) -> Result<Vec<Polynomial>, PolyError> {
    let n = coeffs.len();
    let k = coeffs
        .iter()
        .position(|c| !c.is_zero())
        .ok_or(PolyError::ZeroForm)?;
    if n < 2 {
        return Err(PolyError::NotLinear);
    }
    let field = coeffs[k].field();
    let neg_inv = coeffs[k].inverse().expect("pivot is nonzero").neg();
    let new_index = |j: usize| if j < k { j } else { j - 1 };
    let mut images = Vec::with_capacity(n);
    for j in 0..n {
        if j == k {
            let mut img = Polynomial::zero(n - 1, field);
            for (i, c) in coeffs.iter().enumerate() {
                if i != k {
                    img.add_term(Monomial::var(n - 1, new_index(i)), c.mul(&neg_inv));
                }
            }
            images.push(img);
        } else {
            images.push(Polynomial::var(n - 1, field, new_index(j)));
        }
    }
    Ok(images)
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::parser::format_canonical(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q() -> Field {
        Field::Rational
    }

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, q(), i)
    }

    fn c(v: i64) -> Coefficient {
        Coefficient::from_i64(q(), v)
    }

    fn mono(exps: &[u32], coeff: i64) -> Polynomial {
        Polynomial::monomial(Monomial::new(exps.to_vec()), c(coeff))
    }

    #[test]
    fn multiply_examples() {
        let p = x(3, 0).multiply(&x(3, 1)).unwrap();
        assert_eq!(p, mono(&[1, 1, 0], 1));
        let a = x(2, 0).add(&x(2, 1)).unwrap();
        let b = x(2, 0).sub(&x(2, 1)).unwrap();
        let expected = mono(&[2, 0], 1).sub(&mono(&[0, 2], 1)).unwrap();
        assert_eq!(a.multiply(&b).unwrap(), expected);
    }

    #[test]
    fn multiply_rejects_mismatches() {
        assert_eq!(
            x(2, 0).multiply(&x(3, 0)),
            Err(PolyError::VariableCountMismatch { left: 2, right: 3 })
        );
        let fp = Polynomial::var(2, Field::Prime(5), 0);
        assert_eq!(x(2, 0).multiply(&fp), Err(PolyError::FieldMismatch));
    }

    #[test]
    fn derivative_examples() {
        let f = mono(&[1, 1, 1], 1);
        assert_eq!(f.derivative(0).unwrap(), mono(&[0, 1, 1], 1));
        let quad = (0..3)
            .map(|i| x(3, i).pow(2))
            .fold(Polynomial::zero(3, q()), |a, b| a.add(&b).unwrap());
        for i in 0..3 {
            assert_eq!(quad.derivative(i).unwrap(), x(3, i).scale(&c(2)));
        }
        let m = mono(&[3, 2, 1], 1);
        assert_eq!(m.derivative(1).unwrap(), mono(&[3, 1, 1], 2));
        assert_eq!(
            f.derivative(3),
            Err(PolyError::VariableOutOfRange {
                index: 3,
                n_vars: 3
            })
        );
    }

    #[test]
    fn exact_divide_examples() {
        assert_eq!(
            mono(&[2, 1], 1).exact_divide(&x(2, 0)).unwrap(),
            mono(&[1, 1], 1)
        );
        let diff_sq = mono(&[2, 0], 1).sub(&mono(&[0, 2], 1)).unwrap();
        let sum = x(2, 0).add(&x(2, 1)).unwrap();
        assert_eq!(
            diff_sq.exact_divide(&sum).unwrap(),
            x(2, 0).sub(&x(2, 1)).unwrap()
        );
        // F = x0^2 x1 x2, dF/dx1 = x0^2 x2, divided by F' = x0.
        let f = mono(&[2, 1, 1], 1);
        let d1 = f.derivative(1).unwrap();
        let quotient = d1.exact_divide(&x(3, 0)).unwrap();
        assert_eq!(quotient, mono(&[1, 0, 1], 1));
        assert_eq!(quotient.multiply(&x(3, 0)).unwrap(), d1);
    }

    #[test]
    fn exact_divide_errors_are_distinct() {
        let a = mono(&[1, 1], 1);
        assert_eq!(
            a.exact_divide(&Polynomial::zero(2, q())),
            Err(PolyError::DivisionByZero)
        );
        let b = x(2, 0).add(&x(2, 1)).unwrap();
        assert_eq!(a.exact_divide(&b), Err(PolyError::InexactDivision));
    }

    #[test]
    fn evaluate_examples() {
        let one = c(1);
        let zero = c(0);
        assert_eq!(
            mono(&[1, 1, 1], 1)
                .evaluate(&[one.clone(), one.clone(), one.clone()])
                .unwrap(),
            one
        );
        let conic = mono(&[0, 2, 0], 1).sub(&mono(&[1, 0, 1], 1)).unwrap();
        assert!(conic
            .evaluate(&[one.clone(), zero.clone(), zero.clone()])
            .unwrap()
            .is_zero());
        let f = mono(&[1, 1, 1, 1], 1);
        let p = [zero.clone(), one.clone(), one.clone(), one.clone()];
        let grad: Vec<_> = (0..4)
            .map(|i| f.derivative(i).unwrap().evaluate(&p).unwrap())
            .collect();
        assert_eq!(grad, vec![one.clone(), zero.clone(), zero.clone(), zero]);
    }

    #[test]
    fn evaluate_errors() {
        let f = x(2, 0);
        assert_eq!(
            f.evaluate(&[c(1)]),
            Err(PolyError::PointLength {
                expected: 2,
                found: 1
            })
        );
        let r = Coefficient::from_i64(Field::Prime(5), 1);
        assert_eq!(f.evaluate(&[r.clone(), r]), Err(PolyError::FieldMismatch));
    }

    #[test]
    fn restriction_examples() {
        // x1 x2 (x0 + x1) on x0 = 0 -> x1^2 x2, renumbered to y0^2 y1.
        let f = mono(&[0, 1, 1], 1)
            .multiply(&x(3, 0).add(&x(3, 1)).unwrap())
            .unwrap();
        assert_eq!(
            f.restrict_to_hyperplane(&x(3, 0)).unwrap(),
            mono(&[2, 1], 1)
        );
        // x1 ... x4 on x0 = 0 keeps its shape.
        let g = mono(&[0, 1, 1, 1, 1], 1);
        assert_eq!(
            g.restrict_to_hyperplane(&x(5, 0)).unwrap(),
            mono(&[1, 1, 1, 1], 1)
        );
        // x1 x2 (x1 + x2) vanishes identically on x1 = 0.
        let h = mono(&[0, 1, 1], 1)
            .multiply(&x(3, 1).add(&x(3, 2)).unwrap())
            .unwrap();
        assert!(h.restrict_to_hyperplane(&x(3, 1)).unwrap().is_zero());
    }

    #[test]
    fn restriction_rejects_bad_forms() {
        let f = mono(&[1, 1, 1], 1);
        assert_eq!(
            f.restrict_to_hyperplane(&Polynomial::zero(3, q())),
            Err(PolyError::ZeroForm)
        );
        assert_eq!(
            f.restrict_to_hyperplane(&mono(&[2, 0, 0], 1)),
            Err(PolyError::NotLinear)
        );
        assert_eq!(
            f.restrict_to_hyperplane(&Polynomial::one(3, q())),
            Err(PolyError::NotLinear)
        );
    }

    #[test]
    fn restriction_pivots_on_first_nonzero_coefficient() {
        // form 2 x1 + x2: x1 = -x2 / 2; f = x1 -> -y1 / 2 in variables (x0, x2).
        let form = x(3, 1).scale(&c(2)).add(&x(3, 2)).unwrap();
        let r = x(3, 1).restrict_to_hyperplane(&form).unwrap();
        let half = Coefficient::Rational(num_rational::BigRational::new((-1).into(), 2.into()));
        assert_eq!(r, Polynomial::var(2, q(), 1).scale(&half));
    }

    #[test]
    fn homogeneity() {
        assert_eq!(mono(&[2, 1], 3).homogeneous_degree(), Some(3));
        let mixed = mono(&[2, 1], 1).add(&x(2, 0)).unwrap();
        assert_eq!(mixed.homogeneous_degree(), None);
        assert!(!mixed.is_homogeneous());
        assert!(Polynomial::zero(2, q()).is_homogeneous());
    }
}
