//! Multivariate GCD by recursive subresultant pseudo-remainder sequences.
//!
//! The main variable at each level is the smallest-index variable present in
//! either input; coefficients with respect to it are polynomials in the
//! remaining variables, whose own GCDs are computed recursively. Worst case is
//! exponential in the number of variables, which is fine at the degrees and
//! dimensions this crate works in.

use super::{Coefficient, Monomial, PolyError, Polynomial};

/// Monic greatest common divisor (graded-lex leading coefficient 1).
pub fn gcd(a: &Polynomial, b: &Polynomial) -> Result<Polynomial, PolyError> {
    if a.n_vars() != b.n_vars() {
        return Err(PolyError::VariableCountMismatch {
            left: a.n_vars(),
            right: b.n_vars(),
        });
    }
    if a.field() != b.field() {
        return Err(PolyError::FieldMismatch);
    }
    if a.is_zero() && b.is_zero() {
        return Err(PolyError::GcdOfZeros);
    }
    Ok(gcd_rec(a, b))
}

/// GCD of a family of polynomials, ignoring zero members.
pub fn gcd_all<'a, I>(polys: I) -> Result<Polynomial, PolyError>
where
    I: IntoIterator<Item = &'a Polynomial>,
{
    let mut acc: Option<Polynomial> = None;
    for p in polys {
        if p.is_zero() {
            continue;
        }
        acc = Some(match acc {
            None => p.monic(),
            Some(g) if g.is_constant() => return Ok(g),
            Some(g) => gcd(&g, p)?,
        });
    }
    acc.ok_or(PolyError::GcdOfZeros)
}

fn gcd_rec(a: &Polynomial, b: &Polynomial) -> Polynomial {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let n = a.n_vars();
    let field = a.field();
    if a.is_constant() || b.is_constant() {
        return Polynomial::one(n, field);
    }

    // Split off monomial contents; their gcd is the componentwise minimum.
    let ma = a.monomial_content().expect("nonzero");
    let mb = b.monomial_content().expect("nonzero");
    let mono = ma.gcd(&mb);
    let one = Coefficient::one(field);
    if !ma.is_one() || !mb.is_one() {
        let a1 = strip_monomial(a, &ma);
        let b1 = strip_monomial(b, &mb);
        let rest = gcd_rec(&a1, &b1);
        return rest.mul_monomial(&mono, &one);
    }
    if a.is_monomial() || b.is_monomial() {
        return Polynomial::monomial(mono, one);
    }

    let var = (0..n)
        .find(|&v| a.involves(v) || b.involves(v))
        .expect("non-constant input");
    if !a.involves(var) {
        return gcd_rec(a, &content_in(b, var));
    }
    if !b.involves(var) {
        return gcd_rec(&content_in(a, var), b);
    }

    let ca = content_in(a, var);
    let cb = content_in(b, var);
    let pa = a.exact_divide(&ca).expect("content divides");
    let pb = b.exact_divide(&cb).expect("content divides");
    let content = gcd_rec(&ca, &cb);
    let prs = subresultant_gcd(&pa, &pb, var);
    content.multiply(&prs).expect("same ring").monic()
}

fn strip_monomial(p: &Polynomial, m: &Monomial) -> Polynomial {
    if m.is_one() {
        return p.clone();
    }
    Polynomial::from_terms(
        p.n_vars(),
        p.field(),
        p.terms().map(|(t, c)| {
            (
                t.div(m)
                    .expect("monomial content divides")
                    .exponents()
                    .to_vec(),
                c.clone(),
            )
        }),
    )
    .expect("same ring")
}

/// Coefficients of `p` as a polynomial in `x_var`, lowest degree first.
fn coefficients_in(p: &Polynomial, var: usize) -> Vec<Polynomial> {
    let n = p.n_vars();
    let mut buckets: Vec<Vec<(Vec<u32>, Coefficient)>> =
        vec![Vec::new(); p.degree_in(var) as usize + 1];
    for (m, c) in p.terms() {
        let mut e = m.exponents().to_vec();
        let d = std::mem::replace(&mut e[var], 0);
        buckets[d as usize].push((e, c.clone()));
    }
    buckets
        .into_iter()
        .map(|terms| Polynomial::from_terms(n, p.field(), terms).expect("same ring"))
        .collect()
}

fn from_coefficients(
    coeffs: &[Polynomial],
    var: usize,
    n: usize,
    field: super::Field,
) -> Polynomial {
    let mut out = Polynomial::zero(n, field);
    let one = Coefficient::one(field);
    for (d, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let mut m = Monomial::one(n);
        *m.exponent_mut(var) = d as u32;
        out = out.add(&c.mul_monomial(&m, &one)).expect("same ring");
    }
    out
}

/// GCD of the coefficients of `p` with respect to `x_var`; free of `x_var`.
fn content_in(p: &Polynomial, var: usize) -> Polynomial {
    let mut acc: Option<Polynomial> = None;
    for c in coefficients_in(p, var).into_iter().filter(|c| !c.is_zero()) {
        let next = match acc {
            None => c.monic(),
            Some(g) => gcd_rec(&g, &c),
        };
        if next.is_constant() {
            return next;
        }
        acc = Some(next);
    }
    acc.unwrap_or_else(|| Polynomial::zero(p.n_vars(), p.field()))
}

fn primitive_part(p: &Polynomial, var: usize) -> Polynomial {
    let c = content_in(p, var);
    p.exact_divide(&c).expect("content divides")
}

type UniPoly = Vec<Polynomial>;

fn trim(p: &mut UniPoly) {
    while p.len() > 1 && p.last().is_some_and(Polynomial::is_zero) {
        p.pop();
    }
}

fn uni_degree(p: &UniPoly) -> Option<usize> {
    let d = p.len().checked_sub(1)?;
    if d == 0 && p[0].is_zero() {
        None
    } else {
        Some(d)
    }
}

fn uni_is_zero(p: &UniPoly) -> bool {
    p.iter().all(Polynomial::is_zero)
}

/// Pseudo-remainder `lc(b)^(deg a - deg b + 1) * a mod b`.
fn pseudo_remainder(a: &UniPoly, b: &UniPoly) -> UniPoly {
    let db = uni_degree(b).expect("nonzero divisor");
    let lcb = &b[db];
    let mut r = a.clone();
    let mut e = (uni_degree(a).unwrap_or(0) + 1).saturating_sub(db) as u32;
    while let Some(dr) = uni_degree(&r) {
        if dr < db {
            break;
        }
        let lcr = r[dr].clone();
        let shift = dr - db;
        for c in r.iter_mut() {
            *c = c.multiply(lcb).expect("same ring");
        }
        for (i, bc) in b.iter().enumerate() {
            let t = bc.multiply(&lcr).expect("same ring");
            r[i + shift] = r[i + shift].sub(&t).expect("same ring");
        }
        debug_assert!(r[dr].is_zero());
        trim(&mut r);
        e -= 1;
    }
    if e > 0 {
        let factor = lcb.pow(e);
        for c in r.iter_mut() {
            *c = c.multiply(&factor).expect("same ring");
        }
    }
    r
}

/// GCD of two polynomials that are primitive with respect to `x_var`.
fn subresultant_gcd(a: &Polynomial, b: &Polynomial, var: usize) -> Polynomial {
    let n = a.n_vars();
    let field = a.field();
    let mut f = coefficients_in(a, var);
    let mut g = coefficients_in(b, var);
    if f.len() < g.len() {
        std::mem::swap(&mut f, &mut g);
    }
    let one = Polynomial::one(n, field);
    let mut psi_g = one.clone();
    let mut psi_h = one.clone();
    loop {
        let df = uni_degree(&f).expect("nonzero");
        let dg = uni_degree(&g).expect("nonzero");
        let delta = (df - dg) as u32;
        let r = pseudo_remainder(&f, &g);
        if uni_is_zero(&r) {
            break;
        }
        if uni_degree(&r) == Some(0) {
            return one;
        }
        let divisor = psi_g.multiply(&psi_h.pow(delta)).expect("same ring");
        let next: UniPoly = r
            .iter()
            .map(|c| {
                c.exact_divide(&divisor)
                    .expect("subresultant division is exact")
            })
            .collect();
        f = std::mem::replace(&mut g, next);
        psi_g = f[uni_degree(&f).expect("nonzero")].clone();
        psi_h = if delta == 0 {
            psi_h
        } else {
            psi_g
                .pow(delta)
                .exact_divide(&psi_h.pow(delta - 1))
                .expect("subresultant division is exact")
        };
    }
    primitive_part(&from_coefficients(&g, var, n, field), var).monic()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Field;

    fn mono(exps: &[u32]) -> Polynomial {
        Polynomial::monomial(
            Monomial::new(exps.to_vec()),
            Coefficient::one(Field::Rational),
        )
    }

    fn x(n: usize, i: usize) -> Polynomial {
        Polynomial::var(n, Field::Rational, i)
    }

    #[test]
    fn monomial_gcd() {
        assert_eq!(gcd(&mono(&[1, 1, 0]), &mono(&[1, 0, 1])).unwrap(), x(3, 0));
    }

    #[test]
    fn gcd_of_monomial_family_partials() {
        // Partials of x0^2 x1^3 x2 share x0 x1^2.
        let f = mono(&[2, 3, 1]);
        let partials: Vec<_> = (0..3).map(|i| f.derivative(i).unwrap()).collect();
        assert_eq!(gcd_all(&partials).unwrap(), mono(&[1, 2, 0]));
    }

    #[test]
    fn gcd_recovers_common_linear_factor() {
        let g = x(3, 0)
            .add(&x(3, 1).scale(&Coefficient::from_i64(Field::Rational, 2)))
            .unwrap()
            .sub(&x(3, 2))
            .unwrap();
        let a = x(3, 0)
            .multiply(&x(3, 1))
            .unwrap()
            .add(&x(3, 2).pow(2))
            .unwrap();
        let b = x(3, 1)
            .pow(2)
            .sub(&x(3, 0).multiply(&x(3, 2)).unwrap())
            .unwrap();
        let ga = g.multiply(&a).unwrap();
        let gb = g.multiply(&b).unwrap();
        assert_eq!(gcd(&ga, &gb).unwrap(), g.monic());
    }

    #[test]
    fn gcd_coprime_is_one() {
        let a = x(2, 0).add(&x(2, 1)).unwrap();
        let b = x(2, 0).sub(&x(2, 1)).unwrap();
        assert_eq!(gcd(&a, &b).unwrap(), Polynomial::one(2, Field::Rational));
    }

    #[test]
    fn gcd_with_zero_and_errors() {
        let a = x(2, 0).scale(&Coefficient::from_i64(Field::Rational, 3));
        assert_eq!(
            gcd(&a, &Polynomial::zero(2, Field::Rational)).unwrap(),
            x(2, 0)
        );
        let z = Polynomial::zero(2, Field::Rational);
        assert_eq!(gcd(&z, &z), Err(PolyError::GcdOfZeros));
    }

    #[test]
    fn gcd_over_prime_field() {
        let f = Field::Prime(101);
        let xs: Vec<_> = (0..3).map(|i| Polynomial::var(3, f, i)).collect();
        let g = xs[0].add(&xs[1]).unwrap().add(&xs[2]).unwrap();
        let a = g.multiply(&xs[0].sub(&xs[2]).unwrap()).unwrap();
        let b = g.multiply(&g).unwrap().multiply(&xs[1]).unwrap();
        assert_eq!(gcd(&a, &b).unwrap(), g.monic());
    }
}
