//! Exact scalars: arbitrary-precision rationals and residues modulo a prime.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::PolyError;

/// Largest modulus accepted for prime fields. Residue products must fit in a `u64`.
pub const MAX_PRIME: u64 = (1 << 31) - 1;

/// The ground field of a polynomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// Validates `p` and returns the prime field `F_p`.
    pub fn prime(p: u64) -> Result<Field, PolyError> {
        if p > MAX_PRIME || !is_prime(p) {
            return Err(PolyError::InvalidPrime(p));
        }
        Ok(Field::Prime(p))
    }

    pub fn modulus(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Field::Rational => write!(f, "Q"),
            Field::Prime(p) => write!(f, "F_{p}"),
        }
    }
}

/// Deterministic trial division; moduli are bounded by [`MAX_PRIME`].
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    if p.is_multiple_of(2) {
        return p == 2;
    }
    let mut d = 3;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A scalar of either field. Rationals are kept in lowest terms with a
/// positive denominator (guaranteed by `BigRational`); residues lie in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Coefficient {
    Rational(BigRational),
    Residue { value: u64, modulus: u64 },
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> Option<u64> {
    if a.is_multiple_of(p) {
        return None;
    }
    Some(pow_mod(a, p - 2, p))
}

impl Coefficient {
    pub fn zero(field: Field) -> Self {
        match field {
            Field::Rational => Coefficient::Rational(BigRational::zero()),
            Field::Prime(p) => Coefficient::Residue {
                value: 0,
                modulus: p,
            },
        }
    }

    pub fn one(field: Field) -> Self {
        Self::from_i64(field, 1)
    }

    pub fn from_i64(field: Field, v: i64) -> Self {
        Self::from_bigint(field, &BigInt::from(v))
    }

    pub fn from_bigint(field: Field, v: &BigInt) -> Self {
        match field {
            Field::Rational => Coefficient::Rational(BigRational::from_integer(v.clone())),
            Field::Prime(p) => {
                let r = v.mod_floor(&BigInt::from(p));
                Coefficient::Residue {
                    value: r.to_u64().expect("residue below modulus"),
                    modulus: p,
                }
            }
        }
    }

    pub fn from_rational(field: Field, v: &BigRational) -> Result<Self, PolyError> {
        match field {
            Field::Rational => Ok(Coefficient::Rational(v.clone())),
            Field::Prime(p) => {
                let num = Self::from_bigint(field, v.numer());
                let den = Self::from_bigint(field, v.denom());
                let inv = den.inverse().ok_or(PolyError::DenominatorCollision(p))?;
                Ok(num.mul(&inv))
            }
        }
    }

    pub fn field(&self) -> Field {
        match self {
            Coefficient::Rational(_) => Field::Rational,
            Coefficient::Residue { modulus, .. } => Field::Prime(*modulus),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Coefficient::Rational(q) => q.is_zero(),
            Coefficient::Residue { value, .. } => *value == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Coefficient::Rational(q) => q.is_one(),
            Coefficient::Residue { value, .. } => *value == 1,
        }
    }

    /// True for rationals below zero. Residues have no sign.
    pub fn is_negative(&self) -> bool {
        matches!(self, Coefficient::Rational(q) if q.is_negative())
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Coefficient::Rational(q) => Some(q),
            Coefficient::Residue { .. } => None,
        }
    }

    pub fn as_residue(&self) -> Option<u64> {
        match self {
            Coefficient::Rational(_) => None,
            Coefficient::Residue { value, .. } => Some(*value),
        }
    }

    /// Panics when the operands belong to different fields; polynomial
    /// operations check field agreement before reaching scalar arithmetic.
    pub fn add(&self, other: &Self) -> Self {
        match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a + b),
            (
                Coefficient::Residue {
                    value: a,
                    modulus: p,
                },
                Coefficient::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Coefficient::Residue {
                value: (a + b) % p,
                modulus: *p,
            },
            _ => panic!(
                "coefficient field mismatch: {} vs {}",
                self.field(),
                other.field()
            ),
        }
    }

    pub fn neg(&self) -> Self {
        match self {
            Coefficient::Rational(a) => Coefficient::Rational(-a),
            Coefficient::Residue { value, modulus } => Coefficient::Residue {
                value: (modulus - value) % modulus,
                modulus: *modulus,
            },
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        match (self, other) {
            (Coefficient::Rational(a), Coefficient::Rational(b)) => Coefficient::Rational(a * b),
            (
                Coefficient::Residue {
                    value: a,
                    modulus: p,
                },
                Coefficient::Residue {
                    value: b,
                    modulus: q,
                },
            ) if p == q => Coefficient::Residue {
                value: mul_mod(*a, *b, *p),
                modulus: *p,
            },
            _ => panic!(
                "coefficient field mismatch: {} vs {}",
                self.field(),
                other.field()
            ),
        }
    }

    pub fn inverse(&self) -> Option<Self> {
        match self {
            Coefficient::Rational(a) if a.is_zero() => None,
            Coefficient::Rational(a) => Some(Coefficient::Rational(a.recip())),
            Coefficient::Residue { value, modulus } => {
                inv_mod(*value, *modulus).map(|v| Coefficient::Residue {
                    value: v,
                    modulus: *modulus,
                })
            }
        }
    }

    /// Division by zero yields `None`.
    pub fn div(&self, other: &Self) -> Option<Self> {
        other.inverse().map(|inv| self.mul(&inv))
    }

    pub fn pow(&self, exp: u32) -> Self {
        match self {
            Coefficient::Rational(a) => {
                Coefficient::Rational(num_traits::pow(a.clone(), exp as usize))
            }
            Coefficient::Residue { value, modulus } => Coefficient::Residue {
                value: pow_mod(*value, exp as u64, *modulus),
                modulus: *modulus,
            },
        }
    }

    /// Reduction of a rational into `F_p`; residues must already live in `F_p`.
    pub fn reduce_mod(&self, p: u64) -> Result<Self, PolyError> {
        match self {
            Coefficient::Rational(q) => Self::from_rational(Field::Prime(p), q),
            Coefficient::Residue { modulus, .. } if *modulus == p => Ok(self.clone()),
            Coefficient::Residue { .. } => Err(PolyError::FieldMismatch),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Rational(q) if q.is_integer() => write!(f, "{}", q.numer()),
            Coefficient::Rational(q) => write!(f, "{}/{}", q.numer(), q.denom()),
            Coefficient::Residue { value, .. } => write!(f, "{value}"),
        }
    }
}
