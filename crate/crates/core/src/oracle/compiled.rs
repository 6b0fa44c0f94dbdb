//! A rational map reduced mod `p` and laid out for row-wise evaluation.
//!
//! Along a row only the last coordinate varies, so every component is first
//! collapsed to a univariate polynomial in that coordinate and then stepped
//! through all `p` values by forward differences, one modular addition per
//! difference order.

use super::projective::block_offset;
use super::OracleError;
use crate::polar::{PolarError, RationalMap};
use crate::poly::{inv_mod, mul_mod, pow_mod, Field};

/// Barrett reduction modulo a fixed `p < 2^32`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Barrett {
    p: u64,
    m: u64,
}

impl Barrett {
    pub(crate) fn new(p: u64) -> Self {
        Barrett { p, m: u64::MAX / p }
    }

    /// `x mod p` for any `x`.
    #[inline(always)]
    pub(crate) fn reduce(self, x: u64) -> u64 {
        let q = ((x as u128 * self.m as u128) >> 64) as u64;
        let r = x - q * self.p;
        if r >= self.p {
            r - self.p
        } else {
            r
        }
    }

    #[inline(always)]
    pub(crate) fn mul(self, a: u64, b: u64) -> u64 {
        self.reduce(a * b)
    }
}

struct Term {
    coeff: u64,
    /// Index into the power table for each prefix variable with a nonzero exponent.
    factors: Vec<usize>,
    /// Full exponent vector without the last variable.
    prefix: Vec<u32>,
    last: usize,
}

const INVERSE_TABLE_LIMIT: u64 = 1 << 24;

pub(crate) struct CompiledMap {
    n: usize,
    p: u64,
    br: Barrett,
    components: Vec<Vec<Term>>,
    /// One more than the largest exponent of the last variable.
    width: usize,
    max_prefix_exp: usize,
    inverses: Vec<u32>,
    offsets: Vec<u64>,
}

/// Per-worker buffers.
pub(crate) struct RowScratch {
    powers: Vec<u64>,
    coeffs: Vec<u64>,
    diffs: Vec<u64>,
    values: Vec<u64>,
}

impl CompiledMap {
    pub(crate) fn new(map: &RationalMap, p: u64) -> Result<Self, OracleError> {
        let field = Field::prime(p)?;
        let reduced = match map.field() {
            Field::Rational => match map.reduce_mod(p) {
                Err(PolarError::AllComponentsZero) => return Err(OracleError::VanishesModP(p)),
                other => {
                    let reduced = other?;
                    let lost = map
                        .components()
                        .iter()
                        .zip(reduced.components())
                        .position(|(q, r)| !q.is_zero() && r.is_zero());
                    if let Some(index) = lost {
                        return Err(OracleError::ComponentVanishesModP { index, p });
                    }
                    reduced
                }
            },
            f if f == field => map.clone(),
            _ => return Err(OracleError::FieldMismatch),
        };
        let n_vars = reduced.n_vars();
        let n = n_vars - 1;
        let mut width = 1;
        let mut max_prefix_exp = 0;
        let components: Vec<Vec<Term>> = reduced
            .components()
            .iter()
            .map(|poly| {
                poly.terms()
                    .map(|(m, c)| {
                        let exps = m.exponents();
                        let last = exps[n] as usize;
                        width = width.max(last + 1);
                        let prefix = exps[..n].to_vec();
                        max_prefix_exp =
                            max_prefix_exp.max(prefix.iter().copied().max().unwrap_or(0) as usize);
                        Term {
                            coeff: c.as_residue().expect("reduced mod p"),
                            factors: Vec::new(),
                            prefix,
                            last,
                        }
                    })
                    .collect()
            })
            .collect();
        let stride = max_prefix_exp + 1;
        let mut components = components;
        for term in components.iter_mut().flatten() {
            term.factors = term
                .prefix
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(v, &e)| v * stride + e as usize)
                .collect();
        }
        let br = Barrett::new(p);
        let inverses = if p <= INVERSE_TABLE_LIMIT {
            let mut table = vec![0u32; p as usize];
            table[1] = 1;
            for a in 2..p {
                // inv(a) = -(p / a) * inv(p mod a)
                let prev = table[(p % a) as usize] as u64;
                table[a as usize] = ((p - br.mul(p / a, prev)) % p) as u32;
            }
            table
        } else {
            Vec::new()
        };
        let offsets = (0..=n).map(|lead| block_offset(n, lead, p)).collect();
        Ok(CompiledMap {
            n,
            p,
            br,
            components,
            width,
            max_prefix_exp,
            inverses,
            offsets,
        })
    }

    pub(crate) fn dim(&self) -> usize {
        self.n
    }

    pub(crate) fn prime(&self) -> u64 {
        self.p
    }

    pub(crate) fn scratch(&self) -> RowScratch {
        RowScratch {
            powers: vec![0; self.n * (self.max_prefix_exp + 1)],
            coeffs: vec![0; self.components.len() * self.width],
            diffs: vec![0; self.components.len() * self.width],
            values: vec![0; self.components.len()],
        }
    }

    #[inline(always)]
    fn inverse(&self, a: u64) -> u64 {
        if self.inverses.is_empty() {
            inv_mod(a, self.p).expect("nonzero")
        } else {
            self.inverses[a as usize] as u64
        }
    }

    /// Index of the normalized image of `values`, whose first nonzero entry
    /// is at `lead`.
    #[inline(always)]
    pub(crate) fn image_key(&self, lead: usize, values: &[u64]) -> u64 {
        let inv = self.inverse(values[lead]);
        let mut acc = 0u64;
        for &v in &values[lead + 1..] {
            acc = acc * self.p + self.br.mul(v, inv);
        }
        self.offsets[lead] + acc
    }

    /// Digits of the normalized image used by [`Self::short_code`].
    fn short_digits(&self) -> usize {
        if self.p <= 4096 {
            2
        } else {
            1
        }
    }

    /// `lead` followed by the first normalized coordinates after it, read in
    /// base `p` (missing coordinates count as 0). Equal images have equal codes.
    #[inline(always)]
    pub(crate) fn short_code(&self, lead: usize, values: &[u64]) -> usize {
        let inv = self.inverse(values[lead]);
        let mut code = lead as u64;
        for t in 1..=self.short_digits() {
            let w = match values.get(lead + t) {
                Some(&v) if v != 0 => self.br.mul(v, inv),
                _ => 0,
            };
            code = code * self.p + w;
        }
        code as usize
    }

    pub(crate) fn short_code_count(&self) -> usize {
        ((self.n as u64 + 1) * self.p.pow(self.short_digits() as u32)) as usize
    }

    /// Evaluates every point `(prefix : z)` for `z` in `F_p` and passes each
    /// non-base point's leading index and component values to `sink`.
    /// Returns the number of base points on the row.
    pub(crate) fn scan_row<S: FnMut(usize, &[u64])>(
        &self,
        prefix: &[u64],
        scratch: &mut RowScratch,
        sink: &mut S,
    ) -> u64 {
        let br = self.br;
        let p = self.p;
        let stride = self.max_prefix_exp + 1;
        for (v, &x) in prefix.iter().enumerate() {
            let row = &mut scratch.powers[v * stride..(v + 1) * stride];
            let mut acc = 1;
            for slot in row.iter_mut() {
                *slot = acc;
                acc = br.mul(acc, x);
            }
        }
        let width = self.width;
        scratch.coeffs.iter_mut().for_each(|c| *c = 0);
        for (k, terms) in self.components.iter().enumerate() {
            for term in terms {
                let value = term
                    .factors
                    .iter()
                    .fold(term.coeff, |acc, &f| br.mul(acc, scratch.powers[f]));
                let slot = &mut scratch.coeffs[k * width + term.last];
                *slot = br.reduce(*slot + value);
            }
        }
        // Forward differences of each component at z = 0.
        for k in 0..self.components.len() {
            let coeffs = &scratch.coeffs[k * width..(k + 1) * width];
            let diffs = &mut scratch.diffs[k * width..(k + 1) * width];
            for (j, d) in diffs.iter_mut().enumerate() {
                let z = br.reduce(j as u64);
                *d = coeffs
                    .iter()
                    .rev()
                    .fold(0, |acc, &c| br.reduce(br.mul(acc, z) + c));
            }
            for order in 1..width {
                for j in (order..width).rev() {
                    let t = diffs[j] + p - diffs[j - 1];
                    diffs[j] = if t >= p { t - p } else { t };
                }
            }
        }
        match width {
            1 => self.sweep::<1, S>(scratch, sink),
            2 => self.sweep::<2, S>(scratch, sink),
            3 => self.sweep::<3, S>(scratch, sink),
            4 => self.sweep::<4, S>(scratch, sink),
            _ => self.sweep_any(scratch, sink),
        }
    }

    #[inline(always)]
    fn sweep<const W: usize, S: FnMut(usize, &[u64])>(
        &self,
        scratch: &mut RowScratch,
        sink: &mut S,
    ) -> u64 {
        let p = self.p;
        let (chunks, _) = scratch.diffs.as_chunks_mut::<W>();
        let values = &mut scratch.values;
        let mut base = 0;
        for _ in 0..p {
            let mut lead = usize::MAX;
            for (k, d) in chunks.iter_mut().enumerate() {
                let value = d[0];
                values[k] = value;
                if value != 0 && lead == usize::MAX {
                    lead = k;
                }
                for j in 0..W - 1 {
                    let s = d[j] + d[j + 1];
                    d[j] = if s >= p { s - p } else { s };
                }
            }
            if lead == usize::MAX {
                base += 1;
            } else {
                sink(lead, values);
            }
        }
        base
    }

    fn sweep_any<S: FnMut(usize, &[u64])>(&self, scratch: &mut RowScratch, sink: &mut S) -> u64 {
        let p = self.p;
        let width = self.width;
        let mut base = 0;
        for _ in 0..p {
            let mut lead = usize::MAX;
            for k in 0..self.components.len() {
                let d = &mut scratch.diffs[k * width..(k + 1) * width];
                let value = d[0];
                scratch.values[k] = value;
                if value != 0 && lead == usize::MAX {
                    lead = k;
                }
                for j in 0..width - 1 {
                    let s = d[j] + d[j + 1];
                    d[j] = if s >= p { s - p } else { s };
                }
            }
            if lead == usize::MAX {
                base += 1;
            } else {
                sink(lead, &scratch.values);
            }
        }
        base
    }

    /// Residues of the components at an arbitrary point.
    pub(crate) fn evaluate(&self, point: &[u64]) -> Vec<u64> {
        self.components
            .iter()
            .map(|terms| {
                terms.iter().fold(0, |acc, term| {
                    let mut value = term.coeff;
                    for (v, &e) in term.prefix.iter().enumerate() {
                        value = mul_mod(value, pow_mod(point[v], e as u64, self.p), self.p);
                    }
                    value = mul_mod(
                        value,
                        pow_mod(point[self.n], term.last as u64, self.p),
                        self.p,
                    );
                    (acc + value) % self.p
                })
            })
            .collect()
    }

    /// Normalized image key of a point, `None` on the base locus.
    pub(crate) fn image_of(&self, point: &[u64]) -> Option<u64> {
        let values = self.evaluate(point);
        let lead = values.iter().position(|&v| v != 0)?;
        Some(self.image_key(lead, &values))
    }

    /// Normalized image coordinates of a point, `None` on the base locus.
    pub(crate) fn image_point(&self, point: &[u64]) -> Option<Vec<u64>> {
        let values = self.evaluate(point);
        let lead = values.iter().position(|&v| v != 0)?;
        let inv = self.inverse(values[lead]);
        Some(values.iter().map(|&v| self.br.mul(v, inv)).collect())
    }
}

/// Steps a normalized point of `P^m` to its successor in enumeration order.
pub(crate) fn advance(coords: &mut [u64], p: u64) {
    let lead = coords.iter().position(|&c| c != 0).expect("nonzero point");
    for slot in (lead + 1..coords.len()).rev() {
        coords[slot] += 1;
        if coords[slot] < p {
            return;
        }
        coords[slot] = 0;
    }
    coords[lead] = 0;
    if lead + 1 < coords.len() {
        coords[lead + 1] = 1;
    }
}
