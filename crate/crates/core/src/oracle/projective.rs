//! Points of `P^n(F_p)` and their enumeration order.
//!
//! Points are normalized so the first nonzero coordinate is 1. They are
//! numbered block by block: first the `p^n` points with leading coordinate
//! `x0`, then the `p^(n-1)` with leading `x1`, and so on, with the free
//! coordinates read as a base-`p` number (last coordinate least significant).
//! Under this numbering, point `p*r + z` is the row-`r` point of `P^(n-1)`
//! extended by last coordinate `z`, and the final index is `(0:...:0:1)`.

use super::OracleError;
use crate::poly::inv_mod;

/// Number of points of `P^n(F_p)`, or `None` on overflow.
pub fn projective_size(n: usize, p: u64) -> Option<u64> {
    let mut total: u64 = 0;
    let mut power: u64 = 1;
    for _ in 0..=n {
        total = total.checked_add(power)?;
        power = power.checked_mul(p)?;
    }
    Some(total)
}

/// A normalized point of `P^n(F_p)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ProjectivePoint {
    coords: Vec<u64>,
    p: u64,
}

impl ProjectivePoint {
    /// Normalizes a nonzero vector of residues.
    pub fn new(coords: &[u64], p: u64) -> Result<Self, OracleError> {
        let reduced: Vec<u64> = coords.iter().map(|c| c % p).collect();
        let lead = reduced
            .iter()
            .position(|&c| c != 0)
            .ok_or(OracleError::ZeroVector)?;
        let inv = inv_mod(reduced[lead], p).expect("nonzero residue");
        let coords = reduced
            .iter()
            .map(|&c| ((c as u128 * inv as u128) % p as u128) as u64)
            .collect();
        Ok(ProjectivePoint { coords, p })
    }

    /// The coordinate point `e_i` in `P^n`.
    pub fn coordinate(n: usize, i: usize, p: u64) -> Self {
        let mut coords = vec![0; n + 1];
        coords[i] = 1;
        ProjectivePoint { coords, p }
    }

    pub fn coords(&self) -> &[u64] {
        &self.coords
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.coords.len() - 1
    }

    pub fn index(&self) -> u64 {
        index_of_normalized(&self.coords, self.p)
    }

    pub fn from_index(n: usize, p: u64, index: u64) -> Self {
        ProjectivePoint {
            coords: point_at(n, p, index),
            p,
        }
    }
}

/// Index of a normalized coordinate vector.
pub(crate) fn index_of_normalized(coords: &[u64], p: u64) -> u64 {
    let n = coords.len() - 1;
    let lead = coords.iter().position(|&c| c != 0).expect("nonzero point");
    let offset = block_offset(n, lead, p);
    let tail = coords[lead + 1..].iter().fold(0u64, |acc, &c| acc * p + c);
    offset + tail
}

/// Number of points whose leading coordinate comes before `lead`.
pub(crate) fn block_offset(n: usize, lead: usize, p: u64) -> u64 {
    let mut offset = 0;
    let mut power = p.pow((n - lead) as u32 + 1);
    for _ in 0..lead {
        power *= p;
    }
    // sum_{i < lead} p^(n-i), accumulated from the largest term down.
    for _ in 0..lead {
        power /= p;
        offset += power;
    }
    offset
}

pub(crate) fn point_at(n: usize, p: u64, mut index: u64) -> Vec<u64> {
    let mut coords = vec![0; n + 1];
    for lead in 0..=n {
        let block = p.pow((n - lead) as u32);
        if index < block {
            coords[lead] = 1;
            for slot in (lead + 1..=n).rev() {
                coords[slot] = index % p;
                index /= p;
            }
            return coords;
        }
        index -= block;
    }
    panic!("index out of range for P^{n}(F_{p})");
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(projective_size(1, 101), Some(102));
        assert_eq!(projective_size(2, 101), Some(10303));
        assert_eq!(projective_size(3, 101), Some(1_040_604));
        assert_eq!(projective_size(5, 31), Some((31u64.pow(6) - 1) / 30));
        assert_eq!(projective_size(40, 1 << 20), None);
    }

    #[test]
    fn enumeration_is_a_bijection() {
        for (n, p) in [(1, 5), (2, 5), (3, 3), (2, 7)] {
            let size = projective_size(n, p).unwrap();
            let mut seen = std::collections::HashSet::new();
            for idx in 0..size {
                let pt = ProjectivePoint::from_index(n, p, idx);
                assert_eq!(pt.index(), idx);
                assert_eq!(ProjectivePoint::new(pt.coords(), p).unwrap(), pt);
                assert!(seen.insert(pt));
            }
            assert_eq!(seen.len() as u64, size);
        }
    }

    #[test]
    fn rows_extend_points_of_lower_dimension() {
        let p = 7;
        let rows = projective_size(1, p).unwrap();
        for r in 0..rows {
            let prefix = point_at(1, p, r);
            for z in 0..p {
                let mut full = prefix.clone();
                full.push(z);
                assert_eq!(index_of_normalized(&full, p), p * r + z);
            }
        }
        assert_eq!(
            index_of_normalized(&[0, 0, 1], p),
            projective_size(2, p).unwrap() - 1
        );
    }

    #[test]
    fn normalization() {
        let pt = ProjectivePoint::new(&[0, 3, 6], 7).unwrap();
        assert_eq!(pt.coords(), &[0, 1, 2]);
        assert_eq!(
            ProjectivePoint::new(&[0, 7, 14], 7),
            Err(OracleError::ZeroVector)
        );
        assert_eq!(
            ProjectivePoint::coordinate(3, 2, 101).coords(),
            &[0, 0, 1, 0]
        );
    }
}
