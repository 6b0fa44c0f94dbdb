use std::collections::BTreeSet;

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::compiled::CompiledMap;
use super::projective::{point_at, projective_size, ProjectivePoint};
use super::OracleError;
use crate::polar::{moving_part_factored, RationalMap};
use crate::poly::{linalg, Coefficient, Field, LinearFormProduct};

/// Images of sampled points of one hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionCheck {
    /// Every sampled image equals the dual point of the form.
    pub contracted: bool,
    pub dual_point: ProjectivePoint,
    pub images: BTreeSet<ProjectivePoint>,
    pub samples: usize,
}

fn residues(row: &[num_bigint::BigInt], p: u64) -> Vec<u64> {
    let modulus = num_bigint::BigInt::from(p);
    row.iter()
        .map(|c| {
            let r = c % &modulus;
            let r = if r < num_bigint::BigInt::zero() {
                r + &modulus
            } else {
                r
            };
            u64::try_from(r).expect("residue fits")
        })
        .collect()
}

fn dot(a: &[u64], b: &[u64], p: u64) -> u64 {
    a.iter()
        .zip(b)
        .fold(0, |acc, (&x, &y)| (acc + x * y % p) % p)
}

/// Samples `samples` points of `{L_i = 0}` off every other form and checks
/// that the moving part of `F` sends all of them to the dual point of `L_i`.
pub fn check_contraction(
    arrangement: &LinearFormProduct,
    index: usize,
    p: u64,
    samples: usize,
    seed: u64,
) -> Result<ContractionCheck, OracleError> {
    if index >= arrangement.num_forms() {
        return Err(crate::polar::PolarError::IndexOutOfRange { index }.into());
    }
    Field::prime(p)?;
    let map = moving_part_factored(arrangement)?.moving;
    let compiled = CompiledMap::new(&map, p)?;
    let forms: Vec<Vec<u64>> = arrangement.forms().iter().map(|r| residues(r, p)).collect();
    let form = &forms[index];
    let degenerate = OracleError::DegenerateHyperplane { index, p };
    let pivot = form
        .iter()
        .position(|&a| a != 0)
        .ok_or(degenerate.clone())?;
    let dual_point = ProjectivePoint::new(form, p)?;
    let inv = crate::poly::inv_mod(form[pivot], p).expect("nonzero");
    let n_vars = arrangement.n_vars();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut images = BTreeSet::new();
    let mut found = 0;
    for _ in 0..(samples * 200 + 1000) {
        if found == samples {
            break;
        }
        let mut point: Vec<u64> = (0..n_vars).map(|_| rng.gen_range(0..p)).collect();
        point[pivot] = 0;
        let rest = dot(form, &point, p);
        point[pivot] = (p - rest) % p * inv % p;
        if point.iter().all(|&c| c == 0) {
            continue;
        }
        if forms
            .iter()
            .enumerate()
            .any(|(j, f)| j != index && dot(f, &point, p) == 0)
        {
            continue;
        }
        if let Some(image) = compiled.image_point(&point) {
            images.insert(ProjectivePoint::new(&image, p)?);
            found += 1;
        }
    }
    if found < samples {
        return Err(degenerate);
    }
    let contracted = images.len() == 1 && images.contains(&dual_point);
    Ok(ContractionCheck {
        contracted,
        dual_point,
        images,
        samples: found,
    })
}

/// Images of `count` random non-base points.
pub fn sample_images(
    map: &RationalMap,
    p: u64,
    count: usize,
    seed: u64,
) -> Result<Vec<ProjectivePoint>, OracleError> {
    let compiled = CompiledMap::new(map, p)?;
    let n = map.dim();
    let domain = projective_size(n, p).ok_or(OracleError::DomainTooLarge {
        size: u64::MAX,
        limit: u64::MAX,
        mode: "sampled",
    })?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..(count * 64 + 1000) {
        if out.len() == count {
            break;
        }
        let point = point_at(n, p, rng.gen_range(0..domain));
        if let Some(image) = compiled.image_point(&point) {
            out.push(ProjectivePoint::new(&image, p)?);
        }
    }
    if out.len() < count {
        return Err(OracleError::InsufficientPoints {
            found: out.len(),
            wanted: count,
        });
    }
    Ok(out)
}

/// True iff the points span `P^n`, i.e. do not lie in a hyperplane.
pub fn dominance_by_span(points: &[ProjectivePoint]) -> Result<bool, OracleError> {
    let n_vars = points.first().map(|pt| pt.coords().len()).unwrap_or(0);
    if n_vars == 0 || points.len() < n_vars + 1 {
        return Err(OracleError::InsufficientPoints {
            found: points.len(),
            wanted: n_vars + 1,
        });
    }
    let p = points[0].prime();
    let field = Field::prime(p)?;
    let rows = points
        .iter()
        .map(|pt| {
            pt.coords()
                .iter()
                .map(|&c| Coefficient::from_i64(field, c as i64))
                .collect()
        })
        .collect();
    Ok(linalg::rank(rows) == n_vars)
}
