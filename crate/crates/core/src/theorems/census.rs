use std::fmt;

use itertools::Itertools;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::polar::moving_part_factored;
use crate::poly::{normalize_row, LinearFormProduct};

use super::{structural_verdict, TheoremError, VerdictParams};

#[derive(Clone, Debug)]
pub struct CensusOptions {
    pub n: usize,
    /// Arrangements have `r+1` distinct forms.
    pub r: usize,
    pub coeffs: Vec<i64>,
    /// Run the oracle on at most this many arrangements, chosen by `seed`;
    /// the structural verdict always covers all of them.
    pub oracle_limit: Option<usize>,
    pub seed: u64,
    pub params: VerdictParams,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CensusReport {
    pub n: usize,
    pub r: usize,
    pub distinct_forms: usize,
    pub arrangements: u64,
    pub full_rank: u64,
    pub structural_homaloidal: u64,
    pub oracle_checked: u64,
    pub oracle_homaloidal: u64,
    pub agreements: u64,
}

impl fmt::Display for CensusReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "n={} r={} distinct forms={}",
            self.n, self.r, self.distinct_forms
        )?;
        writeln!(f, "arrangements           {}", self.arrangements)?;
        writeln!(f, "full rank              {}", self.full_rank)?;
        writeln!(f, "structural homaloidal  {}", self.structural_homaloidal)?;
        writeln!(f, "oracle checked         {}", self.oracle_checked)?;
        writeln!(f, "oracle homaloidal      {}", self.oracle_homaloidal)?;
        write!(f, "agreements             {}", self.agreements)
    }
}

/// Nonzero coefficient vectors up to scalars, as sorted primitive rows.
pub fn canonical_rows(n_vars: usize, coeffs: &[i64]) -> Vec<Vec<i64>> {
    let mut rows: Vec<Vec<i64>> = (0..n_vars)
        .map(|_| coeffs.iter().copied())
        .multi_cartesian_product()
        .filter_map(|row| {
            let rational: Vec<BigRational> = row
                .iter()
                .map(|&c| BigRational::from_integer(c.into()))
                .collect();
            normalize_row(&rational).map(|r| {
                r.iter()
                    .map(|c| c.to_i64().expect("small coefficients"))
                    .collect()
            })
        })
        .collect();
    rows.sort();
    rows.dedup();
    rows
}

/// Enumerates every set of `r+1` distinct forms on `P^n` with the given
/// coefficients and compares the rank criterion with the oracle.
pub fn census(opts: &CensusOptions) -> Result<CensusReport, TheoremError> {
    let rows = canonical_rows(opts.n + 1, &opts.coeffs);
    let combos: Vec<Vec<usize>> = (0..rows.len()).combinations(opts.r + 1).collect();
    let checked: Vec<bool> = match opts.oracle_limit {
        Some(k) if k < combos.len() => {
            let mut mask = vec![false; combos.len()];
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for i in sample(&mut rng, combos.len(), k) {
                mask[i] = true;
            }
            mask
        }
        _ => vec![true; combos.len()],
    };
    let mut report = CensusReport {
        n: opts.n,
        r: opts.r,
        distinct_forms: rows.len(),
        ..CensusReport::default()
    };
    for (combo, check) in combos.iter().zip(checked) {
        let forms: Vec<Vec<i64>> = combo.iter().map(|&i| rows[i].clone()).collect();
        let arrangement = LinearFormProduct::square_free(&forms).expect("distinct nonzero rows");
        report.arrangements += 1;
        if arrangement.rank() == arrangement.n_vars() {
            report.full_rank += 1;
        }
        let structural = structural_verdict(&arrangement);
        report.structural_homaloidal += structural as u64;
        if !check {
            continue;
        }
        let reports = opts
            .params
            .run_oracle(&moving_part_factored(&arrangement)?.moving)?;
        let oracle = reports[0].homaloidal;
        report.oracle_checked += 1;
        report.oracle_homaloidal += oracle as u64;
        if oracle != structural {
            return Err(TheoremError::Inconsistent {
                input: arrangement.to_string(),
                detail: format!(
                    "structural {structural}, oracle {oracle} (degree {})",
                    reports[0].degree
                ),
            });
        }
        report.agreements += 1;
    }
    Ok(report)
}
