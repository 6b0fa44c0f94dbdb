use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::compiled::{advance, CompiledMap, RowScratch};
use super::projective::{point_at, projective_size};
use super::{degree_estimate, DegreeReport, OracleConfig, OracleError};
use crate::parser::ScanMode;
use crate::polar::RationalMap;

/// Rows per work unit.
const CHUNK_ROWS: u64 = 256;

/// Dispatches on `mode`; `targets` and `seed` only matter when sampling.
pub fn scan(
    map: &RationalMap,
    p: u64,
    mode: ScanMode,
    targets: usize,
    seed: u64,
    config: &OracleConfig,
) -> Result<DegreeReport, OracleError> {
    match mode {
        ScanMode::Exhaustive => scan_exhaustive(map, p, config),
        ScanMode::Sample => scan_sampled(map, p, targets, seed, config),
    }
}

fn domain_size(n: usize, p: u64, limit: u64, mode: &'static str) -> Result<u64, OracleError> {
    match projective_size(n, p) {
        Some(size) if size <= limit => Ok(size),
        Some(size) => Err(OracleError::DomainTooLarge { size, limit, mode }),
        None => Err(OracleError::DomainTooLarge {
            size: u64::MAX,
            limit,
            mode,
        }),
    }
}

/// Counts every point of `P^n(F_p)` into the image buckets.
pub fn scan_exhaustive(
    map: &RationalMap,
    p: u64,
    config: &OracleConfig,
) -> Result<DegreeReport, OracleError> {
    let n = map.dim();
    let domain = domain_size(n, p, config.max_exhaustive_domain, "exhaustive")?;
    let compiled = CompiledMap::new(map, p)?;
    let (counts, base) = count_hits(
        &compiled,
        domain as usize,
        config.workers,
        |lead, values| Some(compiled.image_key(lead, values) as usize),
    )?;
    let mut histogram = BTreeMap::new();
    for &c in &counts {
        if c > 0 {
            *histogram.entry(c as u64).or_insert(0u64) += 1;
        }
    }
    let image_size = histogram.values().sum();
    let cap = config.fiber_cap(p);
    let generic_points = histogram
        .iter()
        .filter(|(&s, _)| s <= cap)
        .map(|(s, c)| s * c)
        .sum();
    let fiber_one_points = histogram.get(&1).copied().unwrap_or(0);
    let degree = degree_estimate(&histogram, cap, config.degree_share_percent);
    Ok(finish(
        DegreeReport {
            p,
            n,
            mode: ScanMode::Exhaustive,
            seed: None,
            targets: None,
            domain_size: domain,
            base_locus: base,
            image_size,
            fiber_histogram: histogram,
            degree,
            dominant: false,
            homaloidal: false,
            generic_points,
            fiber_one_points,
        },
        config,
    ))
}

/// Picks `targets` random non-base points, then scans the whole domain once,
/// counting only preimages of their images.
pub fn scan_sampled(
    map: &RationalMap,
    p: u64,
    targets: usize,
    seed: u64,
    config: &OracleConfig,
) -> Result<DegreeReport, OracleError> {
    if targets == 0 {
        return Err(OracleError::NoTargets);
    }
    let n = map.dim();
    let domain = domain_size(n, p, config.max_sampled_domain, "sampled")?;
    let compiled = CompiledMap::new(map, p)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sample_keys = Vec::with_capacity(targets);
    let attempts = 64 * targets + 1000;
    for _ in 0..attempts {
        if sample_keys.len() == targets {
            break;
        }
        let point = point_at(n, p, rng.gen_range(0..domain));
        if let Some(key) = compiled.image_of(&point) {
            sample_keys.push(key);
        }
    }
    if sample_keys.len() < targets {
        return Err(OracleError::InsufficientPoints {
            found: sample_keys.len(),
            wanted: targets,
        });
    }
    let mut distinct = sample_keys.clone();
    distinct.sort_unstable();
    distinct.dedup();
    let mut filter = vec![false; compiled.short_code_count()];
    for &key in &distinct {
        let point = point_at(n, p, key);
        let lead = point.iter().position(|&c| c != 0).expect("nonzero point");
        filter[compiled.short_code(lead, &point)] = true;
    }
    let (counts, base) = count_hits(&compiled, distinct.len(), config.workers, |lead, values| {
        if !filter[compiled.short_code(lead, values)] {
            return None;
        }
        distinct
            .binary_search(&compiled.image_key(lead, values))
            .ok()
    })?;
    let fiber_of = |key: &u64| counts[distinct.binary_search(key).expect("sampled key")] as u64;

    let mut histogram = BTreeMap::new();
    for &c in &counts {
        *histogram.entry(c as u64).or_insert(0u64) += 1;
    }
    let cap = config.fiber_cap(p);
    let fibers: Vec<u64> = sample_keys.iter().map(fiber_of).collect();
    let generic_points = fibers.iter().filter(|&&f| f <= cap).count() as u64;
    let fiber_one_points = fibers.iter().filter(|&&f| f == 1).count() as u64;
    let inverse_sum: f64 = fibers.iter().map(|&f| 1.0 / f as f64).sum();
    let image_size = ((domain - base) as f64 * inverse_sum / fibers.len() as f64).round() as u64;
    let degree = degree_estimate(&histogram, cap, config.degree_share_percent);
    Ok(finish(
        DegreeReport {
            p,
            n,
            mode: ScanMode::Sample,
            seed: Some(seed),
            targets: Some(targets),
            domain_size: domain,
            base_locus: base,
            image_size,
            fiber_histogram: histogram,
            degree,
            dominant: false,
            homaloidal: false,
            generic_points,
            fiber_one_points,
        },
        config,
    ))
}

fn finish(mut report: DegreeReport, config: &OracleConfig) -> DegreeReport {
    let p = report.p as u128;
    let threshold = p.pow(report.n as u32) * p.saturating_sub(config.dominance_slack as u128) / p;
    report.dominant = report.image_size as u128 >= threshold;
    report.homaloidal = report.dominant
        && report.degree == 1
        && report.generic_points > 0
        && report.fiber_one_points * 100 >= config.fiber_one_percent * report.generic_points;
    report
}

fn scan_rows<S: FnMut(usize, &[u64])>(
    c: &CompiledMap,
    start: u64,
    end: u64,
    scratch: &mut RowScratch,
    sink: &mut S,
) -> u64 {
    let n = c.dim();
    let p = c.prime();
    let mut prefix = point_at(n - 1, p, start);
    let mut base = 0;
    for row in start..end {
        base += c.scan_row(&prefix, scratch, sink);
        if row + 1 < end {
            advance(&mut prefix, p);
        }
    }
    base
}

/// The point `(0:...:0:1)`, which no row covers.
fn last_point(c: &CompiledMap) -> Vec<u64> {
    let mut point = vec![0; c.dim() + 1];
    point[c.dim()] = 1;
    point
}

fn row_count(c: &CompiledMap) -> u64 {
    match c.dim() {
        0 => 0,
        n => projective_size(n - 1, c.prime()).expect("domain size already checked"),
    }
}

/// Counts how many domain points land in each slot; returns the slot counts
/// and the number of base points.
fn count_hits<F>(
    c: &CompiledMap,
    slots: usize,
    workers: Option<usize>,
    slot_of: F,
) -> Result<(Vec<u32>, u64), OracleError>
where
    F: Fn(usize, &[u64]) -> Option<usize> + Sync,
{
    if workers == Some(0) {
        return Err(OracleError::Workers(0));
    }
    let rows = row_count(c);
    let (mut counts, mut base) = if workers == Some(1) || !cfg!(feature = "parallel") {
        count_sequential(c, rows, slots, &slot_of)
    } else {
        count_parallel(c, rows, slots, workers, &slot_of)?
    };
    let values = c.evaluate(&last_point(c));
    match values.iter().position(|&v| v != 0) {
        Some(lead) => {
            if let Some(slot) = slot_of(lead, &values) {
                counts[slot] += 1;
            }
        }
        None => base += 1,
    }
    Ok((counts, base))
}

fn count_sequential<F>(c: &CompiledMap, rows: u64, slots: usize, slot_of: &F) -> (Vec<u32>, u64)
where
    F: Fn(usize, &[u64]) -> Option<usize>,
{
    let mut counts = vec![0u32; slots];
    let mut scratch = c.scratch();
    let base = if rows == 0 {
        0
    } else {
        scan_rows(c, 0, rows, &mut scratch, &mut |lead, values| {
            if let Some(slot) = slot_of(lead, values) {
                counts[slot] += 1;
            }
        })
    };
    (counts, base)
}

#[cfg(feature = "parallel")]
fn count_parallel<F>(
    c: &CompiledMap,
    rows: u64,
    slots: usize,
    workers: Option<usize>,
    slot_of: &F,
) -> Result<(Vec<u32>, u64), OracleError>
where
    F: Fn(usize, &[u64]) -> Option<usize> + Sync,
{
    use rayon::prelude::*;
    use std::sync::atomic::{AtomicU32, Ordering};

    let counts: Vec<AtomicU32> = (0..slots).map(|_| AtomicU32::new(0)).collect();
    let chunks = rows.div_ceil(CHUNK_ROWS);
    let work = || {
        (0..chunks)
            .into_par_iter()
            .map_init(
                || c.scratch(),
                |scratch, chunk| {
                    let start = chunk * CHUNK_ROWS;
                    let end = (start + CHUNK_ROWS).min(rows);
                    scan_rows(c, start, end, scratch, &mut |lead, values| {
                        if let Some(slot) = slot_of(lead, values) {
                            counts[slot].fetch_add(1, Ordering::Relaxed);
                        }
                    })
                },
            )
            .sum::<u64>()
    };
    let base = match workers {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|_| OracleError::Workers(k))?
            .install(work),
        None => work(),
    };
    Ok((
        counts.into_iter().map(AtomicU32::into_inner).collect(),
        base,
    ))
}

#[cfg(not(feature = "parallel"))]
fn count_parallel<F>(
    c: &CompiledMap,
    rows: u64,
    slots: usize,
    _workers: Option<usize>,
    slot_of: &F,
) -> Result<(Vec<u32>, u64), OracleError>
where
    F: Fn(usize, &[u64]) -> Option<usize> + Sync,
{
    Ok(count_sequential(c, rows, slots, slot_of))
}
