//! Dominance and topological degree of a rational self-map of `P^n`, decided
//! by counting fibers over `P^n(F_p)`.
//!
//! A map is reported homaloidal when, at the chosen prime, it is dominant and
//! its generic fiber is a single point. Fibers larger than the generic-fiber
//! cap are treated as special (contracted loci) and ignored by the degree
//! estimate.

mod compiled;
mod contraction;
mod projective;
mod scan;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::parser::ScanMode;
use crate::polar::{PolarError, RationalMap};
use crate::poly::PolyError;

pub use contraction::{check_contraction, dominance_by_span, sample_images, ContractionCheck};
pub use projective::{projective_size, ProjectivePoint};
pub use scan::{scan, scan_exhaustive, scan_sampled};

/// Environment variable read by [`OracleConfig::from_env`].
pub const WORKERS_ENV: &str = "HOMALOID_WORKERS";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error(transparent)]
    Polar(#[from] PolarError),
    #[error("domain of {size} points exceeds the {mode} bound of {limit}")]
    DomainTooLarge {
        size: u64,
        limit: u64,
        mode: &'static str,
    },
    #[error("every component vanishes mod {0}")]
    VanishesModP(u64),
    /// The reduction loses a component, so the scan would see a different map.
    #[error("component {index} vanishes mod {p}; the prime is bad for this map")]
    ComponentVanishesModP { index: usize, p: u64 },
    #[error("map is not defined over Q or the scan field")]
    FieldMismatch,
    #[error("the zero vector is not a projective point")]
    ZeroVector,
    #[error("the hyperplane of form {index} is degenerate mod {p}; try a larger prime")]
    DegenerateHyperplane { index: usize, p: u64 },
    #[error("found only {found} of {wanted} usable points")]
    InsufficientPoints { found: usize, wanted: usize },
    #[error("sampled mode needs at least one target")]
    NoTargets,
    #[error("verdicts differ between p={first} and p={second}: {detail}")]
    Unstable {
        first: u64,
        second: u64,
        detail: String,
    },
    #[error("invalid worker count {0}")]
    Workers(usize),
}

impl From<PolyError> for OracleError {
    fn from(e: PolyError) -> Self {
        OracleError::Polar(PolarError::Poly(e))
    }
}

impl OracleError {
    /// Errors caused by a size bound rather than by the input.
    pub fn is_resource_bound(&self) -> bool {
        matches!(self, OracleError::DomainTooLarge { .. })
    }

    /// Errors that signal a bad prime or a disagreement between verdicts.
    pub fn is_inconsistency(&self) -> bool {
        matches!(
            self,
            OracleError::Unstable { .. }
                | OracleError::VanishesModP(_)
                | OracleError::ComponentVanishesModP { .. }
                | OracleError::DegenerateHyperplane { .. }
                | OracleError::Polar(PolarError::Poly(PolyError::DenominatorCollision(_)))
        )
    }
}

/// Thresholds and bounds of the fiber-counting oracle.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleConfig {
    pub max_exhaustive_domain: u64,
    pub max_sampled_domain: u64,
    /// `None` uses every available core; `Some(1)` forces the sequential path.
    pub workers: Option<usize>,
    /// Dominant iff the image has at least `p^n (1 - slack/p)` points.
    pub dominance_slack: u64,
    /// Degree estimate: largest generic fiber size held by this share of
    /// generic image points.
    pub degree_share_percent: u64,
    /// Homaloidal needs this share of generic non-base points in size-1 fibers.
    pub fiber_one_percent: u64,
    /// Fibers larger than this are special; `None` means `max(1, p/4)`.
    pub generic_fiber_cap: Option<u64>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig {
            max_exhaustive_domain: 200_000_000,
            max_sampled_domain: 2_000_000_000,
            workers: None,
            dominance_slack: 5,
            degree_share_percent: 5,
            fiber_one_percent: 90,
            generic_fiber_cap: None,
        }
    }
}

impl OracleConfig {
    /// Defaults, with the worker count taken from [`WORKERS_ENV`] when set.
    pub fn from_env() -> Self {
        let workers = std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .filter(|&w: &usize| w > 0);
        OracleConfig {
            workers,
            ..OracleConfig::default()
        }
    }

    pub fn sequential() -> Self {
        OracleConfig {
            workers: Some(1),
            ..OracleConfig::default()
        }
    }

    pub(crate) fn fiber_cap(&self, p: u64) -> u64 {
        self.generic_fiber_cap.unwrap_or((p / 4).max(1))
    }
}

/// Default primes for maps on `P^n`.
pub fn default_primes(n: usize) -> Vec<u64> {
    if n <= 3 {
        vec![101, 211]
    } else {
        vec![31]
    }
}

/// Outcome of one scan at one prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeReport {
    pub p: u64,
    pub n: usize,
    pub mode: ScanMode,
    pub seed: Option<u64>,
    pub targets: Option<usize>,
    /// Points of `P^n(F_p)` scanned.
    pub domain_size: u64,
    /// Points where every component vanishes.
    pub base_locus: u64,
    /// Exact in exhaustive mode, an unbiased estimate in sampled mode.
    pub image_size: u64,
    /// Fiber size to number of image points (exhaustive) or of distinct
    /// sampled image points (sampled).
    pub fiber_histogram: BTreeMap<u64, u64>,
    /// Estimated generic fiber size; 0 when no finite generic fibers were seen.
    pub degree: u64,
    pub dominant: bool,
    pub homaloidal: bool,
    /// Non-base points (or samples) lying in fibers no larger than the cap.
    pub generic_points: u64,
    /// Those among `generic_points` in fibers of size one.
    pub fiber_one_points: u64,
}

/// Largest fiber size `s <= cap` whose share of capped image points reaches
/// `share_percent`; falls back to the modal size.
pub(crate) fn degree_estimate(histogram: &BTreeMap<u64, u64>, cap: u64, share_percent: u64) -> u64 {
    let generic: Vec<(u64, u64)> = histogram
        .iter()
        .filter(|(&s, _)| s <= cap)
        .map(|(&s, &c)| (s, c))
        .collect();
    let total: u64 = generic.iter().map(|(_, c)| c).sum();
    if total == 0 {
        return 0;
    }
    generic
        .iter()
        .rev()
        .find(|(_, c)| c * 100 >= share_percent * total)
        .or_else(|| {
            generic
                .iter()
                .max_by_key(|(s, c)| (*c, std::cmp::Reverse(*s)))
        })
        .map(|(s, _)| *s)
        .unwrap_or(0)
}

impl DegreeReport {
    /// Verdict fields compared across primes: always dominance and the
    /// homaloidal flag, and the degree when the map is dominant.
    pub fn verdict_key(&self) -> (bool, bool, Option<u64>) {
        (
            self.dominant,
            self.homaloidal,
            self.dominant.then_some(self.degree),
        )
    }
}

/// Runs the oracle at every prime and fails if the verdicts disagree.
pub fn scan_stable(
    map: &RationalMap,
    primes: &[u64],
    mode: ScanMode,
    targets: usize,
    seed: u64,
    config: &OracleConfig,
) -> Result<Vec<DegreeReport>, OracleError> {
    let reports = primes
        .iter()
        .map(|&p| scan(map, p, mode, targets, seed, config))
        .collect::<Result<Vec<_>, _>>()?;
    check_stability(&reports)?;
    Ok(reports)
}

pub fn check_stability(reports: &[DegreeReport]) -> Result<(), OracleError> {
    if let Some(first) = reports.first() {
        for other in &reports[1..] {
            if other.verdict_key() != first.verdict_key() {
                let (d1, h1, g1) = first.verdict_key();
                let (d2, h2, g2) = other.verdict_key();
                return Err(OracleError::Unstable {
                    first: first.p,
                    second: other.p,
                    detail: format!(
                        "dominant {d1} vs {d2}, homaloidal {h1} vs {h2}, degree {} vs {}",
                        g1.map_or("-".into(), |d| d.to_string()),
                        g2.map_or("-".into(), |d| d.to_string())
                    ),
                });
            }
        }
    }
    Ok(())
}
