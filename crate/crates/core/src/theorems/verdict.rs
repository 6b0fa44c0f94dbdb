use std::time::Instant;

use crate::oracle::{default_primes, scan_stable, DegreeReport, OracleConfig};
use crate::parser::{FieldTag, ReportDocument, ScanMode, VerdictSummary};
use crate::polar::{moving_part, moving_part_factored, restrict_arrangement, RationalMap};
use crate::poly::{LinearFormProduct, Polynomial};

use super::{inductive_certificate, structural_verdict, TheoremError};

/// How the oracle is run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerdictParams {
    /// Empty means the defaults for the dimension.
    pub primes: Vec<u64>,
    /// `None` means exhaustive up to `P^3` and sampled above.
    pub mode: Option<ScanMode>,
    pub targets: usize,
    pub seed: u64,
    pub config: OracleConfig,
    /// Record wall-clock time in the report; off gives byte-stable output.
    pub timing: bool,
}

impl Default for VerdictParams {
    fn default() -> Self {
        VerdictParams {
            primes: Vec::new(),
            mode: None,
            targets: 64,
            seed: 0,
            config: OracleConfig::default(),
            timing: true,
        }
    }
}

impl VerdictParams {
    pub fn primes_for(&self, n: usize) -> Vec<u64> {
        if self.primes.is_empty() {
            default_primes(n)
        } else {
            self.primes.clone()
        }
    }

    pub fn mode_for(&self, n: usize) -> ScanMode {
        self.mode.unwrap_or(if n <= 3 {
            ScanMode::Exhaustive
        } else {
            ScanMode::Sample
        })
    }

    /// Oracle reports at every prime, checked for agreement.
    pub fn run_oracle(&self, map: &RationalMap) -> Result<Vec<DegreeReport>, TheoremError> {
        let n = map.dim();
        Ok(scan_stable(
            map,
            &self.primes_for(n),
            self.mode_for(n),
            self.targets,
            self.seed,
            &self.config,
        )?)
    }
}

fn document(
    input: String,
    reports: &[DegreeReport],
    params: &VerdictParams,
    started: Instant,
) -> ReportDocument {
    let first = &reports[0];
    ReportDocument {
        base_locus: Some(first.base_locus),
        certificate: Vec::new(),
        degree: Some(first.degree),
        domain_size: Some(first.domain_size),
        dominant: Some(first.dominant),
        fiber_histogram: first.fiber_histogram.clone(),
        field: FieldTag::Fp,
        homaloidal: first.homaloidal,
        image_size: Some(first.image_size),
        input,
        millis: if params.timing {
            started.elapsed().as_millis() as u64
        } else {
            0
        },
        mode: Some(first.mode),
        n: first.n,
        p: Some(first.p),
        primes: reports.iter().map(|r| r.p).collect(),
        seed: first.seed,
        verdicts: None,
    }
}

/// Oracle verdict on the moving part of an arbitrary homogeneous polynomial.
pub fn polynomial_verdict(
    f: &Polynomial,
    params: &VerdictParams,
) -> Result<ReportDocument, TheoremError> {
    let started = Instant::now();
    let moving = moving_part(f)?.moving;
    let reports = params.run_oracle(&moving)?;
    Ok(document(f.to_string(), &reports, params, started))
}

/// Certificate only, over `Q`; no oracle run.
pub fn certify(
    arrangement: &LinearFormProduct,
    params: &VerdictParams,
) -> Result<ReportDocument, TheoremError> {
    let started = Instant::now();
    let certificate = inductive_certificate(arrangement)?;
    let structural = structural_verdict(arrangement);
    let input = arrangement.to_string();
    if certificate.homaloidal != structural || !certificate.replay(arrangement) {
        return Err(TheoremError::Inconsistent {
            input,
            detail: "certificate disagrees with the rank criterion".into(),
        });
    }
    Ok(ReportDocument {
        base_locus: None,
        certificate: certificate.records(),
        degree: None,
        domain_size: None,
        dominant: None,
        fiber_histogram: Default::default(),
        field: FieldTag::Q,
        homaloidal: certificate.homaloidal,
        image_size: None,
        input,
        millis: if params.timing {
            started.elapsed().as_millis() as u64
        } else {
            0
        },
        mode: None,
        n: arrangement.dim(),
        p: None,
        primes: Vec::new(),
        seed: None,
        verdicts: None,
    })
}

/// Structural verdict, certificate, and oracle on the moving parts of `F`
/// and `F_red`; all four must agree, and every restriction of a homaloidal
/// arrangement must be homaloidal.
pub fn full_verdict(
    arrangement: &LinearFormProduct,
    params: &VerdictParams,
) -> Result<ReportDocument, TheoremError> {
    let started = Instant::now();
    let input = arrangement.to_string();
    let structural = structural_verdict(arrangement);
    let certificate = inductive_certificate(arrangement)?;
    let reports = params.run_oracle(&moving_part_factored(arrangement)?.moving)?;
    let reduced_reports =
        params.run_oracle(&moving_part_factored(&arrangement.reduced())?.moving)?;
    let restrictions = if arrangement.dim() >= 2 {
        (0..arrangement.num_forms())
            .map(|i| restrict_arrangement(arrangement, i).map(|g| structural_verdict(&g)))
            .collect::<Result<Vec<_>, _>>()?
    } else {
        Vec::new()
    };
    let verdicts = VerdictSummary {
        certificate: certificate.homaloidal,
        oracle: reports[0].homaloidal,
        oracle_reduced: reduced_reports[0].homaloidal,
        restrictions,
        structural,
    };
    let inconsistent = |detail: String| TheoremError::Inconsistent {
        input: input.clone(),
        detail,
    };
    if [
        verdicts.certificate,
        verdicts.oracle,
        verdicts.oracle_reduced,
    ]
    .iter()
    .any(|&v| v != structural)
    {
        return Err(inconsistent(format!(
            "structural {structural}, certificate {}, oracle {}, oracle on reduced part {}",
            verdicts.certificate, verdicts.oracle, verdicts.oracle_reduced
        )));
    }
    if !certificate.replay(arrangement) {
        return Err(inconsistent("certificate chain does not replay".into()));
    }
    if structural && verdicts.restrictions.iter().any(|&v| !v) {
        return Err(inconsistent(format!(
            "restriction verdicts {:?}",
            verdicts.restrictions
        )));
    }
    let mut doc = document(input, &reports, params, started);
    doc.homaloidal = structural;
    doc.certificate = certificate.records();
    doc.verdicts = Some(verdicts);
    Ok(doc)
}
