use crate::parser::CertificateRecord;
use crate::polar::restrict_arrangement;
use crate::poly::LinearFormProduct;

use super::TheoremError;

/// One descent step: the reduced arrangement of the previous level restricted
/// to the hyperplane of form `index`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CertificateStep {
    pub index: usize,
    pub arrangement: LinearFormProduct,
    pub square_free: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Refutation {
    /// The forms span less than the whole dual space.
    RankDeficient { rank: usize, n_vars: usize },
    /// The forms are independent in number other than `n+1`.
    WrongCount { forms: usize, n_vars: usize },
}

impl Refutation {
    pub fn reason(&self) -> &'static str {
        match self {
            Refutation::RankDeficient { .. } => "rank-deficient",
            Refutation::WrongCount { .. } => "r != n",
        }
    }

    pub fn detail(&self) -> String {
        match self {
            Refutation::RankDeficient { rank, n_vars } => format!("rank {rank} < {n_vars}"),
            Refutation::WrongCount { forms, n_vars } => {
                format!("r = {}, n = {}", forms - 1, n_vars - 1)
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Terminal {
    /// Two distinct points on `P^1`.
    BaseCase(LinearFormProduct),
    Refutation {
        level: usize,
        refutation: Refutation,
    },
}

/// Replay of the induction on `n`: a chain of hyperplane restrictions down
/// to `P^1`, ending in the base case or in a refutation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub homaloidal: bool,
    pub steps: Vec<CertificateStep>,
    pub terminal: Terminal,
}

/// No two other forms span a plane containing `L_index`. For pairwise
/// distinct forms this is equivalent to the restriction being square-free.
pub fn span_condition_square_free(arrangement: &LinearFormProduct, index: usize) -> bool {
    let r = arrangement.num_forms();
    for j in 0..r {
        for k in j + 1..r {
            if j != index && k != index && arrangement.rank_of(&[index, j, k]) == 2 {
                return false;
            }
        }
    }
    true
}

/// Index used for the next descent step: the first form whose restriction is
/// square-free, or the first form if none is.
fn choose_restriction(
    arrangement: &LinearFormProduct,
) -> Result<(usize, LinearFormProduct), TheoremError> {
    let mut first = None;
    for i in 0..arrangement.num_forms() {
        let restricted = restrict_arrangement(arrangement, i)?;
        if restricted.is_square_free() {
            return Ok((i, restricted));
        }
        if first.is_none() {
            first = Some((i, restricted));
        }
    }
    Ok(first.expect("arrangements are nonempty"))
}

fn check_level(arrangement: &LinearFormProduct) -> Option<Refutation> {
    let n_vars = arrangement.n_vars();
    let rank = arrangement.rank();
    if rank < n_vars {
        return Some(Refutation::RankDeficient { rank, n_vars });
    }
    if arrangement.num_forms() != n_vars {
        return Some(Refutation::WrongCount {
            forms: arrangement.num_forms(),
            n_vars,
        });
    }
    None
}

pub fn inductive_certificate(arrangement: &LinearFormProduct) -> Result<Certificate, TheoremError> {
    if arrangement.dim() == 0 {
        return Err(TheoremError::DimensionZero);
    }
    let mut steps = Vec::new();
    let mut current = arrangement.reduced();
    // Refutations are recorded at the first level where they are visible,
    // but the descent continues so the chain documents every level.
    let mut refutation = check_level(&current).map(|r| (current.dim(), r));
    if matches!(refutation, Some((_, Refutation::RankDeficient { .. }))) {
        let (level, refutation) = refutation.expect("just matched");
        return Ok(Certificate {
            homaloidal: false,
            steps,
            terminal: Terminal::Refutation { level, refutation },
        });
    }
    while current.dim() > 1 {
        let (index, restricted) = choose_restriction(&current)?;
        steps.push(CertificateStep {
            index,
            square_free: restricted.is_square_free(),
            arrangement: restricted.clone(),
        });
        current = restricted.reduced();
        if refutation.is_none() {
            if let Some(r) = check_level(&current) {
                refutation = Some((current.dim(), r));
            }
        }
    }
    let terminal = match refutation {
        Some((level, refutation)) => Terminal::Refutation { level, refutation },
        None => Terminal::BaseCase(current),
    };
    Ok(Certificate {
        homaloidal: matches!(terminal, Terminal::BaseCase(_)),
        steps,
        terminal,
    })
}

impl Certificate {
    /// Recomputes every step from `start` and compares.
    pub fn replay(&self, start: &LinearFormProduct) -> bool {
        let mut current = start.reduced();
        for step in &self.steps {
            match restrict_arrangement(&current, step.index) {
                Ok(next)
                    if next == step.arrangement && next.is_square_free() == step.square_free =>
                {
                    current = next.reduced();
                }
                _ => return false,
            }
        }
        match &self.terminal {
            Terminal::BaseCase(base) => {
                *base == current && current.dim() == 1 && current.num_forms() == 2
            }
            Terminal::Refutation { .. } => !self.homaloidal,
        }
    }

    pub fn records(&self) -> Vec<CertificateRecord> {
        let mut out: Vec<CertificateRecord> = self
            .steps
            .iter()
            .map(|s| CertificateRecord::Step {
                index: s.index,
                arrangement: s.arrangement.to_string(),
                square_free: s.square_free,
            })
            .collect();
        out.push(match &self.terminal {
            Terminal::BaseCase(base) => CertificateRecord::BaseCase {
                arrangement: base.to_string(),
            },
            Terminal::Refutation { level, refutation } => CertificateRecord::Refutation {
                reason: refutation.reason().to_string(),
                detail: format!("{} on P^{level}", refutation.detail()),
            },
        });
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::{parse_arrangement, parse_arrangement_with};
    use crate::theorems::structural_verdict;

    #[test]
    fn cremona_in_p3_descends_to_two_points() {
        let f = parse_arrangement("x0*x1*x2*x3").unwrap();
        let c = inductive_certificate(&f).unwrap();
        assert!(c.homaloidal);
        assert_eq!(c.steps.len(), 2);
        assert_eq!(c.steps[0].arrangement.to_string(), "x0*x1*x2");
        assert_eq!(
            c.terminal,
            Terminal::BaseCase(parse_arrangement("x0*x1").unwrap())
        );
        assert!(c.replay(&f));
    }

    #[test]
    fn multiplicities_are_ignored() {
        let f = parse_arrangement("x0^2*x1*x2").unwrap();
        let g = parse_arrangement("x0*x1*x2").unwrap();
        assert_eq!(
            inductive_certificate(&f).unwrap(),
            inductive_certificate(&g).unwrap()
        );
        assert!(inductive_certificate(&f).unwrap().replay(&f));
    }

    #[test]
    fn rank_deficient_refutation() {
        let c = inductive_certificate(&parse_arrangement_with("x0*x1*(x0 + x1)", Some(3)).unwrap())
            .unwrap();
        assert!(!c.homaloidal);
        assert!(matches!(
            c.terminal,
            Terminal::Refutation {
                refutation: Refutation::RankDeficient { rank: 2, n_vars: 3 },
                ..
            }
        ));
    }

    #[test]
    fn too_many_forms_is_refuted() {
        let f = parse_arrangement("x0*x1*x2*(x0 + x1 + x2)").unwrap();
        let c = inductive_certificate(&f).unwrap();
        assert!(!c.homaloidal);
        assert_eq!(c.steps.len(), 1);
        assert!(matches!(
            c.terminal,
            Terminal::Refutation {
                level: 2,
                refutation: Refutation::WrongCount {
                    forms: 4,
                    n_vars: 3
                }
            }
        ));
        assert!(c.replay(&f));
        assert_eq!(structural_verdict(&f), c.homaloidal);
    }

    #[test]
    fn square_free_restriction_is_preferred() {
        let f = parse_arrangement("x0*x1*(x0 + x1)*x2").unwrap();
        assert!(!span_condition_square_free(&f, 0));
        assert!(span_condition_square_free(&f, 3));
        let c = inductive_certificate(&f).unwrap();
        assert_eq!(c.steps[0].index, 3);
        assert!(c.steps[0].square_free);
    }

    #[test]
    fn records_serialize_chain() {
        let f = parse_arrangement("x0*x1*x2").unwrap();
        let records = inductive_certificate(&f).unwrap().records();
        assert_eq!(records.len(), 2);
        assert_eq!(
            records[1],
            CertificateRecord::BaseCase {
                arrangement: "x0*x1".into()
            }
        );
    }
}
