//! Interval-partition certificates and their verification.

use std::fmt;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::poset::{elements, subset_to_string, Interval, Subset, SubsetPoset};

/// A list of intervals claimed to partition a poset, with the claimed
/// Stanley depth `min |top|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCertificate {
    pub n: usize,
    pub intervals: Vec<Interval>,
    pub claimed_sdepth: usize,
}

impl PartitionCertificate {
    /// Builds a certificate whose claim is computed from the intervals.
    pub fn from_intervals(n: usize, intervals: Vec<Interval>) -> Self {
        let claimed_sdepth = min_top(&intervals).unwrap_or(0);
        PartitionCertificate {
            n,
            intervals,
            claimed_sdepth,
        }
    }
}

fn min_top(intervals: &[Interval]) -> Option<usize> {
    intervals.iter().map(Interval::top_size).min()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    DimensionMismatch { certificate: usize, poset: usize },
    OutOfRange { index: usize },
    NotNested { index: usize },
    OutsidePoset { index: usize, witness: Subset },
    Overlap { witness: Subset },
    Uncovered { witness: Subset },
    ClaimMismatch { claimed: usize, actual: usize },
}

impl Violation {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            Violation::DimensionMismatch { .. } => "dimension",
            Violation::OutOfRange { .. } => "range",
            Violation::NotNested { .. } => "nesting",
            Violation::OutsidePoset { .. } => "outside",
            Violation::Overlap { .. } => "overlap",
            Violation::Uncovered { .. } => "coverage",
            Violation::ClaimMismatch { .. } => "claim",
        }
    }

    pub fn witness(&self) -> Option<Subset> {
        match *self {
            Violation::OutsidePoset { witness, .. }
            | Violation::Overlap { witness }
            | Violation::Uncovered { witness } => Some(witness),
            _ => None,
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DimensionMismatch { certificate, poset } => write!(
                f,
                "certificate is for n={certificate} but the poset has n={poset}"
            ),
            Violation::OutOfRange { index } => {
                write!(f, "interval #{index} uses elements outside [n]")
            }
            Violation::NotNested { index } => {
                write!(f, "interval #{index} has bottom not contained in top")
            }
            Violation::OutsidePoset { index, witness } => write!(
                f,
                "interval #{index} contains {} which is not in the poset",
                subset_to_string(*witness)
            ),
            Violation::Overlap { witness } => {
                write!(f, "intervals overlap at {}", subset_to_string(*witness))
            }
            Violation::Uncovered { witness } => {
                write!(f, "member {} is not covered", subset_to_string(*witness))
            }
            Violation::ClaimMismatch { claimed, actual } => write!(
                f,
                "claimed sdepth {claimed} but the smallest top has size {actual}"
            ),
        }
    }
}

/// Checks, in order: nesting, containment in the poset, pairwise
/// disjointness, coverage, and the claimed depth. Returns the first failure.
pub fn verify_partition(
    poset: &SubsetPoset,
    cert: &PartitionCertificate,
) -> std::result::Result<(), Violation> {
    let n = poset.n();
    if cert.n != n {
        return Err(Violation::DimensionMismatch {
            certificate: cert.n,
            poset: n,
        });
    }
    for (index, iv) in cert.intervals.iter().enumerate() {
        if (iv.top as u64) >> n != 0 || (iv.bottom as u64) >> n != 0 {
            return Err(Violation::OutOfRange { index });
        }
        if !iv.is_nested() {
            return Err(Violation::NotNested { index });
        }
    }
    for (index, iv) in cert.intervals.iter().enumerate() {
        if let Some(witness) = iv.cells().find(|&c| !poset.contains(c)) {
            return Err(Violation::OutsidePoset { index, witness });
        }
    }
    let mut seen = vec![0u64; poset.membership_words().len()];
    let mut covered = 0usize;
    for iv in &cert.intervals {
        for c in iv.cells() {
            let (w, b) = (c as usize / 64, c % 64);
            if seen[w] >> b & 1 == 1 {
                return Err(Violation::Overlap { witness: c });
            }
            seen[w] |= 1 << b;
            covered += 1;
        }
    }
    if covered != poset.len() {
        let witness = poset
            .members()
            .find(|&m| seen[m as usize / 64] >> (m % 64) & 1 == 0)
            .expect("cells lie in the poset, so a shortfall leaves a member uncovered");
        return Err(Violation::Uncovered { witness });
    }
    if let Some(actual) = min_top(&cert.intervals) {
        if actual != cert.claimed_sdepth {
            return Err(Violation::ClaimMismatch {
                claimed: cert.claimed_sdepth,
                actual,
            });
        }
    }
    Ok(())
}

/// Which poset a certificate file refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PosetKind {
    Ideal,
    Quotient,
    Pair,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetSource {
    pub kind: PosetKind,
    pub ideal_file: PathBuf,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal2_file: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct IntervalJson {
    #[serde(rename = "F")]
    bottom: Vec<usize>,
    #[serde(rename = "G")]
    top: Vec<usize>,
}

/// On-disk certificate: `{"n", "poset", "claimed_sdepth", "intervals"}` with
/// subsets written as strictly increasing 1-based lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateDocument {
    pub n: usize,
    pub poset: PosetSource,
    pub claimed_sdepth: usize,
    intervals: Vec<IntervalJson>,
}

impl CertificateDocument {
    pub fn new(source: PosetSource, cert: &PartitionCertificate) -> Self {
        let list = |m: Subset| elements(m).collect::<Vec<_>>();
        CertificateDocument {
            n: cert.n,
            poset: source,
            claimed_sdepth: cert.claimed_sdepth,
            intervals: cert
                .intervals
                .iter()
                .map(|iv| IntervalJson {
                    bottom: list(iv.bottom),
                    top: list(iv.top),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Certificate(e.to_string()))
    }

    /// Decodes the interval lists, rejecting unsorted or out-of-range entries.
    pub fn certificate(&self) -> Result<PartitionCertificate> {
        let decode = |list: &[usize]| -> Result<Subset> {
            let mut prev = 0;
            let mut mask = 0;
            for &e in list {
                if e <= prev || e > self.n || e > 32 {
                    return Err(Error::Certificate(format!(
                        "subset {list:?} is not a strictly increasing list within 1..={}",
                        self.n
                    )));
                }
                prev = e;
                mask |= 1 << (e - 1);
            }
            Ok(mask)
        };
        let intervals = self
            .intervals
            .iter()
            .map(|iv| Ok(Interval::new(decode(&iv.bottom)?, decode(&iv.top)?)))
            .collect::<Result<Vec<_>>>()?;
        Ok(PartitionCertificate {
            n: self.n,
            intervals,
            claimed_sdepth: self.claimed_sdepth,
        })
    }
}
