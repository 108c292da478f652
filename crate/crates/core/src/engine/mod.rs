//! Exact Stanley depth of subset posets.
//!
//! `sdepth(P) >= k` holds iff `P_{<=k}` splits into intervals `[F, G]` with
//! `|G| = k` whenever `|F| < k`; level-`k` members left over become singletons.
//! [`decide_at_least`] searches for such a split and [`sdepth_exact`] scans `k`
//! upwards until the first refusal.

mod alpha;
mod oracle;
mod search;

use std::fmt;
use std::time::{Duration, Instant};

use serde::{Serialize, Serializer};

use crate::certificate::PartitionCertificate;
use crate::error::{Error, Result};
use crate::poset::{Interval, SubsetPoset};

pub use alpha::{alpha_test, alpha_upper_bound, empty_cut_bound, AlphaTest};
pub use oracle::{naive_oracle, ORACLE_MAX_MEMBERS};

#[derive(Debug, Clone)]
pub struct SearchOptions {
    pub workers: usize,
    pub timeout: Option<Duration>,
    /// Bipartite-matching check between open members and free tops.
    pub hall_check: bool,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            workers: 1,
            timeout: None,
            hall_check: false,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
    pub prunes_alpha: u64,
    pub prunes_existence: u64,
    pub prunes_hall: u64,
    pub wall_ms: u64,
}

impl SearchStats {
    pub(crate) fn absorb(&mut self, other: &SearchStats) {
        self.nodes += other.nodes;
        self.prunes_alpha += other.prunes_alpha;
        self.prunes_existence += other.prunes_existence;
        self.prunes_hall += other.prunes_hall;
        self.wall_ms += other.wall_ms;
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    /// A partition of the whole poset with every top of size at least `k`.
    Certificate(PartitionCertificate),
    Refuted,
    TimedOut,
}

#[derive(Debug, Clone)]
pub struct DecisionReport {
    pub decision: Decision,
    pub stats: SearchStats,
}

/// Decides `sdepth(P) >= k`.
pub fn decide_at_least(
    poset: &SubsetPoset,
    k: usize,
    options: &SearchOptions,
) -> Result<DecisionReport> {
    let deadline = options.timeout.map(|t| Instant::now() + t);
    decide_with_deadline(poset, k, options, deadline)
}

fn decide_with_deadline(
    poset: &SubsetPoset,
    k: usize,
    options: &SearchOptions,
    deadline: Option<Instant>,
) -> Result<DecisionReport> {
    if poset.is_empty() {
        return Err(Error::InvalidParameter(
            "the empty poset has infinite Stanley depth; nothing to decide".into(),
        ));
    }
    if k > poset.n() {
        return Err(Error::InvalidParameter(format!(
            "level {k} exceeds n = {}",
            poset.n()
        )));
    }
    let start = Instant::now();
    let search = search::Search::new(poset, k, options.hall_check, deadline);
    let (outcome, mut stats) = search.run(poset, options.workers.max(1));
    stats.wall_ms = start.elapsed().as_millis() as u64;
    let decision = match outcome {
        search::SearchOutcome::Found(path) => {
            Decision::Certificate(complete_partition(poset, k, path))
        }
        search::SearchOutcome::Exhausted => Decision::Refuted,
        search::SearchOutcome::TimedOut => Decision::TimedOut,
    };
    Ok(DecisionReport { decision, stats })
}

/// Extends a partition of the low levels by singletons for every member at
/// level `k` or above that is not yet covered.
fn complete_partition(
    poset: &SubsetPoset,
    k: usize,
    mut intervals: Vec<Interval>,
) -> PartitionCertificate {
    let mut used = std::collections::HashSet::new();
    for iv in &intervals {
        used.insert(iv.top);
    }
    intervals.extend(
        poset
            .level(k)
            .iter()
            .filter(|g| !used.contains(*g))
            .map(|&g| Interval::singleton(g)),
    );
    for t in k + 1..=poset.n() {
        intervals.extend(poset.level(t).iter().map(|&g| Interval::singleton(g)));
    }
    PartitionCertificate::from_intervals(poset.n(), intervals)
}

/// Stanley depth value; the empty poset (zero module) has depth "infinite".
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdepthValue {
    Finite(usize),
    Infinite,
}

impl SdepthValue {
    pub fn finite(self) -> Option<usize> {
        match self {
            SdepthValue::Finite(v) => Some(v),
            SdepthValue::Infinite => None,
        }
    }
}

impl fmt::Display for SdepthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SdepthValue::Finite(v) => write!(f, "{v}"),
            SdepthValue::Infinite => f.write_str("infinite"),
        }
    }
}

impl Serialize for SdepthValue {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            SdepthValue::Finite(v) => s.serialize_u64(*v as u64),
            SdepthValue::Infinite => s.serialize_str("infinite"),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SdepthResult {
    /// Exact value, or the best certified lower bound when `inconclusive`.
    pub value: SdepthValue,
    #[serde(skip)]
    pub certificate: Option<PartitionCertificate>,
    /// Smallest `k` whose decision failed.
    pub refutation_k: Option<usize>,
    /// Upper end of the bracket; equals the value when conclusive.
    pub upper_bound: Option<usize>,
    pub inconclusive: bool,
    pub stats: SearchStats,
}

impl SdepthResult {
    pub(crate) fn infinite() -> Self {
        SdepthResult {
            value: SdepthValue::Infinite,
            certificate: None,
            refutation_k: None,
            upper_bound: None,
            inconclusive: false,
            stats: SearchStats::default(),
        }
    }
}

/// Exact Stanley depth of `P`, scanning upwards from `lower_hint` (a known
/// lower bound, or 0).
pub fn sdepth_exact(
    poset: &SubsetPoset,
    lower_hint: Option<usize>,
    options: &SearchOptions,
) -> SdepthResult {
    if poset.is_empty() {
        return SdepthResult::infinite();
    }
    let n = poset.n();
    let deadline = options.timeout.map(|t| Instant::now() + t);
    let start = Instant::now();
    let mut stats = SearchStats::default();
    let mut best: Option<PartitionCertificate> = None;
    let mut refutation: Option<usize> = None;
    let mut timed_out = false;

    let mut k = lower_hint.unwrap_or(0).min(n);
    // Upward scan; the first refusal settles the value.
    loop {
        let report = decide_with_deadline(poset, k, options, deadline)
            .expect("poset is nonempty and k <= n");
        stats.absorb(&report.stats);
        match report.decision {
            Decision::Certificate(cert) => {
                k = cert.claimed_sdepth + 1;
                best = Some(cert);
                if k > n {
                    break;
                }
            }
            Decision::Refuted => {
                refutation = Some(k);
                break;
            }
            Decision::TimedOut => {
                timed_out = true;
                break;
            }
        }
    }
    // A hint above the true value: walk down until a level succeeds.
    while best.is_none() && !timed_out {
        let k = refutation.expect("no success implies a refusal") - 1;
        let report = decide_with_deadline(poset, k, options, deadline)
            .expect("poset is nonempty and k <= n");
        stats.absorb(&report.stats);
        match report.decision {
            Decision::Certificate(cert) => best = Some(cert),
            Decision::Refuted => refutation = Some(k),
            Decision::TimedOut => timed_out = true,
        }
    }
    stats.wall_ms = start.elapsed().as_millis() as u64;

    let certified = best.as_ref().map_or(0, |c| c.claimed_sdepth);
    if timed_out {
        let beta = poset.level_counts();
        let mut upper = alpha_upper_bound(&beta).min(n);
        if let Some(cut) = empty_cut_bound(poset) {
            upper = upper.min(cut);
        }
        if let Some(r) = refutation {
            upper = upper.min(r - 1);
        }
        return SdepthResult {
            value: SdepthValue::Finite(certified),
            certificate: best,
            refutation_k: refutation,
            upper_bound: Some(upper.max(certified)),
            inconclusive: true,
            stats,
        };
    }
    SdepthResult {
        value: SdepthValue::Finite(certified),
        certificate: best,
        refutation_k: refutation,
        upper_bound: Some(certified),
        inconclusive: false,
        stats,
    }
}
