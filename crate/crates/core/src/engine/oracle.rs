//! Exhaustive reference search over all interval partitions of the full
//! poset, with no level restriction. Only meant for tiny posets.

use super::{SdepthResult, SdepthValue, SearchStats};
use crate::certificate::PartitionCertificate;
use crate::error::{Error, Result};
use crate::poset::{Interval, Subset, SubsetPoset};

pub const ORACLE_MAX_MEMBERS: usize = 40;

struct Oracle {
    n: usize,
    members: Vec<Subset>,
    in_poset: Vec<bool>,
    covered: Vec<bool>,
    path: Vec<Interval>,
    best: Option<(usize, Vec<Interval>)>,
    nodes: u64,
}

impl Oracle {
    fn cells(&self, bottom: Subset, top: Subset) -> Vec<Subset> {
        (0..1u32 << self.n)
            .filter(|&m| m & bottom == bottom && m & !top == 0)
            .collect()
    }

    fn recurse(&mut self, depth_so_far: usize) {
        self.nodes += 1;
        let Some(&sigma) = self.members.iter().find(|&&m| !self.covered[m as usize]) else {
            let value = depth_so_far;
            if self.best.as_ref().is_none_or(|(b, _)| value > *b) {
                self.best = Some((value, self.path.clone()));
            }
            return;
        };
        let floor = self.best.as_ref().map(|(b, _)| *b);
        let candidates: Vec<Subset> = self
            .members
            .iter()
            .copied()
            .filter(|&g| g & sigma == sigma)
            .collect();
        for g in candidates {
            let size = g.count_ones() as usize;
            let value = size.min(depth_so_far);
            if floor.is_some_and(|b| value <= b) {
                continue;
            }
            let cells = self.cells(sigma, g);
            if cells
                .iter()
                .any(|&c| !self.in_poset[c as usize] || self.covered[c as usize])
            {
                continue;
            }
            for &c in &cells {
                self.covered[c as usize] = true;
            }
            self.path.push(Interval::new(sigma, g));
            self.recurse(value);
            self.path.pop();
            for &c in &cells {
                self.covered[c as usize] = false;
            }
        }
    }
}

/// Exact Stanley depth of a small poset by exhaustive branch and bound.
pub fn naive_oracle(poset: &SubsetPoset) -> Result<SdepthResult> {
    let size = poset.len();
    if size > ORACLE_MAX_MEMBERS {
        return Err(Error::OracleGuard {
            size,
            limit: ORACLE_MAX_MEMBERS,
        });
    }
    if size == 0 {
        return Ok(SdepthResult::infinite());
    }
    let n = poset.n();
    let mut members: Vec<Subset> = poset.members().collect();
    members.sort_by_key(|&m| (m.count_ones(), m));
    let mut in_poset = vec![false; 1 << n];
    for &m in &members {
        in_poset[m as usize] = true;
    }
    let mut oracle = Oracle {
        n,
        members,
        in_poset,
        covered: vec![false; 1 << n],
        path: Vec::new(),
        best: None,
        nodes: 0,
    };
    oracle.recurse(usize::MAX);
    let (value, intervals) = oracle
        .best
        .expect("a nonempty poset has a partition into singletons");
    let certificate = PartitionCertificate::from_intervals(n, intervals);
    Ok(SdepthResult {
        value: SdepthValue::Finite(value),
        refutation_k: (value < n).then_some(value + 1),
        upper_bound: Some(value),
        inconclusive: false,
        certificate: Some(certificate),
        stats: SearchStats {
            nodes: oracle.nodes,
            ..SearchStats::default()
        },
    })
}
