//! Depth-first search for an interval partition of `P_{<=k}` whose intervals
//! with `|F| < k` all have `|G| = k`.
//!
//! An uncovered member all of whose immediate subsets are covered must be the
//! bottom of its interval (a smaller bottom would leave an uncovered cell just
//! below it), so each node branches over the tops available to one such member.

use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rayon::prelude::*;

use super::SearchStats;
use crate::poset::{Interval, Subset, SubsetPoset};

const FRONTIER_BYTES: usize = 256 << 20;

pub(crate) enum SearchOutcome {
    Found(Vec<Interval>),
    Exhausted,
    TimedOut,
}

enum Step {
    Done,
    Dead,
    Branch { sigma: Subset, tops: Vec<Subset> },
}

enum Walk {
    Found,
    Exhausted,
    Aborted,
}

pub(crate) struct Search<'a> {
    poset: &'a SubsetPoset,
    k: usize,
    /// Members at levels `0..k`.
    low: Vec<&'a [Subset]>,
    /// For each low member, the level-`k` members above it whose whole
    /// interval lies in the poset.
    up_tops: Vec<Vec<Vec<Subset>>>,
    binom: Vec<Vec<i64>>,
    hall: bool,
    deadline: Option<Instant>,
    stop: AtomicBool,
    timed_out: AtomicBool,
}

#[derive(Clone)]
struct State {
    covered: Vec<u64>,
    remaining: Vec<i64>,
    path: Vec<Interval>,
    stats: SearchStats,
}

impl State {
    #[inline]
    fn is_covered(&self, m: Subset) -> bool {
        self.covered[m as usize / 64] >> (m % 64) & 1 == 1
    }

    fn apply(&mut self, iv: Interval) {
        for c in iv.cells() {
            self.covered[c as usize / 64] |= 1 << (c % 64);
            self.remaining[c.count_ones() as usize] -= 1;
        }
        self.path.push(iv);
    }

    fn undo(&mut self) {
        let iv = self.path.pop().expect("undo without apply");
        for c in iv.cells() {
            self.covered[c as usize / 64] &= !(1 << (c % 64));
            self.remaining[c.count_ones() as usize] += 1;
        }
    }

    /// Every cell of `[bottom, top]` still uncovered.
    #[inline]
    fn is_free(&self, bottom: Subset, top: Subset) -> bool {
        if self.is_covered(top) {
            return false;
        }
        let free = top & !bottom;
        let mut s = free;
        loop {
            if self.is_covered(bottom | s) {
                return false;
            }
            if s == 0 {
                return true;
            }
            s = (s - 1) & free;
        }
    }
}

impl<'a> Search<'a> {
    pub(crate) fn new(
        poset: &'a SubsetPoset,
        k: usize,
        hall: bool,
        deadline: Option<Instant>,
    ) -> Self {
        let low: Vec<&[Subset]> = (0..k).map(|t| poset.level(t)).collect();
        let up_tops = admissible_tops(poset, k, &low, deadline);
        let expired = up_tops.is_none();
        let binom = (0..=k)
            .map(|a| {
                (0..=k)
                    .map(|b| crate::binomial::binomial(a as i64, b as i64) as i64)
                    .collect()
            })
            .collect();
        Search {
            poset,
            k,
            low,
            up_tops: up_tops.unwrap_or_default(),
            binom,
            hall,
            deadline,
            stop: AtomicBool::new(expired),
            timed_out: AtomicBool::new(expired),
        }
    }

    fn root(&self, poset: &SubsetPoset) -> State {
        let mut remaining = vec![0i64; self.k + 1];
        for (t, r) in remaining.iter_mut().enumerate() {
            *r = poset.level(t).len() as i64;
        }
        State {
            covered: vec![0; poset.membership_words().len()],
            remaining,
            path: Vec::new(),
            stats: SearchStats::default(),
        }
    }

    /// Residual counting condition: the uncovered part must itself split into
    /// intervals topped at level `k`, which fixes how many start at each level.
    fn residual_alpha_ok(&self, remaining: &[i64]) -> bool {
        let k = self.k;
        let mut alpha = [0i64; 33];
        for t in 0..=k {
            let mut v = remaining[t];
            for j in 0..t {
                v -= self.binom[k - j][t - j] * alpha[j];
            }
            if v < 0 {
                return false;
            }
            alpha[t] = v;
        }
        true
    }

    fn step(&self, st: &mut State) -> Step {
        if (0..self.k).all(|t| st.remaining[t] == 0) {
            return Step::Done;
        }
        if !self.residual_alpha_ok(&st.remaining) {
            st.stats.prunes_alpha += 1;
            return Step::Dead;
        }

        // A member whose immediate subsets are all covered (or outside the
        // poset) can only be the bottom of its interval. Branch on the forced
        // member with the fewest free tops; every open member needs at least one.
        let mut forced: Vec<(Subset, Vec<Subset>)> = Vec::new();
        let mut best: Option<(usize, usize, Subset, usize)> = None;
        for t in 0..self.k {
            if st.remaining[t] == 0 {
                continue;
            }
            for (idx, &s) in self.low[t].iter().enumerate() {
                if st.is_covered(s) {
                    continue;
                }
                let candidates = &self.up_tops[t][idx];
                if self.is_forced_bottom(st, s) {
                    let tops: Vec<Subset> = candidates
                        .iter()
                        .copied()
                        .filter(|&g| st.is_free(s, g))
                        .collect();
                    if tops.is_empty() {
                        st.stats.prunes_existence += 1;
                        return Step::Dead;
                    }
                    let key = (tops.len(), t, s, forced.len());
                    if best.is_none_or(|b| key < b) {
                        best = Some(key);
                    }
                    forced.push((s, tops));
                } else if !candidates.iter().any(|&g| st.is_free(s, g)) {
                    st.stats.prunes_existence += 1;
                    return Step::Dead;
                }
            }
        }

        if self.hall && !has_perfect_matching(&forced) {
            st.stats.prunes_hall += 1;
            return Step::Dead;
        }

        let (_, _, _, at) = best.expect("the lowest open level is always forced");
        let (sigma, mut tops) = forced.swap_remove(at);
        // Least-demanded tops first: fewest uncovered low members underneath.
        let mut keyed: Vec<(usize, Subset)> =
            tops.drain(..).map(|g| (self.demand(st, g), g)).collect();
        keyed.sort_unstable();
        Step::Branch {
            sigma,
            tops: keyed.into_iter().map(|(_, g)| g).collect(),
        }
    }

    fn is_forced_bottom(&self, st: &State, s: Subset) -> bool {
        let mut rest = s;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest &= rest - 1;
            let below = s & !bit;
            if self.poset.contains(below) && !st.is_covered(below) {
                return false;
            }
        }
        true
    }

    fn demand(&self, st: &State, top: Subset) -> usize {
        let mut count = 0;
        let mut s = top;
        while s != 0 {
            s = (s - 1) & top;
            let level = s.count_ones() as usize;
            if level < self.k && !st.is_covered(s) && self.low[level].binary_search(&s).is_ok() {
                count += 1;
            }
        }
        count
    }

    fn should_stop(&self, st: &State) -> bool {
        if self.stop.load(Ordering::Relaxed) {
            return true;
        }
        if st.stats.nodes.is_multiple_of(256) {
            if let Some(deadline) = self.deadline {
                if Instant::now() >= deadline {
                    self.timed_out.store(true, Ordering::Relaxed);
                    self.stop.store(true, Ordering::Relaxed);
                    return true;
                }
            }
        }
        false
    }

    fn walk(&self, st: &mut State) -> Walk {
        st.stats.nodes += 1;
        if self.should_stop(st) {
            return Walk::Aborted;
        }
        match self.step(st) {
            Step::Done => Walk::Found,
            Step::Dead => Walk::Exhausted,
            Step::Branch { sigma, tops } => {
                for g in tops {
                    st.apply(Interval::new(sigma, g));
                    match self.walk(st) {
                        Walk::Found => return Walk::Found,
                        Walk::Aborted => {
                            st.undo();
                            return Walk::Aborted;
                        }
                        Walk::Exhausted => st.undo(),
                    }
                }
                Walk::Exhausted
            }
        }
    }

    /// Runs the search with `workers` threads; subtrees below a shallow
    /// frontier are explored independently and the first success cancels the rest.
    pub(crate) fn run(&self, poset: &SubsetPoset, workers: usize) -> (SearchOutcome, SearchStats) {
        if self.timed_out.load(Ordering::Relaxed) {
            return (SearchOutcome::TimedOut, SearchStats::default());
        }
        let mut root = self.root(poset);
        if workers <= 1 {
            let walk = self.walk(&mut root);
            return (self.outcome(walk, root.path), root.stats);
        }

        // Every state owns a copy of the coverage bitset, so the frontier is
        // capped by memory as well as by the target of 8 subtrees per worker.
        let state_bytes = 8 * root.covered.len().max(1);
        let cap = (8 * workers).max((FRONTIER_BYTES / state_bytes).min(4096));
        let mut expand_stats = SearchStats::default();
        let mut frontier = vec![root];
        for _ in 0..3 {
            if frontier.len() >= 8 * workers {
                break;
            }
            let mut next = Vec::new();
            let mut pending = frontier.len();
            for mut st in frontier {
                pending -= 1;
                match self.step(&mut st) {
                    Step::Done => {
                        expand_stats.nodes += 1;
                        expand_stats.absorb(&st.stats);
                        return (SearchOutcome::Found(st.path), expand_stats);
                    }
                    Step::Dead => {
                        expand_stats.nodes += 1;
                        expand_stats.absorb(&st.stats);
                    }
                    Step::Branch { tops, .. } if next.len() + tops.len() + pending > cap => {
                        next.push(st);
                    }
                    Step::Branch { sigma, tops } => {
                        expand_stats.nodes += 1;
                        expand_stats.absorb(&st.stats);
                        st.stats = SearchStats::default();
                        for g in tops {
                            let mut child = st.clone();
                            child.apply(Interval::new(sigma, g));
                            next.push(child);
                        }
                    }
                }
            }
            frontier = next;
            if frontier.is_empty() {
                return (SearchOutcome::Exhausted, expand_stats);
            }
        }

        let found: Mutex<Option<Vec<Interval>>> = Mutex::new(None);
        let totals = Mutex::new(expand_stats);
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .expect("failed to build search thread pool");
        pool.install(|| {
            frontier.into_par_iter().for_each(|mut st| {
                if self.stop.load(Ordering::Relaxed) {
                    return;
                }
                if let Walk::Found = self.walk(&mut st) {
                    self.stop.store(true, Ordering::Relaxed);
                    found.lock().unwrap().get_or_insert(st.path);
                }
                totals.lock().unwrap().absorb(&st.stats);
            });
        });
        let stats = totals.into_inner().unwrap();
        let outcome = match found.into_inner().unwrap() {
            Some(path) => SearchOutcome::Found(path),
            None if self.timed_out.load(Ordering::Relaxed) => SearchOutcome::TimedOut,
            None => SearchOutcome::Exhausted,
        };
        (outcome, stats)
    }

    fn outcome(&self, walk: Walk, path: Vec<Interval>) -> SearchOutcome {
        match walk {
            Walk::Found => SearchOutcome::Found(path),
            Walk::Exhausted => SearchOutcome::Exhausted,
            Walk::Aborted => SearchOutcome::TimedOut,
        }
    }
}

/// For each member below level `k`, the level-`k` members `g` above it with
/// `[s, g]` inside the poset, in ascending order. `None` if the deadline passes.
fn admissible_tops(
    poset: &SubsetPoset,
    k: usize,
    low: &[&[Subset]],
    deadline: Option<Instant>,
) -> Option<Vec<Vec<Vec<Subset>>>> {
    let tops = poset.level(k);
    let expired = |i: usize| i.is_multiple_of(64) && deadline.is_some_and(|d| Instant::now() >= d);
    let low_total: usize = low.iter().map(|l| l.len()).sum();
    let mut up: Vec<Vec<Vec<Subset>>> = low.iter().map(|l| vec![Vec::new(); l.len()]).collect();

    if k >= usize::BITS as usize - 1 || (1usize << k) > low_total {
        for (t, level) in low.iter().enumerate() {
            for (idx, &s) in level.iter().enumerate() {
                if expired(idx) {
                    return None;
                }
                up[t][idx] = tops
                    .iter()
                    .copied()
                    .filter(|&g| g & s == s && poset.contains_interval(s, g))
                    .collect();
            }
        }
        return Some(up);
    }

    // Walk the subsets of each top instead; `inside[r]` records whether the
    // interval from the subset coded by `r` up to the top lies in the poset.
    let full = (1usize << k) - 1;
    let mut subset = vec![0 as Subset; full + 1];
    let mut inside = vec![false; full + 1];
    for (i, &g) in tops.iter().enumerate() {
        if expired(i) {
            return None;
        }
        let bits: Vec<Subset> = (0..32).map(|b| 1 << b).filter(|b| g & b != 0).collect();
        for r in 1..=full {
            subset[r] = subset[r & (r - 1)] | bits[r.trailing_zeros() as usize];
        }
        inside[full] = true;
        for r in (0..full).rev() {
            let s = subset[r];
            inside[r] = poset.contains(s) && (0..k).all(|j| r >> j & 1 == 1 || inside[r | 1 << j]);
            if inside[r] {
                let t = s.count_ones() as usize;
                if let Ok(idx) = low[t].binary_search(&s) {
                    up[t][idx].push(g);
                }
            }
        }
    }
    Some(up)
}

/// Kuhn's augmenting paths: can every open member get its own top?
fn has_perfect_matching(options: &[(Subset, Vec<Subset>)]) -> bool {
    let mut owner: std::collections::HashMap<Subset, usize> = std::collections::HashMap::new();
    fn augment(
        u: usize,
        options: &[(Subset, Vec<Subset>)],
        seen: &mut Vec<Subset>,
        owner: &mut std::collections::HashMap<Subset, usize>,
    ) -> bool {
        for &g in &options[u].1 {
            if seen.contains(&g) {
                continue;
            }
            seen.push(g);
            let free = match owner.get(&g) {
                None => true,
                Some(&v) => augment(v, options, seen, owner),
            };
            if free {
                owner.insert(g, u);
                return true;
            }
        }
        false
    }
    (0..options.len()).all(|u| {
        let mut seen = Vec::new();
        augment(u, options, &mut seen, &mut owner)
    })
}

#[cfg(test)]
mod tests {
    use super::has_perfect_matching;

    #[test]
    fn matching_detects_hall_violation() {
        assert!(has_perfect_matching(&[(1, vec![3, 5]), (2, vec![3])]));
        assert!(!has_perfect_matching(&[(1, vec![3]), (2, vec![3])]));
        assert!(!has_perfect_matching(&[
            (1, vec![7, 11]),
            (2, vec![7, 11]),
            (4, vec![7, 11])
        ]));
        assert!(has_perfect_matching(&[]));
    }
}
