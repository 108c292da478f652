//! Subsets of the boolean lattice `2^[n]` held as dense bitsets.
//!
//! A subset of `[n]` is a mask with bit `i - 1` standing for element `i`.

use std::fmt;

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MonomialIdeal};

/// Subset of `[n]` as a bitmask.
pub type Subset = u32;

/// Largest `n` accepted by the poset constructors unless a cap is given.
pub const DEFAULT_MAX_VARS: usize = 24;
/// Hard ceiling imposed by the `u32` subset encoding.
pub const HARD_MAX_VARS: usize = 30;

/// `{1, 3}`-style rendering of a mask.
pub fn subset_to_string(mask: Subset) -> String {
    let items: Vec<String> = elements(mask).map(|e| e.to_string()).collect();
    format!("{{{}}}", items.join(","))
}

/// 1-based elements of a mask in increasing order.
pub fn elements(mask: Subset) -> impl Iterator<Item = usize> {
    (0..32).filter(move |i| mask >> i & 1 == 1).map(|i| i + 1)
}

pub fn mask_of(elements: &[usize]) -> Subset {
    elements.iter().fold(0, |acc, &e| acc | 1 << (e - 1))
}

#[derive(Clone, PartialEq, Eq)]
pub struct SubsetPoset {
    n: usize,
    bits: Vec<u64>,
    levels: Vec<Vec<Subset>>,
}

impl fmt::Debug for SubsetPoset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("SubsetPoset")
            .field("n", &self.n)
            .field("level_counts", &self.level_counts())
            .finish()
    }
}

const LOW_HALVES: [u64; 6] = [
    0x5555_5555_5555_5555,
    0x3333_3333_3333_3333,
    0x0F0F_0F0F_0F0F_0F0F,
    0x00FF_00FF_00FF_00FF,
    0x0000_FFFF_0000_FFFF,
    0x0000_0000_FFFF_FFFF,
];

fn words_for(n: usize) -> usize {
    (1usize << n).div_ceil(64)
}

fn universe_tail_mask(n: usize) -> u64 {
    if n >= 6 {
        u64::MAX
    } else {
        (1u64 << (1 << n)) - 1
    }
}

impl SubsetPoset {
    fn from_bits(n: usize, bits: Vec<u64>) -> Self {
        let mut levels = vec![Vec::new(); n + 1];
        for (w, &word) in bits.iter().enumerate() {
            let mut rest = word;
            while rest != 0 {
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let mask = (w * 64 + b) as Subset;
                levels[mask.count_ones() as usize].push(mask);
            }
        }
        SubsetPoset { n, bits, levels }
    }

    /// The empty poset inside `2^[n]`.
    pub fn empty(n: usize) -> Self {
        Self::from_bits(n, vec![0; words_for(n)])
    }

    /// Poset from an explicit list of masks; masks beyond `2^n` are rejected.
    pub fn from_masks<I: IntoIterator<Item = Subset>>(n: usize, masks: I) -> Result<Self> {
        check_n(n, HARD_MAX_VARS)?;
        let mut bits = vec![0u64; words_for(n)];
        for m in masks {
            if (m as u64) >> n != 0 {
                return Err(Error::InvalidParameter(format!(
                    "mask {m:#b} outside 2^[{n}]"
                )));
            }
            bits[m as usize / 64] |= 1 << (m % 64);
        }
        Ok(Self::from_bits(n, bits))
    }

    pub fn from_predicate<F: Fn(Subset) -> bool>(n: usize, pred: F) -> Result<Self> {
        check_n(n, HARD_MAX_VARS)?;
        Self::from_masks(n, (0..1u64 << n).map(|m| m as Subset).filter(|&m| pred(m)))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, mask: Subset) -> bool {
        let idx = mask as usize;
        idx >> self.n == 0 && self.bits[idx / 64] >> (idx % 64) & 1 == 1
    }

    pub fn len(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.iter().all(Vec::is_empty)
    }

    /// Members of cardinality `t`, in increasing mask order.
    pub fn level(&self, t: usize) -> &[Subset] {
        self.levels.get(t).map(Vec::as_slice).unwrap_or(&[])
    }

    /// `β_t` for `t = 0..=n`.
    pub fn level_counts(&self) -> Vec<u64> {
        self.levels.iter().map(|l| l.len() as u64).collect()
    }

    /// All members, by level then by mask.
    pub fn members(&self) -> impl Iterator<Item = Subset> + '_ {
        self.levels.iter().flatten().copied()
    }

    /// Members of cardinality at most `k`.
    pub fn truncate(&self, k: usize) -> SubsetPoset {
        let mut bits = self.bits.clone();
        for level in self.levels.iter().skip(k + 1) {
            for &m in level {
                bits[m as usize / 64] &= !(1 << (m % 64));
            }
        }
        Self::from_bits(self.n, bits)
    }

    /// `{τ ∈ P : |τ| = d, σ ⊆ τ}`.
    pub fn upper_cut(&self, sigma: Subset, d: usize) -> Result<Vec<Subset>> {
        if !self.contains(sigma) {
            return Err(Error::NotAMember {
                element: subset_to_string(sigma),
            });
        }
        Ok(self
            .level(d)
            .iter()
            .copied()
            .filter(|&t| t & sigma == sigma)
            .collect())
    }

    /// Members with no single-element extension inside the poset.
    pub fn maximal_members(&self) -> impl Iterator<Item = Subset> + '_ {
        let full: Subset = if self.n == 32 { !0 } else { (1 << self.n) - 1 };
        self.members().filter(move |&s| {
            let mut free = full & !s;
            while free != 0 {
                let bit = free & free.wrapping_neg();
                free &= free - 1;
                if self.contains(s | bit) {
                    return false;
                }
            }
            true
        })
    }

    /// True iff every subset between `bottom` and `top` is a member.
    pub fn contains_interval(&self, bottom: Subset, top: Subset) -> bool {
        if bottom & !top != 0 {
            return false;
        }
        let free = top & !bottom;
        let mut s = free;
        loop {
            if !self.contains(bottom | s) {
                return false;
            }
            if s == 0 {
                return true;
            }
            s = (s - 1) & free;
        }
    }

    fn intersect(&self, other: &SubsetPoset) -> SubsetPoset {
        let bits = self
            .bits
            .iter()
            .zip(&other.bits)
            .map(|(a, b)| a & b)
            .collect();
        Self::from_bits(self.n, bits)
    }

    /// Raw membership words; bit `b` of the whole vector is the mask `b`.
    pub fn membership_words(&self) -> &[u64] {
        &self.bits
    }
}

fn check_n(n: usize, cap: usize) -> Result<()> {
    let max = cap.min(HARD_MAX_VARS);
    if n > max {
        Err(Error::TooManyVariables { n, max })
    } else {
        Ok(())
    }
}

fn squarefree_supports(ideal: &MonomialIdeal) -> Result<Vec<Subset>> {
    ideal
        .generators()
        .iter()
        .map(|g: &Monomial| {
            g.to_mask()
                .map(|m| m as Subset)
                .ok_or_else(|| Error::NotSquarefree(g.to_string()))
        })
        .collect()
}

fn ideal_bits(ideal: &MonomialIdeal, cap: usize) -> Result<Vec<u64>> {
    let n = ideal.n();
    check_n(n, cap)?;
    let supports = squarefree_supports(ideal)?;
    let mut bits = vec![0u64; words_for(n)];
    for s in supports {
        bits[s as usize / 64] |= 1 << (s % 64);
    }
    // Upward closure, one coordinate at a time.
    for i in 0..n {
        if i < 6 {
            let shift = 1 << i;
            for w in bits.iter_mut() {
                *w |= (*w & LOW_HALVES[i]) << shift;
            }
        } else {
            let stride = 1 << (i - 6);
            for w in 0..bits.len() {
                if w & stride != 0 {
                    bits[w] |= bits[w ^ stride];
                }
            }
        }
    }
    Ok(bits)
}

/// `P_I`: supports of the squarefree monomials in `I`.
pub fn poset_of_ideal(ideal: &MonomialIdeal) -> Result<SubsetPoset> {
    poset_of_ideal_capped(ideal, DEFAULT_MAX_VARS)
}

pub fn poset_of_ideal_capped(ideal: &MonomialIdeal, max_vars: usize) -> Result<SubsetPoset> {
    Ok(SubsetPoset::from_bits(
        ideal.n(),
        ideal_bits(ideal, max_vars)?,
    ))
}

/// `P_{S/I}`: the complement of `P_I` in `2^[n]`.
pub fn poset_of_quotient(ideal: &MonomialIdeal) -> Result<SubsetPoset> {
    poset_of_quotient_capped(ideal, DEFAULT_MAX_VARS)
}

pub fn poset_of_quotient_capped(ideal: &MonomialIdeal, max_vars: usize) -> Result<SubsetPoset> {
    let mut bits = ideal_bits(ideal, max_vars)?;
    for w in bits.iter_mut() {
        *w = !*w;
    }
    if let Some(last) = bits.last_mut() {
        *last &= universe_tail_mask(ideal.n());
    }
    Ok(SubsetPoset::from_bits(ideal.n(), bits))
}

/// `P_{J/I} = P_{S/I} ∩ P_J` for `I ⊆ J`.
pub fn poset_of_ideal_quotient(j: &MonomialIdeal, i: &MonomialIdeal) -> Result<SubsetPoset> {
    poset_of_ideal_quotient_capped(j, i, DEFAULT_MAX_VARS)
}

pub fn poset_of_ideal_quotient_capped(
    j: &MonomialIdeal,
    i: &MonomialIdeal,
    max_vars: usize,
) -> Result<SubsetPoset> {
    if j.n() != i.n() {
        return Err(Error::AmbientMismatch {
            expected: j.n(),
            found: i.n(),
        });
    }
    let upper = poset_of_ideal_capped(j, max_vars)?;
    let lower = poset_of_quotient_capped(i, max_vars)?;
    for g in i.generators() {
        if !j.contains(g)? {
            return Err(Error::NotContained(g.to_string()));
        }
    }
    Ok(lower.intersect(&upper))
}

/// An interval `[bottom, top]` of `2^[n]`. Nesting is not enforced here so that
/// malformed certificates can still be represented and rejected by verification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Interval {
    pub bottom: Subset,
    pub top: Subset,
}

impl Interval {
    pub fn new(bottom: Subset, top: Subset) -> Self {
        Interval { bottom, top }
    }

    pub fn singleton(s: Subset) -> Self {
        Interval { bottom: s, top: s }
    }

    pub fn is_nested(&self) -> bool {
        self.bottom & !self.top == 0
    }

    pub fn top_size(&self) -> usize {
        self.top.count_ones() as usize
    }

    /// Every subset `bottom ⊆ s ⊆ top`; empty when not nested.
    pub fn cells(&self) -> impl Iterator<Item = Subset> {
        let bottom = self.bottom;
        let free = self.top & !self.bottom;
        let mut next = if self.is_nested() { Some(free) } else { None };
        std::iter::from_fn(move || {
            let s = next?;
            next = if s == 0 { None } else { Some((s - 1) & free) };
            Some(bottom | s)
        })
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            subset_to_string(self.bottom),
            subset_to_string(self.top)
        )
    }
}
