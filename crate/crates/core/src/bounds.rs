//! Closed-form bounds and family formulas for depth and Stanley depth.
//!
//! Every entry of a [`BoundReport`] carries a provenance label naming the
//! result it comes from; the labels are part of the JSON interface.

use serde::Serialize;

use crate::binomial::binomial;
use crate::engine::{alpha_upper_bound, empty_cut_bound};
use crate::error::{Error, Result};
use crate::monomial::{cycle_ideal, generator_split, line_ideal, MonomialIdeal};
use crate::poset::{
    poset_of_ideal, poset_of_ideal_quotient, poset_of_quotient, SubsetPoset, DEFAULT_MAX_VARS,
};

pub mod labels {
    pub const OKAZAKI: &str = "Thm 1.4";
    pub const CYCLE_QUOTIENT_LOWER: &str = "Prop 1.8";
    pub const CYCLE_QUOTIENT_EXACT: &str = "Thm 1.9(1)";
    pub const CYCLE_QUOTIENT_UPPER: &str = "Thm 1.9(2)";
    pub const ALPHA_TEST: &str = "Thm 2.4 alpha-test";
    pub const QUOTIENT_GENERATORS: &str = "Prop 2.6";
    pub const PAIR_GENERATORS: &str = "Prop 2.9";
    pub const LINE_DEPTH: &str = "Lemma 1.2";
    pub const CYCLE_DEPTH: &str = "Prop 1.3";
    pub const LINE_SDEPTH: &str = "Lemma 1.6";
    pub const CYCLE_MOD_LINE: &str = "Prop 1.10";
    pub const COMPUTED_CYCLES: &str = "Remark 1.11";
    pub const EMPTY_CUT: &str = "empty-cut (Thm 1.9 proof)";
}

fn ceil_div3(a: i64) -> i64 {
    a.div_euclid(3) + i64::from(a.rem_euclid(3) != 0)
}

fn require_proper(ideal: &MonomialIdeal, context: &'static str) -> Result<()> {
    if ideal.is_zero() || ideal.is_unit() {
        Err(Error::DegenerateIdeal { context })
    } else {
        Ok(())
    }
}

fn require_cycle_n(n: usize) -> Result<()> {
    if n < 3 {
        Err(Error::InvalidParameter(format!(
            "cycle formulas need n >= 3, got {n}"
        )))
    } else {
        Ok(())
    }
}

/// `sdepth(I) >= max{1, n - floor(m/2)}` for an ideal with `m` minimal generators.
pub fn okazaki_lower(ideal: &MonomialIdeal) -> Result<i64> {
    require_proper(ideal, "the generator-count bound for ideals")?;
    let n = ideal.n() as i64;
    let m = ideal.num_generators() as i64;
    Ok((n - m / 2).max(1))
}

/// `sdepth(S/I) >= n - m`, returned raw (possibly negative).
pub fn quotient_gen_lower(ideal: &MonomialIdeal) -> Result<i64> {
    require_proper(ideal, "the generator-count bound for quotients")?;
    Ok(ideal.n() as i64 - ideal.num_generators() as i64)
}

/// `sdepth(J/I) >= n - p - floor((q - r)/2)` where `p = |G(I)|`, `q = |G(J)|`
/// and `r` generators of `J` already lie in `I`.
pub fn pair_lower(larger: &MonomialIdeal, smaller: &MonomialIdeal) -> Result<i64> {
    let split = generator_split(larger, smaller)?;
    let n = larger.n() as i64;
    let p = smaller.num_generators() as i64;
    let q = larger.num_generators() as i64;
    Ok(n - p - (q - split.r as i64) / 2)
}

/// `sdepth((I+J)/I) >= sdepth(J) + sdepth(S/I) - n`.
///
/// The right side is increasing in both arguments, so feeding lower bounds for
/// `sdepth(J)` and `sdepth(S/I)` still yields a lower bound.
pub fn sum_quotient_lower(sdepth_j: i64, sdepth_si: i64, n: usize) -> i64 {
    sdepth_j + sdepth_si - n as i64
}

/// `depth(S/I_n) = ceil(n/3)`; `n = 1` is the formula's extension to `S/0`.
pub fn depth_line_quotient(n: usize) -> Result<i64> {
    if n == 0 {
        return Err(Error::InvalidParameter("n must be at least 1".into()));
    }
    Ok(ceil_div3(n as i64))
}

/// `depth(S/J_n) = ceil((n-1)/3)`.
pub fn depth_cycle_quotient(n: usize) -> Result<i64> {
    require_cycle_n(n)?;
    Ok(ceil_div3(n as i64 - 1))
}

/// `sdepth(S/I_n) = ceil(n/3)`.
pub fn sdepth_line_quotient(n: usize) -> Result<i64> {
    depth_line_quotient(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct CycleBracket {
    pub lower: i64,
    pub upper: i64,
    pub exact: Option<i64>,
}

/// Known values for `n ≡ 1 (mod 3)` obtained by explicit computation.
pub const COMPUTED_CYCLE_VALUES: [(usize, i64); 4] = [(4, 1), (7, 2), (10, 4), (13, 5)];

/// `sdepth(S/J_n)`: exact `ceil((n-1)/3)` unless `n ≡ 1 (mod 3)`, where it lies
/// in `[ceil((n-1)/3), ceil(n/3)]` and is known only for small `n`.
pub fn sdepth_cycle_quotient_bracket(n: usize) -> Result<CycleBracket> {
    require_cycle_n(n)?;
    let lower = ceil_div3(n as i64 - 1);
    if n % 3 != 1 {
        return Ok(CycleBracket {
            lower,
            upper: lower,
            exact: Some(lower),
        });
    }
    let exact = COMPUTED_CYCLE_VALUES
        .iter()
        .find(|(m, _)| *m == n)
        .map(|&(_, v)| v);
    Ok(CycleBracket {
        lower,
        upper: ceil_div3(n as i64),
        exact,
    })
}

/// `sdepth(J_n/I_n) = depth(J_n/I_n) = ceil((n+2)/3)`.
pub fn sdepth_cycle_mod_line(n: usize) -> Result<i64> {
    require_cycle_n(n)?;
    Ok(ceil_div3(n as i64 + 2))
}

/// Independent `t`-subsets of the `n`-cycle: `C(n-t+1, t) - C(n-t-1, t-2)`.
pub fn cycle_beta_closed(n: usize, t: usize) -> i128 {
    let (n, t) = (n as i64, t as i64);
    binomial(n - t + 1, t) - binomial(n - t - 1, t - 2)
}

/// What a report is about.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundTarget {
    /// The ideal `I` as a module.
    Ideal(MonomialIdeal),
    /// `S/I`.
    Quotient(MonomialIdeal),
    /// `J/I` with `I ⊆ J`.
    Pair {
        larger: MonomialIdeal,
        smaller: MonomialIdeal,
    },
}

impl BoundTarget {
    pub fn n(&self) -> usize {
        match self {
            BoundTarget::Ideal(i) | BoundTarget::Quotient(i) => i.n(),
            BoundTarget::Pair { larger, .. } => larger.n(),
        }
    }

    pub fn is_squarefree(&self) -> bool {
        match self {
            BoundTarget::Ideal(i) | BoundTarget::Quotient(i) => i.is_squarefree(),
            BoundTarget::Pair { larger, smaller } => {
                larger.is_squarefree() && smaller.is_squarefree()
            }
        }
    }

    pub fn describe(&self) -> String {
        match self {
            BoundTarget::Ideal(i) => format!("I = {i}"),
            BoundTarget::Quotient(i) => format!("S/I, I = {i}"),
            BoundTarget::Pair { larger, smaller } => {
                format!("J/I, J = {larger}, I = {smaller}")
            }
        }
    }

    /// The characteristic poset (squarefree targets only).
    pub fn poset(&self) -> Result<SubsetPoset> {
        match self {
            BoundTarget::Ideal(i) => poset_of_ideal(i),
            BoundTarget::Quotient(i) => poset_of_quotient(i),
            BoundTarget::Pair { larger, smaller } => poset_of_ideal_quotient(larger, smaller),
        }
    }

    fn family(&self) -> Option<Family> {
        let n = self.n();
        let is_line = |i: &MonomialIdeal| n >= 2 && line_ideal(n).is_ok_and(|l| &l == i);
        let is_cycle = |i: &MonomialIdeal| n >= 3 && cycle_ideal(n).is_ok_and(|c| &c == i);
        match self {
            BoundTarget::Ideal(i) if is_line(i) => Some(Family::LineIdeal),
            BoundTarget::Ideal(i) if is_cycle(i) => Some(Family::CycleIdeal),
            BoundTarget::Quotient(i) if is_line(i) => Some(Family::LineQuotient),
            BoundTarget::Quotient(i) if is_cycle(i) => Some(Family::CycleQuotient),
            BoundTarget::Pair { larger, smaller } if is_cycle(larger) && is_line(smaller) => {
                Some(Family::CycleModLine)
            }
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Family {
    LineIdeal,
    CycleIdeal,
    LineQuotient,
    CycleQuotient,
    CycleModLine,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundEntry {
    /// The value as the formula gives it.
    pub value: i64,
    /// Clamped at 0 for display.
    pub display: i64,
    pub provenance: String,
}

impl BoundEntry {
    fn new(value: i64, provenance: &str) -> Self {
        BoundEntry {
            value,
            display: value.max(0),
            provenance: provenance.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub target: String,
    pub n: usize,
    pub lower_bounds: Vec<BoundEntry>,
    pub upper_bounds: Vec<BoundEntry>,
    /// Exact value from a family formula, when one applies.
    pub exact: Option<BoundEntry>,
    pub depth_formula: Option<BoundEntry>,
    /// Whether the best lower bound already reaches the depth (families only).
    pub stanley_conjecture_witnessed: Option<bool>,
    /// False when the poset is empty and the Stanley depth is infinite.
    pub finite: bool,
}

impl BoundReport {
    pub fn best_lower(&self) -> i64 {
        self.lower_bounds
            .iter()
            .map(|b| b.display)
            .max()
            .unwrap_or(0)
    }

    pub fn best_upper(&self) -> Option<i64> {
        self.upper_bounds.iter().map(|b| b.value).min()
    }
}

/// Collects every bound that applies to `target`. Poset-based upper bounds
/// are included for squarefree targets with at most [`DEFAULT_MAX_VARS`] variables.
pub fn bound_report(target: &BoundTarget) -> Result<BoundReport> {
    let n = target.n();
    let mut lower = Vec::new();
    let mut upper = Vec::new();
    let mut exact = None;
    let mut depth = None;

    match target {
        BoundTarget::Ideal(i) => lower.push(BoundEntry::new(okazaki_lower(i)?, labels::OKAZAKI)),
        BoundTarget::Quotient(i) => {
            if !i.is_unit() && !i.is_zero() {
                lower.push(BoundEntry::new(
                    quotient_gen_lower(i)?,
                    labels::QUOTIENT_GENERATORS,
                ));
            }
        }
        BoundTarget::Pair { larger, smaller } => lower.push(BoundEntry::new(
            pair_lower(larger, smaller)?,
            labels::PAIR_GENERATORS,
        )),
    }

    match target.family() {
        Some(Family::LineIdeal) => {
            depth = Some(BoundEntry::new(
                depth_line_quotient(n)? + 1,
                labels::LINE_DEPTH,
            ));
        }
        Some(Family::CycleIdeal) => {
            depth = Some(BoundEntry::new(
                depth_cycle_quotient(n)? + 1,
                labels::CYCLE_DEPTH,
            ));
        }
        Some(Family::LineQuotient) => {
            let v = sdepth_line_quotient(n)?;
            lower.push(BoundEntry::new(v, labels::LINE_SDEPTH));
            upper.push(BoundEntry::new(v, labels::LINE_SDEPTH));
            exact = Some(BoundEntry::new(v, labels::LINE_SDEPTH));
            depth = Some(BoundEntry::new(depth_line_quotient(n)?, labels::LINE_DEPTH));
        }
        Some(Family::CycleQuotient) => {
            let b = sdepth_cycle_quotient_bracket(n)?;
            lower.push(BoundEntry::new(b.lower, labels::CYCLE_QUOTIENT_LOWER));
            if n % 3 == 1 {
                upper.push(BoundEntry::new(b.upper, labels::CYCLE_QUOTIENT_UPPER));
                if let Some(v) = b.exact {
                    lower.push(BoundEntry::new(v, labels::COMPUTED_CYCLES));
                    upper.push(BoundEntry::new(v, labels::COMPUTED_CYCLES));
                    exact = Some(BoundEntry::new(v, labels::COMPUTED_CYCLES));
                }
            } else {
                upper.push(BoundEntry::new(b.upper, labels::CYCLE_QUOTIENT_EXACT));
                exact = Some(BoundEntry::new(b.upper, labels::CYCLE_QUOTIENT_EXACT));
            }
            depth = Some(BoundEntry::new(
                depth_cycle_quotient(n)?,
                labels::CYCLE_DEPTH,
            ));
        }
        Some(Family::CycleModLine) => {
            let v = sdepth_cycle_mod_line(n)?;
            lower.push(BoundEntry::new(v, labels::CYCLE_MOD_LINE));
            upper.push(BoundEntry::new(v, labels::CYCLE_MOD_LINE));
            exact = Some(BoundEntry::new(v, labels::CYCLE_MOD_LINE));
            depth = Some(BoundEntry::new(v, labels::CYCLE_MOD_LINE));
        }
        None => {}
    }

    let mut finite = true;
    if target.is_squarefree() && n <= DEFAULT_MAX_VARS {
        let poset = target.poset()?;
        if poset.is_empty() {
            finite = false;
        } else {
            upper.push(BoundEntry::new(
                alpha_upper_bound(&poset.level_counts()) as i64,
                labels::ALPHA_TEST,
            ));
            if let Some(cut) = empty_cut_bound(&poset) {
                upper.push(BoundEntry::new(cut as i64, labels::EMPTY_CUT));
            }
        }
    }
    if !finite {
        upper.clear();
        exact = None;
    }

    let mut report = BoundReport {
        target: target.describe(),
        n,
        lower_bounds: lower,
        upper_bounds: upper,
        exact,
        depth_formula: depth,
        stanley_conjecture_witnessed: None,
        finite,
    };
    if let Some(d) = &report.depth_formula {
        report.stanley_conjecture_witnessed = Some(report.best_lower() >= d.value);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{minimalize, veronese_ideal, Monomial};

    #[test]
    fn generator_bounds() {
        assert_eq!(okazaki_lower(&line_ideal(7).unwrap()).unwrap(), 4);
        assert_eq!(okazaki_lower(&cycle_ideal(8).unwrap()).unwrap(), 4);
        let principal = minimalize(vec![Monomial::new(vec![1, 2, 0, 1])], 4).unwrap();
        assert_eq!(okazaki_lower(&principal).unwrap(), 4);
        assert!(okazaki_lower(&MonomialIdeal::zero(3)).is_err());
        assert!(okazaki_lower(&MonomialIdeal::unit(3)).is_err());

        assert_eq!(quotient_gen_lower(&line_ideal(4).unwrap()).unwrap(), 1);
        assert_eq!(quotient_gen_lower(&cycle_ideal(3).unwrap()).unwrap(), 0);
        assert_eq!(
            quotient_gen_lower(&veronese_ideal(5, 3).unwrap()).unwrap(),
            -5
        );
    }

    #[test]
    fn pair_bounds() {
        for n in 3..=12 {
            let v = pair_lower(&cycle_ideal(n).unwrap(), &line_ideal(n).unwrap()).unwrap();
            assert_eq!(v, 1);
            assert!(v <= sdepth_cycle_mod_line(n).unwrap());
        }
        let i = line_ideal(5).unwrap();
        assert_eq!(pair_lower(&i, &i).unwrap(), 5 - 4);
        let j = minimalize(
            vec![
                Monomial::from_support(3, &[1]).unwrap(),
                Monomial::from_support(3, &[2, 3]).unwrap(),
            ],
            3,
        )
        .unwrap();
        assert_eq!(pair_lower(&j, &line_ideal(3).unwrap()).unwrap(), 1);
        assert!(pair_lower(&line_ideal(3).unwrap(), &j).is_err());
        assert_eq!(sum_quotient_lower(4, 3, 7), 0);
        assert_eq!(sum_quotient_lower(2, 3, 5), 0);
    }

    #[test]
    fn family_formulas() {
        assert_eq!(depth_line_quotient(3).unwrap(), 1);
        assert_eq!(depth_line_quotient(4).unwrap(), 2);
        assert_eq!(depth_line_quotient(1).unwrap(), 1);
        assert_eq!(depth_cycle_quotient(3).unwrap(), 1);
        assert_eq!(depth_cycle_quotient(7).unwrap(), 2);
        assert_eq!(depth_cycle_quotient(10).unwrap(), 3);
        assert!(depth_cycle_quotient(2).is_err());
        assert_eq!(sdepth_line_quotient(6).unwrap(), 2);
        assert_eq!(sdepth_line_quotient(7).unwrap(), 3);
        assert_eq!(sdepth_cycle_mod_line(3).unwrap(), 2);
        assert_eq!(sdepth_cycle_mod_line(6).unwrap(), 3);
        assert_eq!(sdepth_cycle_mod_line(10).unwrap(), 4);

        assert_eq!(sdepth_cycle_quotient_bracket(9).unwrap().exact, Some(3));
        assert_eq!(sdepth_cycle_quotient_bracket(7).unwrap().exact, Some(2));
        let b16 = sdepth_cycle_quotient_bracket(16).unwrap();
        assert_eq!((b16.lower, b16.upper, b16.exact), (5, 6, None));
    }

    #[test]
    fn cycle_beta_values() {
        let row: Vec<i128> = (0..=4).map(|t| cycle_beta_closed(7, t)).collect();
        assert_eq!(row, vec![1, 7, 14, 7, 0]);
        assert_eq!(cycle_beta_closed(4, 2), 2);
    }

    #[test]
    fn reports() {
        let r = bound_report(&BoundTarget::Quotient(cycle_ideal(7).unwrap())).unwrap();
        assert_eq!(r.best_lower(), 2);
        assert_eq!(r.best_upper(), Some(2));
        assert!(r
            .upper_bounds
            .iter()
            .any(|b| b.provenance == labels::ALPHA_TEST && b.value == 2));
        assert_eq!(r.stanley_conjecture_witnessed, Some(true));

        let r = bound_report(&BoundTarget::Ideal(line_ideal(9).unwrap())).unwrap();
        assert_eq!(r.lower_bounds[0], BoundEntry::new(5, labels::OKAZAKI));

        let r = bound_report(&BoundTarget::Quotient(cycle_ideal(12).unwrap())).unwrap();
        assert_eq!(
            r.exact,
            Some(BoundEntry::new(4, labels::CYCLE_QUOTIENT_EXACT))
        );

        let v = bound_report(&BoundTarget::Quotient(veronese_ideal(5, 3).unwrap())).unwrap();
        assert_eq!(v.lower_bounds[0].value, -5);
        assert_eq!(v.lower_bounds[0].display, 0);

        let i = line_ideal(4).unwrap();
        let same = bound_report(&BoundTarget::Pair {
            larger: i.clone(),
            smaller: i,
        })
        .unwrap();
        assert!(!same.finite);
        assert!(same.upper_bounds.is_empty());
    }
}
