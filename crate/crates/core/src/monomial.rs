//! Monomials and monomial ideals of `K[x_1, ..., x_n]`.
//!
//! Variables are 1-based everywhere in the public surface. An ideal is always
//! stored by its minimal generating set in a canonical order, so structural
//! equality of [`MonomialIdeal`] values is ideal equality.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// A monomial given by its exponent vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    exponents: Vec<u32>,
}

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Monomial { exponents }
    }

    /// The constant monomial 1 in `n` variables.
    pub fn one(n: usize) -> Self {
        Monomial {
            exponents: vec![0; n],
        }
    }

    /// The variable `x_j` (1-based).
    pub fn variable(n: usize, j: usize) -> Result<Self> {
        check_index(n, j)?;
        let mut exponents = vec![0; n];
        exponents[j - 1] = 1;
        Ok(Monomial { exponents })
    }

    /// Squarefree monomial `x_σ` for a set given by 1-based indices.
    pub fn from_support(n: usize, support: &[usize]) -> Result<Self> {
        let mut exponents = vec![0; n];
        for &j in support {
            check_index(n, j)?;
            exponents[j - 1] = 1;
        }
        Ok(Monomial { exponents })
    }

    /// Squarefree monomial whose bit `i - 1` in `mask` marks `x_i`.
    pub fn from_mask(n: usize, mask: u64) -> Self {
        let exponents = (0..n).map(|i| ((mask >> i) & 1) as u32).collect();
        Monomial { exponents }
    }

    pub fn n(&self) -> usize {
        self.exponents.len()
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    pub fn degree(&self) -> u64 {
        self.exponents.iter().map(|&e| e as u64).sum()
    }

    pub fn is_one(&self) -> bool {
        self.exponents.iter().all(|&e| e == 0)
    }

    pub fn is_squarefree(&self) -> bool {
        self.exponents.iter().all(|&e| e <= 1)
    }

    /// Bitmask of the variables dividing this monomial (`None` past 64 variables).
    pub fn support_mask(&self) -> Option<u64> {
        if self.n() > 64 {
            return None;
        }
        Some(
            self.exponents
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .fold(0u64, |acc, (i, _)| acc | (1 << i)),
        )
    }

    /// Lossless mask view; `None` unless squarefree (and at most 64 variables).
    pub fn to_mask(&self) -> Option<u64> {
        if self.is_squarefree() {
            self.support_mask()
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Monomial) -> bool {
        self.n() == other.n()
            && self
                .exponents
                .iter()
                .zip(&other.exponents)
                .all(|(a, b)| a <= b)
    }

    fn canonical_cmp(&self, other: &Monomial) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.exponents.cmp(&self.exponents))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut first = true;
        for (i, &e) in self.exponents.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if e == 1 {
                write!(f, "x{}", i + 1)?;
            } else {
                write!(f, "x{}^{}", i + 1, e)?;
            }
        }
        Ok(())
    }
}

fn check_index(n: usize, j: usize) -> Result<()> {
    if j == 0 || j > n {
        Err(Error::VariableOutOfRange { index: j, n })
    } else {
        Ok(())
    }
}

/// A monomial ideal held by its minimal generators.
///
/// The zero ideal has no generators; the unit ideal has the single generator 1.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonomialIdeal {
    n: usize,
    generators: Vec<Monomial>,
}

impl MonomialIdeal {
    pub fn zero(n: usize) -> Self {
        MonomialIdeal {
            n,
            generators: Vec::new(),
        }
    }

    pub fn unit(n: usize) -> Self {
        MonomialIdeal {
            n,
            generators: vec![Monomial::one(n)],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn generators(&self) -> &[Monomial] {
        &self.generators
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn is_zero(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.generators.len() == 1 && self.generators[0].is_one()
    }

    pub fn is_squarefree(&self) -> bool {
        self.generators.iter().all(Monomial::is_squarefree)
    }

    /// True iff some generator divides `m`.
    pub fn contains(&self, m: &Monomial) -> Result<bool> {
        if m.n() != self.n {
            return Err(Error::AmbientMismatch {
                expected: self.n,
                found: m.n(),
            });
        }
        Ok(self.generators.iter().any(|g| g.divides(m)))
    }

    /// `(I : x_j)`.
    pub fn colon_by_variable(&self, j: usize) -> Result<MonomialIdeal> {
        check_index(self.n, j)?;
        let gens = self
            .generators
            .iter()
            .map(|g| {
                let mut e = g.exponents.clone();
                e[j - 1] = e[j - 1].saturating_sub(1);
                Monomial::new(e)
            })
            .collect();
        minimalize(gens, self.n)
    }

    /// `I + (x_j)`.
    pub fn add_variable(&self, j: usize) -> Result<MonomialIdeal> {
        let mut gens = self.generators.clone();
        gens.push(Monomial::variable(self.n, j)?);
        minimalize(gens, self.n)
    }

    /// Ideal inclusion `self ⊆ other`.
    pub fn is_subideal_of(&self, other: &MonomialIdeal) -> Result<bool> {
        for g in &self.generators {
            if !other.contains(g)? {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

impl fmt::Display for MonomialIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, g) in self.generators.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{g}")?;
        }
        f.write_str(")")
    }
}

/// Drops every generator divisible by another and returns the resulting ideal.
pub fn minimalize(gens: Vec<Monomial>, n: usize) -> Result<MonomialIdeal> {
    if let Some(bad) = gens.iter().find(|g| g.n() != n) {
        return Err(Error::AmbientMismatch {
            expected: n,
            found: bad.n(),
        });
    }
    let mut gens = gens;
    // Degree-ascending order means a divisor is always seen before its multiples.
    gens.sort_by(Monomial::canonical_cmp);
    gens.dedup();
    let mut minimal: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !minimal.iter().any(|m| m.divides(&g)) {
            minimal.push(g);
        }
    }
    Ok(MonomialIdeal {
        n,
        generators: minimal,
    })
}

/// Edge ideal of the path on `n` vertices: `(x_1x_2, ..., x_{n-1}x_n)`.
pub fn line_ideal(n: usize) -> Result<MonomialIdeal> {
    if n < 2 {
        return Err(Error::InvalidParameter(format!(
            "line ideal needs n >= 2, got {n}"
        )));
    }
    let gens = (1..n)
        .map(|i| Monomial::from_support(n, &[i, i + 1]))
        .collect::<Result<Vec<_>>>()?;
    minimalize(gens, n)
}

/// Edge ideal of the cycle on `n` vertices: the line ideal plus `x_n x_1`.
pub fn cycle_ideal(n: usize) -> Result<MonomialIdeal> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!(
            "cycle ideal needs n >= 3, got {n}"
        )));
    }
    let mut gens = line_ideal(n)?.generators;
    gens.push(Monomial::from_support(n, &[n, 1])?);
    minimalize(gens, n)
}

/// Squarefree Veronese ideal: all squarefree monomials of degree `d`.
pub fn veronese_ideal(n: usize, d: usize) -> Result<MonomialIdeal> {
    if d == 0 || d > n {
        return Err(Error::InvalidParameter(format!(
            "veronese degree must satisfy 1 <= d <= n, got n={n}, d={d}"
        )));
    }
    if n > 30 {
        return Err(Error::TooManyVariables { n, max: 30 });
    }
    let gens = (0u64..1 << n)
        .filter(|m| m.count_ones() as usize == d)
        .map(|m| Monomial::from_mask(n, m))
        .collect();
    minimalize(gens, n)
}

/// How the generators of `J` relate to those of a subideal `I`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSplit {
    /// Number of generators of `J` lying in `I`.
    pub r: usize,
    pub common: Vec<Monomial>,
    /// Generators of `J` outside `I`; their classes generate `J/I`.
    pub extra: Vec<Monomial>,
}

pub fn generator_split(j: &MonomialIdeal, i: &MonomialIdeal) -> Result<GeneratorSplit> {
    if j.n != i.n {
        return Err(Error::AmbientMismatch {
            expected: j.n,
            found: i.n,
        });
    }
    for g in &i.generators {
        if !j.contains(g)? {
            return Err(Error::NotContained(g.to_string()));
        }
    }
    let (common, extra): (Vec<_>, Vec<_>) = j
        .generators
        .iter()
        .cloned()
        .partition(|g| i.generators.iter().any(|v| v.divides(g)));
    debug_assert!(common.iter().all(|g| i.generators.contains(g)));
    Ok(GeneratorSplit {
        r: common.len(),
        common,
        extra,
    })
}
