//! Integer partitions and the box statistics built on them.
//!
//! Partitions are stored without trailing zeros; every index accessor treats
//! rows and columns beyond the stored support as zero, so arm and leg lengths
//! are defined (and possibly negative) for cells outside the diagram.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::{rpow, Error, Rational, Result};

/// A weakly decreasing sequence of positive integers.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Trailing zeros are stripped; any other violation of the ordering is an error.
    pub fn new(mut parts: Vec<u32>) -> Result<Self> {
        while parts.last() == Some(&0) {
            parts.pop();
        }
        if parts.windows(2).any(|w| w[0] < w[1]) || parts.contains(&0) {
            return Err(Error::Invalid(format!(
                "{parts:?} is not a weakly decreasing sequence"
            )));
        }
        Ok(Partition { parts })
    }

    /// Sort arbitrary part sizes into a partition (zeros dropped).
    pub fn from_unsorted(mut parts: Vec<u32>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// `λ_i` with 1-based `i`; zero outside the support (and for `i = 0`).
    pub fn part(&self, i: i64) -> i64 {
        if i < 1 {
            return 0;
        }
        self.parts.get((i - 1) as usize).map_or(0, |&p| p as i64)
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.parts.iter().sum()
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=first)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// `λ'_j`, the length of column `j`.
    pub fn column(&self, j: i64) -> i64 {
        if j < 1 {
            return 0;
        }
        self.parts.iter().filter(|&&p| p as i64 >= j).count() as i64
    }

    pub fn arm(&self, i: i64, j: i64) -> i64 {
        self.part(i) - j
    }

    pub fn leg(&self, i: i64, j: i64) -> i64 {
        self.column(j) - i
    }

    /// Cells `(i, j)` of the diagram, row by row, 1-based.
    pub fn cells(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| (1..=p as i64).map(move |c| (r as i64 + 1, c)))
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n(&self) -> i64 {
        self.parts
            .iter()
            .enumerate()
            .map(|(i, &p)| i as i64 * p as i64)
            .sum()
    }

    /// Diagram containment `self ⊂ other`.
    pub fn is_contained_in(&self, other: &Partition) -> bool {
        self.parts.len() <= other.parts.len()
            && self.parts.iter().zip(&other.parts).all(|(a, b)| a <= b)
    }

    /// Sum of the parts `λ_j` with `j ≡ i + 1 (mod n)`.
    pub fn cyclic_weight(&self, i: i64, n: u32) -> u32 {
        let n = n as i64;
        self.parts
            .iter()
            .enumerate()
            .filter(|(idx, _)| ((*idx as i64 + 1) - (i + 1)).rem_euclid(n) == 0)
            .map(|(_, &p)| p)
            .sum()
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return f.write_str("-");
        }
        let text: Vec<String> = self.parts.iter().map(u32::to_string).collect();
        f.write_str(&text.join(","))
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "-" || s.is_empty() {
            return Ok(Partition::empty());
        }
        let parts = s
            .split(',')
            .map(|p| {
                p.trim()
                    .parse::<u32>()
                    .map_err(|_| Error::Parse(format!("bad partition part {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(parts)
    }
}

/// All partitions of exactly `n`, reverse-lexicographic (largest first part first).
pub fn partitions_of(n: u32) -> Vec<Partition> {
    fn rec(remaining: u32, max_part: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition {
                parts: prefix.clone(),
            });
            return;
        }
        for p in (1..=remaining.min(max_part)).rev() {
            prefix.push(p);
            rec(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, n, &mut Vec::new(), &mut out);
    out
}

/// Every partition of size at most `max_size`, ordered by size then reverse-lexicographically.
pub fn enumerate_partitions(max_size: u32) -> impl Iterator<Item = Partition> {
    (0..=max_size).flat_map(partitions_of)
}

/// Compositions of `total` into `parts` nonnegative entries, first entry largest first.
fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return if total == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in (0..=total).rev() {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// Every `n`-tuple of partitions with total size at most `max_total`.
///
/// Order: total size, then the size vector (reverse-lexicographic), then the
/// components in the partition order of [`enumerate_partitions`].
pub fn enumerate_tuples(n: usize, max_total: u32) -> Vec<Vec<Partition>> {
    let mut out = Vec::new();
    for total in 0..=max_total {
        for sizes in compositions(total, n) {
            let mut acc: Vec<Vec<Partition>> = vec![Vec::new()];
            for &s in &sizes {
                let options = partitions_of(s);
                acc = acc
                    .into_iter()
                    .flat_map(|prefix| {
                        options.iter().map(move |p| {
                            let mut next = prefix.clone();
                            next.push(p.clone());
                            next
                        })
                    })
                    .collect();
            }
            out.extend(acc);
        }
    }
    out
}

fn nonzero(value: Rational, what: &str) -> Result<Rational> {
    if value.is_zero() {
        Err(Error::NonGeneric(format!("{what} vanishes")))
    } else {
        Ok(value)
    }
}

/// `c_λ = ∏ (1 - q^{a} t^{ℓ+1})` over the cells of `λ`.
pub fn c_factor(lambda: &Partition, q: &Rational, t: &Rational) -> Rational {
    lambda.cells().fold(Rational::one(), |acc, (i, j)| {
        acc * (Rational::one() - rpow(q, lambda.arm(i, j)) * rpow(t, lambda.leg(i, j) + 1))
    })
}

/// `c'_λ = ∏ (1 - q^{a+1} t^{ℓ})` over the cells of `λ`.
pub fn cprime_factor(lambda: &Partition, q: &Rational, t: &Rational) -> Rational {
    lambda.cells().fold(Rational::one(), |acc, (i, j)| {
        acc * (Rational::one() - rpow(q, lambda.arm(i, j) + 1) * rpow(t, lambda.leg(i, j)))
    })
}

/// `1 / c_λ`, failing when the product vanishes.
pub fn c_factor_inverse(lambda: &Partition, q: &Rational, t: &Rational) -> Result<Rational> {
    nonzero(c_factor(lambda, q, t), "c_lambda").map(|c| c.recip())
}

/// `1 / c'_λ`, failing when the product vanishes.
pub fn cprime_factor_inverse(lambda: &Partition, q: &Rational, t: &Rational) -> Result<Rational> {
    nonzero(cprime_factor(lambda, q, t), "c'_lambda").map(|c| c.recip())
}

/// `f_λ = (-1)^{|λ|} q^{n(λ')+|λ|/2} t^{-n(λ)-|λ|/2}`.
///
/// The half-integer powers need square roots of `q` and `t`, so the
/// parameters are passed as `q_sqrt`, `t_sqrt` with `q = q_sqrt²`, `t = t_sqrt²`.
pub fn f_factor(lambda: &Partition, q_sqrt: &Rational, t_sqrt: &Rational) -> Rational {
    let size = lambda.size() as i64;
    let sign = if size % 2 == 0 { Rational::one() } else { -Rational::one() };
    sign * rpow(q_sqrt, 2 * lambda.conjugate().n() + size) * rpow(t_sqrt, -2 * lambda.n() - size)
}
