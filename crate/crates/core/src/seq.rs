//! Child sequences: validation, text format, invariants, exact counting and
//! one-reduction.
//!
//! A child sequence of length `n` is a vector of non-negative integers with
//! sum `n - 1`. Every plane tree on `n` nodes has one (list its nodes in any
//! order and record the number of children of each), and the set of plane
//! trees sharing a child multiset is what the samplers draw from.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Rational;

/// A validated child sequence `(c_1, ..., c_n)` with `sum c_i = n - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct ChildSequence {
    entries: Vec<usize>,
}

impl ChildSequence {
    pub fn new(entries: Vec<usize>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::EmptyInput);
        }
        let sum: i128 = entries.iter().map(|&c| c as i128).sum();
        let expected = entries.len() - 1;
        if sum != expected as i128 {
            return Err(Error::SumMismatch { sum, expected });
        }
        Ok(Self { entries })
    }

    /// Validate signed input, as it arrives from parsers and external callers.
    pub fn validate(entries: &[i64]) -> Result<Self> {
        let mut out = Vec::with_capacity(entries.len());
        for (index, &value) in entries.iter().enumerate() {
            if value < 0 {
                return Err(Error::NegativeEntry { index, value });
            }
            out.push(value as usize);
        }
        Self::new(out)
    }

    /// Build from trusted entries that are known to form a child sequence,
    /// e.g. a cyclic shift or permutation of a validated sequence.
    pub(crate) fn from_trusted(entries: Vec<usize>) -> Self {
        debug_assert_eq!(entries.iter().sum::<usize>() + 1, entries.len());
        Self { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<usize> {
        self.entries
    }

    pub fn ones(&self) -> usize {
        self.entries.iter().filter(|&&c| c == 1).count()
    }

    /// True iff the sequence is a permutation of `(1, ..., 1, 0)`, including
    /// the single-node sequence `(0)`. These have exactly one tree, a path.
    pub fn is_degenerate(&self) -> bool {
        self.ones() + 1 == self.len()
    }

    pub fn histogram(&self) -> DegreeHistogram {
        let mut counts = BTreeMap::new();
        for &c in &self.entries {
            *counts.entry(c).or_insert(0) += 1;
        }
        DegreeHistogram { counts }
    }

    pub fn invariants(&self) -> SequenceInvariants {
        let n = self.len() as i128;
        let norm_sq: u128 = self.entries.iter().map(|&c| (c as u128) * (c as u128)).sum();
        let is_degenerate = self.is_degenerate();
        let one_factor =
            if is_degenerate { None } else { Some(Rational::new(n - 2, n - 1 - self.ones() as i128)) };
        SequenceInvariants {
            n: self.len(),
            norm_sq,
            one_factor,
            mean_sq: Rational::new(norm_sq as i128, n),
            is_degenerate,
        }
    }

    /// Number of plane trees with this child multiset, `(n-1)! / prod_k n_k!`.
    pub fn count_trees(&self) -> BigUint {
        let n = self.len();
        let mut num = factorial(n);
        for &m in self.histogram().counts.values() {
            num /= factorial(m);
        }
        debug_assert!((&num % n).is_zero());
        num / n
    }

    /// Natural log of [`count_trees`](Self::count_trees), for sizes where the
    /// exact integer is unwieldy.
    pub fn ln_count_trees(&self) -> f64 {
        let n = self.len();
        let mut acc = ln_factorial(n - 1);
        for &m in self.histogram().counts.values() {
            acc -= ln_factorial(m);
        }
        acc
    }

    /// Remove every entry equal to one. Fails for degenerate sequences, whose
    /// reduction would have a single node.
    pub fn one_reduce(&self) -> Result<ChildSequence> {
        if self.is_degenerate() {
            return Err(Error::DegenerateSequence);
        }
        let entries: Vec<usize> = self.entries.iter().copied().filter(|&c| c != 1).collect();
        Ok(ChildSequence::from_trusted(entries))
    }
}

impl TryFrom<Vec<usize>> for ChildSequence {
    type Error = Error;

    fn try_from(entries: Vec<usize>) -> Result<Self> {
        Self::new(entries)
    }
}

impl From<ChildSequence> for Vec<usize> {
    fn from(c: ChildSequence) -> Self {
        c.entries
    }
}

impl fmt::Display for ChildSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl FromStr for ChildSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::validate(&parse_entries(s)?)
    }
}

/// Parse the text format: decimal integers separated by commas and/or
/// whitespace, `#` line comments, and `k^m` for `k` repeated `m` times.
pub fn parse_entries(text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for line in text.lines() {
        let line = match line.find('#') {
            Some(pos) => &line[..pos],
            None => line,
        };
        for token in line.split(|ch: char| ch == ',' || ch.is_whitespace()) {
            if token.is_empty() {
                continue;
            }
            let (value, repeat) = match token.split_once('^') {
                Some((v, r)) => (v, parse_int(r, token)?),
                None => (token, 1),
            };
            if repeat < 0 {
                return Err(Error::Parse(format!("negative repeat count in `{token}`")));
            }
            let value = parse_int(value, token)?;
            out.extend(std::iter::repeat_n(value, repeat as usize));
        }
    }
    Ok(out)
}

fn parse_int(s: &str, token: &str) -> Result<i64> {
    s.parse::<i64>().map_err(|_| Error::Parse(format!("bad token `{token}`")))
}

/// Counts `n_k` of entries equal to `k`; absent keys are zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeHistogram {
    pub counts: BTreeMap<usize, usize>,
}

impl DegreeHistogram {
    pub fn get(&self, k: usize) -> usize {
        self.counts.get(&k).copied().unwrap_or(0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SequenceInvariants {
    pub n: usize,
    /// `|c|^2 = sum c_i^2`.
    pub norm_sq: u128,
    /// `1_c = (n-2)/(n-1-n_1)`; absent for degenerate sequences.
    pub one_factor: Option<Rational>,
    /// `a = |c|^2 / n`.
    pub mean_sq: Rational,
    pub is_degenerate: bool,
}

fn factorial(n: usize) -> BigUint {
    (2..=n).fold(BigUint::one(), |acc, k| acc * k)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// Rearrange `v` into the next lexicographically greater permutation.
/// Returns false (leaving `v` sorted ascending) once the last one is passed.
pub fn next_permutation<T: Ord>(v: &mut [T]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Every child multiset on `n` nodes, one representative each (sorted
/// descending). These are the partitions of `n - 1` padded with zeros.
pub fn child_multisets(n: usize) -> Vec<ChildSequence> {
    fn partitions(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for part in (1..=rest.min(max)).rev() {
            cur.push(part);
            partitions(rest - part, part, cur, out);
            cur.pop();
        }
    }
    if n == 0 {
        return Vec::new();
    }
    let mut parts = Vec::new();
    partitions(n - 1, n - 1, &mut Vec::new(), &mut parts);
    parts
        .into_iter()
        .map(|mut p| {
            p.resize(n, 0);
            ChildSequence::from_trusted(p)
        })
        .collect()
}

/// Every child sequence of length `n` (all distinct orderings of every
/// multiset). There are `binom(2n-2, n-1)` of them.
pub fn all_child_sequences(n: usize) -> Vec<ChildSequence> {
    let mut out = Vec::new();
    for ms in child_multisets(n) {
        let mut v = ms.into_entries();
        v.sort_unstable();
        loop {
            out.push(ChildSequence::from_trusted(v.clone()));
            if !next_permutation(&mut v) {
                break;
            }
        }
    }
    out
}
