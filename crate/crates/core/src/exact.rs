//! Exact laws of width, height and rotated-path maximum for small child
//! sequences, by full enumeration.
//!
//! Every tree is equally likely, and the rotation of a uniform shuffle is
//! uniform over tree sequences, so the rotated-path maximum is read off the
//! lex-DFS code of each enumerated tree.

use crate::bounds::{height_tail_bound, pathmax_bound, width_tail_bound};
use crate::error::Result;
use crate::lattice::partial_sums;
use crate::sampler::enumerate_trees;
use crate::seq::ChildSequence;
use crate::stats::profile;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactTails {
    pub trees: u64,
    /// `width[w]` trees have width `w`; likewise for the others.
    pub width: Vec<u64>,
    pub height: Vec<u64>,
    pub pathmax: Vec<u64>,
}

fn bump(hist: &mut Vec<u64>, at: usize) {
    if at >= hist.len() {
        hist.resize(at + 1, 0);
    }
    hist[at] += 1;
}

/// Number of entries with value at least `x`.
fn tail_count(hist: &[u64], x: usize) -> u64 {
    hist.iter().skip(x).sum()
}

impl ExactTails {
    pub fn compute(c: &ChildSequence, cap: u64) -> Result<Self> {
        let trees = enumerate_trees(c, cap)?;
        let mut out = Self { trees: trees.len() as u64, width: vec![], height: vec![], pathmax: vec![] };
        for t in &trees {
            let p = profile(t);
            bump(&mut out.width, p.width());
            bump(&mut out.height, p.height());
            let code = t.canonical_code();
            bump(&mut out.pathmax, partial_sums(&code).max() as usize);
        }
        Ok(out)
    }

    /// `(count, total)` for `w >= x`.
    pub fn width_tail(&self, x: usize) -> (u64, u64) {
        (tail_count(&self.width, x), self.trees)
    }

    pub fn height_tail(&self, x: usize) -> (u64, u64) {
        (tail_count(&self.height, x), self.trees)
    }

    pub fn pathmax_tail(&self, x: usize) -> (u64, u64) {
        (tail_count(&self.pathmax, x), self.trees)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TailViolation {
    pub statistic: &'static str,
    pub m: u64,
    pub probability: f64,
    pub bound: f64,
}

/// Compare the exact tails of `c` with the width and height bounds (all
/// `m >= 1`) and the rotated-path bound (all `m >= 0`). Bounds that are
/// undefined for `c` (zero norm, degenerate) are skipped.
pub fn exact_tail_violations(c: &ChildSequence, cap: u64) -> Result<Vec<TailViolation>> {
    let tails = ExactTails::compute(c, cap)?;
    let inv = c.invariants();
    let n = c.len() as u64;
    let mut out = Vec::new();
    let mut check = |statistic, m: u64, (count, total): (u64, u64), bound: Result<f64>| {
        if let Ok(bound) = bound {
            // count/total <= bound, cross-multiplied
            if count as f64 > bound * total as f64 {
                out.push(TailViolation { statistic, m, probability: count as f64 / total as f64, bound });
            }
        }
    };
    // beyond m = n every tail is empty
    for m in 0..=n {
        let x = m as usize;
        if m >= 1 {
            check("width", m, tails.width_tail(x + 2), width_tail_bound(m, &inv));
            check("height", m, tails.height_tail(x), height_tail_bound(m, &inv));
        }
        check("pathmax", m, tails.pathmax_tail(x + 2), pathmax_bound(m, &inv));
    }
    Ok(out)
}
