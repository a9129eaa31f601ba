//! Partial-sum paths, the tree-sequence predicate and the cycle-lemma
//! rotation.

use crate::seq::ChildSequence;

/// `S_0, ..., S_n` with `S_i = sum_{j <= i} (c_j - 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatticePath {
    values: Vec<i64>,
}

impl LatticePath {
    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn max(&self) -> i64 {
        self.values.iter().copied().max().unwrap_or(0)
    }

    pub fn max_abs(&self) -> i64 {
        self.values.iter().map(|s| s.abs()).max().unwrap_or(0)
    }

    /// Minimum over `S_0, ..., S_upto` (inclusive, clamped to the path length).
    pub fn prefix_min(&self, upto: usize) -> i64 {
        let end = upto.min(self.values.len() - 1);
        self.values[..=end].iter().copied().min().unwrap_or(0)
    }

    /// Least index attaining the overall minimum.
    pub fn least_argmin(&self) -> usize {
        let mut best = 0;
        for (i, &s) in self.values.iter().enumerate() {
            if s < self.values[best] {
                best = i;
            }
        }
        best
    }
}

pub fn partial_sums(c: &ChildSequence) -> LatticePath {
    partial_sums_of(c.entries())
}

pub(crate) fn partial_sums_of(entries: &[usize]) -> LatticePath {
    let mut values = Vec::with_capacity(entries.len() + 1);
    let mut s = 0i64;
    values.push(s);
    for &c in entries {
        s += c as i64 - 1;
        values.push(s);
    }
    LatticePath { values }
}

/// First index `k` in `1..n` with `S_k < 0`, if any.
pub(crate) fn first_negative_prefix(entries: &[usize]) -> Option<usize> {
    let n = entries.len();
    let mut s = 0i64;
    for (i, &c) in entries.iter().enumerate().take(n.saturating_sub(1)) {
        s += c as i64 - 1;
        if s < 0 {
            return Some(i + 1);
        }
    }
    None
}

/// True iff `S_k >= 0` for all `1 <= k < n`.
pub fn is_tree_sequence(c: &ChildSequence) -> bool {
    first_negative_prefix(c.entries()).is_none()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rotation {
    /// Least argmin of `S_0..S_n`; always in `1..=n` since `S_n = -1 < S_0`.
    /// `pivot == n` is the identity rotation.
    pub pivot: usize,
    /// `(c_{k+1}, ..., c_n, c_1, ..., c_k)`.
    pub rotated: ChildSequence,
}

/// The unique cyclic shift of `c` that is a tree sequence.
pub fn tree_rotation(c: &ChildSequence) -> Rotation {
    let pivot = least_argmin_of(c.entries());
    Rotation { pivot, rotated: ChildSequence::from_trusted(rotate_left(c.entries(), pivot)) }
}

/// Same as [`tree_rotation`] but rotates a scratch buffer in place.
pub(crate) fn rotate_to_tree_sequence(entries: &mut [usize]) -> usize {
    let pivot = least_argmin_of(entries);
    entries.rotate_left(pivot % entries.len());
    pivot
}

fn least_argmin_of(entries: &[usize]) -> usize {
    let (mut s, mut best, mut best_at) = (0i64, 0i64, 0usize);
    for (i, &c) in entries.iter().enumerate() {
        s += c as i64 - 1;
        if s < best {
            best = s;
            best_at = i + 1;
        }
    }
    best_at
}

fn rotate_left(entries: &[usize], k: usize) -> Vec<usize> {
    let k = k % entries.len();
    entries[k..].iter().chain(&entries[..k]).copied().collect()
}

/// Cyclic shift that starts reading at position `1 + floor(n/2)`.
pub fn half_shift(c: &ChildSequence) -> ChildSequence {
    ChildSequence::from_trusted(rotate_left(c.entries(), c.len() / 2))
}

/// `(p)_q`: `p mod q`, except that multiples of `q` map to `q`.
pub fn mod_index(p: u64, q: u64) -> u64 {
    assert!(p >= 1 && q >= 1, "mod_index takes positive arguments");
    match p % q {
        0 => q,
        r => r,
    }
}

/// Outcome of the extremal checks for one sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtremeCheck {
    /// `max_i S_i` of the tree rotation.
    pub rotated_max: i64,
    pub halfsplit_holds: bool,
    pub quarter_holds: bool,
}

/// Check `max |S_i(c)| >= m/2` and the half-window alternative
/// `max_{i <= n/2} |S_i(c)| >= m/4 or max_{i <= ceil(n/2)} |S_i(half_shift(c))| >= m/4`,
/// where `m` is the maximum of the rotated path. Integer arithmetic only.
pub fn check_extremes(c: &ChildSequence) -> ExtremeCheck {
    check_extremes_with_shift(c, c.len() / 2)
}

/// As [`check_extremes`], but with the second window read from a shift of
/// `shift` positions. Used to compare shift conventions.
pub fn check_extremes_with_shift(c: &ChildSequence, shift: usize) -> ExtremeCheck {
    let n = c.len();
    let m = partial_sums(&tree_rotation(c).rotated).max();
    let path = partial_sums(c);
    let halfsplit_holds = 2 * path.max_abs() >= m;

    let first = path.values()[..=n / 2].iter().map(|s| s.abs()).max().unwrap_or(0);
    let shifted = partial_sums_of(&rotate_left(c.entries(), shift));
    let second = shifted.values()[..=n.div_ceil(2)].iter().map(|s| s.abs()).max().unwrap_or(0);
    let quarter_holds = 4 * first >= m || 4 * second >= m;
    ExtremeCheck { rotated_max: m, halfsplit_holds, quarter_holds }
}
