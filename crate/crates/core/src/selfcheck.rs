//! Exhaustive small-size property suite.
//!
//! Each check walks a complete corpus (every child multiset, every child
//! sequence, or every plane tree up to a size) and counts failures.

use std::collections::{HashMap, HashSet};

use num_bigint::BigUint;

use crate::bounds::martingale_diag;
use crate::codec::{decode, dfs_queue_covers_depth, encode, OrderKind};
use crate::exact::exact_tail_violations;
use crate::lattice::{check_extremes, is_tree_sequence, partial_sums, tree_rotation};
use crate::par::map_slice;
use crate::sampler::{apply_subdivision, enumerate_trees, reduce_tree, DEFAULT_ENUM_CAP};
use crate::seq::{all_child_sequences, child_multisets, next_permutation, ChildSequence};
use crate::stats::profile;
use crate::tree::PlaneTree;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertyResult {
    pub name: &'static str,
    pub checked: u64,
    pub violations: u64,
    pub example: Option<String>,
}

impl PropertyResult {
    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SelfcheckConfig {
    /// Largest size for sequence-level checks.
    pub max_n: usize,
    /// Largest size for checks that walk every plane tree.
    pub max_tree_n: usize,
    /// Largest size for exhaustive permutation checks (`n!` work).
    pub max_perm_n: usize,
    pub workers: usize,
}

impl Default for SelfcheckConfig {
    fn default() -> Self {
        Self { max_n: 9, max_tree_n: 8, max_perm_n: 7, workers: 0 }
    }
}

/// Per-item outcome: `None` on success, a description on failure.
fn tally<T: Sync>(
    name: &'static str,
    items: &[T],
    workers: usize,
    check: impl Fn(&T) -> Option<String> + Send + Sync,
) -> PropertyResult {
    let outcomes = map_slice(items, workers, check);
    let violations = outcomes.iter().filter(|o| o.is_some()).count() as u64;
    PropertyResult {
        name,
        checked: items.len() as u64,
        violations,
        example: outcomes.into_iter().flatten().next(),
    }
}

fn multisets_upto(n: usize) -> Vec<ChildSequence> {
    (1..=n).flat_map(child_multisets).collect()
}

fn sequences_upto(n: usize) -> Vec<ChildSequence> {
    (1..=n).flat_map(all_child_sequences).collect()
}

/// Every plane tree with at most `n` nodes.
pub fn trees_upto(n: usize) -> Vec<PlaneTree> {
    multisets_upto(n)
        .iter()
        .flat_map(|c| enumerate_trees(c, DEFAULT_ENUM_CAP).expect("small corpus"))
        .collect()
}

pub fn run_all(cfg: &SelfcheckConfig) -> Vec<PropertyResult> {
    let w = cfg.workers;
    let multisets = multisets_upto(cfg.max_n);
    let sequences = sequences_upto(cfg.max_n);
    let trees = trees_upto(cfg.max_tree_n);
    let one_reduced: Vec<PlaneTree> = multisets_upto(cfg.max_n)
        .into_iter()
        .filter(|c| c.ones() == 0)
        .flat_map(|c| enumerate_trees(&c, DEFAULT_ENUM_CAP).expect("small corpus"))
        .collect();

    vec![
        tally("count_matches_enumeration", &multisets, w, |c| {
            let listed = enumerate_trees(c, DEFAULT_ENUM_CAP).ok()?.len();
            (c.count_trees() != BigUint::from(listed)).then(|| format!("{c}: {listed}"))
        }),
        tally("codec_round_trip", &trees, w, |t| {
            OrderKind::ALL.iter().find_map(|&kind| {
                let code = encode(kind, t).counts;
                let back = decode(kind, &code).ok()?;
                (back != *t || encode(kind, &back).counts != code)
                    .then(|| format!("{kind}: {}", t.canonical_code()))
            })
        }),
        tally("parent_before_child", &trees, w, |t| {
            OrderKind::ALL.iter().find_map(|&kind| {
                let q = encode(kind, t);
                let mut rank = vec![0; t.len()];
                for (i, &u) in q.order.iter().enumerate() {
                    rank[u] = i;
                }
                let bad = (0..t.len()).any(|v| t.parent(v).is_some_and(|p| rank[p] >= rank[v]));
                let n = t.len();
                let queue_ok = q.q[0] == 1
                    && q.q[n] == 0
                    && q.q[..n].iter().all(|&x| x > 0)
                    && partial_sums(&q.counts).values().iter().zip(&q.q).all(|(s, x)| s + 1 == *x);
                (bad || !queue_ok).then(|| format!("{kind}: {}", t.canonical_code()))
            })
        }),
        tally("bfs_queue_tracks_width", &trees, w, |t| {
            let q = encode(OrderKind::Bfs, t);
            let z = profile(t).z;
            let width = *z.iter().max()? as i64;
            let qmax = q.max();
            // after the last node of depth k the queue holds depth k+1
            let mut done = 0;
            let levels_ok = z.iter().enumerate().all(|(k, &zk)| {
                done += zk;
                q.q[done] == z.get(k + 1).copied().unwrap_or(0) as i64
            });
            (!(width <= qmax && qmax <= 2 * width) || !levels_ok).then(|| t.canonical_code().to_string())
        }),
        tally("cycle_lemma_unique_rotation", &sequences, w, |c| {
            let n = c.len();
            let mut v = c.entries().to_vec();
            let mut shifts = Vec::new();
            for k in 0..n {
                if is_tree_sequence(&ChildSequence::new(v.clone()).ok()?) {
                    shifts.push(k);
                }
                v.rotate_left(1);
            }
            let r = tree_rotation(c);
            (shifts != [r.pivot % n] || !is_tree_sequence(&r.rotated)).then(|| c.to_string())
        }),
        tally("halfsplit", &sequences, w, |c| (!check_extremes(c).halfsplit_holds).then(|| c.to_string())),
        tally("quarter", &sequences, w, |c| (!check_extremes(c).quarter_holds).then(|| c.to_string())),
        tally("one_reduced_dfs_depth", &one_reduced, w, |t| {
            (!dfs_queue_covers_depth(t)).then(|| t.canonical_code().to_string())
        }),
        tally("subdivision_round_trip", &trees, w, |t| {
            let (r, plan) = reduce_tree(t).ok()?;
            let back = apply_subdivision(&r, &plan).ok()?;
            let r_plain = reduce_tree(&r).ok()?.1.total();
            (back != *t || r_plain != 0 || plan.total() + r.len() != t.len())
                .then(|| t.canonical_code().to_string())
        }),
        tally("exact_tail_domination", &multisets, w, |c| {
            let v = exact_tail_violations(c, DEFAULT_ENUM_CAP).ok()?;
            v.first().map(|x| format!("{c}: {} m={} p={} bound={}", x.statistic, x.m, x.probability, x.bound))
        }),
        tally("martingale_identities", &sequences, w, |c| {
            let d = martingale_diag(c);
            (!d.violations.is_empty()).then(|| format!("{c}: {:?}", d.violations))
        }),
        kind_independence(cfg.max_perm_n, w),
    ]
}

/// Push all `n!` orderings of each multiset through shuffle-free
/// rotate-and-decode and require every tree to appear equally often, for
/// every order kind.
fn kind_independence(max_n: usize, workers: usize) -> PropertyResult {
    let multisets = multisets_upto(max_n);
    tally("kind_independence", &multisets, workers, |c| {
        let expected: HashSet<PlaneTree> = enumerate_trees(c, DEFAULT_ENUM_CAP).ok()?.into_iter().collect();
        let n = c.len();
        for kind in OrderKind::ALL {
            let mut hist: HashMap<PlaneTree, u64> = HashMap::new();
            let mut perm: Vec<usize> = (0..n).collect();
            loop {
                let permuted: Vec<usize> = perm.iter().map(|&i| c.entries()[i]).collect();
                let rotated = tree_rotation(&ChildSequence::new(permuted).ok()?).rotated;
                *hist.entry(decode(kind, &rotated).ok()?).or_default() += 1;
                if !next_permutation(&mut perm) {
                    break;
                }
            }
            let counts: HashSet<u64> = hist.values().copied().collect();
            let keys: HashSet<PlaneTree> = hist.into_keys().collect();
            if keys != expected || counts.len() != 1 {
                return Some(format!("{c} ({kind})"));
            }
        }
        None
    })
}
