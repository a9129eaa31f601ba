//! Uniform samplers, exhaustive enumeration, and the subdivision route
//! through one-reduced trees.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::codec::{decode_unchecked, OrderKind};
use crate::error::{Error, Result};
use crate::lattice::rotate_to_tree_sequence;
use crate::rng::RandomStream;
use crate::seq::ChildSequence;
use crate::tree::PlaneTree;

pub const DEFAULT_ENUM_CAP: u64 = 1_000_000;

/// Shuffle `c`, rotate to the tree sequence and decode with `kind`. The
/// result is uniform over plane trees with child multiset `c` for every kind.
pub fn sample_uniform(c: &ChildSequence, rng: &mut RandomStream, kind: OrderKind) -> PlaneTree {
    let mut buf = c.entries().to_vec();
    rng.shuffle(&mut buf);
    rotate_to_tree_sequence(&mut buf);
    decode_unchecked(kind, &buf)
}

/// A uniformly shuffled copy of `c` (the permutation applied is uniform).
pub fn shuffled(c: &ChildSequence, rng: &mut RandomStream) -> ChildSequence {
    let mut buf = c.entries().to_vec();
    rng.shuffle(&mut buf);
    ChildSequence::from_trusted(buf)
}

/// Every plane tree with child multiset `c`, each once, as decoded from its
/// lex-DFS tree sequence. Fails once more than `cap` trees are produced.
pub fn enumerate_trees(c: &ChildSequence, cap: u64) -> Result<Vec<PlaneTree>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for_each_tree_sequence(c, |code| {
        if seen.insert(code.to_vec()) {
            if out.len() as u64 >= cap {
                return Err(Error::CapExceeded { cap });
            }
            out.push(decode_unchecked(OrderKind::LexDfs, code));
        }
        Ok(())
    })?;
    Ok(out)
}

/// Visit every distinct ordering of the multiset `c` that is a tree
/// sequence, in lexicographic order, by backtracking with prefix pruning.
pub fn for_each_tree_sequence<F>(c: &ChildSequence, mut visit: F) -> Result<()>
where
    F: FnMut(&[usize]) -> Result<()>,
{
    let hist = c.histogram();
    let keys: Vec<usize> = hist.counts.keys().copied().collect();
    let mut remain: Vec<usize> = hist.counts.values().copied().collect();
    let n = c.len();

    let mut picked: Vec<usize> = Vec::with_capacity(n);
    let mut code: Vec<usize> = Vec::with_capacity(n);
    let mut sums = vec![0i64; n + 1];
    let mut next_key = vec![0usize; n + 1];
    let mut pos = 0usize;
    loop {
        if pos == n {
            visit(&code)?;
        } else {
            let found = (next_key[pos]..keys.len())
                .find(|&k| remain[k] > 0 && (pos + 1 == n || sums[pos] + keys[k] as i64 > 0));
            if let Some(k) = found {
                remain[k] -= 1;
                picked.push(k);
                code.push(keys[k]);
                sums[pos + 1] = sums[pos] + keys[k] as i64 - 1;
                pos += 1;
                next_key[pos] = 0;
                continue;
            }
        }
        if pos == 0 {
            return Ok(());
        }
        pos -= 1;
        let k = picked.pop().expect("one pick per filled position");
        code.pop();
        remain[k] += 1;
        next_key[pos] = k + 1;
    }
}

/// Uniform weak composition of `total` into `parts` non-negative parts
/// (stars and bars over a uniform subset of bar positions).
pub fn random_composition(total: usize, parts: usize, rng: &mut RandomStream) -> Vec<usize> {
    assert!(parts >= 1, "a composition needs at least one part");
    let len = total + parts - 1;
    let mut bars = rand::seq::index::sample(rng, len, parts - 1).into_vec();
    bars.sort_unstable();
    let mut out = Vec::with_capacity(parts);
    let mut prev = 0usize;
    for b in bars {
        out.push(b - prev);
        prev = b + 1;
    }
    out.push(len - prev);
    out
}

/// Unary-node counts per slot of a reduced tree. Slot `j < n*-1` belongs to
/// the edge above the node of lex-DFS rank `j + 1` (0-based, root is rank
/// 0); the last slot is the chain inserted above the root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubdivisionPlan {
    pub slots: Vec<usize>,
}

impl SubdivisionPlan {
    pub fn zeros(len: usize) -> Self {
        Self { slots: vec![0; len] }
    }

    pub fn total(&self) -> usize {
        self.slots.iter().sum()
    }

    pub fn root_slot(&self) -> usize {
        *self.slots.last().expect("plans have at least one slot")
    }
}

pub fn apply_subdivision(reduced: &PlaneTree, plan: &SubdivisionPlan) -> Result<PlaneTree> {
    let n = reduced.len();
    if plan.slots.len() != n {
        return Err(Error::PlanLengthMismatch { expected: n, got: plan.slots.len() });
    }
    if let Some(node) = (0..n).find(|&u| reduced.num_children(u) == 1) {
        return Err(Error::UnaryNodeInReduced { node });
    }
    let mut rank = vec![0; n];
    for (i, u) in reduced.lex_order().into_iter().enumerate() {
        rank[u] = i;
    }

    let total = n + plan.total();
    let mut children: Vec<Vec<usize>> = Vec::with_capacity(total);
    children.extend((0..n).map(|_| Vec::new()));
    // append a chain of `len` unary nodes ending at `bottom`, return its top
    let chain = |children: &mut Vec<Vec<usize>>, len: usize, bottom: usize| {
        let mut below = bottom;
        for _ in 0..len {
            children.push(vec![below]);
            below = children.len() - 1;
        }
        below
    };
    for u in 0..n {
        for &v in reduced.children(u) {
            let top = chain(&mut children, plan.slots[rank[v] - 1], v);
            children[u].push(top);
        }
    }
    let root = chain(&mut children, plan.root_slot(), reduced.root());
    PlaneTree::from_child_lists(root, &children)
}

/// Contract every maximal unary chain, returning the reduced tree and the
/// chain lengths as a plan, so that `apply_subdivision` inverts it.
pub fn reduce_tree(t: &PlaneTree) -> Result<(PlaneTree, SubdivisionPlan)> {
    let n = t.len();
    let descend = |mut x: usize| {
        let mut skipped = 0;
        while t.num_children(x) == 1 {
            x = t.children(x)[0];
            skipped += 1;
        }
        (x, skipped)
    };
    let (top, root_chain) = descend(t.root());
    if t.num_children(top) == 0 {
        return Err(Error::PurePath);
    }

    let mut new_id = vec![usize::MAX; n];
    let mut kept = vec![top];
    new_id[top] = 0;
    let mut children: Vec<Vec<usize>> = vec![Vec::new()];
    let mut edge_len: Vec<usize> = vec![0];
    let mut head = 0;
    while head < kept.len() {
        let u = kept[head];
        for &x in t.children(u) {
            let (v, skipped) = descend(x);
            new_id[v] = kept.len();
            kept.push(v);
            children.push(Vec::new());
            edge_len.push(skipped);
            children[new_id[u]].push(new_id[v]);
        }
        head += 1;
    }
    let reduced = PlaneTree::from_child_lists(0, &children)?;

    let mut slots = vec![0; kept.len()];
    for (rank, v) in reduced.lex_order().into_iter().enumerate().skip(1) {
        slots[rank - 1] = edge_len[v];
    }
    *slots.last_mut().expect("non-empty") = root_chain;
    Ok((reduced, SubdivisionPlan { slots }))
}

/// Sample a uniform tree on the one-reduced sequence, then re-insert the
/// `n_1` unary nodes with a uniform composition over the `n*` slots.
pub fn sample_subdivision(c: &ChildSequence, rng: &mut RandomStream) -> Result<PlaneTree> {
    let reduced_seq = c.one_reduce()?;
    let reduced = sample_uniform(&reduced_seq, rng, OrderKind::LexDfs);
    let slots = random_composition(c.len() - reduced_seq.len(), reduced_seq.len(), rng);
    apply_subdivision(&reduced, &SubdivisionPlan { slots })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stats::profile;
    use std::collections::HashMap;

    fn seq(v: &[usize]) -> ChildSequence {
        ChildSequence::new(v.to_vec()).unwrap()
    }

    fn tree(root: usize, children: &[Vec<usize>]) -> PlaneTree {
        PlaneTree::from_child_lists(root, children).unwrap()
    }

    #[test]
    fn single_node_sample() {
        let mut rng = RandomStream::new(5);
        for kind in OrderKind::ALL {
            assert_eq!(sample_uniform(&seq(&[0]), &mut rng, kind).len(), 1);
        }
    }

    #[test]
    fn enumerate_examples() {
        assert_eq!(enumerate_trees(&seq(&[2, 0, 0]), DEFAULT_ENUM_CAP).unwrap().len(), 1);
        assert_eq!(enumerate_trees(&seq(&[2, 2, 0, 0, 0]), DEFAULT_ENUM_CAP).unwrap().len(), 2);
        assert_eq!(enumerate_trees(&seq(&[2, 1, 0, 0]), DEFAULT_ENUM_CAP).unwrap().len(), 3);
        assert_eq!(enumerate_trees(&seq(&[2, 2, 1, 0, 0, 0]), 9), Err(Error::CapExceeded { cap: 9 }));
        assert_eq!(enumerate_trees(&seq(&[2, 2, 1, 0, 0, 0]), 10).unwrap().len(), 10);
    }

    #[test]
    fn enumerate_long_path_without_recursion() {
        let mut v = vec![1; 50_000];
        v.push(0);
        let trees = enumerate_trees(&seq(&v), 1).unwrap();
        assert_eq!(crate::stats::height(&trees[0]), 50_000);
    }

    #[test]
    fn composition_examples() {
        let mut rng = RandomStream::new(11);
        assert_eq!(random_composition(0, 3, &mut rng), vec![0, 0, 0]);
        assert_eq!(random_composition(4, 1, &mut rng), vec![4]);

        let trials = 30_000;
        let p = 1.0 / 3.0;
        let radius = 4.0 * (p * (1.0 - p) / trials as f64).sqrt();
        for (total, parts, expected) in [
            (2, 2, vec![vec![0, 2], vec![1, 1], vec![2, 0]]),
            (1, 3, vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]),
        ] {
            let mut counts: HashMap<Vec<usize>, usize> = HashMap::new();
            for _ in 0..trials {
                *counts.entry(random_composition(total, parts, &mut rng)).or_default() += 1;
            }
            assert_eq!(counts.len(), 3);
            for e in expected {
                let f = counts[&e] as f64 / trials as f64;
                assert!((f - p).abs() < radius, "{e:?}: {f}");
            }
        }
    }

    #[test]
    fn subdivision_examples() {
        let cherry = tree(0, &[vec![1, 2], vec![], vec![]]);
        let t = apply_subdivision(&cherry, &SubdivisionPlan { slots: vec![1, 0, 0] }).unwrap();
        assert_eq!(t, tree(0, &[vec![1, 3], vec![2], vec![], vec![]]));

        let t = apply_subdivision(&cherry, &SubdivisionPlan { slots: vec![0, 0, 1] }).unwrap();
        let above = tree(0, &[vec![1], vec![2, 3], vec![], vec![]]);
        assert_eq!(t, above);

        assert_eq!(apply_subdivision(&cherry, &SubdivisionPlan::zeros(3)).unwrap(), cherry);
        assert_eq!(
            apply_subdivision(&cherry, &SubdivisionPlan::zeros(2)),
            Err(Error::PlanLengthMismatch { expected: 3, got: 2 })
        );
        let unary = tree(0, &[vec![1], vec![]]);
        assert!(matches!(
            apply_subdivision(&unary, &SubdivisionPlan::zeros(2)),
            Err(Error::UnaryNodeInReduced { node: 0 })
        ));
    }

    #[test]
    fn reduce_examples() {
        let cherry = tree(0, &[vec![1, 2], vec![], vec![]]);
        let above = tree(0, &[vec![1], vec![2, 3], vec![], vec![]]);
        let (r, plan) = reduce_tree(&above).unwrap();
        assert_eq!((r, plan.slots), (cherry.clone(), vec![0, 0, 1]));

        let (r, plan) = reduce_tree(&cherry).unwrap();
        assert_eq!((r, plan.slots), (cherry.clone(), vec![0, 0, 0]));

        // R{U{U'{leaf}}, leaf}
        let t = tree(0, &[vec![1, 4], vec![2], vec![3], vec![], vec![]]);
        let (r, plan) = reduce_tree(&t).unwrap();
        assert_eq!((r, plan.slots), (cherry, vec![2, 0, 0]));

        assert_eq!(reduce_tree(&tree(0, &[vec![1], vec![]])), Err(Error::PurePath));
        assert_eq!(reduce_tree(&PlaneTree::single_node()), Err(Error::PurePath));
    }

    #[test]
    fn subdivision_depth_identity() {
        // depth(v) = depth*(v) + root chain + chains on the path to v
        let mut rng = RandomStream::new(99);
        let c: ChildSequence = "3^10,1^25,0^21".parse().unwrap();
        for _ in 0..50 {
            let t = sample_subdivision(&c, &mut rng).unwrap();
            assert_eq!(t.canonical_code().histogram(), c.histogram());
            let (r, plan) = reduce_tree(&t).unwrap();
            assert_eq!(apply_subdivision(&r, &plan).unwrap(), t);
            let rebuilt = apply_subdivision(&r, &plan).unwrap();
            let mut rank = vec![0; r.len()];
            for (i, u) in r.lex_order().into_iter().enumerate() {
                rank[u] = i;
            }
            // reduced nodes keep their ids in `apply_subdivision`
            for v in 0..r.len() {
                let mut expected = r.depth(v) + plan.root_slot();
                let mut x = v;
                while let Some(p) = r.parent(x) {
                    expected += plan.slots[rank[x] - 1];
                    x = p;
                }
                assert_eq!(rebuilt.depth(v), expected);
            }
        }
    }

    #[test]
    fn subdivision_supports_every_tree() {
        // (2,1,0,0) has 3 trees, (2,1,1,0,0) has 6; each plan reaches a distinct one
        for (c, count) in [(seq(&[2, 1, 0, 0]), 3), (seq(&[2, 1, 1, 0, 0]), 6)] {
            let mut rng = RandomStream::new(1);
            let seen: HashSet<PlaneTree> =
                (0..2_000).map(|_| sample_subdivision(&c, &mut rng).unwrap()).collect();
            assert_eq!(seen.len(), count);
            let all: HashSet<PlaneTree> =
                enumerate_trees(&c, DEFAULT_ENUM_CAP).unwrap().into_iter().collect();
            assert_eq!(seen, all);
        }
    }

    #[test]
    fn no_ones_means_no_subdivision() {
        let mut rng = RandomStream::new(8);
        let c = seq(&[2, 2, 0, 0, 0]);
        for _ in 0..20 {
            let t = sample_subdivision(&c, &mut rng).unwrap();
            assert_eq!(profile(&t).z, vec![1, 2, 2]);
        }
        assert_eq!(sample_subdivision(&seq(&[1, 0]), &mut rng), Err(Error::DegenerateSequence));
    }
}
