use proptest::prelude::*;

use ptree_core::codec::{decode, dfs_queue_covers_depth, encode};
use ptree_core::lattice::{
    check_extremes, check_extremes_with_shift, is_tree_sequence, partial_sums, tree_rotation,
};
use ptree_core::sampler::{apply_subdivision, reduce_tree, sample_subdivision, sample_uniform};
use ptree_core::stats::{height, profile, width};
use ptree_core::{ChildSequence, OrderKind, RandomStream};

/// Random child sequence of length `n`: throw `n - 1` children at random
/// parents, which reaches every multiset.
fn child_sequence(max_n: usize) -> impl Strategy<Value = ChildSequence> {
    (1..=max_n, any::<u64>()).prop_map(|(n, seed)| {
        let mut rng = RandomStream::new(seed);
        let mut v = vec![0usize; n];
        for _ in 1..n {
            v[rng.below(n)] += 1;
        }
        ChildSequence::new(v).unwrap()
    })
}

fn with_shuffle() -> impl Strategy<Value = (ChildSequence, u64)> {
    (child_sequence(300), any::<u64>())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn invariants_ignore_order((c, seed) in with_shuffle()) {
        let p = ptree_core::sampler::shuffled(&c, &mut RandomStream::new(seed));
        prop_assert_eq!(p.histogram(), c.histogram());
        prop_assert_eq!(p.invariants(), c.invariants());
        prop_assert_eq!(p.count_trees(), c.count_trees());
    }

    #[test]
    fn one_reduce_idempotent(c in child_sequence(300)) {
        if let Ok(r) = c.one_reduce() {
            prop_assert_eq!(r.ones(), 0);
            prop_assert_eq!(r.len(), c.len() - c.ones());
            prop_assert_eq!(r.one_reduce().unwrap(), r);
        }
    }

    #[test]
    fn rotation_is_a_tree_sequence((c, seed) in with_shuffle()) {
        let p = ptree_core::sampler::shuffled(&c, &mut RandomStream::new(seed));
        let r = tree_rotation(&p);
        prop_assert!(is_tree_sequence(&r.rotated));
        let s = partial_sums(&r.rotated);
        let n = p.len();
        prop_assert!(s.values()[..n].iter().all(|&x| x >= 0));
        prop_assert_eq!(s.values()[n], -1);
        let e = check_extremes(&p);
        prop_assert!(e.halfsplit_holds && e.quarter_holds);
        prop_assert!(check_extremes_with_shift(&p, n.div_ceil(2)).quarter_holds);
    }

    #[test]
    fn codecs_round_trip_on_sampled_trees((c, seed) in with_shuffle()) {
        let mut rng = RandomStream::new(seed);
        let t = sample_uniform(&c, &mut rng, OrderKind::Bfs);
        for kind in OrderKind::ALL {
            let q = encode(kind, &t);
            prop_assert!(is_tree_sequence(&q.counts));
            let back = decode(kind, &q.counts).unwrap();
            prop_assert_eq!(&back, &t);
            prop_assert_eq!(encode(kind, &back).counts, q.counts.clone());
        }
        // the mirror tree's lex-DFS code is the rev-DFS code of the tree
        let lex = encode(OrderKind::LexDfs, &t).counts;
        let mirrored = decode(OrderKind::RevDfs, &lex).unwrap();
        prop_assert_eq!(&mirrored, &t.mirror());
        prop_assert_eq!(profile(&mirrored), profile(&t));
        prop_assert_eq!(encode(OrderKind::RevDfs, &t).counts, encode(OrderKind::LexDfs, &t.mirror()).counts);
    }

    #[test]
    fn width_height_sanity((c, seed) in with_shuffle()) {
        let t = sample_uniform(&c, &mut RandomStream::new(seed), OrderKind::RevDfs);
        let (w, h, n) = (width(&t), height(&t), t.len());
        prop_assert!(w * (h + 1) >= n);
        prop_assert!(h < n);
        let qmax = encode(OrderKind::Bfs, &t).max() as usize;
        prop_assert!(w <= qmax && qmax <= 2 * w);
    }

    #[test]
    fn dfs_queues_cover_depth_without_unary_nodes((c, seed) in with_shuffle()) {
        if let Ok(r) = c.one_reduce() {
            let t = sample_uniform(&r, &mut RandomStream::new(seed), OrderKind::LexDfs);
            prop_assert!(dfs_queue_covers_depth(&t));
        }
    }

    #[test]
    fn subdivision_inverts_reduction((c, seed) in with_shuffle()) {
        let mut rng = RandomStream::new(seed);
        if let Ok(t) = sample_subdivision(&c, &mut rng) {
            prop_assert_eq!(t.canonical_code().histogram(), c.histogram());
            let (r, plan) = reduce_tree(&t).unwrap();
            prop_assert_eq!(plan.slots.len(), r.len());
            prop_assert_eq!(plan.total(), c.ones());
            prop_assert_eq!(apply_subdivision(&r, &plan).unwrap(), t);
            prop_assert_eq!(reduce_tree(&r).unwrap().0, r);
        }
    }

    #[test]
    fn parent_listing_round_trip((c, seed) in with_shuffle()) {
        let t = sample_uniform(&c, &mut RandomStream::new(seed), OrderKind::Bfs);
        let text = t.to_parent_listing();
        prop_assert_eq!(ptree_core::PlaneTree::parse_parent_listing(&text).unwrap(), t.clone());
        let code: ChildSequence = t.canonical_code().to_string().parse().unwrap();
        prop_assert_eq!(decode(OrderKind::LexDfs, &code).unwrap(), t);
    }
}

#[test]
fn cycle_lemma_brute_force_on_random_sequences() {
    let mut rng = RandomStream::new(2024);
    for _ in 0..300 {
        let n = 1 + rng.below(300);
        let mut v = vec![0usize; n];
        for _ in 1..n {
            v[rng.below(n)] += 1;
        }
        let c = ChildSequence::new(v.clone()).unwrap();
        let mut good = Vec::new();
        for k in 0..n {
            if is_tree_sequence(&ChildSequence::new(v.clone()).unwrap()) {
                good.push(k);
            }
            v.rotate_left(1);
        }
        assert_eq!(good, vec![tree_rotation(&c).pivot % n]);
    }
}

#[test]
fn deep_path_decodes_iteratively() {
    let mut v = vec![1usize; 200_000];
    v.push(0);
    let c = ChildSequence::new(v).unwrap();
    for kind in OrderKind::ALL {
        let t = decode(kind, &c).unwrap();
        assert_eq!(height(&t), 200_000);
        assert_eq!(encode(kind, &t).counts, c);
    }
}
