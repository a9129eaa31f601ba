//! The three bijections between plane trees and tree sequences, and their
//! queue processes.
//!
//! An exploration order lists every node after its parent. Recording child
//! counts along the order gives a tree sequence; the queue process
//! `Q_0 = 1, Q_i = Q_{i-1} - 1 + c_{u_i}` counts nodes discovered but not
//! yet listed, so `Q_i = 1 + S_i` of the recorded counts.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::first_negative_prefix;
use crate::seq::ChildSequence;
use crate::tree::{PlaneTree, SiblingOrder};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    Bfs,
    LexDfs,
    RevDfs,
}

impl OrderKind {
    pub const ALL: [OrderKind; 3] = [OrderKind::Bfs, OrderKind::LexDfs, OrderKind::RevDfs];

    pub fn as_str(self) -> &'static str {
        match self {
            OrderKind::Bfs => "bfs",
            OrderKind::LexDfs => "lex_dfs",
            OrderKind::RevDfs => "rev_dfs",
        }
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for OrderKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "bfs" => Ok(OrderKind::Bfs),
            "lex_dfs" | "lex" | "dfs" => Ok(OrderKind::LexDfs),
            "rev_dfs" | "rev" => Ok(OrderKind::RevDfs),
            _ => Err(Error::Parse(format!("unknown order kind `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueueProcess {
    pub kind: OrderKind,
    /// Node ids `u_1, ..., u_n` in exploration order.
    pub order: Vec<usize>,
    /// `Q_0, ..., Q_n`.
    pub q: Vec<i64>,
    /// `c_{u_1}, ..., c_{u_n}`.
    pub counts: ChildSequence,
}

impl QueueProcess {
    pub fn max(&self) -> i64 {
        self.q.iter().copied().max().unwrap_or(0)
    }
}

pub fn order(kind: OrderKind, t: &PlaneTree) -> Vec<usize> {
    match kind {
        OrderKind::Bfs => t.bfs_order(),
        OrderKind::LexDfs => t.lex_order(),
        OrderKind::RevDfs => t.rev_order(),
    }
}

pub fn encode(kind: OrderKind, t: &PlaneTree) -> QueueProcess {
    let order = order(kind, t);
    let counts: Vec<usize> = order.iter().map(|&u| t.num_children(u)).collect();
    let mut q = Vec::with_capacity(counts.len() + 1);
    let mut cur = 1i64;
    q.push(cur);
    for &c in &counts {
        cur += c as i64 - 1;
        q.push(cur);
    }
    QueueProcess { kind, order, q, counts: ChildSequence::from_trusted(counts) }
}

/// Rebuild the tree whose `kind`-order child counts are `counts`. Node `i`
/// of the result is the `i`-th node in that order.
pub fn decode(kind: OrderKind, counts: &ChildSequence) -> Result<PlaneTree> {
    if let Some(index) = first_negative_prefix(counts.entries()) {
        return Err(Error::NotTreeSequence { index });
    }
    Ok(decode_unchecked(kind, counts.entries()))
}

/// `entries` must be a tree sequence.
pub(crate) fn decode_unchecked(kind: OrderKind, entries: &[usize]) -> PlaneTree {
    let n = entries.len();
    if n == 1 {
        return PlaneTree::single_node();
    }
    let mut parent = vec![None; n];
    match kind {
        OrderKind::Bfs => {
            // children of the i-th listed node are the next c_i unlisted ids
            let mut next = 1;
            for (u, &c) in entries.iter().enumerate() {
                for slot in &mut parent[next..next + c] {
                    *slot = Some(u);
                }
                next += c;
            }
            PlaneTree::from_ranked_parents(parent, entries, SiblingOrder::Ascending)
        }
        OrderKind::LexDfs | OrderKind::RevDfs => {
            // stack of (node, children still to be listed)
            let mut stack: Vec<(usize, usize)> = Vec::new();
            stack.push((0, entries[0]));
            for (v, &c) in entries.iter().enumerate().skip(1) {
                while let Some(&(_, 0)) = stack.last() {
                    stack.pop();
                }
                let top = stack.last_mut().expect("tree sequence keeps an open slot");
                top.1 -= 1;
                parent[v] = Some(top.0);
                stack.push((v, c));
            }
            let siblings =
                if kind == OrderKind::LexDfs { SiblingOrder::Ascending } else { SiblingOrder::Descending };
            PlaneTree::from_ranked_parents(parent, entries, siblings)
        }
    }
}

/// 1-based positions of every node in lex-DFS (`lambda`) and rev-DFS
/// (`rho`) order, indexed by node id.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DfsIndices {
    pub lambda: Vec<usize>,
    pub rho: Vec<usize>,
}

pub fn dfs_indices(t: &PlaneTree) -> DfsIndices {
    let rank = |order: Vec<usize>| {
        let mut r = vec![0; order.len()];
        for (i, u) in order.into_iter().enumerate() {
            r[u] = i + 1;
        }
        r
    };
    DfsIndices { lambda: rank(t.lex_order()), rho: rank(t.rev_order()) }
}

/// Check `2 * max(Q^l_{lambda(u)}, Q^r_{rho(u)}) >= depth(u)` for every node.
/// Holds whenever the tree has no node with exactly one child.
pub fn dfs_queue_covers_depth(t: &PlaneTree) -> bool {
    let idx = dfs_indices(t);
    let ql = encode(OrderKind::LexDfs, t).q;
    let qr = encode(OrderKind::RevDfs, t).q;
    (0..t.len()).all(|u| {
        let best = ql[idx.lambda[u]].max(qr[idx.rho[u]]);
        2 * best >= t.depth(u) as i64
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(v: &[usize]) -> ChildSequence {
        ChildSequence::new(v.to_vec()).unwrap()
    }

    fn small() -> PlaneTree {
        PlaneTree::from_child_lists(0, &[vec![1, 2], vec![], vec![3], vec![]]).unwrap()
    }

    #[test]
    fn encode_examples() {
        let t = small();
        let b = encode(OrderKind::Bfs, &t);
        assert_eq!(b.counts.entries(), &[2, 0, 1, 0]);
        assert_eq!(b.q, vec![1, 2, 1, 1, 0]);
        assert_eq!(encode(OrderKind::LexDfs, &t).counts.entries(), &[2, 0, 1, 0]);
        let r = encode(OrderKind::RevDfs, &t);
        assert_eq!(r.counts.entries(), &[2, 1, 0, 0]);
        assert_eq!(r.q, vec![1, 2, 2, 1, 0]);
    }

    #[test]
    fn decode_examples() {
        let c = seq(&[2, 0, 1, 0]);
        let b = decode(OrderKind::Bfs, &c).unwrap();
        assert_eq!(crate::stats::profile(&b).z, vec![1, 2, 1]);
        assert_eq!(b, small());

        // R{L{L1}, leaf}
        let r = decode(OrderKind::RevDfs, &c).unwrap();
        let expected = PlaneTree::from_child_lists(0, &[vec![1, 3], vec![2], vec![], vec![]]).unwrap();
        assert_eq!(r, expected);
        assert_ne!(r, b);

        let single = decode(OrderKind::LexDfs, &seq(&[0])).unwrap();
        assert_eq!(single.len(), 1);
        assert_eq!(decode(OrderKind::Bfs, &seq(&[0, 2, 0])), Err(Error::NotTreeSequence { index: 1 }));
    }

    #[test]
    fn dfs_index_examples() {
        // R{A{A1,A2},B{B1,B2}}: R=0 A=1 B=2 A1=3 A2=4 B1=5 B2=6
        let t = PlaneTree::from_child_lists(
            0,
            &[vec![1, 2], vec![3, 4], vec![5, 6], vec![], vec![], vec![], vec![]],
        )
        .unwrap();
        let idx = dfs_indices(&t);
        assert_eq!(idx.lambda[4], 4);
        assert_eq!(idx.rho[4], 6);
        assert_eq!((idx.lambda[0], idx.rho[0]), (1, 1));
    }

    #[test]
    fn kind_parsing() {
        for k in OrderKind::ALL {
            assert_eq!(k.as_str().parse::<OrderKind>().unwrap(), k);
        }
        assert_eq!("rev-dfs".parse::<OrderKind>().unwrap(), OrderKind::RevDfs);
        assert!("dfs2".parse::<OrderKind>().is_err());
    }
}
