//! Plane trees stored in compressed child-list form.

use std::collections::VecDeque;
use std::fmt::Write as _;
use std::hash::{Hash, Hasher};

use crate::error::{Error, Result};
use crate::seq::ChildSequence;

/// A rooted tree with ordered children on nodes `0..n`.
///
/// Node ids are arbitrary labels; equality and hashing compare the plane
/// tree shape (via the lex-DFS child-count code), not the labels.
#[derive(Debug, Clone)]
pub struct PlaneTree {
    root: usize,
    parent: Vec<Option<usize>>,
    child_start: Vec<usize>,
    child_list: Vec<usize>,
    depth: Vec<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum SiblingOrder {
    Ascending,
    Descending,
}

impl PlaneTree {
    pub fn single_node() -> Self {
        Self { root: 0, parent: vec![None], child_start: vec![0, 0], child_list: Vec::new(), depth: vec![0] }
    }

    /// Build from explicit ordered child lists, validating that they form a
    /// tree rooted at `root`.
    pub fn from_child_lists(root: usize, children: &[Vec<usize>]) -> Result<Self> {
        let n = children.len();
        if root >= n {
            return Err(Error::InvalidTree(format!("root {root} out of range")));
        }
        let mut parent = vec![None; n];
        let mut child_start = Vec::with_capacity(n + 1);
        let mut child_list = Vec::with_capacity(n.saturating_sub(1));
        for (u, kids) in children.iter().enumerate() {
            child_start.push(child_list.len());
            for &v in kids {
                if v >= n || v == root {
                    return Err(Error::InvalidTree(format!("bad child {v} of {u}")));
                }
                if parent[v].replace(u).is_some() {
                    return Err(Error::InvalidTree(format!("node {v} has two parents")));
                }
                child_list.push(v);
            }
        }
        child_start.push(child_list.len());
        let mut tree = Self { root, parent, child_start, child_list, depth: Vec::new() };
        tree.fill_depths_bfs()?;
        Ok(tree)
    }

    /// Build from a parent array (exactly one `None`, the root). Siblings are
    /// ordered by ascending id.
    pub fn from_parent_array(parents: &[Option<usize>]) -> Result<Self> {
        let n = parents.len();
        let mut roots = parents.iter().enumerate().filter(|(_, p)| p.is_none());
        let root = match (roots.next(), roots.next()) {
            (Some((r, _)), None) => r,
            _ => return Err(Error::InvalidTree("need exactly one root".into())),
        };
        let mut children = vec![Vec::new(); n];
        for (v, p) in parents.iter().enumerate() {
            if let Some(p) = *p {
                if p >= n {
                    return Err(Error::InvalidTree(format!("parent {p} out of range")));
                }
                children[p].push(v);
            }
        }
        Self::from_child_lists(root, &children)
    }

    /// Fast path for decoders: `parent[v] < v` for every non-root `v`, root
    /// is 0, `counts[u]` is the number of children of `u`.
    pub(crate) fn from_ranked_parents(
        parent: Vec<Option<usize>>,
        counts: &[usize],
        siblings: SiblingOrder,
    ) -> Self {
        let n = parent.len();
        let mut child_start = Vec::with_capacity(n + 1);
        let mut acc = 0;
        for &c in counts {
            child_start.push(acc);
            acc += c;
        }
        child_start.push(acc);
        let mut fill = child_start.clone();
        let mut child_list = vec![0; acc];
        let mut place = |v: usize| {
            if let Some(p) = parent[v] {
                child_list[fill[p]] = v;
                fill[p] += 1;
            }
        };
        match siblings {
            SiblingOrder::Ascending => (1..n).for_each(&mut place),
            SiblingOrder::Descending => (1..n).rev().for_each(&mut place),
        }
        let mut depth = vec![0; n];
        for v in 1..n {
            let p = parent[v].expect("non-root node has a parent");
            debug_assert!(p < v);
            depth[v] = depth[p] + 1;
        }
        Self { root: 0, parent, child_start, child_list, depth }
    }

    fn fill_depths_bfs(&mut self) -> Result<()> {
        let n = self.len();
        let mut depth = vec![usize::MAX; n];
        depth[self.root] = 0;
        let mut queue = VecDeque::from([self.root]);
        let mut seen = 1;
        while let Some(u) = queue.pop_front() {
            for &v in self.children(u) {
                depth[v] = depth[u] + 1;
                seen += 1;
                queue.push_back(v);
            }
        }
        if seen != n {
            return Err(Error::InvalidTree(format!("{} of {n} nodes unreachable", n - seen)));
        }
        self.depth = depth;
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn children(&self, u: usize) -> &[usize] {
        &self.child_list[self.child_start[u]..self.child_start[u + 1]]
    }

    pub fn num_children(&self, u: usize) -> usize {
        self.child_start[u + 1] - self.child_start[u]
    }

    pub fn parent(&self, u: usize) -> Option<usize> {
        self.parent[u]
    }

    pub fn depth(&self, u: usize) -> usize {
        self.depth[u]
    }

    pub fn depths(&self) -> &[usize] {
        &self.depth
    }

    /// Child counts indexed by node id.
    pub fn child_counts(&self) -> Vec<usize> {
        (0..self.len()).map(|u| self.num_children(u)).collect()
    }

    /// Nodes in lexicographic depth-first order.
    pub fn lex_order(&self) -> Vec<usize> {
        self.dfs_order(false)
    }

    /// Nodes in depth-first order visiting children right to left.
    pub fn rev_order(&self) -> Vec<usize> {
        self.dfs_order(true)
    }

    fn dfs_order(&self, reverse: bool) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(u) = stack.pop() {
            out.push(u);
            if reverse {
                stack.extend_from_slice(self.children(u));
            } else {
                stack.extend(self.children(u).iter().rev());
            }
        }
        out
    }

    /// Nodes by depth, left to right within a depth.
    pub fn bfs_order(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.len());
        out.push(self.root);
        let mut head = 0;
        while head < out.len() {
            let u = out[head];
            head += 1;
            out.extend_from_slice(self.children(u));
        }
        out
    }

    /// Canonical encoding: the child counts in lex-DFS order.
    pub fn canonical_code(&self) -> ChildSequence {
        let code = self.lex_order().into_iter().map(|u| self.num_children(u)).collect();
        ChildSequence::from_trusted(code)
    }

    /// The left-right mirror image.
    pub fn mirror(&self) -> PlaneTree {
        let children: Vec<Vec<usize>> =
            (0..self.len()).map(|u| self.children(u).iter().rev().copied().collect()).collect();
        Self::from_child_lists(self.root, &children).expect("mirror of a valid tree")
    }

    /// Parent-array listing, one `node:parent` line per node in lex-DFS
    /// order, with nodes relabelled by lex-DFS rank (root is `0:-`).
    pub fn to_parent_listing(&self) -> String {
        let order = self.lex_order();
        let mut rank = vec![0; self.len()];
        for (i, &u) in order.iter().enumerate() {
            rank[u] = i;
        }
        let mut out = String::new();
        for (i, &u) in order.iter().enumerate() {
            match self.parent[u] {
                Some(p) => writeln!(out, "{i}:{}", rank[p]),
                None => writeln!(out, "{i}:-"),
            }
            .expect("writing to a String");
        }
        out
    }

    /// Inverse of [`to_parent_listing`](Self::to_parent_listing). Lines may
    /// come in any order; siblings are ordered by ascending id.
    pub fn parse_parent_listing(text: &str) -> Result<Self> {
        let mut entries = Vec::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (node, parent) = line
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected `node:parent`, got `{line}`")))?;
            let node: usize =
                node.trim().parse().map_err(|_| Error::Parse(format!("bad node id in `{line}`")))?;
            let parent = match parent.trim() {
                "-" | "" => None,
                p => Some(p.parse().map_err(|_| Error::Parse(format!("bad parent in `{line}`")))?),
            };
            entries.push((node, parent));
        }
        let n = entries.len();
        let mut parents = vec![None; n];
        let mut seen = vec![false; n];
        for (node, parent) in entries {
            if node >= n || std::mem::replace(&mut seen[node], true) {
                return Err(Error::Parse(format!("node ids must be 0..{n}, each once")));
            }
            parents[node] = parent;
        }
        Self::from_parent_array(&parents)
    }
}

impl PartialEq for PlaneTree {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.canonical_code() == other.canonical_code()
    }
}

impl Eq for PlaneTree {}

impl Hash for PlaneTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_code().hash(state);
    }
}
