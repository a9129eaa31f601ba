//! Level profile, width and height.

use serde::{Deserialize, Serialize};

use crate::tree::PlaneTree;

/// `Z_0, ..., Z_h`: number of nodes at each depth.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Profile {
    pub z: Vec<usize>,
}

impl Profile {
    pub fn width(&self) -> usize {
        self.z.iter().copied().max().unwrap_or(0)
    }

    pub fn height(&self) -> usize {
        self.z.len() - 1
    }
}

pub fn profile(t: &PlaneTree) -> Profile {
    let mut z = Vec::new();
    for &d in t.depths() {
        if d >= z.len() {
            z.resize(d + 1, 0);
        }
        z[d] += 1;
    }
    Profile { z }
}

pub fn width(t: &PlaneTree) -> usize {
    profile(t).width()
}

pub fn height(t: &PlaneTree) -> usize {
    t.depths().iter().copied().max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codec::{decode, OrderKind};
    use crate::seq::ChildSequence;

    #[test]
    fn examples() {
        let single = PlaneTree::single_node();
        assert_eq!(profile(&single).z, vec![1]);
        assert_eq!((width(&single), height(&single)), (1, 0));

        let t = PlaneTree::from_child_lists(0, &[vec![1, 2], vec![], vec![3], vec![]]).unwrap();
        assert_eq!(profile(&t).z, vec![1, 2, 1]);
        assert_eq!((width(&t), height(&t)), (2, 2));

        let path = PlaneTree::from_child_lists(0, &[vec![1], vec![2], vec![]]).unwrap();
        assert_eq!(profile(&path).z, vec![1, 1, 1]);
    }

    #[test]
    fn both_trees_of_two_twos() {
        // the two trees with child sequence (2,2,0,0,0)
        for code in [[2, 2, 0, 0, 0], [2, 0, 2, 0, 0]] {
            let t = decode(OrderKind::LexDfs, &ChildSequence::new(code.to_vec()).unwrap()).unwrap();
            assert_eq!(profile(&t).z, vec![1, 2, 2]);
            assert_eq!((width(&t), height(&t)), (2, 2));
        }
    }
}
