//! Planar rooted trees, Schröder trees and non-decreasing parking functions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::trees::Tree;

/// An ordered rooted tree. Serialized as nested arrays, a leaf being `[]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PlanarTree {
    children: Vec<PlanarTree>,
}

impl PlanarTree {
    /// A single vertex.
    pub fn leaf() -> PlanarTree {
        PlanarTree { children: Vec::new() }
    }

    /// `B_+(t_1, …, t_k)`: a new root above the given subtrees.
    pub fn graft(children: Vec<PlanarTree>) -> PlanarTree {
        PlanarTree { children }
    }

    pub fn children(&self) -> &[PlanarTree] {
        &self.children
    }

    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn edges(&self) -> usize {
        self.children.iter().map(|c| c.edges() + 1).sum()
    }

    pub fn leaves(&self) -> usize {
        if self.is_leaf() {
            1
        } else {
            self.children.iter().map(PlanarTree::leaves).sum()
        }
    }

    pub fn is_schroder(&self) -> bool {
        self.is_leaf() || (self.children.len() >= 2 && self.children.iter().all(PlanarTree::is_schroder))
    }

    /// Every internal vertex has a leaf as its rightmost child.
    pub fn is_right_schroder(&self) -> bool {
        self.is_leaf()
            || (self.children.len() >= 2
                && self.children.last().unwrap().is_leaf()
                && self.children.iter().all(PlanarTree::is_right_schroder))
    }

    /// Every internal vertex has a leaf as its leftmost child.
    pub fn is_left_schroder(&self) -> bool {
        self.is_leaf()
            || (self.children.len() >= 2
                && self.children[0].is_leaf()
                && self.children.iter().all(PlanarTree::is_left_schroder))
    }

    /// Schröder grading: number of leaves minus one.
    pub fn schroder_size(&self) -> usize {
        self.leaves() - 1
    }
}

impl fmt::Display for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, c) in self.children.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, "]")
    }
}

impl fmt::Debug for PlanarTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Knuth's rotation correspondence, read as first-child / next-sibling.
pub fn knuth_rotation(t: &PlanarTree) -> Tree {
    forest_to_binary(t.children())
}

fn forest_to_binary(forest: &[PlanarTree]) -> Tree {
    match forest.split_first() {
        None => Tree::Leaf,
        Some((first, rest)) => Tree::wedge(forest_to_binary(first.children()), forest_to_binary(rest)),
    }
}

/// Inverse of [`knuth_rotation`].
pub fn knuth_rotation_inverse(t: &Tree) -> PlanarTree {
    PlanarTree::graft(binary_to_forest(t))
}

fn binary_to_forest(t: &Tree) -> Vec<PlanarTree> {
    let mut out = Vec::new();
    let mut cur = t;
    while let Some((l, r)) = cur.children() {
        out.push(PlanarTree::graft(binary_to_forest(l)));
        cur = r;
    }
    out
}

/// Adds a leaf as a new rightmost child of every internal vertex.
pub fn add_rightmost_leaves(t: &PlanarTree) -> PlanarTree {
    if t.is_leaf() {
        return t.clone();
    }
    let mut children: Vec<PlanarTree> = t.children.iter().map(add_rightmost_leaves).collect();
    children.push(PlanarTree::leaf());
    PlanarTree::graft(children)
}

/// Adds a leaf as a new leftmost child of every internal vertex.
pub fn add_leftmost_leaves(t: &PlanarTree) -> PlanarTree {
    if t.is_leaf() {
        return t.clone();
    }
    let mut children = vec![PlanarTree::leaf()];
    children.extend(t.children.iter().map(add_leftmost_leaves));
    PlanarTree::graft(children)
}

/// Non-decreasing parking function check: `a` non-decreasing with `1 <= a(i) <= i`.
pub fn is_ndpf(a: &[usize]) -> bool {
    a.iter().enumerate().all(|(i, &x)| x >= 1 && x <= i + 1) && a.windows(2).all(|w| w[0] <= w[1])
}

pub fn ndpf_compose(u: &[usize], v: &[usize]) -> Vec<usize> {
    let k = u.len();
    let mut out = u.to_vec();
    out.push(k + 1);
    out.extend(v.iter().map(|x| x + k));
    out
}

pub fn ndpf_decompose(z: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let k1 = (1..=z.len()).rev().find(|&i| z[i - 1] == i).ok_or(Error::EmptyTree)?;
    let k = k1 - 1;
    Ok((z[..k].to_vec(), z[k1..].iter().map(|x| x - k).collect()))
}
