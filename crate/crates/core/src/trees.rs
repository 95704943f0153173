//! Planar binary trees.
//!
//! A tree is either the leaf `|` or a wedge `(L,R)` of two trees. Internal vertices
//! are numbered `1..=n` in left-to-right (in-order) order; labels are never stored.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tree {
    Leaf,
    Node(Arc<Node>),
}

#[derive(PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Node {
    left: Tree,
    right: Tree,
    size: usize,
}

impl Tree {
    pub fn leaf() -> Tree {
        Tree::Leaf
    }

    pub fn wedge(left: Tree, right: Tree) -> Tree {
        let size = left.size() + right.size() + 1;
        Tree::Node(Arc::new(Node { left, right, size }))
    }

    /// The tree with a single internal vertex.
    pub fn single() -> Tree {
        Tree::wedge(Tree::Leaf, Tree::Leaf)
    }

    pub fn size(&self) -> usize {
        match self {
            Tree::Leaf => 0,
            Tree::Node(n) => n.size,
        }
    }

    pub fn is_leaf(&self) -> bool {
        matches!(self, Tree::Leaf)
    }

    pub fn children(&self) -> Option<(&Tree, &Tree)> {
        match self {
            Tree::Leaf => None,
            Tree::Node(n) => Some((&n.left, &n.right)),
        }
    }

    pub fn left(&self) -> Option<&Tree> {
        self.children().map(|c| c.0)
    }

    pub fn right(&self) -> Option<&Tree> {
        self.children().map(|c| c.1)
    }

    pub fn unwedge(&self) -> Result<(Tree, Tree)> {
        self.children().map(|(l, r)| (l.clone(), r.clone())).ok_or(Error::EmptyTree)
    }

    /// `σ/•`: the tree with `self` as left subtree of a new root.
    pub fn planted(&self) -> Tree {
        Tree::wedge(self.clone(), Tree::Leaf)
    }

    /// The right comb with `n` vertices.
    pub fn right_comb(n: usize) -> Tree {
        (0..n).fold(Tree::Leaf, |acc, _| Tree::wedge(Tree::Leaf, acc))
    }

    /// The left comb with `n` vertices.
    pub fn left_comb(n: usize) -> Tree {
        (0..n).fold(Tree::Leaf, |acc, _| Tree::wedge(acc, Tree::Leaf))
    }

    /// Right arms as lists of vertex labels, sorted by smallest label.
    pub fn right_arms(&self) -> Vec<Vec<usize>> {
        fn walk(t: &Tree, next: &mut usize, arm: Option<usize>, arms: &mut Vec<Vec<usize>>) {
            if let Some((l, r)) = t.children() {
                walk(l, next, None, arms);
                *next += 1;
                let id = arm.unwrap_or_else(|| {
                    arms.push(Vec::new());
                    arms.len() - 1
                });
                arms[id].push(*next);
                walk(r, next, Some(id), arms);
            }
        }
        let mut arms = Vec::new();
        walk(self, &mut 0, None, &mut arms);
        arms.sort();
        arms
    }
}

impl fmt::Display for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tree::Leaf => write!(f, "|"),
            Tree::Node(n) => write!(f, "({},{})", n.left, n.right),
        }
    }
}

impl fmt::Debug for Tree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Tree {
    type Err = Error;

    fn from_str(s: &str) -> Result<Tree> {
        let chars: Vec<char> = s.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pos = 0;
        let t = parse_tree(&chars, &mut pos)?;
        if pos != chars.len() {
            return Err(Error::Parse(format!("trailing input in tree {s:?}")));
        }
        Ok(t)
    }
}

fn parse_tree(c: &[char], pos: &mut usize) -> Result<Tree> {
    let err = |msg: &str, at: usize| Error::Parse(format!("{msg} at position {at}"));
    match c.get(*pos) {
        Some('|') => {
            *pos += 1;
            Ok(Tree::Leaf)
        }
        Some('(') => {
            *pos += 1;
            let l = parse_tree(c, pos)?;
            if c.get(*pos) != Some(&',') {
                return Err(err("expected ','", *pos));
            }
            *pos += 1;
            let r = parse_tree(c, pos)?;
            if c.get(*pos) != Some(&')') {
                return Err(err("expected ')'", *pos));
            }
            *pos += 1;
            Ok(Tree::wedge(l, r))
        }
        _ => Err(err("expected '|' or '('", *pos)),
    }
}

impl Serialize for Tree {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Tree {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All trees with `n` internal vertices, ordered by left-subtree size, then recursively.
pub fn enumerate_trees(n: usize) -> Vec<Tree> {
    enumerate_trees_upto(n).pop().unwrap()
}

/// `Y_0, ..., Y_n`.
pub fn enumerate_trees_upto(n: usize) -> Vec<Vec<Tree>> {
    let mut levels: Vec<Vec<Tree>> = vec![vec![Tree::Leaf]];
    for m in 1..=n {
        let mut level = Vec::new();
        for k in 0..m {
            for l in &levels[k] {
                for r in &levels[m - 1 - k] {
                    level.push(Tree::wedge(l.clone(), r.clone()));
                }
            }
        }
        levels.push(level);
    }
    levels
}

pub fn wedge(sigma: &Tree, tau: &Tree) -> Tree {
    Tree::wedge(sigma.clone(), tau.clone())
}

pub fn unwedge(tau: &Tree) -> Result<(Tree, Tree)> {
    tau.unwedge()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraftMode {
    Over,
    Under,
}

/// `σ/τ`: `σ` becomes the left subtree of the leftmost vertex of `τ`.
pub fn over(sigma: &Tree, tau: &Tree) -> Tree {
    match tau.children() {
        None => sigma.clone(),
        Some((l, r)) => Tree::wedge(over(sigma, l), r.clone()),
    }
}

/// `σ\τ`: `τ` becomes the right subtree of the rightmost vertex of `σ`.
pub fn under(sigma: &Tree, tau: &Tree) -> Tree {
    match sigma.children() {
        None => tau.clone(),
        Some((l, r)) => Tree::wedge(l.clone(), under(r, tau)),
    }
}

pub fn graft(mode: GraftMode, sigma: &Tree, tau: &Tree) -> Tree {
    match mode {
        GraftMode::Over => over(sigma, tau),
        GraftMode::Under => under(sigma, tau),
    }
}

/// Operadic substitution `τ∘(σ_1, …, σ_n)`: vertex `i` of `τ` is replaced by `σ_i`.
pub fn substitute(tau: &Tree, subs: &[Tree]) -> Result<Tree> {
    if tau.is_leaf() {
        return Err(Error::EmptyTree);
    }
    if subs.len() != tau.size() {
        return Err(Error::ArityMismatch { expected: tau.size(), found: subs.len() });
    }
    if subs.iter().any(Tree::is_leaf) {
        return Err(Error::EmptyTree);
    }
    Ok(substitute_unchecked(tau, subs))
}

pub(crate) fn substitute_unchecked(tau: &Tree, subs: &[Tree]) -> Tree {
    match tau.children() {
        None => Tree::Leaf,
        Some((l, r)) => {
            let k = l.size();
            let left = substitute_unchecked(l, &subs[..k]);
            let right = substitute_unchecked(r, &subs[k + 1..]);
            over(&left, &under(&subs[k], &right))
        }
    }
}

/// `comb(τ_1, …, τ_k)`: the `τ_i` hung as left subtrees along a right spine of `k` vertices.
pub fn comb(subs: &[Tree]) -> Tree {
    subs.iter().rev().fold(Tree::Leaf, |acc, t| Tree::wedge(t.clone(), acc))
}

pub fn comb_decompose(tau: &Tree) -> Result<Vec<Tree>> {
    if tau.is_leaf() {
        return Err(Error::EmptyTree);
    }
    let mut out = Vec::new();
    let mut cur = tau;
    while let Some((l, r)) = cur.children() {
        out.push(l.clone());
        cur = r;
    }
    Ok(out)
}

/// Rotated comb: `RC(ρ_1, …, ρ_j) = comb(∨(|,ρ_1), …, ∨(|,ρ_j))`.
pub fn rotated_comb(subs: &[Tree]) -> Result<Tree> {
    if subs.is_empty() {
        return Err(Error::EmptyTree);
    }
    let hung: Vec<Tree> = subs.iter().map(|r| Tree::wedge(Tree::Leaf, r.clone())).collect();
    Ok(comb(&hung))
}

/// The doubling map `R`.
pub fn rmap(tau: &Tree) -> Tree {
    match tau.children() {
        None => Tree::Leaf,
        Some((s, t)) => Tree::wedge(Tree::wedge(Tree::Leaf, rmap(s)), rmap(t)),
    }
}

/// `Y^b_{2n} = R(Y_n)`.
pub fn yb(n: usize) -> Vec<Tree> {
    enumerate_trees(n).iter().map(rmap).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TreeParity {
    #[serde(rename = "BE")]
    Be,
    #[serde(rename = "BO")]
    Bo,
    #[serde(rename = "NONE")]
    None,
}

/// Membership in `Y^be` / `Y^bo` by the recursive definition.
pub fn classify(tau: &Tree) -> TreeParity {
    match tau.children() {
        None => TreeParity::Be,
        Some((l, r)) => match (classify(l), classify(r)) {
            (TreeParity::Bo, TreeParity::Be) => TreeParity::Be,
            (TreeParity::Be, TreeParity::Be) => TreeParity::Bo,
            _ => TreeParity::None,
        },
    }
}

/// Direct test: every right arm consists of labels of one parity.
pub fn splits(tau: &Tree) -> bool {
    tau.right_arms().iter().all(|arm| arm.iter().all(|v| v % 2 == arm[0] % 2))
}

/// `Y^be_{2n}` by filtering `Y_{2n}`.
pub fn ybe(n: usize) -> Vec<Tree> {
    enumerate_trees(2 * n).into_iter().filter(|t| classify(t) == TreeParity::Be).collect()
}

/// The set `Π(τ) ⊆ Y^be_{2|τ|}`.
pub fn pi_set(tau: &Tree) -> BTreeSet<Tree> {
    let mut memo = HashMap::new();
    pi_memo(tau, &mut memo)
}

fn pi_memo(tau: &Tree, memo: &mut HashMap<Tree, BTreeSet<Tree>>) -> BTreeSet<Tree> {
    if let Some(s) = memo.get(tau) {
        return s.clone();
    }
    let out = match comb_decompose(tau) {
        Err(_) => BTreeSet::from([Tree::Leaf]),
        Ok(parts) => {
            let k = parts.len();
            let choices: Vec<Vec<Tree>> = parts.iter().map(|p| pi_memo(p, memo).into_iter().collect()).collect();
            let rhos = yb(k);
            let mut out = BTreeSet::new();
            let mut idx = vec![0usize; k];
            loop {
                let mut slots = Vec::with_capacity(2 * k);
                for (i, &j) in idx.iter().enumerate() {
                    slots.push(choices[i][j].planted());
                    slots.push(Tree::single());
                }
                for rho in &rhos {
                    out.insert(substitute_unchecked(rho, &slots));
                }
                if !advance(&mut idx, &choices) {
                    break;
                }
            }
            out
        }
    };
    memo.insert(tau.clone(), out.clone());
    out
}

fn advance<T>(idx: &mut [usize], choices: &[Vec<T>]) -> bool {
    for i in (0..idx.len()).rev() {
        idx[i] += 1;
        if idx[i] < choices[i].len() {
            return true;
        }
        idx[i] = 0;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(s: &str) -> Tree {
        s.parse().unwrap()
    }

    const CATALAN: [usize; 13] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796, 58786, 208012];

    fn catalan_oracle(n: usize) -> usize {
        let mut c = vec![1usize];
        for m in 0..n {
            c.push((0..=m).map(|k| c[k] * c[m - k]).sum());
        }
        c[n]
    }

    #[test]
    fn enumeration_counts() {
        let levels = enumerate_trees_upto(12);
        for (n, level) in levels.iter().enumerate() {
            assert_eq!(level.len(), CATALAN[n]);
            assert_eq!(level.len(), catalan_oracle(n));
            let set: BTreeSet<_> = level.iter().collect();
            assert_eq!(set.len(), level.len());
            assert!(level.iter().all(|x| x.size() == n));
        }
        assert_eq!(enumerate_trees(0), vec![Tree::Leaf]);
    }

    #[test]
    fn enumeration_order_is_left_size_first() {
        let y3 = enumerate_trees(3);
        assert_eq!(y3[0], t("(|,(|,(|,|)))"));
        assert_eq!(y3[4], t("(((|,|),|),|)"));
    }

    #[test]
    fn text_roundtrip() {
        for n in 0..=6 {
            for x in enumerate_trees(n) {
                assert_eq!(t(&x.to_string()), x);
            }
        }
        assert!("(|,|".parse::<Tree>().is_err());
        assert!("(|,|)|".parse::<Tree>().is_err());
        assert_eq!(t(" ( | , | ) "), Tree::single());
    }

    #[test]
    fn wedge_and_unwedge() {
        assert_eq!(wedge(&Tree::Leaf, &Tree::Leaf), Tree::single());
        assert_eq!(unwedge(&t("(|,(|,|))")).unwrap(), (Tree::Leaf, Tree::single()));
        assert_eq!(unwedge(&Tree::Leaf), Err(Error::EmptyTree));
        for x in enumerate_trees(5) {
            let (l, r) = unwedge(&x).unwrap();
            assert_eq!(wedge(&l, &r), x);
        }
    }

    #[test]
    fn grafting_examples() {
        let dot = Tree::single();
        assert_eq!(over(&dot, &dot), t("((|,|),|)"));
        assert_eq!(under(&dot, &dot), t("(|,(|,|))"));
        assert_eq!(graft(GraftMode::Over, &dot, &dot), dot.planted());
        assert_eq!(graft(GraftMode::Under, &dot, &dot), Tree::wedge(Tree::Leaf, dot.clone()));
        for x in enumerate_trees(3) {
            assert_eq!(over(&x, &Tree::Leaf), x);
            assert_eq!(under(&Tree::Leaf, &x), x);
            assert_eq!(over(&x, &dot), x.planted());
        }
    }

    #[test]
    fn grafting_sizes_and_order() {
        let levels = enumerate_trees_upto(4);
        for a in levels.iter().flatten() {
            for b in levels.iter().flatten() {
                let o = over(a, b);
                let u = under(a, b);
                assert_eq!(o.size(), a.size() + b.size());
                assert_eq!(u.size(), a.size() + b.size());
                for c in levels[1..].iter().flatten() {
                    if !b.is_leaf() {
                        assert_eq!(under(&over(a, b), c), over(a, &under(b, c)));
                    }
                }
            }
        }
    }

    #[test]
    fn substitution_units_and_sizes() {
        let dot = Tree::single();
        for x in enumerate_trees(4) {
            assert_eq!(substitute(&dot, std::slice::from_ref(&x)).unwrap(), x);
            assert_eq!(substitute(&x, &vec![dot.clone(); 4]).unwrap(), x);
        }
        let levels = enumerate_trees_upto(2);
        for tau in enumerate_trees(3) {
            for a in levels[1..].iter().flatten() {
                for b in levels[1..].iter().flatten() {
                    for c in levels[1..].iter().flatten() {
                        let r = substitute(&tau, &[a.clone(), b.clone(), c.clone()]).unwrap();
                        assert_eq!(r.size(), a.size() + b.size() + c.size());
                    }
                }
            }
        }
        assert_eq!(substitute(&dot, &[]), Err(Error::ArityMismatch { expected: 1, found: 0 }));
        assert!(substitute(&Tree::Leaf, &[]).is_err());
    }

    #[test]
    fn substitution_is_associative() {
        let y2 = enumerate_trees(2);
        let y1 = enumerate_trees(1);
        for tau in &y2 {
            for s1 in &y2 {
                for s2 in &y2 {
                    let inner = substitute(tau, &[s1.clone(), s2.clone()]).unwrap();
                    let mut flat = Vec::new();
                    let mut outer = Vec::new();
                    for s in [s1, s2] {
                        let subs: Vec<Tree> = (0..2).map(|i| if i == 0 { y2[1].clone() } else { y1[0].clone() }).collect();
                        outer.push(substitute(s, &subs).unwrap());
                        flat.extend(subs);
                    }
                    let lhs = substitute(&inner, &flat).unwrap();
                    let rhs = substitute(tau, &outer).unwrap();
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }

    #[test]
    fn comb_decomposition() {
        assert_eq!(comb_decompose(&Tree::right_comb(4)).unwrap(), vec![Tree::Leaf; 4]);
        let s = t("((|,|),(|,|))");
        assert_eq!(comb_decompose(&s.planted()).unwrap(), vec![s]);
        assert!(comb_decompose(&Tree::Leaf).is_err());
        for x in enumerate_trees(6) {
            let parts = comb_decompose(&x).unwrap();
            assert_eq!(parts.iter().map(|p| p.size() + 1).sum::<usize>(), 6);
            assert_eq!(comb(&parts), x);
        }
    }

    #[test]
    fn right_comb_of_planted_is_comb() {
        let y2 = enumerate_trees(2);
        for a in &y2 {
            for b in &y2 {
                let r = substitute(&Tree::right_comb(2), &[a.planted(), b.planted()]).unwrap();
                assert_eq!(r, comb(&[a.clone(), b.clone()]));
            }
        }
    }

    #[test]
    fn rmap_examples() {
        assert_eq!(rmap(&Tree::Leaf), Tree::Leaf);
        assert_eq!(rmap(&Tree::single()), t("((|,|),|)"));
        assert_eq!(rmap(&t("((|,|),|)")), t("((|,((|,|),|)),|)"));
        assert_eq!(rotated_comb(&[Tree::Leaf]).unwrap(), t("((|,|),|)"));
        assert!(rotated_comb(&[]).is_err());
    }

    #[test]
    fn rmap_doubles_and_is_injective() {
        let mut seen = BTreeSet::new();
        for n in 0..=6 {
            for x in enumerate_trees(n) {
                let r = rmap(&x);
                assert_eq!(r.size(), 2 * n);
                assert!(seen.insert(r));
            }
        }
    }

    #[test]
    fn rmap_of_comb_is_rotated_comb() {
        let small: Vec<Tree> = enumerate_trees_upto(2).into_iter().flatten().collect();
        for a in &small {
            for b in &small {
                let lhs = rmap(&comb(&[a.clone(), b.clone()]));
                let rhs = rotated_comb(&[rmap(a), rmap(b)]).unwrap();
                assert_eq!(lhs, rhs);
                assert_eq!(rhs.size(), 2 * 2 + rmap(a).size() + rmap(b).size());
            }
        }
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&Tree::Leaf), TreeParity::Be);
        assert_eq!(classify(&t("(|,(|,|))")), TreeParity::None);
        assert_eq!(classify(&t("((|,|),|)")), TreeParity::Be);
        assert_eq!(classify(&Tree::single()), TreeParity::Bo);
        assert_eq!(ybe(1), vec![t("((|,|),|)")]);
    }

    #[test]
    fn classify_matches_arm_parity() {
        for n in 0..=8 {
            for x in enumerate_trees(n) {
                let c = classify(&x);
                assert_eq!(c != TreeParity::None, splits(&x), "{x}");
                match c {
                    TreeParity::Be => assert_eq!(n % 2, 0),
                    TreeParity::Bo => assert_eq!(n % 2, 1),
                    TreeParity::None => {}
                }
            }
        }
    }

    #[test]
    fn yb_is_inside_ybe() {
        for n in 0..=4 {
            for x in yb(n) {
                assert_eq!(classify(&x), TreeParity::Be);
            }
        }
    }

    #[test]
    fn pi_examples() {
        assert_eq!(pi_set(&Tree::Leaf), BTreeSet::from([Tree::Leaf]));
        for n in 1..=4 {
            let expected: BTreeSet<Tree> = yb(n).into_iter().collect();
            assert_eq!(pi_set(&Tree::right_comb(n)), expected);
            assert_eq!(expected.len(), CATALAN[n]);
        }
    }

    #[test]
    fn pi_is_disjoint_union_of_ybe() {
        for n in 1..=3 {
            let mut union = BTreeSet::new();
            let mut total = 0;
            for tau in enumerate_trees(n) {
                let p = pi_set(&tau);
                total += p.len();
                union.extend(p);
            }
            assert_eq!(total, union.len());
            let expected: BTreeSet<Tree> = ybe(n).into_iter().collect();
            assert_eq!(union, expected);
        }
    }

    #[test]
    fn ybe_has_two_unique_decompositions() {
        let all_be: Vec<Vec<Tree>> = (0..=3).map(ybe).collect();
        for n in 1..=3 {
            for tau in &all_be[n] {
                for first in [true, false] {
                    let mut count = 0;
                    // Slots come in pairs; the planted slot holds σ_i.
                    for k in 1..=n {
                        for rho in yb(k) {
                            count += count_decompositions(tau, &rho, k, n - k, &all_be, first);
                        }
                    }
                    assert_eq!(count, 1, "{tau} first={first}");
                }
            }
        }
    }

    fn count_decompositions(tau: &Tree, rho: &Tree, k: usize, rest: usize, be: &[Vec<Tree>], first: bool) -> usize {
        let mut count = 0;
        for sizes in compositions(rest, k) {
            let choices: Vec<Vec<Tree>> = sizes.iter().map(|&s| be[s].clone()).collect();
            if choices.iter().any(Vec::is_empty) {
                continue;
            }
            let mut idx = vec![0; k];
            loop {
                let mut slots = Vec::new();
                for (i, &j) in idx.iter().enumerate() {
                    let p = choices[i][j].planted();
                    if first {
                        slots.push(p);
                        slots.push(Tree::single());
                    } else {
                        slots.push(Tree::single());
                        slots.push(p);
                    }
                }
                if substitute(rho, &slots).unwrap() == *tau {
                    count += 1;
                }
                if !advance(&mut idx, &choices) {
                    break;
                }
            }
        }
        count
    }

    fn compositions(total: usize, parts: usize) -> Vec<Vec<usize>> {
        if parts == 0 {
            return if total == 0 { vec![vec![]] } else { vec![] };
        }
        let mut out = Vec::new();
        for first in 0..=total {
            for mut rest in compositions(total - first, parts - 1) {
                rest.insert(0, first);
                out.push(rest);
            }
        }
        out
    }

    #[test]
    fn right_arms_of_single_vertex_trees() {
        assert_eq!(t("((|,|),|)").right_arms(), vec![vec![1], vec![2]]);
        assert_eq!(t("(|,(|,|))").right_arms(), vec![vec![1, 2]]);
    }
}
