//! Set partitions of `[n]`, with the noncrossing operations used by the Catalan
//! bijections: concatenation, right and left merges, interleaving and the
//! Kreweras complement.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A set partition of `[n] = {1, …, n}` in canonical form: blocks ascending
/// internally and sorted by their minimum.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    n: usize,
    blocks: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(n: usize, blocks: Vec<Vec<usize>>) -> Result<Partition> {
        let mut seen = vec![false; n + 1];
        let mut blocks = blocks;
        for b in &mut blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            b.sort_unstable();
            for &x in b.iter() {
                if x == 0 || x > n {
                    return Err(Error::InvalidPartition(format!("element {x} outside [1, {n}]")));
                }
                if seen[x] {
                    return Err(Error::InvalidPartition(format!("element {x} appears twice")));
                }
                seen[x] = true;
            }
        }
        if let Some(x) = (1..=n).find(|&x| !seen[x]) {
            return Err(Error::InvalidPartition(format!("element {x} is missing")));
        }
        blocks.sort_unstable();
        Ok(Partition { n, blocks })
    }

    /// Builds from blocks, taking `n` as the number of elements.
    pub fn from_blocks(blocks: Vec<Vec<usize>>) -> Result<Partition> {
        let n = blocks.iter().map(Vec::len).sum();
        Self::new(n, blocks)
    }

    /// Builds from a block label per element (`labels[i]` is the block of `i + 1`).
    pub fn from_labels(labels: &[usize]) -> Partition {
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        let mut map = std::collections::HashMap::new();
        for (i, &l) in labels.iter().enumerate() {
            let id = *map.entry(l).or_insert_with(|| {
                blocks.push(Vec::new());
                blocks.len() - 1
            });
            blocks[id].push(i + 1);
        }
        blocks.sort_unstable();
        Partition { n: labels.len(), blocks }
    }

    pub fn empty() -> Partition {
        Partition { n: 0, blocks: Vec::new() }
    }

    /// `0_n`: all singletons.
    pub fn zero(n: usize) -> Partition {
        Partition { n, blocks: (1..=n).map(|i| vec![i]).collect() }
    }

    /// `1_n`: a single block.
    pub fn one(n: usize) -> Partition {
        if n == 0 {
            return Self::empty();
        }
        Partition { n, blocks: vec![(1..=n).collect()] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    /// Block index of every element; position `i` holds the block of `i + 1`.
    pub fn labels(&self) -> Vec<usize> {
        let mut out = vec![0; self.n];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                out[x - 1] = b;
            }
        }
        out
    }

    pub fn block_of(&self, x: usize) -> Option<&Vec<usize>> {
        self.blocks.iter().find(|b| b.binary_search(&x).is_ok())
    }

    pub fn is_noncrossing(&self) -> bool {
        labels_noncrossing(&self.labels())
    }

    /// `1` and `n` lie in the same block.
    pub fn is_irreducible(&self) -> bool {
        self.n > 0 && self.blocks[0].last() == Some(&self.n)
    }

    /// Reverse refinement: every block of `self` lies inside a block of `other`.
    pub fn refines(&self, other: &Partition) -> bool {
        if self.n != other.n {
            return false;
        }
        let lab = other.labels();
        self.blocks.iter().all(|b| b.iter().all(|&x| lab[x - 1] == lab[b[0] - 1]))
    }

    /// Restriction to the elements of `[lo, hi]`, relabelled to start at 1.
    pub fn restrict(&self, lo: usize, hi: usize) -> Partition {
        if hi < lo {
            return Self::empty();
        }
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().filter(|&&x| x >= lo && x <= hi).map(|&x| x - lo + 1).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        Partition::new(hi - lo + 1, blocks).expect("restriction of a partition to an interval")
    }

    /// Removes element `x`, shifting larger elements down.
    pub fn remove(&self, x: usize) -> Partition {
        let blocks: Vec<Vec<usize>> = self
            .blocks
            .iter()
            .map(|b| b.iter().filter(|&&y| y != x).map(|&y| if y > x { y - 1 } else { y }).collect::<Vec<_>>())
            .filter(|b| !b.is_empty())
            .collect();
        Partition::new(self.n - 1, blocks).expect("removal keeps a partition")
    }

    fn shifted(&self, by: usize) -> Vec<Vec<usize>> {
        self.blocks.iter().map(|b| b.iter().map(|x| x + by).collect()).collect()
    }

    /// Multiline drawing: element numbers on top, then one row per block with
    /// bars at its elements joined by dashes.
    pub fn render_ascii(&self) -> String {
        if self.n == 0 {
            return String::from("(empty)\n");
        }
        let w = self.n.to_string().len() + 1;
        let mut out = String::new();
        for i in 1..=self.n {
            out.push_str(&format!("{i:>w$}"));
        }
        out.push('\n');
        for b in &self.blocks {
            let (lo, hi) = (b[0], *b.last().unwrap());
            for i in 1..=self.n {
                let c = if b.binary_search(&i).is_ok() {
                    '|'
                } else if i > lo && i < hi {
                    '-'
                } else {
                    ' '
                };
                let fill = if i > lo && i <= hi { '-' } else { ' ' };
                for _ in 0..w - 1 {
                    out.push(fill);
                }
                out.push(c);
            }
            out.push('\n');
        }
        out
    }
}

pub(crate) fn labels_noncrossing(labels: &[usize]) -> bool {
    let k = labels.iter().copied().max().map_or(0, |m| m + 1);
    let mut last = vec![0usize; k];
    for (i, &l) in labels.iter().enumerate() {
        last[l] = i;
    }
    let mut started = vec![false; k];
    let mut stack: Vec<usize> = Vec::new();
    for (i, &l) in labels.iter().enumerate() {
        if started[l] {
            if stack.last() != Some(&l) {
                return false;
            }
        } else {
            started[l] = true;
            stack.push(l);
        }
        if last[l] == i {
            stack.pop();
        }
    }
    true
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            let items: Vec<String> = b.iter().map(|x| x.to_string()).collect();
            write!(f, "{{{}}}", items.join(","))?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Serialize for Partition {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.blocks.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Partition {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let blocks = Vec::<Vec<usize>>::deserialize(de)?;
        Partition::from_blocks(blocks).map_err(serde::de::Error::custom)
    }
}

/// All noncrossing partitions of `[n]`, sorted by canonical block lists.
pub fn enumerate_ncp(n: usize) -> Vec<Partition> {
    let mut levels: Vec<Vec<Vec<Vec<usize>>>> = vec![vec![Vec::new()]];
    for m in 1..=n {
        let mut level = Vec::new();
        // Block of 1 is {1} ∪ (block of the first element after an inner run).
        for inner_size in 0..m {
            let outer_size = m - 1 - inner_size;
            for inner in &levels[inner_size] {
                let inner_shift: Vec<Vec<usize>> = inner.iter().map(|b| b.iter().map(|x| x + 1).collect()).collect();
                if outer_size == 0 {
                    let mut blocks = vec![vec![1]];
                    blocks.extend(inner_shift.iter().cloned());
                    level.push(blocks);
                    continue;
                }
                let off = 1 + inner_size;
                for outer in &levels[outer_size] {
                    let mut blocks = inner_shift.clone();
                    for b in outer {
                        let mut nb: Vec<usize> = b.iter().map(|x| x + off).collect();
                        if b[0] == 1 {
                            nb.insert(0, 1);
                        }
                        blocks.push(nb);
                    }
                    level.push(blocks);
                }
            }
        }
        for blocks in &mut level {
            blocks.sort_unstable();
        }
        levels.push(level);
    }
    let mut out: Vec<Partition> = levels.pop().unwrap().into_iter().map(|blocks| Partition { n, blocks }).collect();
    out.sort();
    out
}

/// All set partitions of `[n]` (crossing or not), via restricted growth strings.
pub fn enumerate_set_partitions(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut labels = vec![0usize; n];
    fn rec(i: usize, max: usize, labels: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if i == labels.len() {
            out.push(Partition::from_labels(labels));
            return;
        }
        for l in 0..=max {
            labels[i] = l;
            rec(i + 1, if l == max { max + 1 } else { max }, labels, out);
        }
    }
    if n == 0 {
        return vec![Partition::empty()];
    }
    rec(1, 1, &mut labels, &mut out);
    out.sort();
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MergeKind {
    Concat,
    Right,
    Left,
}

/// `P * Q`
pub fn concat(p: &Partition, q: &Partition) -> Partition {
    let mut blocks = p.blocks.clone();
    blocks.extend(q.shifted(p.n));
    blocks.sort_unstable();
    Partition { n: p.n + q.n, blocks }
}

/// `P ⎵* Q`: concatenation, then the block of `|P|` joins the block of `|P|+|Q|`.
/// An empty operand leaves the other unchanged.
pub fn right_merge(p: &Partition, q: &Partition) -> Partition {
    if p.n == 0 {
        return q.clone();
    }
    if q.n == 0 {
        return p.clone();
    }
    join(concat(p, q), p.n, p.n + q.n)
}

/// `P ⎴* Q`: concatenation, then the block of 1 joins the block of `|P|+1`.
/// An empty operand leaves the other unchanged.
pub fn left_merge(p: &Partition, q: &Partition) -> Partition {
    if p.n == 0 {
        return q.clone();
    }
    if q.n == 0 {
        return p.clone();
    }
    join(concat(p, q), 1, p.n + 1)
}

fn join(r: Partition, a: usize, b: usize) -> Partition {
    let ia = r.blocks.iter().position(|bl| bl.binary_search(&a).is_ok()).unwrap();
    let ib = r.blocks.iter().position(|bl| bl.binary_search(&b).is_ok()).unwrap();
    if ia == ib {
        return r;
    }
    let mut blocks = r.blocks;
    let moved = blocks[ib].clone();
    blocks[ia].extend(moved);
    blocks[ia].sort_unstable();
    blocks.remove(ib);
    blocks.sort_unstable();
    Partition { n: r.n, blocks }
}

pub fn merge_op(kind: MergeKind, p: &Partition, q: &Partition) -> Result<Partition> {
    match kind {
        MergeKind::Concat => Ok(concat(p, q)),
        MergeKind::Right | MergeKind::Left if p.n == 0 || q.n == 0 => Err(Error::EmptyOperand),
        MergeKind::Right => Ok(right_merge(p, q)),
        MergeKind::Left => Ok(left_merge(p, q)),
    }
}

/// `P ∪ Q`: odd elements `2i-1` grouped as in `P`, even elements `2i` as in `Q`.
pub fn interleave(p: &Partition, q: &Partition) -> Result<Partition> {
    if p.n != q.n {
        return Err(Error::SizeMismatch(p.n, q.n));
    }
    let mut blocks: Vec<Vec<usize>> = p.blocks.iter().map(|b| b.iter().map(|&x| 2 * x - 1).collect()).collect();
    blocks.extend(q.blocks.iter().map(|b| b.iter().map(|&x| 2 * x).collect::<Vec<_>>()));
    blocks.sort_unstable();
    Ok(Partition { n: 2 * p.n, blocks })
}

fn interleave_noncrossing(p_labels: &[usize], q_labels: &[usize], p_blocks: usize) -> bool {
    let mut labels = Vec::with_capacity(2 * p_labels.len());
    for (a, b) in p_labels.iter().zip(q_labels) {
        labels.push(*a);
        labels.push(b + p_blocks);
    }
    labels_noncrossing(&labels)
}

/// Kreweras complement by direct maximisation over `NCP_n`.
pub fn kreweras(p: &Partition) -> Result<Partition> {
    kreweras_within(p, &enumerate_ncp(p.n))
}

/// As [`kreweras`], scanning a precomputed `NCP_n`.
pub fn kreweras_within(p: &Partition, ncp: &[Partition]) -> Result<Partition> {
    if !p.is_noncrossing() {
        return Err(Error::Crossing(p.to_string()));
    }
    let pl = p.labels();
    let candidates: Vec<&Partition> =
        ncp.iter().filter(|q| q.n == p.n && interleave_noncrossing(&pl, &q.labels(), p.num_blocks())).collect();
    let best = candidates.iter().min_by_key(|q| q.num_blocks()).copied().expect("0_n always qualifies");
    if candidates.iter().any(|q| !q.refines(best)) {
        return Err(Error::InvalidPartition(format!("no largest complement for {p}")));
    }
    Ok(best.clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    fn part(blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    #[test]
    fn enumeration_counts() {
        let cat = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];
        for (n, &c) in cat.iter().enumerate() {
            let all = enumerate_ncp(n);
            assert_eq!(all.len(), c);
            assert!(all.iter().all(Partition::is_noncrossing));
            assert_eq!(all.iter().collect::<BTreeSet<_>>().len(), c);
        }
        assert_eq!(enumerate_ncp(0), vec![Partition::empty()]);
    }

    #[test]
    fn enumeration_matches_crossing_filter() {
        for n in 0..=7 {
            let filtered: Vec<Partition> = enumerate_set_partitions(n).into_iter().filter(Partition::is_noncrossing).collect();
            assert_eq!(filtered, enumerate_ncp(n));
        }
        assert_eq!(enumerate_set_partitions(3).len(), 5);
        assert_eq!(enumerate_set_partitions(4).len(), 15);
        assert!(!enumerate_ncp(4).contains(&part(&[&[1, 3], &[2, 4]])));
    }

    #[test]
    fn crossing_detection() {
        assert!(!part(&[&[1, 3], &[2, 4]]).is_noncrossing());
        assert!(part(&[&[1, 4], &[2, 3]]).is_noncrossing());
        assert!(!part(&[&[1, 3, 5], &[2, 6], &[4]]).is_noncrossing());
        assert!(part(&[&[1, 5], &[2, 3, 4], &[6]]).is_noncrossing());
    }

    #[test]
    fn validation() {
        assert!(Partition::new(3, vec![vec![1, 2]]).is_err());
        assert!(Partition::new(2, vec![vec![1, 2], vec![2]]).is_err());
        assert!(Partition::new(2, vec![vec![1, 3]]).is_err());
        assert_eq!(Partition::new(3, vec![vec![3, 1], vec![2]]).unwrap().blocks(), &[vec![1, 3], vec![2]]);
    }

    #[test]
    fn merges() {
        let one = part(&[&[1]]);
        assert_eq!(merge_op(MergeKind::Concat, &one, &one).unwrap(), part(&[&[1], &[2]]));
        assert_eq!(merge_op(MergeKind::Right, &one, &one).unwrap(), part(&[&[1, 2]]));
        assert_eq!(merge_op(MergeKind::Left, &one, &one).unwrap(), part(&[&[1, 2]]));
        assert_eq!(merge_op(MergeKind::Right, &Partition::empty(), &one), Err(Error::EmptyOperand));
        assert_eq!(merge_op(MergeKind::Left, &one, &Partition::empty()), Err(Error::EmptyOperand));
        let p = part(&[&[1, 3], &[2]]);
        let q = part(&[&[1], &[2, 3]]);
        assert_eq!(right_merge(&p, &q), part(&[&[1, 3, 5, 6], &[2], &[4]]));
        assert_eq!(left_merge(&p, &q), part(&[&[1, 3, 4], &[2], &[5, 6]]));
    }

    #[test]
    fn right_merge_associativity_and_its_failure() {
        let small: Vec<Partition> = (1..=3).flat_map(enumerate_ncp).collect();
        let mut witness = false;
        for p in &small {
            for q in &small {
                for r in &small {
                    assert_eq!(right_merge(&concat(p, q), r), concat(p, &right_merge(q, r)));
                    if concat(&right_merge(p, q), r) != right_merge(p, &concat(q, r)) {
                        witness = true;
                    }
                }
            }
        }
        assert!(witness);
    }

    #[test]
    fn merges_preserve_noncrossing() {
        let levels: Vec<Vec<Partition>> = (0..=6).map(enumerate_ncp).collect();
        for a in 1..=5 {
            for b in 1..=(6 - a) {
                for p in &levels[a] {
                    for q in &levels[b] {
                        for k in [MergeKind::Concat, MergeKind::Right, MergeKind::Left] {
                            assert!(merge_op(k, p, q).unwrap().is_noncrossing());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn interleave_examples() {
        let one = part(&[&[1]]);
        assert_eq!(interleave(&one, &one).unwrap(), part(&[&[1], &[2]]));
        assert_eq!(interleave(&one, &Partition::zero(2)), Err(Error::SizeMismatch(1, 2)));
        let p = part(&[&[1, 2], &[3]]);
        let q = part(&[&[1, 3], &[2]]);
        assert!(!interleave(&p, &q).unwrap().is_noncrossing());
    }

    #[test]
    fn kreweras_examples() {
        for n in 1..=6 {
            assert_eq!(kreweras(&Partition::one(n)).unwrap(), Partition::zero(n));
            assert_eq!(kreweras(&Partition::zero(n)).unwrap(), Partition::one(n));
        }
        let p = part(&[&[1, 2], &[3, 6, 8], &[4], &[5], &[7]]);
        assert_eq!(kreweras(&p).unwrap(), part(&[&[1], &[2, 8], &[3, 4, 5], &[6, 7]]));
        assert_eq!(kreweras(&part(&[&[1, 2]])).unwrap(), part(&[&[1], &[2]]));
        assert!(matches!(kreweras(&part(&[&[1, 3], &[2, 4]])), Err(Error::Crossing(_))));
    }

    #[test]
    fn kreweras_interleave_is_noncrossing_and_bijective() {
        for n in 0..=6 {
            let all = enumerate_ncp(n);
            let mut images = BTreeSet::new();
            for p in &all {
                let k = kreweras_within(p, &all).unwrap();
                assert!(interleave(p, &k).unwrap().is_noncrossing());
                images.insert(k);
            }
            assert_eq!(images.len(), all.len());
            let kk: BTreeSet<Partition> = images.iter().map(|k| kreweras_within(k, &all).unwrap()).collect();
            assert_eq!(kk.len(), all.len());
        }
    }

    #[test]
    fn kreweras_merge_laws() {
        let levels: Vec<Vec<Partition>> = (0..=7).map(enumerate_ncp).collect();
        for a in 1..=6 {
            for b in 1..=(7 - a) {
                for p in &levels[a] {
                    for q in &levels[b] {
                        let kp = kreweras_within(p, &levels[a]).unwrap();
                        let kq = kreweras_within(q, &levels[b]).unwrap();
                        let all = &levels[a + b];
                        assert_eq!(kreweras_within(&concat(p, q), all).unwrap(), right_merge(&kp, &kq));
                        assert_eq!(kreweras_within(&left_merge(p, q), all).unwrap(), concat(&kp, &kq));
                    }
                }
            }
        }
    }

    #[test]
    fn refinement_order() {
        for n in 0..=5 {
            let all = enumerate_ncp(n);
            for p in &all {
                assert!(Partition::zero(n).refines(p));
                assert!(p.refines(&Partition::one(n)));
                assert!(p.refines(p));
                for q in &all {
                    if p.refines(q) && q.refines(p) {
                        assert_eq!(p, q);
                    }
                }
            }
        }
    }

    #[test]
    fn json_form() {
        let p = part(&[&[1, 3], &[2], &[4]]);
        assert_eq!(serde_json::to_string(&p).unwrap(), "[[1,3],[2],[4]]");
        let back: Partition = serde_json::from_str("[[3,1],[4],[2]]").unwrap();
        assert_eq!(back, p);
        assert!(serde_json::from_str::<Partition>("[[1,1]]").is_err());
    }

    #[test]
    fn ascii_rendering() {
        let s = part(&[&[1, 3], &[2]]).render_ascii();
        assert_eq!(s.lines().count(), 3);
        assert!(s.lines().nth(1).unwrap().contains("|---|"));
    }
}
