//! Tree-indexed evaluation of series: `f_τ`, the alternating `(f∪g)_τ`, and a
//! tensor-valued evaluator that keeps some arguments free.

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::multimap::MultiMap;
use crate::series::TruncSeries;
use crate::trees::{comb_decompose, Tree};

/// Positions of the spine arguments of `comb(τ_1, …, τ_k)` and the ranges of
/// the arguments fed to each `τ_i`.
fn spine_layout(parts: &[Tree]) -> Vec<(usize, usize)> {
    let mut pos = 0;
    parts
        .iter()
        .map(|t| {
            let start = pos;
            pos += t.size() + 1;
            (start, pos - 1)
        })
        .collect()
}

fn degree(s: &TruncSeries, k: usize) -> Result<&MultiMap> {
    if k > s.order() {
        return Err(Error::DegreeOverflow { needed: k, order: s.order() });
    }
    Ok(s.map(k))
}

fn check_args(tau: &Tree, args: &[AlgebraElement], d: usize) -> Result<()> {
    if args.len() != tau.size() {
        return Err(Error::ArityMismatch { expected: tau.size(), found: args.len() });
    }
    if let Some(a) = args.iter().find(|a| a.dim() != d) {
        return Err(Error::DimensionMismatch { expected: d, found: a.dim() });
    }
    Ok(())
}

fn eval_by_depth<'a>(
    tau: &Tree,
    args: &[AlgebraElement],
    depth: usize,
    pick: &dyn Fn(usize) -> &'a TruncSeries,
) -> Result<AlgebraElement> {
    let s = pick(depth);
    let parts = match comb_decompose(tau) {
        Ok(p) => p,
        Err(_) => return Ok(AlgebraElement::one(s.dim())),
    };
    let map = degree(s, parts.len())?;
    let mut inner = Vec::with_capacity(parts.len());
    for (t, (start, spine)) in parts.iter().zip(spine_layout(&parts)) {
        let v = eval_by_depth(t, &args[start..spine], depth + 1, pick)?;
        inner.push(&v * &args[spine]);
    }
    map.eval(&inner)
}

/// `f_τ(x_1, …, x_n)`, with `f_| = 1`.
pub fn tree_eval(f: &TruncSeries, tau: &Tree, args: &[AlgebraElement]) -> Result<AlgebraElement> {
    check_args(tau, args, f.dim())?;
    eval_by_depth(tau, args, 0, &|_| f)
}

/// `(f∪g)_τ(x_1, …, x_n)`: `g` on the root spine, then alternating with depth.
pub fn alt_tree_eval(f: &TruncSeries, g: &TruncSeries, tau: &Tree, args: &[AlgebraElement]) -> Result<AlgebraElement> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: g.dim(), found: f.dim() });
    }
    check_args(tau, args, g.dim())?;
    eval_by_depth(tau, args, 0, &|depth| if depth % 2 == 0 { g } else { f })
}

/// An argument of a tensor-valued tree evaluation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    /// Left as a variable of the resulting multilinear map.
    Free,
    /// A fixed element.
    Fixed(AlgebraElement),
}

/// Picks the series applied at a spine, given its nesting depth and the
/// letters of the spine arguments; `None` means that spine contributes zero.
pub type Chooser<'a> = dyn Fn(usize, &[u8]) -> Option<&'a TruncSeries> + 'a;

/// Evaluates a tree with some arguments free, returning the multilinear map
/// in the free arguments (in order). `letters` tag each argument for the
/// chooser. Returns `None` when the value is identically zero.
pub fn tree_tensor(
    d: usize,
    tau: &Tree,
    slots: &[Slot],
    letters: &[u8],
    choose: &Chooser<'_>,
) -> Result<Option<MultiMap>> {
    if slots.len() != tau.size() || letters.len() != tau.size() {
        return Err(Error::ArityMismatch { expected: tau.size(), found: slots.len().min(letters.len()) });
    }
    tensor_rec(d, tau, slots, letters, 0, choose)
}

fn tensor_rec(
    d: usize,
    tau: &Tree,
    slots: &[Slot],
    letters: &[u8],
    depth: usize,
    choose: &Chooser<'_>,
) -> Result<Option<MultiMap>> {
    let parts = match comb_decompose(tau) {
        Ok(p) => p,
        Err(_) => return Ok(Some(MultiMap::constant(AlgebraElement::one(d)))),
    };
    let layout = spine_layout(&parts);
    let spine: Vec<u8> = layout.iter().map(|&(_, j)| letters[j]).collect();
    let series = match choose(depth, &spine) {
        Some(s) => s,
        None => return Ok(None),
    };
    let map = degree(series, parts.len())?;
    if map.is_zero() {
        return Ok(None);
    }
    let mut inners = Vec::with_capacity(parts.len());
    for (t, &(start, j)) in parts.iter().zip(&layout) {
        let sub = match tensor_rec(d, t, &slots[start..j], &letters[start..j], depth + 1, choose)? {
            Some(m) => m,
            None => return Ok(None),
        };
        let x = match &slots[j] {
            Slot::Free => MultiMap::identity(d),
            Slot::Fixed(e) => MultiMap::constant(e.clone()),
        };
        inners.push(MultiMap::product(&sub, &x)?);
    }
    let out = MultiMap::contract(map, &inners)?;
    Ok(if out.is_zero() { None } else { Some(out) })
}

/// `Σ_τ` of [`tree_tensor`] over `trees`, as a map of arity `free`.
pub fn tree_tensor_sum(
    d: usize,
    trees: &[Tree],
    slots: &[Slot],
    letters: &[u8],
    choose: &Chooser<'_>,
) -> Result<MultiMap> {
    let free = slots.iter().filter(|s| **s == Slot::Free).count();
    let mut acc = MultiMap::zero(d, free);
    for t in trees {
        if let Some(m) = tree_tensor(d, t, slots, letters, choose)? {
            acc.add_assign(&m)?;
        }
    }
    Ok(acc)
}

/// `f_τ` as a multilinear map in the free slots.
pub fn tree_map(f: &TruncSeries, tau: &Tree, slots: &[Slot]) -> Result<MultiMap> {
    let letters = vec![0; slots.len()];
    tree_tensor_sum(f.dim(), std::slice::from_ref(tau), slots, &letters, &|_, _| Some(f))
}

/// `(f∪g)_τ` as a multilinear map in the free slots.
pub fn alt_tree_map(f: &TruncSeries, g: &TruncSeries, tau: &Tree, slots: &[Slot]) -> Result<MultiMap> {
    let letters = vec![0; slots.len()];
    tree_tensor_sum(g.dim(), std::slice::from_ref(tau), slots, &letters, &|depth, _| {
        Some(if depth % 2 == 0 { g } else { f })
    })
}
