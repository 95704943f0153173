//! Evaluation of `f_τ` through the operad morphism `Φ_f` from binary trees
//! (the duplicial operad) to multilinear endomorphisms of the tensor algebra.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::algebra::{AlgebraElement, Rational};
use crate::error::{Error, Result};
use crate::series::TruncSeries;
use crate::trees::{substitute, Tree};

/// An element of the non-unital tensor algebra `T(B)`, expanded on words of
/// matrix units.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorWord {
    d: usize,
    terms: BTreeMap<Vec<usize>, Rational>,
}

impl TensorWord {
    pub fn zero(d: usize) -> Self {
        TensorWord { d, terms: BTreeMap::new() }
    }

    /// The pure tensor `x_1 ⊗ … ⊗ x_n`.
    pub fn pure(xs: &[AlgebraElement]) -> Result<Self> {
        let first = xs.first().ok_or(Error::ArityMismatch { expected: 1, found: 0 })?;
        let d = first.dim();
        let mut out = TensorWord { d, terms: BTreeMap::new() };
        out.terms.insert(Vec::new(), Rational::from_integer(1.into()));
        for x in xs {
            if x.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: x.dim() });
            }
            let mut next = BTreeMap::new();
            for (w, c) in &out.terms {
                for (i, e) in x.entries().iter().enumerate() {
                    if !e.is_zero() {
                        let mut w2 = w.clone();
                        w2.push(i);
                        *next.entry(w2).or_insert_with(Rational::zero) += c * e;
                    }
                }
            }
            out.terms = next;
        }
        out.prune();
        Ok(out)
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.terms.keys().map(Vec::len).max().unwrap_or(0)
    }

    pub fn add(&self, other: &TensorWord) -> TensorWord {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            *out.terms.entry(w.clone()).or_insert_with(Rational::zero) += c;
        }
        out.prune();
        out
    }

    pub fn scale(&self, c: &Rational) -> TensorWord {
        let mut out = self.clone();
        for v in out.terms.values_mut() {
            *v *= c;
        }
        out.prune();
        out
    }

    /// Concatenation `u ⊗ v`, extended bilinearly.
    pub fn concat(&self, other: &TensorWord) -> TensorWord {
        let mut out = TensorWord::zero(self.d);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                *out.terms.entry(w).or_insert_with(Rational::zero) += a * b;
            }
        }
        out.prune();
        out
    }

    /// Left action on the first factor: `b(x_1 ⊗ …) = (b x_1) ⊗ …`.
    pub fn left_act(&self, b: &AlgebraElement) -> TensorWord {
        let mut out = TensorWord::zero(self.d);
        for (w, c) in &self.terms {
            let head = b.mul_basis_right(w[0]);
            for (i, e) in head.entries().iter().enumerate() {
                if !e.is_zero() {
                    let mut w2 = w.clone();
                    w2[0] = i;
                    *out.terms.entry(w2).or_insert_with(Rational::zero) += c * e;
                }
            }
        }
        out.prune();
        out
    }
}

/// `f` read as a map `T(B) → B`: `x_1 ⊗ … ⊗ x_n ↦ f_n(x_1, …, x_n)`.
pub fn apply_series(f: &TruncSeries, u: &TensorWord) -> Result<AlgebraElement> {
    let mut out = AlgebraElement::zero(f.dim());
    for (w, c) in &u.terms {
        if w.len() > f.order() {
            return Err(Error::DegreeOverflow { needed: w.len(), order: f.order() });
        }
        out.add_scaled(c, f.map(w.len()).value(w));
    }
    Ok(out)
}

/// `Φ_f(A): u|v ↦ f(u)v`, where `A = ∨(•, |)`.
pub fn phi_a(f: &TruncSeries, u: &TensorWord, v: &TensorWord) -> Result<TensorWord> {
    Ok(v.left_act(&apply_series(f, u)?))
}

/// `Φ_f(B): u|v ↦ u ⊗ v`, where `B = ∨(|, •)`.
pub fn phi_b(u: &TensorWord, v: &TensorWord) -> TensorWord {
    u.concat(v)
}

/// The generator `∨(•, |)`.
pub fn gen_a() -> Tree {
    Tree::wedge(Tree::single(), Tree::Leaf)
}

/// The generator `∨(|, •)`.
pub fn gen_b() -> Tree {
    Tree::wedge(Tree::Leaf, Tree::single())
}

/// `Φ_f(τ)(w_1 | … | w_n)` for a tree with `n ≥ 1` vertices, through
/// `∨(l, |) = A∘(l, •)` and `∨(l, r) = B∘(∨(l, |), r)`.
pub fn phi(f: &TruncSeries, tau: &Tree, words: &[TensorWord]) -> Result<TensorWord> {
    if words.len() != tau.size() {
        return Err(Error::ArityMismatch { expected: tau.size(), found: words.len() });
    }
    let (l, r) = tau.children().ok_or(Error::EmptyTree)?;
    let k = l.size();
    let planted = if l.is_leaf() { words[0].clone() } else { phi_a(f, &phi(f, l, &words[..k])?, &words[k])? };
    if r.is_leaf() {
        Ok(planted)
    } else {
        Ok(phi_b(&planted, &phi(f, r, &words[k + 1..])?))
    }
}

/// `f_τ(x_1, …, x_n) = f(Φ_f(τ)(x_1 | … | x_n))`, for `f ∈ I·Mult`.
pub fn operad_eval(f: &TruncSeries, tau: &Tree, args: &[AlgebraElement]) -> Result<AlgebraElement> {
    if !f.map(0).is_zero() || !f.is_left_absorbing() {
        return Err(Error::ClassViolation("operadic evaluation needs f in I·Mult".into()));
    }
    if args.len() != tau.size() {
        return Err(Error::ArityMismatch { expected: tau.size(), found: args.len() });
    }
    if tau.is_leaf() {
        return Ok(AlgebraElement::one(f.dim()));
    }
    let words = args.iter().map(|x| TensorWord::pure(std::slice::from_ref(x))).collect::<Result<Vec<_>>>()?;
    apply_series(f, &phi(f, tau, &words)?)
}

/// The three relations of the duplicial operad, as tree identities.
pub fn duplicial_tree_relations() -> [(Tree, Tree); 3] {
    let (a, b, o) = (gen_a(), gen_b(), Tree::single());
    let s = |t: &Tree, x: &Tree, y: &Tree| substitute(t, &[x.clone(), y.clone()]).expect("two vertices");
    [
        (s(&a, &a, &o), s(&a, &o, &a)),
        (s(&b, &b, &o), s(&b, &o, &b)),
        (s(&b, &a, &o), s(&a, &o, &b)),
    ]
}

/// Both sides of the three relations, evaluated in `End_{T(B)}` on `u|v|w`.
pub fn duplicial_map_relations(
    f: &TruncSeries,
    u: &TensorWord,
    v: &TensorWord,
    w: &TensorWord,
) -> Result<[(TensorWord, TensorWord); 3]> {
    Ok([
        (phi_a(f, &phi_a(f, u, v)?, w)?, phi_a(f, u, &phi_a(f, v, w)?)?),
        (phi_b(&phi_b(u, v), w), phi_b(u, &phi_b(v, w))),
        (phi_b(&phi_a(f, u, v)?, w), phi_a(f, u, &phi_b(v, w))?),
    ])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::random_element;
    use crate::series::{random_gi, random_series};
    use crate::treeval::tree_eval;
    use crate::trees::enumerate_trees;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn xs(n: usize, seed: u64) -> Vec<AlgebraElement> {
        (0..n).map(|i| random_element(seed * 31 + i as u64, 3, 2)).collect()
    }

    #[test]
    fn tree_relations_hold() {
        for (l, r) in duplicial_tree_relations() {
            assert_eq!(l, r);
            assert_eq!(l.size(), 3);
        }
    }

    #[test]
    fn right_comb_is_the_pure_tensor() {
        let mut r = ChaCha8Rng::seed_from_u64(1);
        let f = random_gi(&mut r, 2, 4, 2);
        for n in 1..=4 {
            let x = xs(n, n as u64);
            let words: Vec<_> = x.iter().map(|e| TensorWord::pure(std::slice::from_ref(e)).unwrap()).collect();
            assert_eq!(phi(&f, &Tree::right_comb(n), &words).unwrap(), TensorWord::pure(&x).unwrap());
            assert_eq!(operad_eval(&f, &Tree::right_comb(n), &x).unwrap(), f.map(n).eval(&x).unwrap());
        }
        assert_eq!(operad_eval(&f, &Tree::Leaf, &[]).unwrap(), AlgebraElement::one(2));
    }

    #[test]
    fn agrees_with_tree_eval() {
        let mut r = ChaCha8Rng::seed_from_u64(2);
        let f = random_gi(&mut r, 2, 4, 2);
        for n in 0..=4 {
            for tau in enumerate_trees(n) {
                let x = xs(n, 3);
                assert_eq!(operad_eval(&f, &tau, &x).unwrap(), tree_eval(&f, &tau, &x).unwrap());
            }
        }
    }

    #[test]
    fn map_relations_hold() {
        let mut r = ChaCha8Rng::seed_from_u64(3);
        let f = random_gi(&mut r, 2, 4, 2);
        let u = TensorWord::pure(&xs(1, 1)).unwrap().add(&TensorWord::pure(&xs(2, 2)).unwrap());
        let v = TensorWord::pure(&xs(1, 3)).unwrap();
        let w = TensorWord::pure(&xs(2, 4)).unwrap();
        for (l, r) in duplicial_map_relations(&f, &u, &v, &w).unwrap() {
            assert_eq!(l, r);
        }
    }

    #[test]
    fn rejects_series_outside_i_mult() {
        let mut r = ChaCha8Rng::seed_from_u64(4);
        let f = random_series(&mut r, 2, 3, 2);
        assert!(operad_eval(&f, &Tree::single(), &xs(1, 1)).is_err());
    }

    #[test]
    fn left_action_matches_product() {
        let x = xs(2, 9);
        let b = random_element(77, 3, 2);
        let lhs = TensorWord::pure(&x).unwrap().left_act(&b);
        let rhs = TensorWord::pure(&[&b * &x[0], x[1].clone()]).unwrap();
        assert_eq!(lhs, rhs);
    }
}
