//! Multilinear maps `B^{⊗n} → B` stored as dense tables over basis tuples.

use std::fmt;

use num_traits::Zero;
use serde_json::Value;

use crate::algebra::{AlgebraElement, LinMap};
use crate::error::{Error, Result};

/// An `n`-linear map on `B = M_d(Q)`, given by its values on tuples of matrix
/// units. The first slot is the most significant digit of the flat index.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiMap {
    d: usize,
    arity: usize,
    values: Vec<AlgebraElement>,
}

fn pow(m: usize, n: usize) -> usize {
    m.pow(n as u32)
}

impl MultiMap {
    pub fn zero(d: usize, arity: usize) -> Self {
        MultiMap { d, arity, values: vec![AlgebraElement::zero(d); pow(d * d, arity)] }
    }

    /// Degree 0 map with value `c`.
    pub fn constant(c: AlgebraElement) -> Self {
        MultiMap { d: c.dim(), arity: 0, values: vec![c] }
    }

    /// The identity map `x ↦ x`.
    pub fn identity(d: usize) -> Self {
        MultiMap { d, arity: 1, values: (0..d * d).map(|i| AlgebraElement::basis(d, i)).collect() }
    }

    pub fn from_linmap(l: &LinMap) -> Self {
        let d = l.dim();
        MultiMap { d, arity: 1, values: (0..d * d).map(|i| l.apply(&AlgebraElement::basis(d, i))).collect() }
    }

    /// Builds the table from a function of the basis tuple.
    pub fn from_fn(d: usize, arity: usize, mut f: impl FnMut(&[usize]) -> AlgebraElement) -> Self {
        let m = d * d;
        let total = pow(m, arity);
        let mut values = Vec::with_capacity(total);
        let mut idx = vec![0usize; arity];
        for flat in 0..total {
            let mut r = flat;
            for k in (0..arity).rev() {
                idx[k] = r % m;
                r /= m;
            }
            values.push(f(&idx));
        }
        MultiMap { d, arity, values }
    }

    pub fn from_values(d: usize, arity: usize, values: Vec<AlgebraElement>) -> Result<Self> {
        let need = pow(d * d, arity);
        if values.len() != need {
            return Err(Error::SizeMismatch(need, values.len()));
        }
        if let Some(v) = values.iter().find(|v| v.dim() != d) {
            return Err(Error::DimensionMismatch { expected: d, found: v.dim() });
        }
        Ok(MultiMap { d, arity, values })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn basis_len(&self) -> usize {
        self.d * self.d
    }

    pub fn values(&self) -> &[AlgebraElement] {
        &self.values
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        let m = self.basis_len();
        idx.iter().fold(0, |acc, &i| acc * m + i)
    }

    pub fn unflatten(&self, flat: usize) -> Vec<usize> {
        let m = self.basis_len();
        let mut idx = vec![0; self.arity];
        let mut r = flat;
        for k in (0..self.arity).rev() {
            idx[k] = r % m;
            r /= m;
        }
        idx
    }

    /// Value on the basis tuple `(E_{i_1}, …, E_{i_n})`.
    pub fn value(&self, idx: &[usize]) -> &AlgebraElement {
        &self.values[self.flat_index(idx)]
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(AlgebraElement::is_zero)
    }

    /// Degree 0 value; panics on other arities.
    pub fn constant_value(&self) -> &AlgebraElement {
        assert_eq!(self.arity, 0);
        &self.values[0]
    }

    fn check_same(&self, other: &MultiMap) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: other.d });
        }
        if self.arity != other.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: other.arity });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiMap) -> Result<MultiMap> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a + b).collect();
        Ok(MultiMap { d: self.d, arity: self.arity, values })
    }

    pub fn sub(&self, other: &MultiMap) -> Result<MultiMap> {
        self.check_same(other)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a - b).collect();
        Ok(MultiMap { d: self.d, arity: self.arity, values })
    }

    pub fn add_assign(&mut self, other: &MultiMap) -> Result<()> {
        self.check_same(other)?;
        for (a, b) in self.values.iter_mut().zip(&other.values) {
            a.add_assign_ref(b);
        }
        Ok(())
    }

    pub fn neg(&self) -> MultiMap {
        MultiMap { d: self.d, arity: self.arity, values: self.values.iter().map(|v| -v).collect() }
    }

    /// `x ↦ c · self(x)`
    pub fn left_mul(&self, c: &AlgebraElement) -> MultiMap {
        MultiMap { d: self.d, arity: self.arity, values: self.values.iter().map(|v| c * v).collect() }
    }

    /// `x ↦ self(x) · c`
    pub fn right_mul(&self, c: &AlgebraElement) -> MultiMap {
        MultiMap { d: self.d, arity: self.arity, values: self.values.iter().map(|v| v * c).collect() }
    }

    /// `x ↦ L(self(x))`
    pub fn apply_linmap(&self, l: &LinMap) -> MultiMap {
        MultiMap { d: self.d, arity: self.arity, values: self.values.iter().map(|v| l.apply(v)).collect() }
    }

    /// Pointwise product `(a ⊗ b)(x, y) = a(x) b(y)`, slots of `a` first.
    pub fn product(a: &MultiMap, b: &MultiMap) -> Result<MultiMap> {
        if a.d != b.d {
            return Err(Error::DimensionMismatch { expected: a.d, found: b.d });
        }
        if a.arity == 0 {
            return Ok(b.left_mul(&a.values[0]));
        }
        if b.arity == 0 {
            return Ok(a.right_mul(&b.values[0]));
        }
        let mut values = Vec::with_capacity(a.values.len() * b.values.len());
        for x in &a.values {
            for y in &b.values {
                values.push(x * y);
            }
        }
        Ok(MultiMap { d: a.d, arity: a.arity + b.arity, values })
    }

    /// Substitutes `inner` into slot `s`; the slots of `inner` take its place.
    pub fn replace_slot(&self, s: usize, inner: &MultiMap) -> Result<MultiMap> {
        if s >= self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: s + 1 });
        }
        if inner.d != self.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: inner.d });
        }
        let d = self.d;
        let m = d * d;
        let pre = pow(m, s);
        let post = pow(m, self.arity - 1 - s);
        let mid = pow(m, inner.arity);
        let mut values = Vec::with_capacity(pre * mid * post);
        for a in 0..pre {
            for j in 0..mid {
                let coords = inner.values[j].entries();
                for b in 0..post {
                    let mut acc = AlgebraElement::zero(d);
                    for (p, c) in coords.iter().enumerate() {
                        if !c.is_zero() {
                            acc.add_scaled(c, &self.values[(a * m + p) * post + b]);
                        }
                    }
                    values.push(acc);
                }
            }
        }
        Ok(MultiMap { d, arity: self.arity - 1 + inner.arity, values })
    }

    /// Fixes slot `s` to the element `x`.
    pub fn fix_slot(&self, s: usize, x: &AlgebraElement) -> Result<MultiMap> {
        self.replace_slot(s, &MultiMap::constant(x.clone()))
    }

    /// `outer(inner_1(…), …, inner_k(…))`, the slots of the inners concatenated.
    pub fn contract(outer: &MultiMap, inners: &[MultiMap]) -> Result<MultiMap> {
        if inners.len() != outer.arity {
            return Err(Error::ArityMismatch { expected: outer.arity, found: inners.len() });
        }
        let mut cur = outer.clone();
        for (s, inner) in inners.iter().enumerate().rev() {
            cur = cur.replace_slot(s, inner)?;
        }
        Ok(cur)
    }

    /// Evaluation on arbitrary arguments, expanding each by linearity.
    pub fn eval(&self, args: &[AlgebraElement]) -> Result<AlgebraElement> {
        if args.len() != self.arity {
            return Err(Error::ArityMismatch { expected: self.arity, found: args.len() });
        }
        if let Some(a) = args.iter().find(|a| a.dim() != self.d) {
            return Err(Error::DimensionMismatch { expected: self.d, found: a.dim() });
        }
        let mut out = AlgebraElement::zero(self.d);
        self.eval_rec(args, 0, 0, &num_traits::One::one(), &mut out);
        Ok(out)
    }

    fn eval_rec(
        &self,
        args: &[AlgebraElement],
        slot: usize,
        flat: usize,
        coeff: &crate::algebra::Rational,
        out: &mut AlgebraElement,
    ) {
        if slot == args.len() {
            out.add_scaled(coeff, &self.values[flat]);
            return;
        }
        let m = self.basis_len();
        for (p, c) in args[slot].entries().iter().enumerate() {
            if !c.is_zero() {
                self.eval_rec(args, slot + 1, flat * m + p, &(coeff * c), out);
            }
        }
    }

    /// First basis tuple where the two maps differ.
    pub fn first_difference(&self, other: &MultiMap) -> Option<Vec<usize>> {
        if self.d != other.d || self.arity != other.arity {
            return Some(Vec::new());
        }
        self.values.iter().zip(&other.values).position(|(a, b)| a != b).map(|i| self.unflatten(i))
    }

    pub fn to_json(&self) -> Value {
        if self.arity == 0 {
            return serde_json::to_value(&self.values[0]).expect("serializable");
        }
        self.nested(0, 0)
    }

    fn nested(&self, depth: usize, flat: usize) -> Value {
        let m = self.basis_len();
        if depth == self.arity {
            return serde_json::to_value(&self.values[flat]).expect("serializable");
        }
        Value::Array((0..m).map(|p| self.nested(depth + 1, flat * m + p)).collect())
    }

    pub fn from_json(d: usize, arity: usize, v: &Value) -> Result<MultiMap> {
        let mut values = Vec::with_capacity(pow(d * d, arity));
        collect_nested(d, arity, v, &mut values)?;
        MultiMap::from_values(d, arity, values)
    }
}

fn collect_nested(d: usize, depth: usize, v: &Value, out: &mut Vec<AlgebraElement>) -> Result<()> {
    if depth == 0 {
        let e: AlgebraElement =
            serde_json::from_value(v.clone()).map_err(|e| Error::Parse(format!("algebra element: {e}")))?;
        if e.dim() != d {
            return Err(Error::DimensionMismatch { expected: d, found: e.dim() });
        }
        out.push(e);
        return Ok(());
    }
    let arr = v.as_array().ok_or_else(|| Error::Parse("expected a nested tensor array".into()))?;
    if arr.len() != d * d {
        return Err(Error::SizeMismatch(d * d, arr.len()));
    }
    for x in arr {
        collect_nested(d, depth - 1, x, out)?;
    }
    Ok(())
}

impl fmt::Debug for MultiMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiMap(d={}, n={}, {})", self.d, self.arity, self.to_json())
    }
}

/// Evaluates `m` on `args`.
pub fn eval_map(m: &MultiMap, args: &[AlgebraElement]) -> Result<AlgebraElement> {
    m.eval(args)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{random_element, rat};

    fn sample(d: usize, arity: usize, seed: u64) -> MultiMap {
        let mut s = seed;
        MultiMap::from_fn(d, arity, |_| {
            s += 1;
            random_element(s, 3, d)
        })
    }

    #[test]
    fn degree_zero_and_identity() {
        let v = AlgebraElement::from_ints(2, &[1, 2, 3, 4]);
        assert_eq!(eval_map(&MultiMap::constant(v.clone()), &[]).unwrap(), v);
        assert_eq!(eval_map(&MultiMap::identity(2), std::slice::from_ref(&v)).unwrap(), v);
    }

    #[test]
    fn eval_on_basis_tuple_is_table_entry() {
        let m = sample(2, 3, 7);
        let args: Vec<_> = [1, 3, 2].iter().map(|&i| AlgebraElement::basis(2, i)).collect();
        assert_eq!(&m.eval(&args).unwrap(), m.value(&[1, 3, 2]));
    }

    #[test]
    fn eval_is_multilinear() {
        let m = sample(2, 2, 11);
        let (x, y, z) = (random_element(1, 3, 2), random_element(2, 3, 2), random_element(3, 3, 2));
        let c = rat(5);
        let lhs = m.eval(&[&x + &y.scale(&c), z.clone()]).unwrap();
        let rhs = &m.eval(&[x, z.clone()]).unwrap() + &m.eval(&[y, z]).unwrap().scale(&c);
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn contract_matches_pointwise_evaluation() {
        let outer = sample(2, 2, 20);
        let a = sample(2, 1, 30);
        let b = sample(2, 2, 40);
        let c = MultiMap::contract(&outer, &[a.clone(), b.clone()]).unwrap();
        assert_eq!(c.arity(), 3);
        let xs: Vec<_> = (0..3).map(|i| random_element(100 + i, 3, 2)).collect();
        let inner_a = a.eval(&xs[..1]).unwrap();
        let inner_b = b.eval(&xs[1..]).unwrap();
        assert_eq!(c.eval(&xs).unwrap(), outer.eval(&[inner_a, inner_b]).unwrap());
    }

    #[test]
    fn product_and_fix_slot() {
        let a = sample(2, 1, 50);
        let b = sample(2, 2, 60);
        let p = MultiMap::product(&a, &b).unwrap();
        let xs: Vec<_> = (0..3).map(|i| random_element(200 + i, 3, 2)).collect();
        assert_eq!(p.eval(&xs).unwrap(), &a.eval(&xs[..1]).unwrap() * &b.eval(&xs[1..]).unwrap());
        let f = b.fix_slot(1, &xs[2]).unwrap();
        assert_eq!(f.eval(&xs[..1]).unwrap(), b.eval(&[xs[0].clone(), xs[2].clone()]).unwrap());
    }

    #[test]
    fn json_roundtrip() {
        for arity in 0..=2 {
            let m = sample(2, arity, 70);
            let back = MultiMap::from_json(2, arity, &m.to_json()).unwrap();
            assert_eq!(back, m);
        }
        assert!(MultiMap::from_json(2, 1, &serde_json::json!([])).is_err());
    }

    #[test]
    fn errors() {
        let m = sample(2, 2, 1);
        assert!(m.eval(&[AlgebraElement::one(2)]).is_err());
        assert!(m.eval(&[AlgebraElement::one(1), AlgebraElement::one(1)]).is_err());
        assert!(MultiMap::contract(&m, &[]).is_err());
    }
}
