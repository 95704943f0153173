//! Truncated multilinear function series `f = (f_0, f_1, …, f_N)`.
//!
//! `order` is the largest degree that is known exactly. Products and
//! compositions report the order that their inputs actually determine, which
//! can exceed the smaller input order when one factor has positive valuation.

use std::fmt;

use rand::Rng;
use serde_json::{json, Value};

use crate::algebra::{random_integer_element, random_invertible_with, AlgebraElement, LinMap};
use crate::error::{Error, Result};
use crate::multimap::MultiMap;

#[derive(Clone, PartialEq, Eq)]
pub struct TruncSeries {
    d: usize,
    maps: Vec<MultiMap>,
}

/// The series classes of the multiplicative and compositional groups.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeriesClass {
    /// `f_0` invertible.
    Inv,
    /// `f_0 = 0` and `f_1` invertible.
    Dif,
    /// `f = I·F` with `F_0` invertible.
    I,
}

impl TruncSeries {
    pub fn new(d: usize, maps: Vec<MultiMap>) -> Result<Self> {
        if maps.is_empty() {
            return Err(Error::SizeMismatch(1, 0));
        }
        for (n, m) in maps.iter().enumerate() {
            if m.dim() != d {
                return Err(Error::DimensionMismatch { expected: d, found: m.dim() });
            }
            if m.arity() != n {
                return Err(Error::ArityMismatch { expected: n, found: m.arity() });
            }
        }
        Ok(TruncSeries { d, maps })
    }

    pub fn zero(d: usize, order: usize) -> Self {
        TruncSeries { d, maps: (0..=order).map(|n| MultiMap::zero(d, n)).collect() }
    }

    /// The unit `1` of the product.
    pub fn one(d: usize, order: usize) -> Self {
        Self::constant(AlgebraElement::one(d), order)
    }

    pub fn constant(c: AlgebraElement, order: usize) -> Self {
        let mut s = Self::zero(c.dim(), order);
        s.maps[0] = MultiMap::constant(c);
        s
    }

    /// The unit `I` of composition.
    pub fn identity(d: usize, order: usize) -> Self {
        let mut s = Self::zero(d, order.max(1));
        s.maps[1] = MultiMap::identity(d);
        s.truncate(order)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn order(&self) -> usize {
        self.maps.len() - 1
    }

    pub fn map(&self, n: usize) -> &MultiMap {
        &self.maps[n]
    }

    pub fn maps(&self) -> &[MultiMap] {
        &self.maps
    }

    pub fn set_map(&mut self, n: usize, m: MultiMap) -> Result<()> {
        if n > self.order() {
            return Err(Error::DegreeOverflow { needed: n, order: self.order() });
        }
        if m.arity() != n || m.dim() != self.d {
            return Err(Error::ArityMismatch { expected: n, found: m.arity() });
        }
        self.maps[n] = m;
        Ok(())
    }

    pub fn truncate(&self, order: usize) -> TruncSeries {
        let k = order.min(self.order());
        TruncSeries { d: self.d, maps: self.maps[..=k].to_vec() }
    }

    /// First nonzero degree, or `order + 1` when every known degree vanishes.
    pub fn valuation(&self) -> usize {
        self.maps.iter().position(|m| !m.is_zero()).unwrap_or(self.maps.len())
    }

    fn check_dim(&self, other: &TruncSeries) -> Result<()> {
        if self.d != other.d {
            return Err(Error::DimensionMismatch { expected: self.d, found: other.d });
        }
        Ok(())
    }

    pub fn add(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_dim(other)?;
        let n = self.order().min(other.order());
        let maps = (0..=n).map(|k| self.maps[k].add(&other.maps[k])).collect::<Result<_>>()?;
        Ok(TruncSeries { d: self.d, maps })
    }

    pub fn sub(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_dim(other)?;
        let n = self.order().min(other.order());
        let maps = (0..=n).map(|k| self.maps[k].sub(&other.maps[k])).collect::<Result<_>>()?;
        Ok(TruncSeries { d: self.d, maps })
    }

    /// `(f·g)_n(x_1…x_n) = Σ_k f_k(x_1…x_k) g_{n−k}(x_{k+1}…x_n)`.
    pub fn mul(&self, other: &TruncSeries) -> Result<TruncSeries> {
        self.check_dim(other)?;
        let order = (self.order() + other.valuation()).min(other.order() + self.valuation());
        let mut maps = Vec::with_capacity(order + 1);
        for n in 0..=order {
            let mut acc = MultiMap::zero(self.d, n);
            for k in 0..=n {
                if k > self.order() || n - k > other.order() {
                    continue;
                }
                let (a, b) = (&self.maps[k], &other.maps[n - k]);
                if a.is_zero() || b.is_zero() {
                    continue;
                }
                acc.add_assign(&MultiMap::product(a, b)?)?;
            }
            maps.push(acc);
        }
        Ok(TruncSeries { d: self.d, maps })
    }

    /// Degree `n` of `f∘g`, using only the stored degrees of both series.
    fn compose_degree(&self, g: &TruncSeries, n: usize) -> Result<MultiMap> {
        if n == 0 {
            return Ok(self.maps[0].clone());
        }
        let mut acc = MultiMap::zero(self.d, n);
        let mut parts = Vec::new();
        self.compose_rec(g, n, &mut parts, &mut acc)?;
        Ok(acc)
    }

    fn compose_rec(&self, g: &TruncSeries, rest: usize, parts: &mut Vec<usize>, acc: &mut MultiMap) -> Result<()> {
        if rest == 0 {
            let l = parts.len();
            if l <= self.order() && !self.maps[l].is_zero() {
                let inners: Vec<MultiMap> = parts.iter().map(|&k| g.maps[k].clone()).collect();
                acc.add_assign(&MultiMap::contract(&self.maps[l], &inners)?)?;
            }
            return Ok(());
        }
        if parts.len() >= self.order() {
            return Ok(());
        }
        for k in 1..=rest.min(g.order()) {
            if g.maps[k].is_zero() {
                continue;
            }
            parts.push(k);
            self.compose_rec(g, rest - k, parts, acc)?;
            parts.pop();
        }
        Ok(())
    }

    /// `(f∘g)_n = Σ_{k_1+…+k_l=n} f_l(g_{k_1}(…), …, g_{k_l}(…))`; needs `g_0 = 0`.
    pub fn compose(&self, g: &TruncSeries) -> Result<TruncSeries> {
        self.check_dim(g)?;
        if !g.maps[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let v = g.valuation();
        let order = ((self.order() + 1) * v).saturating_sub(1).min(g.order());
        let maps = (0..=order).map(|n| self.compose_degree(g, n)).collect::<Result<_>>()?;
        Ok(TruncSeries { d: self.d, maps })
    }

    /// Inverse for the product; needs `f_0` invertible.
    pub fn mult_inverse(&self) -> Result<TruncSeries> {
        let f0inv = self.maps[0].constant_value().inverse()?;
        let mut maps = vec![MultiMap::constant(f0inv.clone())];
        for n in 1..=self.order() {
            let mut acc = MultiMap::zero(self.d, n);
            for k in 1..=n {
                if self.maps[k].is_zero() {
                    continue;
                }
                acc.add_assign(&MultiMap::product(&self.maps[k], &maps[n - k])?)?;
            }
            maps.push(acc.left_mul(&f0inv).neg());
        }
        Ok(TruncSeries { d: self.d, maps })
    }

    /// Inverse for composition; needs `f ∈ G^dif`.
    pub fn comp_inverse(&self) -> Result<TruncSeries> {
        if !self.maps[0].is_zero() {
            return Err(Error::ClassViolation("compositional inverse needs f_0 = 0".into()));
        }
        if self.order() == 0 {
            return Ok(TruncSeries::zero(self.d, 0));
        }
        let lin = LinMap::from_images(self.maps[1].values())?;
        let linv = lin.inverse().map_err(|_| Error::ClassViolation("f_1 is not invertible".into()))?;
        let mut g = TruncSeries::zero(self.d, self.order());
        g.maps[1] = MultiMap::from_linmap(&linv);
        for n in 2..=self.order() {
            let c = self.compose_degree(&g, n)?;
            g.maps[n] = c.apply_linmap(&linv).neg();
        }
        Ok(g)
    }

    pub fn is_ginv(&self) -> bool {
        self.maps[0].constant_value().is_invertible()
    }

    pub fn is_gdif(&self) -> bool {
        self.order() >= 1
            && self.maps[0].is_zero()
            && LinMap::from_images(self.maps[1].values()).map(|l| l.inverse().is_ok()).unwrap_or(false)
    }

    /// Left absorption `f_n(x_1, …) = x_1 f_n(1, …)` on every basis tuple.
    pub fn is_left_absorbing(&self) -> bool {
        let one = AlgebraElement::one(self.d);
        self.maps.iter().skip(1).all(|m| {
            let reduced = m.fix_slot(0, &one).expect("slot 0 exists");
            let stride = reduced.values().len();
            m.values().iter().enumerate().all(|(flat, v)| {
                let (i, rest) = (flat / stride, flat % stride);
                *v == reduced.values()[rest].mul_basis_left(i)
            })
        })
    }

    pub fn is_gi(&self) -> bool {
        self.order() >= 1
            && self.maps[0].is_zero()
            && self.maps[1].eval(&[AlgebraElement::one(self.d)]).map(|x| x.is_invertible()).unwrap_or(false)
            && self.is_left_absorbing()
    }

    pub fn is_in(&self, class: SeriesClass) -> bool {
        match class {
            SeriesClass::Inv => self.is_ginv(),
            SeriesClass::Dif => self.is_gdif(),
            SeriesClass::I => self.is_gi(),
        }
    }

    pub fn require(&self, class: SeriesClass) -> Result<()> {
        if self.is_in(class) {
            Ok(())
        } else {
            Err(Error::ClassViolation(format!("series is not in G^{}", class_name(class))))
        }
    }

    /// `I·F`, one degree longer than `F`.
    pub fn left_i(&self) -> TruncSeries {
        TruncSeries::identity(self.d, self.order() + 1).mul(self).expect("same dimension")
    }

    /// `F·I`, one degree longer than `F`.
    pub fn right_i(&self) -> TruncSeries {
        self.mul(&TruncSeries::identity(self.d, self.order() + 1)).expect("same dimension")
    }

    /// `F` with `F_{n−1}(x_2…x_n) = f_n(1, x_2…x_n)`; inverse of [`Self::left_i`] on `I·Mult`.
    pub fn strip_left_i(&self) -> Result<TruncSeries> {
        self.strip_i(true)
    }

    /// `F` with `F_{n−1}(x_1…x_{n−1}) = f_n(x_1…x_{n−1}, 1)`.
    pub fn strip_right_i(&self) -> Result<TruncSeries> {
        self.strip_i(false)
    }

    fn strip_i(&self, left: bool) -> Result<TruncSeries> {
        if self.order() == 0 {
            return Err(Error::DegreeOverflow { needed: 1, order: 0 });
        }
        let one = AlgebraElement::one(self.d);
        let maps = self.maps[1..]
            .iter()
            .map(|m| m.fix_slot(if left { 0 } else { m.arity() - 1 }, &one))
            .collect::<Result<_>>()?;
        Ok(TruncSeries { d: self.d, maps })
    }

    /// First `(degree, basis tuple)` at which the two series differ, up to the
    /// smaller order.
    pub fn first_difference(&self, other: &TruncSeries) -> Option<(usize, Vec<usize>)> {
        if self.d != other.d {
            return Some((0, Vec::new()));
        }
        let n = self.order().min(other.order());
        (0..=n).find_map(|k| self.maps[k].first_difference(&other.maps[k]).map(|t| (k, t)))
    }

    /// Equal through degree `n`, both being known that far.
    pub fn agrees_through(&self, other: &TruncSeries, n: usize) -> bool {
        self.order() >= n && other.order() >= n && self.truncate(n).first_difference(&other.truncate(n)).is_none()
    }

    pub fn to_json(&self) -> Value {
        let maps: Vec<Value> = self
            .maps
            .iter()
            .enumerate()
            .map(|(n, m)| if n == 0 { json!({"n": 0, "value": m.to_json()}) } else { json!({"n": n, "tensor": m.to_json()}) })
            .collect();
        json!({"d": self.d, "N": self.order(), "maps": maps})
    }

    pub fn from_json(v: &Value) -> Result<TruncSeries> {
        let bad = |m: &str| Error::Parse(format!("series: {m}"));
        let d = v.get("d").and_then(Value::as_u64).ok_or_else(|| bad("missing d"))? as usize;
        let order = v.get("N").and_then(Value::as_u64).ok_or_else(|| bad("missing N"))? as usize;
        if d == 0 {
            return Err(bad("d must be positive"));
        }
        let arr = v.get("maps").and_then(Value::as_array).ok_or_else(|| bad("missing maps"))?;
        let mut maps: Vec<Option<MultiMap>> = vec![None; order + 1];
        for entry in arr {
            let n = entry.get("n").and_then(Value::as_u64).ok_or_else(|| bad("map without n"))? as usize;
            if n > order {
                return Err(bad("degree above N"));
            }
            let body = if n == 0 { entry.get("value") } else { entry.get("tensor") };
            let body = body.ok_or_else(|| bad("map without value/tensor"))?;
            maps[n] = Some(MultiMap::from_json(d, n, body)?);
        }
        let maps = maps.into_iter().enumerate().map(|(n, m)| m.unwrap_or_else(|| MultiMap::zero(d, n))).collect();
        TruncSeries::new(d, maps)
    }

    pub fn parse(s: &str) -> Result<TruncSeries> {
        let v: Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_json(&v)
    }
}

fn class_name(c: SeriesClass) -> &'static str {
    match c {
        SeriesClass::Inv => "inv",
        SeriesClass::Dif => "dif",
        SeriesClass::I => "I",
    }
}

impl fmt::Debug for TruncSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_json())
    }
}

pub fn series_mul(f: &TruncSeries, g: &TruncSeries) -> Result<TruncSeries> {
    f.mul(g)
}

pub fn series_compose(f: &TruncSeries, g: &TruncSeries) -> Result<TruncSeries> {
    f.compose(g)
}

pub fn mult_inverse(f: &TruncSeries) -> Result<TruncSeries> {
    f.mult_inverse()
}

pub fn comp_inverse(f: &TruncSeries) -> Result<TruncSeries> {
    f.comp_inverse()
}

pub fn random_map<R: Rng>(rng: &mut R, d: usize, arity: usize, bound: u32) -> MultiMap {
    MultiMap::from_fn(d, arity, |_| random_integer_element(rng, bound, d))
}

/// Arbitrary series with small integer coefficients.
pub fn random_series<R: Rng>(rng: &mut R, d: usize, order: usize, bound: u32) -> TruncSeries {
    let maps = (0..=order).map(|n| random_map(rng, d, n, bound)).collect();
    TruncSeries { d, maps }
}

pub fn random_ginv<R: Rng>(rng: &mut R, d: usize, order: usize, bound: u32) -> TruncSeries {
    let mut s = random_series(rng, d, order, bound);
    s.maps[0] = MultiMap::constant(random_invertible_with(rng, bound, d));
    s
}

pub fn random_gdif<R: Rng>(rng: &mut R, d: usize, order: usize, bound: u32) -> TruncSeries {
    let mut s = random_series(rng, d, order.max(1), bound);
    s.maps[0] = MultiMap::zero(d, 0);
    loop {
        let m = random_map(rng, d, 1, bound);
        if LinMap::from_images(m.values()).map(|l| l.inverse().is_ok()).unwrap_or(false) {
            s.maps[1] = m;
            break;
        }
    }
    s.truncate(order)
}

/// `I·F` with `F` random in `G^inv`, known through `order`.
pub fn random_gi<R: Rng>(rng: &mut R, d: usize, order: usize, bound: u32) -> TruncSeries {
    random_ginv(rng, d, order.max(1) - 1, bound).left_i()
}
