//! Boxed convolutions of multilinear series, the S-, U- and S′-transforms,
//! and the verifier for their identities.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::AlgebraElement;
use crate::error::{Error, Result};
use crate::multimap::MultiMap;
use crate::report::{over_trials, series_witness, Report};
use crate::series::{random_gdif, random_ginv, random_gi, random_series, SeriesClass, TruncSeries};
use crate::treeval::{tree_tensor_sum, Slot};
use crate::trees::{enumerate_trees, rmap, Tree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BoxVariant {
    Box,
    Line,
    Red,
    RedRed,
}

impl BoxVariant {
    pub const ALL: [BoxVariant; 4] = [BoxVariant::Box, BoxVariant::Line, BoxVariant::Red, BoxVariant::RedRed];

    pub fn name(self) -> &'static str {
        match self {
            BoxVariant::Box => "box",
            BoxVariant::Line => "line",
            BoxVariant::Red => "red",
            BoxVariant::RedRed => "redred",
        }
    }
}

impl fmt::Display for BoxVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BoxVariant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        BoxVariant::ALL.into_iter().find(|v| v.name() == s).ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

/// Trees and argument pattern of degree `n`: `R(τ)` or `∨(|, R(τ))`, with the
/// unit insertions materialized as fixed arguments.
fn layout(variant: BoxVariant, n: usize, d: usize) -> (Vec<Tree>, Vec<Slot>) {
    let one = || Slot::Fixed(AlgebraElement::one(d));
    let doubled = |k: usize| enumerate_trees(k).iter().map(rmap).collect::<Vec<_>>();
    let hung = |k: usize| doubled(k).into_iter().map(|t| Tree::wedge(Tree::Leaf, t)).collect::<Vec<_>>();
    match variant {
        BoxVariant::Box => (doubled(n), (0..2 * n).map(|i| if i % 2 == 0 { Slot::Free } else { one() }).collect()),
        BoxVariant::Line => (doubled(n), (0..2 * n).map(|i| if i % 2 == 0 { one() } else { Slot::Free }).collect()),
        BoxVariant::Red => (hung(n - 1), (0..2 * n - 1).map(|i| if i % 2 == 0 { Slot::Free } else { one() }).collect()),
        BoxVariant::RedRed => (hung(n), (0..2 * n + 1).map(|i| if i % 2 == 0 { one() } else { Slot::Free }).collect()),
    }
}

/// Highest degree of the convolution determined by the inputs.
fn box_order(variant: BoxVariant, nf: usize, ng: usize) -> Option<usize> {
    match variant {
        BoxVariant::Box | BoxVariant::Line => Some(nf.min(ng)),
        BoxVariant::Red => Some(nf.min(ng + 1)),
        BoxVariant::RedRed => ng.checked_sub(1).map(|g| g.min(nf)),
    }
}

/// Degree `n` of the boxed convolution.
pub fn boxconv_degree(variant: BoxVariant, f: &TruncSeries, g: &TruncSeries, n: usize) -> Result<MultiMap> {
    let d = g.dim();
    match (variant, n) {
        (BoxVariant::Box | BoxVariant::Line, 0) => return Ok(g.map(0).clone()),
        (BoxVariant::Red, 0) => return Ok(MultiMap::zero(d, 0)),
        _ => {}
    }
    let (trees, slots) = layout(variant, n, d);
    let letters = vec![0u8; slots.len()];
    // (f∪g) puts g on even depths; (g∪f) for the reduced variant swaps them
    let (even, odd) = if variant == BoxVariant::Red { (f, g) } else { (g, f) };
    tree_tensor_sum(d, &trees, &slots, &letters, &|depth, _| Some(if depth % 2 == 0 { even } else { odd }))
}

/// The boxed convolution `variant(f, g)`, through the order its inputs determine.
pub fn boxconv(variant: BoxVariant, f: &TruncSeries, g: &TruncSeries) -> Result<TruncSeries> {
    if f.dim() != g.dim() {
        return Err(Error::DimensionMismatch { expected: f.dim(), found: g.dim() });
    }
    let order = box_order(variant, f.order(), g.order()).ok_or(Error::DegreeOverflow { needed: 1, order: 0 })?;
    let maps = (0..=order).map(|n| boxconv_degree(variant, f, g, n)).collect::<Result<_>>()?;
    TruncSeries::new(g.dim(), maps)
}

/// `S_f` from `f^{∘−1} = I·S_f`.
pub fn s_transform_comp_inverse(f: &TruncSeries) -> Result<TruncSeries> {
    f.require(SeriesClass::I)?;
    f.comp_inverse()?.strip_left_i()
}

/// `S_f` as the fixed point of `S ↦ (F∘(I·S))^{−1}`.
pub fn s_transform_fixed_point(f: &TruncSeries) -> Result<TruncSeries> {
    f.require(SeriesClass::I)?;
    let big_f = f.strip_left_i()?;
    let top = big_f.order();
    let mut s = TruncSeries::constant(big_f.map(0).constant_value().inverse()?, top);
    for _ in 0..top {
        s = big_f.compose(&s.left_i())?.mult_inverse()?.truncate(top);
    }
    Ok(s)
}

/// `S_f`, computed along both paths; they must agree.
pub fn s_transform(f: &TruncSeries) -> Result<TruncSeries> {
    let a = s_transform_comp_inverse(f)?;
    let b = s_transform_fixed_point(f)?;
    if let Some(w) = series_witness("S-transform paths", &a, &b, a.order()) {
        return Err(Error::Inconsistent(w));
    }
    Ok(a)
}

/// `U_f = S_f^{−1}·I·S_f`.
pub fn u_transform(f: &TruncSeries) -> Result<TruncSeries> {
    let s = s_transform_comp_inverse(f)?;
    let id = TruncSeries::identity(f.dim(), f.order() + 1);
    s.mult_inverse()?.mul(&id)?.mul(&s)
}

/// The three expressions `S^{−1}IS`, `(FI)∘(IS)` and `(FI)∘(IF)^{∘−1}`.
pub fn u_transform_expressions(f: &TruncSeries) -> Result<[TruncSeries; 3]> {
    let s = s_transform_comp_inverse(f)?;
    let big_f = f.strip_left_i()?;
    let fi = big_f.right_i();
    let first = u_transform(f)?;
    let second = fi.compose(&s.left_i())?;
    let third = fi.compose(&f.comp_inverse()?)?;
    Ok([first, second, third])
}

/// `S′_F` defined by `S′_F·I = (F·I)^{∘−1}` for `f = I·F`.
pub fn s_prime(f: &TruncSeries) -> Result<TruncSeries> {
    f.require(SeriesClass::I)?;
    f.strip_left_i()?.right_i().comp_inverse()?.strip_right_i()
}

fn params(order: usize, dim: usize, trials: usize) -> serde_json::Value {
    json!({"order": order, "dim": dim, "trials": trials})
}

fn rng_for(seed: u64, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k))
}

const BOUND: u32 = 2;

fn w(label: &str, a: &TruncSeries, b: &TruncSeries, n: usize) -> Option<String> {
    series_witness(label, a, b, n)
}

fn first_some(items: impl IntoIterator<Item = Option<String>>) -> Option<String> {
    items.into_iter().flatten().next()
}

/// Laws of the product and composition of series.
pub fn verify_algebra_laws(order: usize, dim: usize, trials: usize, seed: u64) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("algebra", seed, order, dim);
    let n = order;
    let p = params(order, dim, trials);

    let mut r = rng_for(seed, 1);
    rep.record("mul-monoid", "f·1 = 1·f = f and (f·g)·h = f·(g·h)", p.clone(), over_trials(trials, |_| {
        let (f, g, h) = (random_series(&mut r, dim, n, BOUND), random_series(&mut r, dim, n, BOUND), random_series(&mut r, dim, n, BOUND));
        let one = TruncSeries::one(dim, n);
        Ok(first_some([
            w("f·1", &f.mul(&one)?, &f, n),
            w("1·f", &one.mul(&f)?, &f, n),
            w("associativity", &f.mul(&g)?.mul(&h)?, &f.mul(&g.mul(&h)?)?, n),
        ]))
    }));

    let mut r = rng_for(seed, 2);
    rep.record("mul-group", "f·f⁻¹ = f⁻¹·f = 1 and (f⁻¹)⁻¹ = f on G^inv", p.clone(), over_trials(trials, |_| {
        let f = random_ginv(&mut r, dim, n, BOUND);
        let h = f.mult_inverse()?;
        let one = TruncSeries::one(dim, n);
        Ok(first_some([w("f·f⁻¹", &f.mul(&h)?, &one, n), w("f⁻¹·f", &h.mul(&f)?, &one, n), w("double inverse", &h.mult_inverse()?, &f, n)]))
    }));

    let mut r = rng_for(seed, 3);
    rep.record("comp-group", "f∘I = f, I∘g = g, (f∘g)∘h = f∘(g∘h), g∘g^{∘−1} = g^{∘−1}∘g = I on G^dif", p.clone(), over_trials(trials, |_| {
        let f = random_series(&mut r, dim, n, BOUND);
        let g = random_gdif(&mut r, dim, n, BOUND);
        let h = random_gdif(&mut r, dim, n, BOUND);
        let id = TruncSeries::identity(dim, n);
        let gi = g.comp_inverse()?;
        Ok(first_some([
            w("f∘I", &f.compose(&id)?, &f, n),
            w("I∘g", &id.compose(&g)?, &g, n),
            w("associativity", &f.compose(&g)?.compose(&h)?, &f.compose(&g.compose(&h)?)?, n),
            w("g∘g^{∘−1}", &g.compose(&gi)?, &id, n),
            w("g^{∘−1}∘g", &gi.compose(&g)?, &id, n),
        ]))
    }));

    let mut r = rng_for(seed, 4);
    rep.record("right-distributivity", "(f·g)∘h = (f∘h)·(g∘h)", p.clone(), over_trials(trials, |_| {
        let (f, g) = (random_series(&mut r, dim, n, BOUND), random_series(&mut r, dim, n, BOUND));
        let h = random_gdif(&mut r, dim, n, BOUND);
        Ok(w("distributivity", &f.mul(&g)?.compose(&h)?, &f.compose(&h)?.mul(&g.compose(&h)?)?, n))
    }));

    let mut r = rng_for(seed, 5);
    rep.record("gi-group", "G^I is closed under ∘ and ∘-inversion, and G^I = I·G^inv", p.clone(), over_trials(trials, |_| {
        let f = random_gi(&mut r, dim, n, BOUND);
        let g = random_gi(&mut r, dim, n, BOUND);
        let big_f = f.strip_left_i()?;
        if !f.compose(&g)?.is_gi() {
            return Ok(Some("f∘g left G^I".into()));
        }
        if !f.comp_inverse()?.is_gi() {
            return Ok(Some("f^{∘−1} left G^I".into()));
        }
        if !big_f.is_ginv() || big_f.left_i() != f {
            return Ok(Some("f is not I·F with F in G^inv".into()));
        }
        let h = random_gdif(&mut r, dim, n, BOUND);
        if h.is_gi() && h.strip_left_i()?.left_i() != h {
            return Ok(Some("a G^I member is not of the form I·F".into()));
        }
        Ok(None)
    }));

    let mut r = rng_for(seed, 6);
    rep.record("s-dual-path", "S_f from f^{∘−1} = I·S_f equals the fixed point of S = (F∘(I·S))⁻¹", p.clone(), over_trials(trials, |_| {
        let f = random_gi(&mut r, dim, n, BOUND);
        let a = s_transform_comp_inverse(&f)?;
        let b = s_transform_fixed_point(&f)?;
        if !a.is_ginv() {
            return Ok(Some("S_f is not in G^inv".into()));
        }
        Ok(w("S paths", &a, &b, n - 1))
    }));

    let mut r = rng_for(seed, 7);
    rep.record("u-expressions", "S_f⁻¹·I·S_f = (F·I)∘(I·S_f) = (F·I)∘(I·F)^{∘−1}", p, over_trials(trials, |_| {
        let f = random_gi(&mut r, dim, n, BOUND);
        let [a, b, c] = u_transform_expressions(&f)?;
        if !a.is_gdif() {
            return Ok(Some("U_f is not in G^dif".into()));
        }
        Ok(first_some([w("first vs second", &a, &b, n), w("first vs third", &a, &c, n)]))
    }));

    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    rep
}

/// Values of the first degrees of each variant, written out by hand.
pub fn low_degree_examples(f: &TruncSeries, g: &TruncSeries, x1: &AlgebraElement, x2: &AlgebraElement) -> Result<Option<String>> {
    let d = g.dim();
    let one = AlgebraElement::one(d);
    let e = |s: &TruncSeries, n: usize, a: &[AlgebraElement]| s.map(n).eval(a);
    let g11 = e(g, 1, std::slice::from_ref(&one))?;
    let f11 = e(f, 1, std::slice::from_ref(&one))?;
    let cases: Vec<(BoxVariant, usize, AlgebraElement)> = vec![
        (BoxVariant::Box, 0, g.map(0).constant_value().clone()),
        (BoxVariant::Box, 1, e(g, 1, &[e(f, 1, std::slice::from_ref(x1))?])?),
        (
            BoxVariant::Box,
            2,
            &e(g, 1, &[e(f, 2, &[x1.clone(), &g11 * x2])?])? + &e(g, 2, &[e(f, 1, std::slice::from_ref(x1))?, e(f, 1, std::slice::from_ref(x2))?])?,
        ),
        (BoxVariant::Line, 0, g.map(0).constant_value().clone()),
        (BoxVariant::Line, 1, e(g, 1, &[&f11 * x1])?),
        (
            BoxVariant::Line,
            2,
            &e(g, 1, &[&e(f, 2, &[one.clone(), e(g, 1, std::slice::from_ref(x1))?])? * x2])? + &e(g, 2, &[&f11 * x1, &f11 * x2])?,
        ),
        (BoxVariant::Red, 0, AlgebraElement::zero(d)),
        (BoxVariant::Red, 1, e(f, 1, std::slice::from_ref(x1))?),
        (BoxVariant::Red, 2, e(f, 2, &[x1.clone(), &g11 * x2])?),
        (BoxVariant::RedRed, 0, g11.clone()),
        (BoxVariant::RedRed, 1, e(g, 2, &[one.clone(), e(f, 1, std::slice::from_ref(x1))?])?),
        (
            BoxVariant::RedRed,
            2,
            &e(g, 2, &[one.clone(), e(f, 2, &[x1.clone(), &g11 * x2])?])?
                + &e(g, 3, &[one.clone(), e(f, 1, std::slice::from_ref(x1))?, e(f, 1, std::slice::from_ref(x2))?])?,
        ),
    ];
    let xs = [x1.clone(), x2.clone()];
    for (variant, n, expected) in cases {
        let got = boxconv_degree(variant, f, g, n)?.eval(&xs[..n])?;
        if got != expected {
            return Ok(Some(format!("{variant} degree {n}: {got} vs {expected}")));
        }
    }
    Ok(None)
}

/// Identities of the boxed convolutions and the transforms.
pub fn verify_transform_identities(order: usize, dim: usize, trials: usize, seed: u64) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("transforms", seed, order, dim);
    rep.extend(verify_algebra_laws(order, dim, trials, seed));
    rep.extend(verify_convolution_identities(order, dim, trials, seed));
    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    rep
}

/// The boxed-convolution identities alone.
pub fn verify_convolution_identities(order: usize, dim: usize, trials: usize, seed: u64) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("convolutions", seed, order, dim);
    let n = order;
    let p = params(order, dim, trials);

    let mut r = rng_for(seed, 11);
    rep.record("box-examples", "low-degree values of the four boxed convolutions", p.clone(), over_trials(trials, |_| {
        let f = random_series(&mut r, dim, 3, BOUND);
        let g = random_series(&mut r, dim, 3, BOUND);
        let x1 = crate::algebra::random_integer_element(&mut r, 3, dim);
        let x2 = crate::algebra::random_integer_element(&mut r, 3, dim);
        low_degree_examples(&f, &g, &x1, &x2)
    }));

    let mut r = rng_for(seed, 12);
    rep.record("box-red-composition", "f ⊡ g = g ∘ (f ⊡_red g) for all f, g", p.clone(), over_trials(trials, |_| {
        let (f, g) = (random_series(&mut r, dim, n, BOUND), random_series(&mut r, dim, n, BOUND));
        let lhs = boxconv(BoxVariant::Box, &f, &g)?;
        let rhs = g.compose(&boxconv(BoxVariant::Red, &f, &g)?)?;
        Ok(w("f⊡g", &lhs, &rhs, n))
    }));

    let mut r = rng_for(seed, 13);
    rep.record("line-redred-composition", "g ⊡_line f = f ∘ ((f ⊡_redred g)·I) for all f, g", p.clone(), over_trials(trials, |_| {
        let (f, g) = (random_series(&mut r, dim, n, BOUND), random_series(&mut r, dim, n + 1, BOUND));
        let lhs = boxconv(BoxVariant::Line, &g, &f)?;
        let rhs = f.compose(&boxconv(BoxVariant::RedRed, &f, &g)?.right_i())?;
        Ok(w("g⊡_line f", &lhs, &rhs, n))
    }));

    let mut r = rng_for(seed, 14);
    rep.record("box-factorization", "f ⊡ g = (f ⊡_red g)·(f ⊡_redred g) on I·Mult", p.clone(), over_trials(trials, |_| {
        let f = random_series(&mut r, dim, n - 1, BOUND).left_i();
        let g = random_series(&mut r, dim, n, BOUND).left_i();
        let lhs = boxconv(BoxVariant::Box, &f, &g)?;
        let rhs = boxconv(BoxVariant::Red, &f, &g)?.mul(&boxconv(BoxVariant::RedRed, &f, &g)?)?;
        Ok(w("f⊡g", &lhs, &rhs, n))
    }));

    let mut r = rng_for(seed, 15);
    rep.record("line-factorization", "g ⊡_line f = (f ⊡_redred g)·(f ⊡_red g) on I·Mult", p.clone(), over_trials(trials, |_| {
        let f = random_series(&mut r, dim, n - 1, BOUND).left_i();
        let g = random_series(&mut r, dim, n, BOUND).left_i();
        let lhs = boxconv(BoxVariant::Line, &g, &f)?;
        let rhs = boxconv(BoxVariant::RedRed, &f, &g)?.mul(&boxconv(BoxVariant::Red, &f, &g)?)?;
        Ok(w("g⊡_line f", &lhs, &rhs, n))
    }));

    let mut r = rng_for(seed, 16);
    rep.record(
        "factorization-negative-witness",
        "outside I·Mult some f, g violate f ⊡ g = (f ⊡_red g)·(f ⊡_redred g)",
        p.clone(),
        (|| {
            for _ in 0..trials.max(10) {
                let f = random_series(&mut r, dim, n, BOUND);
                let g = random_series(&mut r, dim, n + 1, BOUND);
                let lhs = boxconv(BoxVariant::Box, &f, &g)?;
                let rhs = boxconv(BoxVariant::Red, &f, &g)?.mul(&boxconv(BoxVariant::RedRed, &f, &g)?)?;
                if w("", &lhs, &rhs, n).is_some() {
                    return Ok(None);
                }
            }
            Ok(Some("no violation found".into()))
        })(),
    );

    let mut r = rng_for(seed, 17);
    rep.record(
        "box-classes",
        "for f, g in G^I: f ⊡ g, f ⊡_red g in G^I; f ⊡_redred g in G^inv; f ⊡_line g in G^dif",
        p.clone(),
        over_trials(trials, |_| {
            let (f, g) = (random_gi(&mut r, dim, n, BOUND), random_gi(&mut r, dim, n, BOUND));
            let checks = [
                (BoxVariant::Box, SeriesClass::I),
                (BoxVariant::Red, SeriesClass::I),
                (BoxVariant::RedRed, SeriesClass::Inv),
                (BoxVariant::Line, SeriesClass::Dif),
            ];
            for (v, c) in checks {
                if !boxconv(v, &f, &g)?.is_in(c) {
                    return Ok(Some(format!("{v} not in {c:?}")));
                }
            }
            Ok(None)
        }),
    );

    let mut r = rng_for(seed, 18);
    rep.record("s-twisted-factorization", "S_{f⊡g} = S_g·(S_f ∘ U_g) with U_g = S_g⁻¹·I·S_g", p.clone(), over_trials(trials, |_| {
        let (f, g) = (random_gi(&mut r, dim, n, BOUND), random_gi(&mut r, dim, n, BOUND));
        let lhs = s_transform(&boxconv(BoxVariant::Box, &f, &g)?)?;
        let rhs = s_transform(&g)?.mul(&s_transform(&f)?.compose(&u_transform(&g)?)?)?;
        Ok(w("S_{f⊡g}", &lhs, &rhs, n - 1))
    }));

    let mut r = rng_for(seed, 19);
    rep.record("u-composition", "U_{f⊡g} = U_f ∘ U_g", p.clone(), over_trials(trials, |_| {
        let (f, g) = (random_gi(&mut r, dim, n, BOUND), random_gi(&mut r, dim, n, BOUND));
        let lhs = u_transform(&boxconv(BoxVariant::Box, &f, &g)?)?;
        let rhs = u_transform(&f)?.compose(&u_transform(&g)?)?;
        Ok(w("U_{f⊡g}", &lhs, &rhs, n))
    }));

    let mut r = rng_for(seed, 20);
    rep.record("s-prime-relations", "S_F = S′_F ∘ U_F and U_F^{∘−1} = S′_F·I·S′_F⁻¹", p.clone(), over_trials(trials, |_| {
        let f = random_gi(&mut r, dim, n, BOUND);
        let sp = s_prime(&f)?;
        let u = u_transform(&f)?;
        let s = s_transform(&f)?;
        let id = TruncSeries::identity(dim, n + 1);
        let twisted = sp.mul(&id)?.mul(&sp.mult_inverse()?)?;
        Ok(first_some([w("S_F", &s, &sp.compose(&u)?, n - 1), w("U_F^{∘−1}", &u.comp_inverse()?, &twisted, n)]))
    }));

    if dim == 1 {
        let mut r = rng_for(seed, 21);
        rep.record("s-commutative-factorization", "for d = 1: U_f = I and S_{f⊡g} = S_g·S_f", p, over_trials(trials, |_| {
            let (f, g) = (random_gi(&mut r, dim, n, BOUND), random_gi(&mut r, dim, n, BOUND));
            let lhs = s_transform(&boxconv(BoxVariant::Box, &f, &g)?)?;
            let rhs = s_transform(&g)?.mul(&s_transform(&f)?)?;
            Ok(first_some([
                w("U_f", &u_transform(&f)?, &TruncSeries::identity(1, n), n),
                w("S_{f⊡g}", &lhs, &rhs, n - 1),
                w("S′_F", &s_prime(&f)?, &s_transform(&f)?, n - 1),
            ]))
        }));
    }

    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    rep
}
