//! Operator-valued moments and free cumulants as series, the product of two
//! free elements, and the verifier for the free-probability identities.
//!
//! A random variable is modelled by its cumulant series `k = I·K`. Freeness of
//! `a` and `b` is imposed by letting every mixed cumulant vanish.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::{random_integer_element, random_invertible_with, AlgebraElement};
use crate::error::{Error, Result};
use crate::multimap::MultiMap;
use crate::report::{over_trials, series_witness, Report};
use crate::series::{random_gi, SeriesClass, TruncSeries};
use crate::transforms::{boxconv, s_prime, s_transform, u_transform, BoxVariant};
use crate::treeval::{alt_tree_eval, alt_tree_map, tree_map, tree_tensor_sum, Slot};
use crate::trees::{classify, comb_decompose, enumerate_trees, pi_set, splits, ybe, Tree, TreeParity};

/// Which of the two free elements a letter stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    fn code(self) -> u8 {
        match self {
            Letter::A => 0,
            Letter::B => 1,
        }
    }
}

fn all_free(n: usize) -> Vec<Slot> {
    vec![Slot::Free; n]
}

/// `m_n = Σ_{τ∈Y_n} k_τ`.
pub fn moments_from_cumulants(k: &TruncSeries) -> Result<TruncSeries> {
    k.require(SeriesClass::I)?;
    let d = k.dim();
    let mut maps = vec![MultiMap::zero(d, 0)];
    for n in 1..=k.order() {
        let letters = vec![0u8; n];
        maps.push(tree_tensor_sum(d, &enumerate_trees(n), &all_free(n), &letters, &|_, _| Some(k))?);
    }
    TruncSeries::new(d, maps)
}

fn cumulants_unchecked(m: &TruncSeries) -> Result<TruncSeries> {
    let d = m.dim();
    let mut k = TruncSeries::zero(d, m.order());
    for n in 1..=m.order() {
        let comb = Tree::right_comb(n);
        let others: Vec<Tree> = enumerate_trees(n).into_iter().filter(|t| *t != comb).collect();
        let letters = vec![0u8; n];
        let lower = tree_tensor_sum(d, &others, &all_free(n), &letters, &|_, _| Some(&k))?;
        let kn = m.map(n).sub(&lower)?;
        k.set_map(n, kn)?;
    }
    Ok(k)
}

/// `κ_n = m_n − Σ_{τ∈Y_n, τ ≠ comb} κ_τ`, degree by degree.
pub fn cumulants_from_moments(m: &TruncSeries) -> Result<TruncSeries> {
    m.require(SeriesClass::I)?;
    cumulants_unchecked(m)
}

/// `κ_τ(x_1 c_1, …, x_n c_n)` with `c_i ∈ {a, b}`, where every cumulant with
/// mixed letters vanishes.
pub fn mixed_tree_cumulant(
    tau: &Tree,
    letters: &[(AlgebraElement, Letter)],
    ka: &TruncSeries,
    kb: &TruncSeries,
) -> Result<AlgebraElement> {
    if letters.len() != tau.size() {
        return Err(Error::ArityMismatch { expected: tau.size(), found: letters.len() });
    }
    let d = ka.dim();
    let parts = match comb_decompose(tau) {
        Ok(p) => p,
        Err(_) => return Ok(AlgebraElement::one(d)),
    };
    let mut pos = 0;
    let mut inner = Vec::with_capacity(parts.len());
    let mut spine = Vec::with_capacity(parts.len());
    for t in &parts {
        let s = t.size();
        let v = mixed_tree_cumulant(t, &letters[pos..pos + s], ka, kb)?;
        let (x, c) = &letters[pos + s];
        inner.push(&v * x);
        spine.push(*c);
        pos += s + 1;
    }
    let k = if spine.iter().all(|&c| c == Letter::A) {
        ka
    } else if spine.iter().all(|&c| c == Letter::B) {
        kb
    } else {
        return Ok(AlgebraElement::zero(d));
    };
    if parts.len() > k.order() {
        return Err(Error::DegreeOverflow { needed: parts.len(), order: k.order() });
    }
    k.map(parts.len()).eval(&inner)
}

/// The moment series of `ab` from `Σ_{τ∈Y_{2n}} κ_τ(x_1 a, b, …, x_n a, b)`,
/// summed over the given trees of each size `2n`.
fn product_moments_over(
    ka: &TruncSeries,
    kb: &TruncSeries,
    order: usize,
    trees: &dyn Fn(usize) -> Vec<Tree>,
) -> Result<TruncSeries> {
    let d = ka.dim();
    let one = AlgebraElement::one(d);
    let mut maps = vec![MultiMap::zero(d, 0)];
    for n in 1..=order {
        let slots: Vec<Slot> = (0..2 * n).map(|i| if i % 2 == 0 { Slot::Free } else { Slot::Fixed(one.clone()) }).collect();
        let letters: Vec<u8> = (0..2 * n).map(|i| if i % 2 == 0 { Letter::A.code() } else { Letter::B.code() }).collect();
        let choose = |_: usize, spine: &[u8]| {
            if spine.iter().all(|&c| c == Letter::A.code()) {
                Some(ka)
            } else if spine.iter().all(|&c| c == Letter::B.code()) {
                Some(kb)
            } else {
                None
            }
        };
        maps.push(tree_tensor_sum(d, &trees(n), &slots, &letters, &choose)?);
    }
    TruncSeries::new(d, maps)
}

/// Moment series of `ab`, summing over all of `Y_{2n}`.
pub fn product_moments(ka: &TruncSeries, kb: &TruncSeries, order: usize) -> Result<TruncSeries> {
    product_moments_over(ka, kb, order, &|n| enumerate_trees(2 * n))
}

/// Cumulants of `ab` for free `a`, `b`, through the moments of `ab` summed over
/// every tree of `Y_{2n}`.
pub fn product_cumulants_oracle(ka: &TruncSeries, kb: &TruncSeries, order: usize) -> Result<TruncSeries> {
    ka.require(SeriesClass::I)?;
    kb.require(SeriesClass::I)?;
    if ka.dim() != kb.dim() {
        return Err(Error::DimensionMismatch { expected: ka.dim(), found: kb.dim() });
    }
    let order = order.min(ka.order()).min(kb.order());
    cumulants_unchecked(&product_moments(ka, kb, order)?)
}

/// Checks `M = K∘(I + IMI)·(1 + IM) = (1 + MI)·K∘(I + IMI)` for `m = I·M`,
/// `k = I·K`. Returns `None` when both hold through the determined order.
pub fn speicher_relation_check(k: &TruncSeries, m: &TruncSeries) -> Result<Option<String>> {
    k.require(SeriesClass::I)?;
    m.require(SeriesClass::I)?;
    let d = k.dim();
    let big_k = k.strip_left_i()?;
    let big_m = m.strip_left_i()?;
    let top = big_m.order().min(big_k.order());
    let id = TruncSeries::identity(d, top + 2);
    let one = TruncSeries::one(d, top + 2);
    let imi = id.mul(&big_m)?.mul(&id)?;
    let inner = big_k.compose(&id.add(&imi)?)?;
    let first = inner.mul(&one.add(&id.mul(&big_m)?)?)?;
    let second = one.add(&big_m.mul(&id)?)?.mul(&inner)?;
    // compare after multiplying by I on the left so degrees are those of m
    let (first, second) = (first.left_i(), second.left_i());
    Ok(series_witness("I·K∘(I+IMI)·(1+IM)", m, &first, top + 1)
        .or_else(|| series_witness("I·(1+MI)·K∘(I+IMI)", m, &second, top + 1)))
}

/// `U_a = (M^a I)∘(I M^a)^{∘−1}`, from the moment series `m = I·M^a`.
pub fn u_from_moments(m: &TruncSeries) -> Result<TruncSeries> {
    let big_m = m.strip_left_i()?;
    big_m.right_i().compose(&m.comp_inverse()?)
}

/// Samples free pairs and reports those with `S_{ab} = S_b·S_a` although
/// `K^a` is not constant and `M^b I ≠ I M^b`. Nothing is asserted about the
/// outcome.
pub fn search_reverse_implication(order: usize, dim: usize, trials: usize, seed: u64) -> Result<Vec<(TruncSeries, TruncSeries)>> {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    let mut found = Vec::new();
    for _ in 0..trials {
        let ka = random_cumulants(&mut r, dim, order);
        let kb = random_cumulants(&mut r, dim, order);
        let kab = boxconv(BoxVariant::Box, &ka, &kb)?;
        let (sa, sb, sab) = (s_transform(&ka)?, s_transform(&kb)?, s_transform(&kab)?);
        let top = order - 1;
        if series_witness("", &sab, &sb.mul(&sa)?, top).is_some() {
            continue;
        }
        let big_ka = ka.strip_left_i()?;
        let k_constant = big_ka.maps()[1..].iter().all(MultiMap::is_zero);
        let mb = moments_from_cumulants(&kb)?.strip_left_i()?;
        let commuting = series_witness("", &mb.right_i(), &mb.left_i(), order).is_none();
        if !k_constant && !commuting {
            found.push((ka, kb));
        }
    }
    Ok(found)
}

/// A random cumulant series `k = I·K` with `K_0 = κ_1(a)` invertible.
pub fn random_cumulants<R: rand::Rng>(rng: &mut R, dim: usize, order: usize) -> TruncSeries {
    random_gi(rng, dim, order, 2)
}

fn rng_for(seed: u64, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0xD1B5_4A32_D192_ED03).wrapping_add(k))
}

fn w(label: &str, a: &TruncSeries, b: &TruncSeries, n: usize) -> Option<String> {
    series_witness(label, a, b, n)
}

fn first_some(items: impl IntoIterator<Item = Option<String>>) -> Option<String> {
    items.into_iter().flatten().next()
}

/// Identities linking the product of free elements with the boxed convolution
/// and the S- and U-transforms.
pub fn verify_product_identities(order: usize, dim: usize, trials: usize, seed: u64) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("freeprob", seed, order, dim);
    let n = order;
    let p = json!({"order": order, "dim": dim, "trials": trials});

    let mut r = rng_for(seed, 1);
    rep.record("moment-cumulant-roundtrip", "moments and cumulants determine each other", p.clone(), over_trials(trials, |_| {
        let k = random_cumulants(&mut r, dim, n);
        let m = moments_from_cumulants(&k)?;
        let back = cumulants_from_moments(&m)?;
        let m2 = moments_from_cumulants(&back)?;
        Ok(first_some([w("κ(m(k))", &back, &k, n), w("m(κ(m))", &m2, &m, n)]))
    }));

    let mut r = rng_for(seed, 2);
    rep.record("speicher-relations", "M = K∘(I+IMI)·(1+IM) = (1+MI)·K∘(I+IMI)", p.clone(), over_trials(trials, |_| {
        let k = random_cumulants(&mut r, dim, n);
        speicher_relation_check(&k, &moments_from_cumulants(&k)?)
    }));

    // the product pairs are shared by the remaining checks
    let mut r = rng_for(seed, 3);
    let mut pairs = Vec::new();
    for _ in 0..trials {
        let ka = random_cumulants(&mut r, dim, n);
        let kb = random_cumulants(&mut r, dim, n);
        pairs.push((ka, kb));
    }
    let oracle: Vec<Result<TruncSeries>> = pairs.iter().map(|(a, b)| product_cumulants_oracle(a, b, n)).collect();

    rep.record("product-cumulants", "k^{ab} from all trees of Y_{2n} equals k^a ⊡ k^b", p.clone(), over_trials(trials, |t| {
        let (ka, kb) = &pairs[t];
        let kab = oracle[t].clone()?;
        Ok(w("k^{ab}", &kab, &boxconv(BoxVariant::Box, ka, kb)?, n))
    }));

    rep.record("s-product-three-way", "S_{ab} from the oracle, from k^a ⊡ k^b, and S_b·(S_a∘U_b) agree", p.clone(), over_trials(trials, |t| {
        let (ka, kb) = &pairs[t];
        let from_oracle = s_transform(&oracle[t].clone()?)?;
        let from_box = s_transform(&boxconv(BoxVariant::Box, ka, kb)?)?;
        let rhs = s_transform(kb)?.mul(&s_transform(ka)?.compose(&u_transform(kb)?)?)?;
        Ok(first_some([w("oracle vs ⊡", &from_oracle, &from_box, n - 1), w("oracle vs twisted product", &from_oracle, &rhs, n - 1)]))
    }));

    rep.record("u-moment-expression", "U_a = S_a⁻¹IS_a = (K^aI)∘(IK^a)^{∘−1} = (M^aI)∘(IM^a)^{∘−1}", p.clone(), over_trials(trials, |t| {
        let (ka, _) = &pairs[t];
        let u = u_transform(ka)?;
        let via_k = ka.strip_left_i()?.right_i().compose(&ka.comp_inverse()?)?;
        let via_m = u_from_moments(&moments_from_cumulants(ka)?)?;
        Ok(first_some([w("via K", &u, &via_k, n), w("via M", &u, &via_m, n)]))
    }));

    rep.record("u-product-composition", "U_{ab} = U_a ∘ U_b", p.clone(), over_trials(trials, |t| {
        let (ka, kb) = &pairs[t];
        let uab = u_transform(&oracle[t].clone()?)?;
        Ok(w("U_{ab}", &uab, &u_transform(ka)?.compose(&u_transform(kb)?)?, n))
    }));

    rep.record(
        "s-prime-product",
        "S_{ab} = (S′_b·S_a)∘U_b and S′_{ab} = (S′_b∘U_a^{∘−1})·S′_a = (S′_b·S_a)∘U_a^{∘−1}",
        p.clone(),
        over_trials(trials, |t| {
            let (ka, kb) = &pairs[t];
            let kab = oracle[t].clone()?;
            let (sa, sab) = (s_transform(ka)?, s_transform(&kab)?);
            let (spa, spb, spab) = (s_prime(ka)?, s_prime(kb)?, s_prime(&kab)?);
            let (ua, ub) = (u_transform(ka)?, u_transform(kb)?);
            let ua_inv = ua.comp_inverse()?;
            let spb_sa = spb.mul(&sa)?;
            Ok(first_some([
                w("S_{ab}", &sab, &spb_sa.compose(&ub)?, n - 1),
                w("S′_{ab} first form", &spab, &spb.compose(&ua_inv)?.mul(&spa)?, n - 1),
                w("S′_{ab} second form", &spab, &spb_sa.compose(&ua_inv)?, n - 1),
            ]))
        }),
    );

    let mut r = rng_for(seed, 4);
    rep.record("special-case-constant-k", "K^a constant implies S_{ab} = S_b·S_a", p.clone(), over_trials(trials.clamp(1, 3), |_| {
        let c = random_invertible_with(&mut r, 2, dim);
        let ka = TruncSeries::constant(c, n - 1).left_i();
        let kb = random_cumulants(&mut r, dim, n);
        let sab = s_transform(&product_cumulants_oracle(&ka, &kb, n)?)?;
        Ok(w("S_{ab}", &sab, &s_transform(&kb)?.mul(&s_transform(&ka)?)?, n - 1))
    }));

    if dim == 1 {
        rep.record("special-case-commutative", "for d = 1: M^bI = IM^b and S_{ab} = S_b·S_a", p, over_trials(trials, |t| {
            let (ka, kb) = &pairs[t];
            let mb = moments_from_cumulants(kb)?.strip_left_i()?;
            let sab = s_transform(&oracle[t].clone()?)?;
            Ok(first_some([
                w("M^bI vs IM^b", &mb.right_i(), &mb.left_i(), n),
                w("S_{ab}", &sab, &s_transform(kb)?.mul(&s_transform(ka)?)?, n - 1),
            ]))
        }));
    }

    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    rep
}

fn random_elements(r: &mut ChaCha8Rng, count: usize, dim: usize) -> Vec<AlgebraElement> {
    (0..count).map(|_| random_integer_element(r, 3, dim)).collect()
}

/// The tree identities behind the product formula: which trees contribute, how
/// they evaluate, and how the sum regroups along `Π(τ)`.
pub fn verify_structure(order: usize, dim: usize, trials: usize, seed: u64) -> Report {
    let start = Instant::now();
    let mut rep = Report::new("structure", seed, order, dim);
    let p = json!({"order": order, "dim": dim, "trials": trials});
    let mut r = rng_for(seed, 10);
    let (ka, kb) = (random_cumulants(&mut r, dim, order), random_cumulants(&mut r, dim, order));

    rep.record("split-characterization", "τ splits iff τ ∈ Y^be ∪ Y^bo, for |τ| ≤ 8", json!({"max_size": 8}), (|| {
        for size in 0..=8 {
            for t in enumerate_trees(size) {
                let member = classify(&t) != TreeParity::None;
                if member != splits(&t) {
                    return Ok(Some(format!("tree {t}")));
                }
            }
        }
        Ok(None)
    })());

    let mut rr = rng_for(seed, 11);
    rep.record("nonsplit-vanishing", "κ_τ(x_1a, y_1b, …, x_na, y_nb) = 0 for τ ∈ Y_{2n} not splitting", json!({"max_size": 2 * order.min(4)}), over_trials(trials, |_| {
        for n in 1..=order.min(4) {
            let xs = random_elements(&mut rr, 2 * n, dim);
            let letters: Vec<_> = xs.iter().enumerate().map(|(i, x)| (x.clone(), if i % 2 == 0 { Letter::A } else { Letter::B })).collect();
            for t in enumerate_trees(2 * n) {
                if !splits(&t) && !mixed_tree_cumulant(&t, &letters, &ka, &kb)?.is_zero() {
                    return Ok(Some(format!("tree {t}")));
                }
            }
        }
        Ok(None)
    }));

    let mut rr = rng_for(seed, 12);
    rep.record(
        "split-evaluation",
        "κ_τ = (k^a∪k^b)_τ on Y^be_{2n} and κ_σ = (k^b∪k^a)_σ on Y^bo_{2n+1}",
        json!({"max_n": 3}),
        over_trials(trials, |_| {
            for size in 1..=7usize.min(2 * order) {
                let xs = random_elements(&mut rr, size, dim);
                let letters: Vec<_> = xs.iter().enumerate().map(|(i, x)| (x.clone(), if i % 2 == 0 { Letter::A } else { Letter::B })).collect();
                let want = if size % 2 == 0 { TreeParity::Be } else { TreeParity::Bo };
                for t in enumerate_trees(size).into_iter().filter(|t| classify(t) == want) {
                    let lhs = mixed_tree_cumulant(&t, &letters, &ka, &kb)?;
                    let rhs = if size % 2 == 0 { alt_tree_eval(&ka, &kb, &t, &xs)? } else { alt_tree_eval(&kb, &ka, &t, &xs)? };
                    if lhs != rhs {
                        return Ok(Some(format!("tree {t}")));
                    }
                }
            }
            Ok(None)
        }),
    );

    rep.record(
        "ybe-restriction",
        "the moments of ab are the same summed over Y_{2n}, over Y^be_{2n} with mixed cumulants, or over Y^be_{2n} with (k^a∪k^b)",
        p.clone(),
        (|| {
            let full = product_moments(&ka, &kb, order)?;
            let restricted = product_moments_over(&ka, &kb, order, &ybe)?;
            let one = AlgebraElement::one(dim);
            let mut alt = vec![MultiMap::zero(dim, 0)];
            for n in 1..=order {
                let slots: Vec<Slot> = (0..2 * n).map(|i| if i % 2 == 0 { Slot::Free } else { Slot::Fixed(one.clone()) }).collect();
                let mut acc = MultiMap::zero(dim, n);
                for t in ybe(n) {
                    acc.add_assign(&alt_tree_map(&ka, &kb, &t, &slots)?)?;
                }
                alt.push(acc);
            }
            let alt = TruncSeries::new(dim, alt)?;
            Ok(first_some([w("Y^be restriction", &full, &restricted, order), w("(k^a∪k^b) form", &full, &alt, order)]))
        })(),
    );

    rep.record("pi-disjoint-union", "Y^be_{2n} is the disjoint union of Π(τ), τ ∈ Y_n, for n ≤ 4", json!({"max_n": 4}), (|| {
        for n in 0..=4 {
            let mut seen = BTreeSet::new();
            let mut total = 0;
            for t in enumerate_trees(n) {
                let part = pi_set(&t);
                total += part.len();
                seen.extend(part);
            }
            let target: BTreeSet<Tree> = ybe(n).into_iter().collect();
            if total != seen.len() {
                return Ok(Some(format!("n = {n}: the sets Π(τ) overlap")));
            }
            if seen != target {
                return Ok(Some(format!("n = {n}: union differs from Y^be")));
            }
        }
        Ok(None)
    })());

    rep.record("per-tree-extraction", "k^{ab}_τ = Σ_{σ∈Π(τ)} (k^a∪k^b)_σ(x_1, 1, …, x_n, 1) for τ ∈ Y_n, n ≤ 3", json!({"max_n": 3}), (|| {
        let top = order.min(3);
        let kab = product_cumulants_oracle(&ka, &kb, top)?;
        let one = AlgebraElement::one(dim);
        for n in 1..=top {
            let slots: Vec<Slot> = (0..2 * n).map(|i| if i % 2 == 0 { Slot::Free } else { Slot::Fixed(one.clone()) }).collect();
            for t in enumerate_trees(n) {
                let lhs = tree_map(&kab, &t, &all_free(n))?;
                let mut rhs = MultiMap::zero(dim, n);
                for s in pi_set(&t) {
                    rhs.add_assign(&alt_tree_map(&ka, &kb, &s, &slots)?)?;
                }
                if let Some(idx) = lhs.first_difference(&rhs) {
                    return Ok(Some(format!("tree {t} at basis tuple {idx:?}")));
                }
            }
        }
        Ok(None)
    })());

    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    rep
}

/// Both free-probability reports combined.
pub fn verify_freeprob_identities(order: usize, dim: usize, trials: usize, seed: u64) -> Report {
    let start = Instant::now();
    let mut rep = verify_product_identities(order, dim, trials, seed);
    rep.extend(verify_structure(order, dim, trials, seed));
    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    rep
}
