//! Combinatorial and operadic verification suites, and the dispatcher used by
//! the command line.

use std::collections::BTreeSet;
use std::str::FromStr;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::algebra::random_integer_element;
use crate::catalan::diagrams::verify_diagram;
use crate::catalan::{
    bijection_families, catalan_compose, catalan_decompose, catalan_iso, enumerate_family, kreweras_via_catalan,
    named_bijection, phi, size_in, FamilyId, Payload, BIJECTION_NAMES,
};
use crate::error::{Error, Result};
use crate::freeprob::verify_freeprob_identities;
use crate::operad::{duplicial_map_relations, duplicial_tree_relations, operad_eval, TensorWord};
use crate::partitions::{enumerate_ncp, interleave, kreweras, kreweras_within, Partition};
use crate::report::{over_trials, Report};
use crate::series::random_gi;
use crate::transforms::verify_transform_identities;
use crate::treeval::tree_eval;
use crate::trees::{enumerate_trees, rmap, Tree};

pub const CATALAN_NUMBERS: [usize; 11] = [1, 1, 2, 5, 14, 42, 132, 429, 1430, 4862, 16796];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Transforms,
    Freeprob,
    Bijections,
    Operad,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        match s {
            "transforms" => Ok(Suite::Transforms),
            "freeprob" => Ok(Suite::Freeprob),
            "bijections" => Ok(Suite::Bijections),
            "operad" => Ok(Suite::Operad),
            "all" => Ok(Suite::All),
            other => Err(Error::UnknownName(other.to_string())),
        }
    }
}

fn part(blocks: &[&[usize]]) -> Partition {
    Partition::from_blocks(blocks.iter().map(|b| b.to_vec()).collect()).expect("valid blocks")
}

fn tree(s: &str) -> Tree {
    s.parse().expect("valid tree")
}

fn expect_eq<T: PartialEq + std::fmt::Display>(label: &str, got: &T, want: &T) -> Option<String> {
    (got != want).then(|| format!("{label}: got {got}, expected {want}"))
}

/// `P ∪ K(P)`.
pub fn with_kreweras(p: &Partition) -> Result<Partition> {
    interleave(p, &kreweras(p)?)
}

pub fn check_catalan_counts(max_n: usize) -> Option<String> {
    for n in 0..=max_n {
        let want = CATALAN_NUMBERS[n];
        let trees = enumerate_trees(n).len();
        let ncp = enumerate_ncp(n).len();
        if trees != want || ncp != want {
            return Some(format!("n = {n}: {trees} trees and {ncp} partitions, expected {want}"));
        }
    }
    None
}

pub fn check_phi_golden() -> Option<String> {
    let cases = [
        ("(|,|)", part(&[&[1]])),
        ("((|,|),|)", part(&[&[1], &[2]])),
        ("(|,(|,|))", part(&[&[1, 2]])),
        ("(((|,|),((|,|),|)),(|,((|,(|,|)),|)))", part(&[&[1], &[2, 4], &[3], &[5, 6, 9], &[7, 8]])),
    ];
    for (t, p) in &cases {
        if let Some(w) = expect_eq(&format!("φ({t})"), &phi(&tree(t)), p) {
            return Some(w);
        }
    }
    let r = rmap(&tree("((|,|),|)"));
    expect_eq("φ(R(∨(•,|)))", &phi(&r), &part(&[&[1, 3], &[2], &[4]]))
}

pub fn check_kreweras_dual_path(max_n: usize) -> Result<Option<String>> {
    for n in 0..=max_n {
        let all = enumerate_ncp(n);
        for p in &all {
            let brute = kreweras_within(p, &all)?;
            if let Some(w) = expect_eq(&format!("K({p})"), &kreweras_via_catalan(p)?, &brute) {
                return Ok(Some(w));
            }
        }
    }
    let p = part(&[&[1, 2], &[3, 6, 8], &[4], &[5], &[7]]);
    let want = part(&[&[1], &[2, 8], &[3, 4, 5], &[6, 7]]);
    Ok(expect_eq("K on NCP_8", &kreweras_via_catalan(&p)?, &want).or_else(|| expect_eq("brute K on NCP_8", &kreweras(&p).ok()?, &want)))
}

/// Compares `{φ(R(τ)) : τ ∈ Y_n}` with `{P ∪ K(P) : P ∈ NCP_n}`.
pub fn check_phi_yb(max_n: usize) -> Result<Option<String>> {
    for n in 0..=max_n {
        let lhs: BTreeSet<Partition> = enumerate_trees(n).iter().map(|t| phi(&rmap(t))).collect();
        let rhs = enumerate_ncp(n).iter().map(with_kreweras).collect::<Result<BTreeSet<_>>>()?;
        if lhs != rhs {
            let extra = lhs.symmetric_difference(&rhs).next().map(|p| p.to_string()).unwrap_or_default();
            return Ok(Some(format!("n = {n}: sets differ, e.g. at {extra}")));
        }
    }
    Ok(None)
}

/// A tree of size `n` with `φ(R(τ)) ≠ φ(τ) ∪ K(φ(τ))`, if any.
pub fn phi_r_counterexample(n: usize) -> Result<Option<(Tree, Partition, Partition)>> {
    for t in enumerate_trees(n) {
        let lhs = phi(&rmap(&t));
        let rhs = with_kreweras(&phi(&t))?;
        if lhs != rhs {
            return Ok(Some((t, lhs, rhs)));
        }
    }
    Ok(None)
}

pub fn check_diagrams(max_n: usize) -> Option<String> {
    for id in 1..=3 {
        for n in 0..=max_n {
            let r = verify_diagram(id, n).expect("diagrams 1 to 3 exist");
            if !r.passed {
                return Some(format!("diagram {id}, n = {n}: {}", r.witness.unwrap_or_default()));
            }
        }
    }
    None
}

pub fn check_roundtrips(max_n: usize) -> Result<Option<String>> {
    let y = FamilyId::new(crate::catalan::Family::Y);
    for fam in FamilyId::all() {
        let levels: Vec<Vec<Payload>> = (0..=max_n).map(|n| enumerate_family(fam, n)).collect();
        for (n, level) in levels.iter().enumerate() {
            for z in level {
                if size_in(fam, z) != n {
                    return Ok(Some(format!("{fam}: {z} has size {}, expected {n}", size_in(fam, z))));
                }
                let back = catalan_iso(fam, y, z).and_then(|t| catalan_iso(y, fam, &t))?;
                if &back != z {
                    return Ok(Some(format!("{fam}: iso round trip moves {z}")));
                }
                if n == 0 {
                    continue;
                }
                let (a, b) = catalan_decompose(fam, z)?;
                if size_in(fam, &a) + size_in(fam, &b) + 1 != n {
                    return Ok(Some(format!("{fam}: decomposition of {z} has wrong sizes")));
                }
                if &catalan_compose(fam, &a, &b)? != z {
                    return Ok(Some(format!("{fam}: compose(decompose({z})) ≠ {z}")));
                }
            }
        }
        for n in 1..=max_n {
            for k in 0..n {
                for a in &levels[k] {
                    for b in &levels[n - 1 - k] {
                        let z = catalan_compose(fam, a, b)?;
                        if catalan_decompose(fam, &z)? != (a.clone(), b.clone()) {
                            return Ok(Some(format!("{fam}: decompose(compose({a}, {b})) differs")));
                        }
                    }
                }
            }
        }
    }
    Ok(None)
}

pub fn check_named_bijections(max_n: usize) -> Result<Option<String>> {
    for name in BIJECTION_NAMES {
        let (src, dst) = bijection_families(name)?;
        for n in 0..=max_n {
            let mut images = BTreeSet::new();
            for x in enumerate_family(src, n) {
                let y = named_bijection(name, &x)?;
                if size_in(dst, &y) != n {
                    return Ok(Some(format!("{name}: {x} ↦ {y} changes size")));
                }
                images.insert(y);
            }
            if images.len() != CATALAN_NUMBERS[n] {
                return Ok(Some(format!("{name}: {} distinct images at n = {n}", images.len())));
            }
        }
    }
    Ok(None)
}

/// Catalan counts, `φ` values, both Kreweras paths, `φ(Y^b)`, the commuting
/// diagrams and the Catalan-pair round trips.
pub fn verify_bijections() -> Report {
    let start = Instant::now();
    let mut rep = Report::new("bijections", 0, 0, 0);
    rep.record("catalan-counts", "|Y_n| = |NCP_n| = C_n", json!({"max_n": 10}), Ok(check_catalan_counts(10)));
    rep.record("phi-golden", "φ on known small trees", json!({}), Ok(check_phi_golden()));
    rep.record("kreweras-dual-path", "brute-force K = iso(NCP2 → NCP1)", json!({"max_n": 7}), check_kreweras_dual_path(7));
    rep.record("phi-yb", "φ(R(Y_n)) = {P ∪ K(P)}", json!({"max_n": 5}), check_phi_yb(5));
    rep.record(
        "phi-r-negative-witness",
        "some τ of size 2 has φ(R(τ)) ≠ φ(τ) ∪ K(φ(τ))",
        json!({"n": 2}),
        phi_r_counterexample(2).map(|c| match c {
            Some(_) => None,
            None => Some("no counterexample of size 2".to_string()),
        }),
    );
    rep.record("diagrams", "the three squares commute", json!({"max_n": 6}), Ok(check_diagrams(6)));
    rep.record("catalan-roundtrips", "compose and decompose are inverse; iso round trips", json!({"max_n": 6}), check_roundtrips(6));
    rep.record("named-bijections", "named maps are size-preserving bijections", json!({"max_n": 6}), check_named_bijections(6));
    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    rep
}

/// `Φ_f`-evaluation against `tree_eval`, and the duplicial relations.
pub fn verify_operad(dim: usize, trials: usize, seed: u64) -> Report {
    let start = Instant::now();
    let max_n = 5;
    let mut rep = Report::new("operad", seed, max_n, dim);
    let mut r = ChaCha8Rng::seed_from_u64(seed ^ 0x0BE7_AD00);
    let series: Vec<_> = (0..trials).map(|_| random_gi(&mut r, dim, max_n, 2)).collect();
    rep.record(
        "operad-eval",
        "f(Φ_f(τ)(x_1|…|x_n)) = f_τ(x_1, …, x_n)",
        json!({"max_n": max_n, "series": trials, "dim": dim}),
        over_trials(trials, |t| {
            let f = &series[t];
            for n in 0..=max_n {
                let xs: Vec<_> = (0..n).map(|_| random_integer_element(&mut r, 3, dim)).collect();
                for tau in enumerate_trees(n) {
                    if operad_eval(f, &tau, &xs)? != tree_eval(f, &tau, &xs)? {
                        return Ok(Some(format!("tree {tau}")));
                    }
                }
            }
            Ok(None)
        }),
    );
    rep.record("duplicial-tree-relations", "the three relations hold among trees", json!({}), Ok(duplicial_tree_relations()
        .iter()
        .enumerate()
        .find(|(_, (l, r))| l != r)
        .map(|(i, (l, r))| format!("relation {}: {l} vs {r}", i + 1))));
    rep.record(
        "duplicial-map-relations",
        "the three relations hold for Φ_f on words of T(B)",
        json!({"series": trials, "dim": dim}),
        over_trials(trials, |t| {
            let f = &series[t];
            let mut word = |len: usize| -> Result<TensorWord> {
                let a = TensorWord::pure(&(0..len).map(|_| random_integer_element(&mut r, 2, dim)).collect::<Vec<_>>())?;
                let b = TensorWord::pure(&(0..len + 1).map(|_| random_integer_element(&mut r, 2, dim)).collect::<Vec<_>>())?;
                Ok(a.add(&b))
            };
            let (u, v, w) = (word(1)?, word(1)?, word(2)?);
            for (i, (l, rr)) in duplicial_map_relations(f, &u, &v, &w)?.iter().enumerate() {
                if l != rr {
                    return Ok(Some(format!("relation {}", i + 1)));
                }
            }
            Ok(None)
        }),
    );
    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    rep
}

/// Runs a named suite. `order` must be at least 2 for the series suites.
pub fn run_suite(suite: Suite, order: usize, dim: usize, trials: usize, seed: u64) -> Result<Report> {
    if dim == 0 {
        return Err(Error::InvalidArgument("dimension must be positive".into()));
    }
    if trials == 0 {
        return Err(Error::InvalidArgument("at least one trial is needed".into()));
    }
    let needs_order = matches!(suite, Suite::Transforms | Suite::Freeprob | Suite::All);
    if needs_order && order < 2 {
        return Err(Error::InvalidArgument("order must be at least 2".into()));
    }
    let start = Instant::now();
    let mut rep = match suite {
        Suite::Transforms => verify_transform_identities(order, dim, trials, seed),
        Suite::Freeprob => verify_freeprob_identities(order, dim, trials, seed),
        Suite::Bijections => verify_bijections(),
        Suite::Operad => verify_operad(dim, trials.min(5), seed),
        Suite::All => {
            let mut all = Report::new("all", seed, order, dim);
            all.extend(verify_bijections());
            all.extend(verify_operad(dim, trials.min(5), seed));
            all.extend(verify_transform_identities(order, dim, trials, seed));
            all.extend(verify_freeprob_identities(order, dim, trials, seed));
            all
        }
    };
    rep.seed = seed;
    rep.elapsed_ms = start.elapsed().as_millis() as u64;
    Ok(rep)
}
