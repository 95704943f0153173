//! Catalan pairs: graded families with a binary map inducing level-wise bijections
//! `⊔ C_k × C_{n-k} → C_{n+1}`. Any two such families are uniquely isomorphic, and
//! the isomorphism is computed here by structural recursion on `decompose`.

pub mod diagrams;
pub mod planar;

use std::fmt;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::partitions::{concat, kreweras, left_merge, right_merge, Partition};
use crate::trees::{enumerate_trees, Tree};
pub use planar::PlanarTree;
use planar::{is_ndpf, ndpf_compose, ndpf_decompose};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Family {
    Y,
    Ncp1,
    Ncp2,
    Ncp3,
    Ncp4,
    Ncp5,
    Ncp6,
    Ncp7,
    Ncp8,
    Pt1,
    Pt2,
    Rst1,
    Rst2,
    Lst1,
    Lst2,
    Ndpf,
}

impl Family {
    pub const ALL: [Family; 16] = [
        Family::Y,
        Family::Ncp1,
        Family::Ncp2,
        Family::Ncp3,
        Family::Ncp4,
        Family::Ncp5,
        Family::Ncp6,
        Family::Ncp7,
        Family::Ncp8,
        Family::Pt1,
        Family::Pt2,
        Family::Rst1,
        Family::Rst2,
        Family::Lst1,
        Family::Lst2,
        Family::Ndpf,
    ];

    fn name(self) -> &'static str {
        match self {
            Family::Y => "Y",
            Family::Ncp1 => "NCP1",
            Family::Ncp2 => "NCP2",
            Family::Ncp3 => "NCP3",
            Family::Ncp4 => "NCP4",
            Family::Ncp5 => "NCP5",
            Family::Ncp6 => "NCP6",
            Family::Ncp7 => "NCP7",
            Family::Ncp8 => "NCP8",
            Family::Pt1 => "PT1",
            Family::Pt2 => "PT2",
            Family::Rst1 => "RST1",
            Family::Rst2 => "RST2",
            Family::Lst1 => "LST1",
            Family::Lst2 => "LST2",
            Family::Ndpf => "NDPF",
        }
    }

    pub fn carrier(self) -> Carrier {
        match self {
            Family::Y => Carrier::BinaryTrees,
            Family::Ncp1
            | Family::Ncp2
            | Family::Ncp3
            | Family::Ncp4
            | Family::Ncp5
            | Family::Ncp6
            | Family::Ncp7
            | Family::Ncp8 => Carrier::Partitions,
            Family::Pt1 | Family::Pt2 => Carrier::PlanarTrees,
            Family::Rst1 | Family::Rst2 => Carrier::RightSchroder,
            Family::Lst1 | Family::Lst2 => Carrier::LeftSchroder,
            Family::Ndpf => Carrier::ParkingFunctions,
        }
    }
}

/// The underlying set of a family, independent of its Catalan map.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Carrier {
    BinaryTrees,
    Partitions,
    PlanarTrees,
    RightSchroder,
    LeftSchroder,
    ParkingFunctions,
}

/// A family together with the flag selecting the reversed map `(x, y) ↦ f(y, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FamilyId {
    pub base: Family,
    pub reversed: bool,
}

impl FamilyId {
    pub const fn new(base: Family) -> FamilyId {
        FamilyId { base, reversed: false }
    }

    pub const fn reversed(base: Family) -> FamilyId {
        FamilyId { base, reversed: true }
    }

    pub fn flip(self) -> FamilyId {
        FamilyId { base: self.base, reversed: !self.reversed }
    }

    pub fn carrier(self) -> Carrier {
        self.base.carrier()
    }

    /// All 16 base families and their reversals.
    pub fn all() -> Vec<FamilyId> {
        Family::ALL.iter().flat_map(|&b| [FamilyId::new(b), FamilyId::reversed(b)]).collect()
    }
}

impl From<Family> for FamilyId {
    fn from(base: Family) -> FamilyId {
        FamilyId::new(base)
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.base, self.reversed) {
            (Family::Y, true) => write!(f, "Yp"),
            (b, true) => write!(f, "{}'", b.name()),
            (b, false) => write!(f, "{}", b.name()),
        }
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<FamilyId> {
        let upper = s.trim().to_ascii_uppercase();
        let (name, reversed) = match upper.as_str() {
            "YP" | "Y'" => ("Y", true),
            other => match other.strip_suffix('\'') {
                Some(stem) => (stem, true),
                None => (other, false),
            },
        };
        let base = Family::ALL
            .iter()
            .copied()
            .find(|f| f.name() == name)
            .ok_or_else(|| Error::UnknownName(s.to_string()))?;
        Ok(FamilyId { base, reversed })
    }
}

/// An element of some Catalan family.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub enum Payload {
    Tree(Tree),
    Partition(Partition),
    Planar(PlanarTree),
    Parking(Vec<usize>),
}

impl fmt::Display for Payload {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Payload::Tree(t) => write!(f, "{t}"),
            Payload::Partition(p) => write!(f, "{p}"),
            Payload::Planar(t) => write!(f, "{t}"),
            Payload::Parking(a) => write!(f, "{a:?}"),
        }
    }
}

impl Serialize for Payload {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Payload::Tree(t) => t.serialize(s),
            Payload::Partition(p) => p.serialize(s),
            Payload::Planar(t) => t.serialize(s),
            Payload::Parking(a) => a.serialize(s),
        }
    }
}

impl Payload {
    /// Reads a payload for the given carrier from JSON.
    pub fn from_json(carrier: Carrier, v: &serde_json::Value) -> Result<Payload> {
        let bad = |e: serde_json::Error| Error::Parse(e.to_string());
        let p = match carrier {
            Carrier::BinaryTrees => match v {
                serde_json::Value::String(s) => Payload::Tree(s.parse()?),
                _ => return Err(Error::Parse("a tree is written as a string like \"((|,|),|)\"".into())),
            },
            Carrier::Partitions => Payload::Partition(serde_json::from_value(v.clone()).map_err(bad)?),
            Carrier::PlanarTrees | Carrier::RightSchroder | Carrier::LeftSchroder => {
                Payload::Planar(serde_json::from_value(v.clone()).map_err(bad)?)
            }
            Carrier::ParkingFunctions => Payload::Parking(serde_json::from_value(v.clone()).map_err(bad)?),
        };
        if !carrier_contains(carrier, &p) {
            return Err(Error::FamilyMismatch(format!("{carrier:?}")));
        }
        Ok(p)
    }

    /// Reads a payload from text: a tree string or JSON.
    pub fn parse(carrier: Carrier, s: &str) -> Result<Payload> {
        if carrier == Carrier::BinaryTrees {
            let trimmed = s.trim().trim_matches('"');
            return Ok(Payload::Tree(trimmed.parse()?));
        }
        let v: serde_json::Value = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Payload::from_json(carrier, &v)
    }
}

/// An element tagged with its family.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct CatalanObject {
    pub family: FamilyId,
    pub payload: Payload,
}

impl CatalanObject {
    pub fn new(family: FamilyId, payload: Payload) -> Result<CatalanObject> {
        if !carrier_contains(family.carrier(), &payload) {
            return Err(Error::FamilyMismatch(family.to_string()));
        }
        Ok(CatalanObject { family, payload })
    }

    pub fn size(&self) -> usize {
        size_in(self.family, &self.payload)
    }
}

fn carrier_contains(c: Carrier, p: &Payload) -> bool {
    match (c, p) {
        (Carrier::BinaryTrees, Payload::Tree(_)) => true,
        (Carrier::Partitions, Payload::Partition(q)) => q.is_noncrossing(),
        (Carrier::PlanarTrees, Payload::Planar(_)) => true,
        (Carrier::RightSchroder, Payload::Planar(t)) => t.is_right_schroder(),
        (Carrier::LeftSchroder, Payload::Planar(t)) => t.is_left_schroder(),
        (Carrier::ParkingFunctions, Payload::Parking(a)) => is_ndpf(a),
        _ => false,
    }
}

fn payload_size_in(c: Carrier, p: &Payload) -> usize {
    match (c, p) {
        (Carrier::RightSchroder | Carrier::LeftSchroder, Payload::Planar(t)) => t.schroder_size(),
        _ => payload_size(p),
    }
}

fn payload_size(p: &Payload) -> usize {
    match p {
        Payload::Tree(t) => t.size(),
        Payload::Partition(q) => q.size(),
        Payload::Planar(t) => t.edges(),
        Payload::Parking(a) => a.len(),
    }
}

/// Size of `x` in the grading of `family`.
pub fn size_in(family: FamilyId, x: &Payload) -> usize {
    payload_size_in(family.carrier(), x)
}

pub fn unit(family: FamilyId) -> Payload {
    match family.carrier() {
        Carrier::BinaryTrees => Payload::Tree(Tree::Leaf),
        Carrier::Partitions => Payload::Partition(Partition::empty()),
        Carrier::PlanarTrees | Carrier::RightSchroder | Carrier::LeftSchroder => Payload::Planar(PlanarTree::leaf()),
        Carrier::ParkingFunctions => Payload::Parking(Vec::new()),
    }
}

fn as_tree(p: &Payload) -> &Tree {
    match p {
        Payload::Tree(t) => t,
        _ => unreachable!("checked by carrier"),
    }
}

fn as_partition(p: &Payload) -> &Partition {
    match p {
        Payload::Partition(q) => q,
        _ => unreachable!("checked by carrier"),
    }
}

fn as_planar(p: &Payload) -> &PlanarTree {
    match p {
        Payload::Planar(t) => t,
        _ => unreachable!("checked by carrier"),
    }
}

fn as_parking(p: &Payload) -> &[usize] {
    match p {
        Payload::Parking(a) => a,
        _ => unreachable!("checked by carrier"),
    }
}

fn bar() -> Partition {
    Partition::one(1)
}

/// Fast Kreweras complement, `iso(NCP2 → NCP1)`.
pub fn kreweras_via_catalan(p: &Partition) -> Result<Partition> {
    if !p.is_noncrossing() {
        return Err(Error::Crossing(p.to_string()));
    }
    match iso_unchecked(Family::Ncp2.into(), Family::Ncp1.into(), &Payload::Partition(p.clone())) {
        Payload::Partition(q) => Ok(q),
        _ => unreachable!(),
    }
}

fn kreweras_inverse(p: &Partition) -> Partition {
    match iso_unchecked(Family::Ncp1.into(), Family::Ncp2.into(), &Payload::Partition(p.clone())) {
        Payload::Partition(q) => q,
        _ => unreachable!(),
    }
}

fn kfast(p: &Partition) -> Partition {
    kreweras_via_catalan(p).expect("noncrossing")
}

fn compose_base(f: Family, x: &Payload, y: &Payload) -> Payload {
    match f {
        Family::Y => Payload::Tree(Tree::wedge(as_tree(x).clone(), as_tree(y).clone())),
        Family::Ncp1 => {
            let (p, q) = (as_partition(x), as_partition(y));
            Payload::Partition(concat(p, &right_merge(&bar(), q)))
        }
        Family::Ncp2 => {
            let (p, q) = (as_partition(x), as_partition(y));
            Payload::Partition(left_merge(p, &concat(&bar(), q)))
        }
        Family::Ncp3 => {
            let (p, q) = (as_partition(x), as_partition(y));
            Payload::Partition(left_merge(&concat(&bar(), p), q))
        }
        Family::Ncp4 => {
            let (p, q) = (as_partition(x), as_partition(y));
            Payload::Partition(concat(&right_merge(&bar(), p), q))
        }
        Family::Ncp5 => {
            let (p, q) = (as_partition(x), as_partition(y));
            Payload::Partition(concat(p, &left_merge(q, &bar())))
        }
        Family::Ncp6 => {
            let (p, q) = (as_partition(x), as_partition(y));
            Payload::Partition(right_merge(p, &concat(q, &bar())))
        }
        Family::Ncp7 => {
            let (p, q) = (as_partition(x), as_partition(y));
            Payload::Partition(concat(&right_merge(&bar(), &kfast(p)), q))
        }
        Family::Ncp8 => {
            let (p, q) = (as_partition(x), as_partition(y));
            Payload::Partition(concat(p, &right_merge(&bar(), &kfast(q))))
        }
        Family::Pt1 => {
            let mut children = vec![as_planar(x).clone()];
            children.extend(as_planar(y).children().iter().cloned());
            Payload::Planar(PlanarTree::graft(children))
        }
        Family::Pt2 => {
            let mut children = as_planar(x).children().to_vec();
            children.push(as_planar(y).clone());
            Payload::Planar(PlanarTree::graft(children))
        }
        Family::Rst1 => {
            let (s, t) = (as_planar(x), as_planar(y));
            let mut children = vec![s.clone()];
            children.extend(without_last(t).iter().cloned());
            children.push(PlanarTree::leaf());
            Payload::Planar(PlanarTree::graft(children))
        }
        Family::Rst2 => {
            let (s, t) = (as_planar(x), as_planar(y));
            let mut children = without_last(s).to_vec();
            children.push(t.clone());
            children.push(PlanarTree::leaf());
            Payload::Planar(PlanarTree::graft(children))
        }
        Family::Lst1 => {
            let (s, t) = (as_planar(x), as_planar(y));
            let mut children = vec![PlanarTree::leaf()];
            children.extend(without_first(s).iter().cloned());
            children.push(t.clone());
            Payload::Planar(PlanarTree::graft(children))
        }
        Family::Lst2 => {
            let (s, t) = (as_planar(x), as_planar(y));
            let mut children = vec![PlanarTree::leaf(), s.clone()];
            children.extend(without_first(t).iter().cloned());
            Payload::Planar(PlanarTree::graft(children))
        }
        Family::Ndpf => Payload::Parking(ndpf_compose(as_parking(x), as_parking(y))),
    }
}

/// Children of a right Schröder tree other than its trailing leaf (none for a leaf).
fn without_last(t: &PlanarTree) -> &[PlanarTree] {
    let c = t.children();
    if c.is_empty() {
        c
    } else {
        &c[..c.len() - 1]
    }
}

/// Children of a left Schröder tree other than its leading leaf (none for a leaf).
fn without_first(t: &PlanarTree) -> &[PlanarTree] {
    let c = t.children();
    if c.is_empty() {
        c
    } else {
        &c[1..]
    }
}

fn graft_or_leaf(children: Vec<PlanarTree>, trailing: bool) -> PlanarTree {
    if children.is_empty() {
        return PlanarTree::leaf();
    }
    let mut c = children;
    if trailing {
        c.push(PlanarTree::leaf());
    } else {
        c.insert(0, PlanarTree::leaf());
    }
    PlanarTree::graft(c)
}

fn min_of_block_of(r: &Partition, x: usize) -> usize {
    r.block_of(x).unwrap()[0]
}

fn max_of_block_of(r: &Partition, x: usize) -> usize {
    *r.block_of(x).unwrap().last().unwrap()
}

fn decompose_base(f: Family, z: &Payload) -> (Payload, Payload) {
    let part = |p: Partition| Payload::Partition(p);
    match f {
        Family::Y => {
            let (l, r) = as_tree(z).unwedge().expect("nonempty");
            (Payload::Tree(l), Payload::Tree(r))
        }
        Family::Ncp1 | Family::Ncp8 => {
            let r = as_partition(z);
            let n = r.size();
            let m = min_of_block_of(r, n);
            let p = r.restrict(1, m - 1);
            let q = r.restrict(m + 1, n);
            if f == Family::Ncp8 {
                (part(p), part(kreweras_inverse(&q)))
            } else {
                (part(p), part(q))
            }
        }
        Family::Ncp2 => {
            let r = as_partition(z);
            let m = max_of_block_of(r, 1);
            (part(r.restrict(1, m - 1)), part(r.restrict(m + 1, r.size())))
        }
        Family::Ncp3 => {
            let r = as_partition(z);
            let n = r.size();
            match r.block_of(1).unwrap().get(1).copied() {
                None => (part(r.restrict(2, n)), part(Partition::empty())),
                Some(s) => (part(r.restrict(2, s - 1)), part(r.remove(1).restrict(s - 1, n - 1))),
            }
        }
        Family::Ncp4 | Family::Ncp7 => {
            let r = as_partition(z);
            let m = max_of_block_of(r, 1);
            let p = r.restrict(2, m);
            let q = r.restrict(m + 1, r.size());
            if f == Family::Ncp7 {
                (part(kreweras_inverse(&p)), part(q))
            } else {
                (part(p), part(q))
            }
        }
        Family::Ncp5 => {
            let r = as_partition(z);
            let n = r.size();
            let m = min_of_block_of(r, n);
            (part(r.restrict(1, m - 1)), part(r.restrict(m, n - 1)))
        }
        Family::Ncp6 => {
            let r = as_partition(z);
            let n = r.size();
            let block = r.block_of(n).unwrap();
            if block.len() == 1 {
                (part(Partition::empty()), part(r.restrict(1, n - 1)))
            } else {
                let s = block[block.len() - 2];
                (part(r.restrict(1, s)), part(r.restrict(s + 1, n - 1)))
            }
        }
        Family::Pt1 => {
            let c = as_planar(z).children();
            (Payload::Planar(c[0].clone()), Payload::Planar(PlanarTree::graft(c[1..].to_vec())))
        }
        Family::Pt2 => {
            let c = as_planar(z).children();
            let k = c.len() - 1;
            (Payload::Planar(PlanarTree::graft(c[..k].to_vec())), Payload::Planar(c[k].clone()))
        }
        Family::Rst1 => {
            let c = without_last(as_planar(z));
            (Payload::Planar(c[0].clone()), Payload::Planar(graft_or_leaf(c[1..].to_vec(), true)))
        }
        Family::Rst2 => {
            let c = without_last(as_planar(z));
            let k = c.len() - 1;
            (Payload::Planar(graft_or_leaf(c[..k].to_vec(), true)), Payload::Planar(c[k].clone()))
        }
        Family::Lst1 => {
            let c = without_first(as_planar(z));
            let k = c.len() - 1;
            (Payload::Planar(graft_or_leaf(c[..k].to_vec(), false)), Payload::Planar(c[k].clone()))
        }
        Family::Lst2 => {
            let c = without_first(as_planar(z));
            (Payload::Planar(c[0].clone()), Payload::Planar(graft_or_leaf(c[1..].to_vec(), false)))
        }
        Family::Ndpf => {
            let (u, v) = ndpf_decompose(as_parking(z)).expect("nonempty");
            (Payload::Parking(u), Payload::Parking(v))
        }
    }
}

fn check_member(fam: FamilyId, x: &Payload) -> Result<()> {
    if carrier_contains(fam.carrier(), x) {
        Ok(())
    } else {
        Err(Error::FamilyMismatch(format!("{x} is not in {fam}")))
    }
}

pub fn catalan_compose(fam: FamilyId, x: &Payload, y: &Payload) -> Result<Payload> {
    check_member(fam, x)?;
    check_member(fam, y)?;
    Ok(compose_unchecked(fam, x, y))
}

fn compose_unchecked(fam: FamilyId, x: &Payload, y: &Payload) -> Payload {
    if fam.reversed {
        compose_base(fam.base, y, x)
    } else {
        compose_base(fam.base, x, y)
    }
}

pub fn catalan_decompose(fam: FamilyId, z: &Payload) -> Result<(Payload, Payload)> {
    check_member(fam, z)?;
    if size_in(fam, z) == 0 {
        return Err(Error::EmptyTree);
    }
    Ok(decompose_unchecked(fam, z))
}

fn decompose_unchecked(fam: FamilyId, z: &Payload) -> (Payload, Payload) {
    let (a, b) = decompose_base(fam.base, z);
    if fam.reversed {
        (b, a)
    } else {
        (a, b)
    }
}

/// The unique isomorphism of Catalan pairs from `src` to `dst`.
pub fn catalan_iso(src: FamilyId, dst: FamilyId, x: &Payload) -> Result<Payload> {
    check_member(src, x)?;
    Ok(iso_unchecked(src, dst, x))
}

fn iso_unchecked(src: FamilyId, dst: FamilyId, x: &Payload) -> Payload {
    if size_in(src, x) == 0 {
        return unit(dst);
    }
    let (a, b) = decompose_unchecked(src, x);
    compose_unchecked(dst, &iso_unchecked(src, dst, &a), &iso_unchecked(src, dst, &b))
}

/// Level `n` of a family, obtained by transporting `Y_n`.
pub fn enumerate_family(fam: FamilyId, n: usize) -> Vec<Payload> {
    enumerate_trees(n).into_iter().map(|t| iso_unchecked(FamilyId::new(Family::Y), fam, &Payload::Tree(t))).collect()
}

pub const BIJECTION_NAMES: [&str; 14] = [
    "phi",
    "phi_inv",
    "psi",
    "kreweras_iso",
    "rot",
    "mirror",
    "edelman",
    "prodinger",
    "dershowitz_zaks",
    "gaps_rst",
    "gaps_lst",
    "bernardi",
    "add_left",
    "add_right",
];

/// Source and target family of a named bijection.
pub fn bijection_families(name: &str) -> Result<(FamilyId, FamilyId)> {
    use Family::*;
    let (a, b) = match name {
        "phi" => (FamilyId::new(Y), FamilyId::new(Ncp1)),
        "phi_inv" => (FamilyId::new(Ncp1), FamilyId::new(Y)),
        "psi" => (FamilyId::new(Y), FamilyId::new(Ncp2)),
        "kreweras_iso" => (FamilyId::new(Ncp2), FamilyId::new(Ncp1)),
        "rot" => (FamilyId::new(Pt1), FamilyId::new(Y)),
        "mirror" => (FamilyId::new(Y), FamilyId::reversed(Y)),
        "edelman" => (FamilyId::new(Y), FamilyId::new(Ncp3)),
        "prodinger" => (FamilyId::new(Pt1), FamilyId::new(Ncp4)),
        "dershowitz_zaks" => (FamilyId::new(Pt2), FamilyId::new(Ncp2)),
        "gaps_rst" => (FamilyId::new(Rst1), FamilyId::new(Ncp1)),
        "gaps_lst" => (FamilyId::new(Lst1), FamilyId::new(Ncp3)),
        "bernardi" => (FamilyId::new(Ncp7), FamilyId::new(Pt1)),
        "add_left" => (FamilyId::new(Pt2), FamilyId::new(Lst1)),
        "add_right" => (FamilyId::new(Pt1), FamilyId::new(Rst1)),
        other => return Err(Error::UnknownName(other.to_string())),
    };
    Ok((a, b))
}

pub fn named_bijection(name: &str, x: &Payload) -> Result<Payload> {
    let (src, dst) = bijection_families(name)?;
    catalan_iso(src, dst, x)
}

/// `φ : Y → NCP`.
pub fn phi(t: &Tree) -> Partition {
    match iso_unchecked(Family::Y.into(), Family::Ncp1.into(), &Payload::Tree(t.clone())) {
        Payload::Partition(p) => p,
        _ => unreachable!(),
    }
}

pub fn phi_inv(p: &Partition) -> Result<Tree> {
    match catalan_iso(Family::Ncp1.into(), Family::Y.into(), &Payload::Partition(p.clone()))? {
        Payload::Tree(t) => Ok(t),
        _ => unreachable!(),
    }
}

/// `ψ : Y → (NCP, Cat′)`.
pub fn psi(t: &Tree) -> Partition {
    match iso_unchecked(Family::Y.into(), Family::Ncp2.into(), &Payload::Tree(t.clone())) {
        Payload::Partition(p) => p,
        _ => unreachable!(),
    }
}

/// `K′ = φ ∘ ψ^{-1}`, assembled from the two tree bijections.
pub fn k_prime(p: &Partition) -> Result<Partition> {
    let t = match catalan_iso(Family::Ncp2.into(), Family::Y.into(), &Payload::Partition(p.clone()))? {
        Payload::Tree(t) => t,
        _ => unreachable!(),
    };
    Ok(phi(&t))
}

/// `φ` read off directly: the blocks are the right arms of the tree.
pub fn phi_by_arms(t: &Tree) -> Partition {
    Partition::new(t.size(), t.right_arms()).expect("right arms partition the vertices")
}

/// Brute-force Kreweras complement, re-exported for symmetry with the fast path.
pub fn kreweras_brute(p: &Partition) -> Result<Partition> {
    kreweras(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_ncp;
    use crate::trees::{over, under};
    use std::collections::BTreeSet;

    fn part(blocks: &[&[usize]]) -> Partition {
        Partition::from_blocks(blocks.iter().map(|b| b.to_vec()).collect()).unwrap()
    }

    fn tr(s: &str) -> Tree {
        s.parse().unwrap()
    }

    fn pp(p: Partition) -> Payload {
        Payload::Partition(p)
    }

    const CATALAN: [usize; 8] = [1, 1, 2, 5, 14, 42, 132, 429];

    #[test]
    fn compose_examples() {
        let y = FamilyId::new(Family::Y);
        let leaf = Payload::Tree(Tree::Leaf);
        assert_eq!(catalan_compose(y, &leaf, &leaf).unwrap(), Payload::Tree(Tree::single()));
        let one = pp(part(&[&[1]]));
        let ncp1 = FamilyId::new(Family::Ncp1);
        assert_eq!(catalan_compose(ncp1, &one, &one).unwrap(), pp(part(&[&[1], &[2, 3]])));
        assert_eq!(catalan_decompose(ncp1, &pp(part(&[&[1], &[2, 3]]))).unwrap(), (one.clone(), one.clone()));
        let nd = FamilyId::new(Family::Ndpf);
        assert_eq!(catalan_compose(nd, &Payload::Parking(vec![1]), &Payload::Parking(vec![1])).unwrap(), Payload::Parking(vec![1, 2, 2]));
        assert_eq!(
            catalan_decompose(y, &Payload::Tree(tr("((|,|),(|,|))"))).unwrap(),
            (Payload::Tree(Tree::single()), Payload::Tree(Tree::single()))
        );
        assert!(catalan_decompose(y, &leaf).is_err());
        assert!(matches!(catalan_compose(ncp1, &leaf, &one), Err(Error::FamilyMismatch(_))));
    }

    #[test]
    fn family_names_roundtrip() {
        for f in FamilyId::all() {
            assert_eq!(f.to_string().parse::<FamilyId>().unwrap(), f);
        }
        assert_eq!("Yp".parse::<FamilyId>().unwrap(), FamilyId::reversed(Family::Y));
        assert!("NCP9".parse::<FamilyId>().is_err());
    }

    #[test]
    fn levels_have_catalan_size() {
        for fam in FamilyId::all() {
            for (n, &c) in CATALAN.iter().enumerate() {
                let level = enumerate_family(fam, n);
                let set: BTreeSet<_> = level.iter().cloned().collect();
                assert_eq!(set.len(), c, "{fam} n={n}");
                for x in &level {
                    assert!(carrier_contains(fam.carrier(), x), "{fam} {x}");
                    assert_eq!(size_in(fam, x), n, "{fam} {x}");
                }
            }
        }
    }

    #[test]
    fn compose_and_decompose_are_inverse() {
        for fam in FamilyId::all() {
            let levels: Vec<Vec<Payload>> = (0..=5).map(|n| enumerate_family(fam, n)).collect();
            for n in 1..=6 {
                for z in enumerate_family(fam, n) {
                    let (a, b) = catalan_decompose(fam, &z).unwrap();
                    assert_eq!(size_in(fam, &a) + size_in(fam, &b) + 1, n);
                    assert_eq!(catalan_compose(fam, &a, &b).unwrap(), z, "{fam}");
                }
                for k in 0..n {
                    for a in &levels[k] {
                        for b in &levels[n - 1 - k] {
                            let z = catalan_compose(fam, a, b).unwrap();
                            assert_eq!(size_in(fam, &z), n);
                            assert_eq!(catalan_decompose(fam, &z).unwrap(), (a.clone(), b.clone()), "{fam}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn iso_is_functorial() {
        let fams = [Family::Y, Family::Ncp3, Family::Pt2, Family::Lst1, Family::Ndpf, Family::Ncp7];
        for n in 0..=5 {
            for &a in &fams {
                let a = FamilyId::new(a);
                for x in enumerate_family(a, n) {
                    assert_eq!(catalan_iso(a, a, &x).unwrap(), x);
                    for &b in &fams {
                        let b = FamilyId::reversed(b);
                        let y = catalan_iso(a, b, &x).unwrap();
                        assert_eq!(catalan_iso(b, a, &y).unwrap(), x);
                        for &c in &fams {
                            let c = FamilyId::new(c);
                            assert_eq!(catalan_iso(b, c, &y).unwrap(), catalan_iso(a, c, &x).unwrap());
                        }
                    }
                }
            }
        }
        for f in FamilyId::all() {
            assert_eq!(catalan_iso(FamilyId::new(Family::Y), f, &Payload::Tree(Tree::Leaf)).unwrap(), unit(f));
        }
    }

    #[test]
    fn phi_first_values() {
        assert_eq!(phi(&Tree::single()), part(&[&[1]]));
        assert_eq!(phi(&tr("((|,|),|)")), part(&[&[1], &[2]]));
        assert_eq!(phi(&tr("(|,(|,|))")), part(&[&[1, 2]]));
        let fig = tr("(((|,|),((|,|),|)),(|,((|,(|,|)),|)))");
        assert_eq!(phi(&fig), part(&[&[1], &[2, 4], &[3], &[5, 6, 9], &[7, 8]]));
        assert_eq!(named_bijection("phi", &Payload::Tree(fig.clone())).unwrap(), pp(phi(&fig)));
        assert_eq!(phi_inv(&phi(&fig)).unwrap(), fig);
    }

    #[test]
    fn phi_recursive_equals_right_arms() {
        for n in 0..=8 {
            for t in enumerate_trees(n) {
                assert_eq!(phi(&t), phi_by_arms(&t), "{t}");
            }
        }
    }

    #[test]
    fn phi_grafting_laws() {
        let small: Vec<Tree> = (0..=5).flat_map(enumerate_trees).collect();
        for s in &small {
            for t in &small {
                if s.size() + t.size() > 5 {
                    continue;
                }
                assert_eq!(phi(&over(s, t)), concat(&phi(s), &phi(t)));
                assert_eq!(phi(&under(s, t)), right_merge(&phi(s), &phi(t)));
            }
        }
    }

    #[test]
    fn fast_kreweras_matches_brute_force() {
        for n in 0..=6 {
            let all = enumerate_ncp(n);
            for p in &all {
                let brute = crate::partitions::kreweras_within(p, &all).unwrap();
                assert_eq!(kreweras_via_catalan(p).unwrap(), brute);
                assert_eq!(k_prime(p).unwrap(), brute);
                assert_eq!(named_bijection("kreweras_iso", &pp(p.clone())).unwrap(), pp(brute));
            }
        }
        let p = part(&[&[1, 2], &[3, 6, 8], &[4], &[5], &[7]]);
        assert_eq!(kreweras_via_catalan(&p).unwrap(), part(&[&[1], &[2, 8], &[3, 4, 5], &[6, 7]]));
        assert!(kreweras_via_catalan(&part(&[&[1, 3], &[2, 4]])).is_err());
    }

    #[test]
    fn other_kreweras_pairs() {
        let pairs = [(Family::Ncp3, Family::Ncp4), (Family::Ncp5, Family::Ncp6)];
        for n in 0..=6 {
            for p in enumerate_ncp(n) {
                let k = kreweras(&p).unwrap();
                for (a, b) in pairs {
                    assert_eq!(catalan_iso(a.into(), b.into(), &pp(p.clone())).unwrap(), pp(k.clone()));
                }
            }
        }
    }

    #[test]
    fn named_bijections_are_bijections() {
        for name in BIJECTION_NAMES {
            let (src, dst) = bijection_families(name).unwrap();
            for n in 0..=6 {
                let images: BTreeSet<Payload> =
                    enumerate_family(src, n).iter().map(|x| named_bijection(name, x).unwrap()).collect();
                assert_eq!(images.len(), CATALAN.get(n).copied().unwrap_or(132), "{name}");
                assert!(images.iter().all(|y| size_in(dst, y) == n));
            }
        }
        assert!(matches!(named_bijection("nope", &Payload::Tree(Tree::Leaf)), Err(Error::UnknownName(_))));
        assert!(named_bijection("phi", &pp(Partition::empty())).is_err());
    }

    #[test]
    fn mirror_is_an_involution() {
        for n in 0..=6 {
            for t in enumerate_trees(n) {
                let x = Payload::Tree(t.clone());
                let m = named_bijection("mirror", &x).unwrap();
                assert_eq!(named_bijection("mirror", &m).unwrap(), x);
            }
        }
        assert_eq!(named_bijection("mirror", &Payload::Tree(tr("((|,|),|)"))).unwrap(), Payload::Tree(tr("(|,(|,|))")));
    }

    #[test]
    fn explicit_constructions_match_isomorphisms() {
        use planar::*;
        for n in 0..=6 {
            for t in enumerate_trees(n) {
                let pt = knuth_rotation_inverse(&t);
                let x = Payload::Planar(pt.clone());
                assert_eq!(named_bijection("rot", &x).unwrap(), Payload::Tree(t.clone()));
                assert_eq!(named_bijection("add_right", &x).unwrap(), Payload::Planar(add_rightmost_leaves(&pt)));
                assert_eq!(named_bijection("add_left", &x).unwrap(), Payload::Planar(add_leftmost_leaves(&pt)));
                assert_eq!(
                    catalan_iso(Family::Pt1.into(), Family::Lst2.into(), &x).unwrap(),
                    Payload::Planar(add_leftmost_leaves(&pt))
                );
                assert_eq!(
                    catalan_iso(Family::Pt2.into(), Family::Rst2.into(), &x).unwrap(),
                    Payload::Planar(add_rightmost_leaves(&pt))
                );
            }
        }
    }

    #[test]
    fn payload_parsing() {
        let p = Payload::parse(Carrier::Partitions, "[[1,3],[2]]").unwrap();
        assert_eq!(p, pp(part(&[&[1, 3], &[2]])));
        assert!(Payload::parse(Carrier::Partitions, "[[1,3],[2,4]]").is_err());
        assert_eq!(Payload::parse(Carrier::BinaryTrees, "\"(|,|)\"").unwrap(), Payload::Tree(Tree::single()));
        assert!(Payload::parse(Carrier::RightSchroder, "[[],[[]]]").is_err());
        assert!(Payload::parse(Carrier::ParkingFunctions, "[1,1,3]").is_ok());
    }
}
