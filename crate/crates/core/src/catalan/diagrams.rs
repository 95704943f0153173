//! The three commuting squares relating planar rooted trees, binary trees,
//! Schröder trees and noncrossing partitions.
//!
//! Maps with an explicit construction (Knuth rotation, leaf additions, right-arm
//! `φ`, brute-force Kreweras) are used as such; the gaps maps, Edelman's and
//! Prodinger's bijections are the Catalan isomorphisms.

use serde::Serialize;

use super::planar::{add_leftmost_leaves, add_rightmost_leaves, knuth_rotation, knuth_rotation_inverse, PlanarTree};
use super::{catalan_iso, phi_by_arms, Family, FamilyId, Payload};
use crate::partitions::{kreweras, Partition};
use crate::trees::{enumerate_trees, Tree};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DiagramReport {
    pub diagram: u8,
    pub n: usize,
    pub checked: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// One square: two paths from planar rooted trees to partitions.
pub struct Square<'a> {
    pub top_then_right: Box<dyn Fn(&PlanarTree) -> Partition + 'a>,
    pub down_then_bottom: Box<dyn Fn(&PlanarTree) -> Partition + 'a>,
}

fn iso_part(src: Family, dst: Family, x: Payload) -> Partition {
    match catalan_iso(FamilyId::new(src), FamilyId::new(dst), &x).expect("member of source family") {
        Payload::Partition(p) => p,
        other => panic!("expected a partition, got {other}"),
    }
}

fn iso_tree(src: Family, x: Payload) -> Tree {
    match catalan_iso(FamilyId::new(src), FamilyId::new(Family::Y), &x).expect("member of source family") {
        Payload::Tree(t) => t,
        other => panic!("expected a tree, got {other}"),
    }
}

/// Mirrored rotation `iso(PT2 → Y)`.
pub fn rot_mirrored(t: &PlanarTree) -> Tree {
    iso_tree(Family::Pt2, Payload::Planar(t.clone()))
}

pub fn edelman(t: &Tree) -> Partition {
    iso_part(Family::Y, Family::Ncp3, Payload::Tree(t.clone()))
}

pub fn prodinger(t: &PlanarTree) -> Partition {
    iso_part(Family::Pt1, Family::Ncp4, Payload::Planar(t.clone()))
}

pub fn gaps_rst(t: &PlanarTree) -> Partition {
    iso_part(Family::Rst1, Family::Ncp1, Payload::Planar(t.clone()))
}

pub fn gaps_lst(t: &PlanarTree) -> Partition {
    iso_part(Family::Lst1, Family::Ncp3, Payload::Planar(t.clone()))
}

pub fn square(id: u8) -> Option<Square<'static>> {
    let sq = match id {
        // rot, φ  versus  R, gaps
        1 => Square {
            top_then_right: Box::new(|t| phi_by_arms(&knuth_rotation(t))),
            down_then_bottom: Box::new(|t| gaps_rst(&add_rightmost_leaves(t))),
        },
        // rot, Edel  versus  L, gaps
        2 => Square {
            top_then_right: Box::new(|t| edelman(&rot_mirrored(t))),
            down_then_bottom: Box::new(|t| gaps_lst(&add_leftmost_leaves(t))),
        },
        // rot, Edel, K  versus  Prod
        3 => Square {
            top_then_right: Box::new(|t| kreweras(&edelman(&knuth_rotation(t))).expect("noncrossing")),
            down_then_bottom: Box::new(prodinger),
        },
        _ => return None,
    };
    Some(sq)
}

/// Planar rooted trees with `n` edges.
pub fn planar_trees(n: usize) -> Vec<PlanarTree> {
    enumerate_trees(n).iter().map(knuth_rotation_inverse).collect()
}

pub fn check_square(id: u8, n: usize, sq: &Square<'_>) -> DiagramReport {
    let mut checked = 0;
    for t in planar_trees(n) {
        checked += 1;
        let a = (sq.top_then_right)(&t);
        let b = (sq.down_then_bottom)(&t);
        if a != b {
            return DiagramReport {
                diagram: id,
                n,
                checked,
                passed: false,
                witness: Some(format!("tree {t}: {a} vs {b}")),
            };
        }
    }
    DiagramReport { diagram: id, n, checked, passed: true, witness: None }
}

/// Checks square `id` (1, 2 or 3) on every planar rooted tree with `n` edges.
pub fn verify_diagram(id: u8, n: usize) -> Option<DiagramReport> {
    square(id).map(|sq| check_square(id, n, &sq))
}
