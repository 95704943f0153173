//! Exact combinatorics of planar binary trees and noncrossing partitions, and
//! operator-valued multilinear function series over matrix algebras with their
//! boxed convolutions and S-transforms.

pub mod algebra;
pub mod catalan;
pub mod error;
pub mod freeprob;
pub mod multimap;
pub mod operad;
pub mod partitions;
pub mod report;
pub mod series;
pub mod transforms;
pub mod treeval;
pub mod trees;
pub mod verify;

pub use algebra::{AlgebraElement, LinMap, Rational};
pub use error::{Error, Result};
pub use multimap::MultiMap;
pub use partitions::Partition;
pub use series::TruncSeries;
pub use trees::Tree;
