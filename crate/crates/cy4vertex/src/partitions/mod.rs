//! Combinatorial fixed-point data: finite, plane, and solid partitions with
//! asymptotics, Cohen-Macaulay classification of invariant monomial surfaces,
//! and the PT0/PT1 box configurations stacked in their containers.
//!
//! Conventions.  Coordinates are 0-based (`x1..x4` are slots `0..=3`).  A
//! solid partition is stored as four plane-partition asymptotics plus the
//! finite set of boxes added over the minimal configuration they determine;
//! the minimal configuration itself is never materialized.  A plane
//! partition lives in three abstract slots and carries three finite-partition
//! legs plus finite extra boxes.

mod boxconfig;
mod cm;
mod finite;
mod plane;
mod serialize;
mod solid;

pub use boxconfig::{
    pt0_enumerate, pt0_region, pt1_enumerate, BoxConfig, BoxKind, Pt0Region, ScopeError,
};
pub use cm::{cm_classify, compute_t0_ow, CmCase, LambdaSet};
pub use finite::FinitePartition;
pub use plane::PlanePartition;
pub use solid::{
    enumerate_solid_partitions, minimal_plane_partitions, Decomposition, SolidPartition,
};
pub use serialize::{format_solid, parse_solid};

pub fn pair_slots(a: usize, b: usize) -> (usize, usize) {
    debug_assert!(a < b && b < 4);
    let mut rest = (0..4).filter(|&i| i != a && i != b);
    let c = rest.next().unwrap();
    let d = rest.next().unwrap();
    (c, d)
}

/// Index of the unordered pair `(a, b)` in the fixed order
/// `(0,1), (0,2), (0,3), (1,2), (1,3), (2,3)`.
pub fn pair_index(a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < 4);
    const ORDER: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    ORDER.iter().position(|&p| p == (a, b)).unwrap()
}

pub const PAIR_ORDER: [(usize, usize); 6] =
    [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
