use super::finite::FinitePartition;
use crate::algebra::{LaurentPoly, MonomialFraction};
use std::collections::BTreeSet;
use std::fmt;

/// Plane partition describing a torus-invariant subscheme of `C^3` of
/// dimension at most 1, stored as three finite-partition legs plus the finite
/// set of boxes added over the minimal configuration the legs span.
///
/// The partition lives in three abstract slots `0, 1, 2`.  `legs[k]` is the
/// cross-section along slot `k`, a finite partition in the remaining two
/// slots taken in increasing order.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PlanePartition {
    legs: [FinitePartition; 3],
    extra: BTreeSet<[i32; 3]>,
}

impl PlanePartition {
    pub fn empty() -> Self {
        Self::default()
    }

    /// Minimal plane partition with the given legs: the union of the three
    /// leg cylinders.
    pub fn minimal(legs: [FinitePartition; 3]) -> Self {
        Self {
            legs,
            extra: BTreeSet::new(),
        }
    }

    pub fn new(legs: [FinitePartition; 3], extra: impl IntoIterator<Item = [i32; 3]>) -> Self {
        let mut pp = Self::minimal(legs);
        let boxes: Vec<[i32; 3]> = extra.into_iter().collect();
        // insert in depth order so downward-closure validation is meaningful
        let mut boxes = boxes;
        boxes.sort_by_key(|b| b.iter().sum::<i32>());
        for b in boxes {
            pp.push_box(b);
        }
        pp
    }

    /// Adds a box over the current configuration; panics unless the result
    /// stays downward closed.
    pub fn push_box(&mut self, b: [i32; 3]) {
        assert!(b.iter().all(|&x| x >= 0), "box outside the octant");
        assert!(!self.contains(b), "box already present");
        for k in 0..3 {
            if b[k] > 0 {
                let mut p = b;
                p[k] -= 1;
                assert!(self.contains(p), "not downward closed at {:?}", b);
            }
        }
        self.extra.insert(b);
    }

    pub fn legs(&self) -> &[FinitePartition; 3] {
        &self.legs
    }

    pub fn leg(&self, k: usize) -> &FinitePartition {
        &self.legs[k]
    }

    pub fn extra_boxes(&self) -> impl Iterator<Item = &[i32; 3]> {
        self.extra.iter()
    }

    pub fn num_extra(&self) -> usize {
        self.extra.len()
    }

    pub fn is_empty(&self) -> bool {
        self.legs.iter().all(|l| l.is_empty()) && self.extra.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.legs.iter().all(|l| l.is_empty())
    }

    fn in_minimal(&self, p: [i32; 3]) -> bool {
        if p.iter().any(|&x| x < 0) {
            return false;
        }
        for k in 0..3 {
            let (u, v) = match k {
                0 => (p[1], p[2]),
                1 => (p[0], p[2]),
                _ => (p[0], p[1]),
            };
            if self.legs[k].contains(u, v) {
                return true;
            }
        }
        false
    }

    pub fn contains(&self, p: [i32; 3]) -> bool {
        self.in_minimal(p) || self.extra.contains(&p)
    }

    /// Smallest `n` such that all finite data fits in `[0, n)^3`.
    pub fn extent(&self) -> i32 {
        let mut e = 1;
        for l in &self.legs {
            e = e.max(l.extent());
        }
        for b in &self.extra {
            e = e.max(b.iter().max().copied().unwrap() + 1);
        }
        e
    }

    /// Character as a monomial fraction in the three given variable slots.
    pub fn character(&self, slots: [usize; 3]) -> MonomialFraction {
        let (wi, _) = self.leg_decomposition(slots);
        let mut total = MonomialFraction::from_poly(wi);
        for k in 0..3 {
            let (a, b) = complement(k);
            let cross = self.legs[k].character(slots[a], slots[b]);
            let mut part = MonomialFraction::from_poly(cross);
            let mut w = [0i32; 5];
            w[slots[k]] = 1;
            part.div_by_one_minus(w);
            total = total.add(&part);
        }
        total
    }

    /// Splits the character as `sum_k leg_k/(1 - t_k) + W` and returns the
    /// finite part `W` (the renormalized-volume part) together with the rank
    /// of this plane partition's finite data.
    pub fn leg_decomposition(&self, slots: [usize; 3]) -> (LaurentPoly, i64) {
        // inclusion-exclusion over the three leg cylinders, all corrections
        // are finite
        let mut w = LaurentPoly::zero();
        // pairwise intersections (subtract)
        for k in 0..3 {
            for l in (k + 1)..3 {
                for p in self.cylinder_intersection(k, l) {
                    let mut e = [0i32; 5];
                    e[slots[0]] = p[0];
                    e[slots[1]] = p[1];
                    e[slots[2]] = p[2];
                    w.sub_assign(&LaurentPoly::monomial_whole(e));
                }
            }
        }
        // triple intersection added back once
        for p in self.triple_intersection() {
            let mut e = [0i32; 5];
            e[slots[0]] = p[0];
            e[slots[1]] = p[1];
            e[slots[2]] = p[2];
            w.add_assign(&LaurentPoly::monomial_whole(e));
        }
        for b in &self.extra {
            let mut e = [0i32; 5];
            e[slots[0]] = b[0];
            e[slots[1]] = b[1];
            e[slots[2]] = b[2];
            w.add_assign(&LaurentPoly::monomial_whole(e));
        }
        let rank = {
            use num_traits::ToPrimitive;
            w.rank().to_integer().to_i64().unwrap()
        };
        (w, rank)
    }

    fn cylinder_intersection(&self, k: usize, l: usize) -> Vec<[i32; 3]> {
        let mut out = Vec::new();
        let ext = self.extent();
        for x in 0..ext {
            for y in 0..ext {
                for z in 0..ext {
                    let p = [x, y, z];
                    if self.in_cylinder(k, p) && self.in_cylinder(l, p) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    fn triple_intersection(&self) -> Vec<[i32; 3]> {
        let ext = self.extent();
        let mut out = Vec::new();
        for x in 0..ext {
            for y in 0..ext {
                for z in 0..ext {
                    let p = [x, y, z];
                    if (0..3).all(|k| self.in_cylinder(k, p)) {
                        out.push(p);
                    }
                }
            }
        }
        out
    }

    fn in_cylinder(&self, k: usize, p: [i32; 3]) -> bool {
        let (a, b) = complement(k);
        self.legs[k].contains(p[a], p[b])
    }

    /// Renormalized volume of the plane partition (rank of its finite part).
    pub fn renormalized_volume(&self, slots: [usize; 3]) -> i64 {
        self.leg_decomposition(slots).1
    }

    /// All downward-closed finite extensions of `self` with up to
    /// `max_added` boxes, grouped by number of added boxes.
    pub fn enumerate_extensions(&self, max_added: usize) -> Vec<Vec<PlanePartition>> {
        let window = self.extent() + max_added as i32 + 1;
        let addable = |pp: &PlanePartition, b: [i32; 3]| -> bool {
            if pp.contains(b) {
                return false;
            }
            (0..3).all(|k| {
                if b[k] == 0 {
                    return true;
                }
                let mut p = b;
                p[k] -= 1;
                pp.contains(p)
            })
        };
        let mut levels: Vec<Vec<PlanePartition>> = vec![vec![self.clone()]];
        for _ in 0..max_added {
            let mut seen: BTreeSet<Vec<[i32; 3]>> = BTreeSet::new();
            let mut next = Vec::new();
            for pp in levels.last().unwrap() {
                for x in 0..window {
                    for y in 0..window {
                        for z in 0..window {
                            let b = [x, y, z];
                            if addable(pp, b) {
                                let mut e = pp.clone();
                                e.extra.insert(b);
                                let key: Vec<[i32; 3]> = e.extra.iter().copied().collect();
                                if seen.insert(key) {
                                    next.push(e);
                                }
                            }
                        }
                    }
                }
            }
            levels.push(next);
        }
        levels
    }
}

fn complement(k: usize) -> (usize, usize) {
    match k {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

impl fmt::Debug for PlanePartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "PlanePartition(legs [{:?} {:?} {:?}], extra {:?})",
            self.legs[0], self.legs[1], self.legs[2], self.extra
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::MonomialFraction;

    #[test]
    fn cylinder_membership() {
        // leg along slot 0 with single-box cross-section: the x-axis ray
        let pp = PlanePartition::minimal([
            FinitePartition::one(),
            FinitePartition::empty(),
            FinitePartition::empty(),
        ]);
        assert!(pp.contains([7, 0, 0]));
        assert!(!pp.contains([0, 1, 0]));
    }

    #[test]
    fn character_of_ray() {
        let pp = PlanePartition::minimal([
            FinitePartition::one(),
            FinitePartition::empty(),
            FinitePartition::empty(),
        ]);
        let ch = pp.character([0, 1, 2]);
        let mut expect = MonomialFraction::one();
        expect.div_by_one_minus([1, 0, 0, 0, 0]);
        assert!(ch.eq_rational(&expect));
    }

    #[test]
    fn character_with_extra_box() {
        // 1/(1-t1) + t2
        let pp = PlanePartition::new(
            [
                FinitePartition::one(),
                FinitePartition::empty(),
                FinitePartition::empty(),
            ],
            [[0, 1, 0]],
        );
        let mut expect = MonomialFraction::one();
        expect.div_by_one_minus([1, 0, 0, 0, 0]);
        let expect = expect.add(&MonomialFraction::from_poly(LaurentPoly::var(1)));
        assert!(pp.character([0, 1, 2]).eq_rational(&expect));
    }

    #[test]
    fn two_leg_overlap_correction() {
        // legs along slots 0 and 1, both single-box: char = 1/(1-t0) + 1/(1-t1) - 1
        let pp = PlanePartition::minimal([
            FinitePartition::one(),
            FinitePartition::one(),
            FinitePartition::empty(),
        ]);
        let mut a = MonomialFraction::one();
        a.div_by_one_minus([1, 0, 0, 0, 0]);
        let mut b = MonomialFraction::one();
        b.div_by_one_minus([0, 1, 0, 0, 0]);
        let expect = a.add(&b).sub(&MonomialFraction::one());
        assert!(pp.character([0, 1, 2]).eq_rational(&expect));
        assert_eq!(pp.renormalized_volume([0, 1, 2]), -1);
    }

    #[test]
    #[should_panic(expected = "not downward closed")]
    fn rejects_floating_box() {
        PlanePartition::new(
            [
                FinitePartition::empty(),
                FinitePartition::empty(),
                FinitePartition::empty(),
            ],
            [[1, 0, 0]],
        );
    }
}
