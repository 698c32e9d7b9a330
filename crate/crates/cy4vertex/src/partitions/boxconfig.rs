use super::cm::{compute_t0_ow, LambdaSet};
use super::plane::PlanePartition;
use super::solid::{leg_index, mu_slots};
use crate::algebra::{LaurentPoly, MonomialFraction};
use std::collections::BTreeSet;
use std::fmt;

/// Scope guard: enumeration outside the no-moduli hypotheses is rejected
/// loudly instead of being approximated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ScopeError(pub String);

impl fmt::Display for ScopeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for ScopeError {}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoxKind {
    Pt0,
    Pt1,
}

/// A PT0 or PT1 box configuration.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoxConfig {
    pub kind: BoxKind,
    /// Finite boxes (for infinite PT1 configurations, empty; the character
    /// carries the full information).
    pub boxes: BTreeSet<[i32; 4]>,
    /// Size of the configuration; `None` when infinite.
    pub size: Option<u64>,
    /// Exact character.
    pub character: MonomialFraction,
}

impl BoxConfig {
    pub fn finite(kind: BoxKind, boxes: BTreeSet<[i32; 4]>) -> Self {
        let mut ch = LaurentPoly::zero();
        for b in &boxes {
            ch.add_assign(&LaurentPoly::monomial_whole([b[0], b[1], b[2], b[3], 0]));
        }
        BoxConfig {
            kind,
            size: Some(boxes.len() as u64),
            character: MonomialFraction::from_poly(ch),
            boxes,
        }
    }
}

/// The PT0 container: the weights where the limit module is 1-dimensional.
#[derive(Clone, Debug, Default)]
pub struct Pt0Region {
    /// Bounded sites: torsion of the intersection scheme plus the node
    /// corrections between two embedded directions.
    pub sites: Vec<[i32; 4]>,
    /// Infinite rays `(base, dir)`: base has `dir`-coordinate -1 and the ray
    /// extends to -infinity along `dir`.
    pub rays: Vec<([i32; 4], usize)>,
}

impl Pt0Region {
    pub fn is_finite(&self) -> bool {
        self.rays.is_empty()
    }

    /// Materializes the sites reachable by configurations of at most
    /// `max_size` boxes.
    pub fn materialize(&self, max_size: usize) -> BTreeSet<[i32; 4]> {
        let mut sites: BTreeSet<[i32; 4]> = self.sites.iter().copied().collect();
        for (base, dir) in &self.rays {
            for k in 0..max_size as i32 {
                let mut w = *base;
                w[*dir] -= k;
                sites.insert(w);
            }
        }
        sites
    }
}

fn lambda_of_mu(mu: &[PlanePartition; 4]) -> LambdaSet {
    let mut lambda = LambdaSet::empty();
    for a in 0..4 {
        for b in (a + 1)..4 {
            lambda.set(a, b, mu[a].leg(leg_index(a, b)).clone());
        }
    }
    lambda
}

fn insert_coord(e: [i32; 3], a: usize, v: i32) -> [i32; 4] {
    let s = mu_slots(a);
    let mut w = [0i32; 4];
    w[a] = v;
    for k in 0..3 {
        w[s[k]] = e[k];
    }
    w
}

/// Computes the PT0 container for the given asymptotics.
///
/// Supported scope: at most two directions carry embedded boxes (the others
/// minimal); a weight of multiplicity two or more in the limit module is a
/// moduli error.
pub fn pt0_region(mu: &[PlanePartition; 4]) -> Result<Pt0Region, ScopeError> {
    let lambda = lambda_of_mu(mu);
    let embedded: Vec<usize> = (0..4).filter(|&a| mu[a].num_extra() > 0).collect();
    if embedded.len() > 2 {
        return Err(ScopeError(
            "PT0 moduli present - out of supported scope".into(),
        ));
    }
    let mut sites: BTreeSet<[i32; 4]> = BTreeSet::new();
    if !lambda.is_empty() {
        let t0 = compute_t0_ow(&lambda).expect("nonempty lambda");
        for (e, c) in t0.sorted_terms() {
            debug_assert!(c == crate::algebra::rat(1));
            sites.insert([e[0] / 2, e[1] / 2, e[2] / 2, e[3] / 2]);
        }
    }
    // node corrections between two embedded directions
    if embedded.len() == 2 {
        let (a, b) = (embedded[0], embedded[1]);
        let lb = leg_index(a, b); // position of b inside mu_a's slots
        let la = leg_index(b, a);
        for ea in mu[a].extra_boxes() {
            for eb in mu[b].extra_boxes() {
                let wa = insert_coord(*ea, a, eb[la]);
                let wb = insert_coord(*eb, b, ea[lb]);
                if wa == wb && !sites.insert(wa) {
                    return Err(ScopeError(
                        "PT0 moduli present - out of supported scope".into(),
                    ));
                }
            }
        }
    }
    let mut rays = Vec::new();
    for &a in &embedded {
        for e in mu[a].extra_boxes() {
            rays.push((insert_coord(*e, a, -1), a));
        }
    }
    Ok(Pt0Region {
        sites: sites.into_iter().collect(),
        rays,
    })
}

fn up_closure(region: &BTreeSet<[i32; 4]>, seed: [i32; 4]) -> BTreeSet<[i32; 4]> {
    let mut out = BTreeSet::new();
    let mut stack = vec![seed];
    out.insert(seed);
    while let Some(w) = stack.pop() {
        for i in 0..4 {
            let mut n = w;
            n[i] += 1;
            if region.contains(&n) && out.insert(n) {
                stack.push(n);
            }
        }
    }
    out
}

/// All subsets of `sites` closed under in-region successors, grouped by
/// size `0..=max_size`.
fn enumerate_upclosed(sites: &BTreeSet<[i32; 4]>, max_size: usize) -> Vec<Vec<BTreeSet<[i32; 4]>>> {
    let mut by_size: Vec<Vec<BTreeSet<[i32; 4]>>> = vec![Vec::new(); max_size + 1];
    let mut seen: BTreeSet<Vec<[i32; 4]>> = BTreeSet::new();
    let empty = BTreeSet::new();
    seen.insert(Vec::new());
    by_size[0].push(empty.clone());
    let mut frontier = vec![empty];
    while let Some(b) = frontier.pop() {
        for w in sites.iter() {
            if b.contains(w) {
                continue;
            }
            let mut nb = b.clone();
            nb.extend(up_closure(sites, *w));
            if nb.len() > max_size {
                continue;
            }
            let key: Vec<[i32; 4]> = nb.iter().copied().collect();
            if seen.insert(key) {
                by_size[nb.len()].push(nb.clone());
                frontier.push(nb);
            }
        }
    }
    by_size
}

/// All finite PT0 box configurations with at most `max_size` boxes, grouped
/// by size.
pub fn pt0_enumerate(
    mu: &[PlanePartition; 4],
    max_size: usize,
) -> Result<Vec<Vec<BoxConfig>>, ScopeError> {
    let region = pt0_region(mu)?;
    let sites = region.materialize(max_size);
    Ok(enumerate_upclosed(&sites, max_size)
        .into_iter()
        .map(|lv| {
            lv.into_iter()
                .map(|b| BoxConfig::finite(BoxKind::Pt0, b))
                .collect()
        })
        .collect())
}

/// The PT1 container for asymptotics supported on the two transverse pairs
/// `(1,2)` and `(3,4)` (the no-moduli pattern).
#[derive(Clone, Debug)]
pub struct Pt1Region {
    pub lambda: LambdaSet,
}

impl Pt1Region {
    pub fn contains(&self, w: [i32; 4]) -> bool {
        let l12 = self.lambda.get(0, 1);
        let l34 = self.lambda.get(2, 3);
        let in12 = l12.contains(w[2], w[3]) && (w[0] < 0 || w[1] < 0);
        let in34 = l34.contains(w[0], w[1]) && (w[2] < 0 || w[3] < 0);
        let overlap = w.iter().all(|&x| x >= 0)
            && l12.contains(w[2], w[3])
            && l34.contains(w[0], w[1]);
        in12 || in34 || overlap
    }

    /// A site with a negative coordinate keeps an escape direction alive
    /// forever, so any configuration containing it is infinite.
    pub fn forces_ray(&self, w: [i32; 4]) -> bool {
        self.contains(w) && w.iter().any(|&x| x < 0)
    }
}

pub fn pt1_region(lambda: &LambdaSet) -> Result<Pt1Region, ScopeError> {
    for ((a, b), p) in lambda.iter() {
        if !p.is_empty() && (a, b) != (0, 1) && (a, b) != (2, 3) {
            return Err(ScopeError(
                "PT1 moduli present - out of supported scope".into(),
            ));
        }
    }
    Ok(Pt1Region {
        lambda: lambda.clone(),
    })
}

/// Chart-level PT1 enumeration of the *finite* box configurations.  Finite
/// configurations cannot touch the ray-forcing sites, so they are exactly
/// the gravity-closed subsets of the bounded overlap region.
pub fn pt1_enumerate(
    lambda: &LambdaSet,
    max_size: usize,
) -> Result<Vec<Vec<BoxConfig>>, ScopeError> {
    let region = pt1_region(lambda)?;
    let ext = lambda.extent();
    let mut overlap: BTreeSet<[i32; 4]> = BTreeSet::new();
    for x0 in 0..ext {
        for x1 in 0..ext {
            for x2 in 0..ext {
                for x3 in 0..ext {
                    let w = [x0, x1, x2, x3];
                    if region.contains(w) && !region.forces_ray(w) {
                        overlap.insert(w);
                    }
                }
            }
        }
    }
    Ok(enumerate_upclosed(&overlap, max_size)
        .into_iter()
        .map(|lv| {
            lv.into_iter()
                .map(|b| BoxConfig::finite(BoxKind::Pt1, b))
                .collect()
        })
        .collect())
}

/// The cokernel character of a nested pair `Z in C in S` on the smooth
/// surface chart `S = Z(x3, x4)`: the divisor is `{x1^a x2^b = 0}` and
/// `zeta` is an invariant finite subscheme of `C`.
///
/// The cokernel is the twisted relative ideal `I_{Z/C}(C)` with character
/// `(char O_C - char O_zeta) * t1^{-a} t2^{-b}`.
pub fn pt1_nested_cokernel(
    divisor: (u32, u32),
    zeta: &BTreeSet<[i32; 2]>,
) -> Result<BoxConfig, ScopeError> {
    let (a, b) = divisor;
    for z in zeta {
        let inside = z[0] < a as i32 || z[1] < b as i32;
        if !(z[0] >= 0 && z[1] >= 0 && inside) {
            return Err(ScopeError(format!("point {:?} not inside the divisor", z)));
        }
    }
    let mut oc = MonomialFraction::from_poly(
        &LaurentPoly::one() - &LaurentPoly::monomial_whole([a as i32, b as i32, 0, 0, 0]),
    );
    oc.div_by_one_minus([1, 0, 0, 0, 0]);
    oc.div_by_one_minus([0, 1, 0, 0, 0]);
    let mut zchar = LaurentPoly::zero();
    for z in zeta {
        zchar.add_assign(&LaurentPoly::monomial_whole([z[0], z[1], 0, 0, 0]));
    }
    let rel = oc.sub(&MonomialFraction::from_poly(zchar));
    let twisted = rel.mul_poly(&LaurentPoly::monomial_whole([
        -(a as i32),
        -(b as i32),
        0,
        0,
        0,
    ]));
    Ok(BoxConfig {
        kind: BoxKind::Pt1,
        boxes: BTreeSet::new(),
        size: None,
        character: twisted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{minimal_plane_partitions, FinitePartition};

    fn two_planes_mu() -> [PlanePartition; 4] {
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::one());
        l.set(2, 3, FinitePartition::one());
        minimal_plane_partitions(&l)
    }

    #[test]
    fn two_planes_region_and_configs() {
        let region = pt0_region(&two_planes_mu()).unwrap();
        assert_eq!(region.sites, vec![[0, 0, 0, 0]]);
        assert!(region.is_finite());
        let levels = pt0_enumerate(&two_planes_mu(), 3).unwrap();
        let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        assert_eq!(counts, vec![1, 1, 0, 0]);
    }

    #[test]
    fn empty_asymptotics_only_trivial() {
        let mu = [
            PlanePartition::empty(),
            PlanePartition::empty(),
            PlanePartition::empty(),
            PlanePartition::empty(),
        ];
        let levels = pt0_enumerate(&mu, 2).unwrap();
        let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        assert_eq!(counts, vec![1, 0, 0]);
    }

    /// Independent subset-filter oracle: enumerate every subset of the
    /// materialized region and keep the gravity-closed ones.
    fn oracle_counts(sites: &BTreeSet<[i32; 4]>, max_size: usize) -> Vec<usize> {
        let sites: Vec<[i32; 4]> = sites.iter().copied().collect();
        let n = sites.len();
        assert!(n <= 16);
        let mut counts = vec![0usize; max_size + 1];
        'subsets: for mask in 0..(1u32 << n) {
            let subset: BTreeSet<[i32; 4]> = (0..n)
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| sites[i])
                .collect();
            if subset.len() > max_size {
                continue;
            }
            // closure condition: successors inside the region of members are
            // members
            for w in &subset {
                for i in 0..4 {
                    let mut s = *w;
                    s[i] += 1;
                    if sites.contains(&s) && !subset.contains(&s) {
                        continue 'subsets;
                    }
                }
            }
            counts[subset.len()] += 1;
        }
        counts
    }

    #[test]
    fn thick_planes_distribution_matches_oracle() {
        // doubled x1x2-plane meeting the 2x2-thickened x3x4-plane: the
        // container is the 2x2x2 box at height zero in x4
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::from_cols(vec![1, 1]));
        l.set(2, 3, FinitePartition::from_cols(vec![2, 2]));
        let mu = minimal_plane_partitions(&l);
        let region = pt0_region(&mu).unwrap();
        assert_eq!(region.sites.len(), 8);
        let levels = pt0_enumerate(&mu, 8).unwrap();
        let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        let sites = region.materialize(8);
        assert_eq!(counts, oracle_counts(&sites, 8));
        // frozen values from the oracle
        assert_eq!(counts, vec![1, 1, 3, 3, 4, 3, 3, 1, 1]);
    }

    #[test]
    fn embedded_leg_gives_infinite_region() {
        // mu_1 = line + one embedded box: one ray in the container
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::one());
        let mut mu = minimal_plane_partitions(&l);
        mu[0].push_box([0, 1, 0]); // embedded box at t3 over the x2-leg
        let region = pt0_region(&mu).unwrap();
        assert!(region.sites.is_empty());
        assert_eq!(region.rays, vec![([-1, 0, 1, 0], 0)]);
        let levels = pt0_enumerate(&mu, 3).unwrap();
        let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        // the ray fills up one box at a time
        assert_eq!(counts, vec![1, 1, 1, 1]);
    }

    #[test]
    fn three_embedded_directions_rejected() {
        let mut mu = [
            PlanePartition::empty(),
            PlanePartition::empty(),
            PlanePartition::empty(),
            PlanePartition::empty(),
        ];
        for d in 0..3 {
            mu[d].push_box([0, 0, 0]);
        }
        assert!(pt0_region(&mu).is_err());
    }

    #[test]
    fn pt1_two_planes_counts() {
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::one());
        l.set(2, 3, FinitePartition::one());
        let levels = pt1_enumerate(&l, 2).unwrap();
        let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        // same two fixed points as PT0 in the pure transverse case
        assert_eq!(counts, vec![1, 1, 0]);
    }

    #[test]
    fn pt1_thickened_plane_has_no_finite_configs() {
        // lambda_12 with two boxes along t3, nothing else: every region site
        // has a negative coordinate, so nonempty finite configurations do
        // not exist
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::from_cols(vec![1, 1]));
        let region = pt1_region(&l).unwrap();
        assert!(region.forces_ray([3, -1, 1, 0]));
        assert!(region.forces_ray([-1, 0, 0, 0]));
        let levels = pt1_enumerate(&l, 3).unwrap();
        let counts: Vec<usize> = levels.iter().map(|l| l.len()).collect();
        assert_eq!(counts, vec![1, 0, 0, 0]);
    }

    #[test]
    fn pt1_rejects_moduli_pattern() {
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::one());
        l.set(0, 2, FinitePartition::one());
        assert!(pt1_region(&l).is_err());
    }

    #[test]
    fn nested_cokernel_on_axis() {
        // C = x2 = 0 (the x1-axis as divisor), Z = origin:
        // Q = t1 t2^{-1} / (1 - t1)
        let zeta: BTreeSet<[i32; 2]> = [[0, 0]].into_iter().collect();
        let q = pt1_nested_cokernel((0, 1), &zeta).unwrap();
        let mut expect = MonomialFraction::from_poly(LaurentPoly::monomial_whole([
            1, -1, 0, 0, 0,
        ]));
        expect.div_by_one_minus([1, 0, 0, 0, 0]);
        assert!(q.character.eq_rational(&expect));
    }

    #[test]
    fn nested_cokernel_trivial() {
        // empty divisor, empty zeta: trivial pair
        let q = pt1_nested_cokernel((0, 0), &BTreeSet::new()).unwrap();
        assert!(q.character.is_zero());
    }
}
