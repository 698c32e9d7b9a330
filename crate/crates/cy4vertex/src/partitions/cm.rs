use super::finite::FinitePartition;
use super::{pair_index, pair_slots, PAIR_ORDER};
use crate::algebra::LaurentPoly;
use std::collections::BTreeSet;
use std::fmt;

/// The six asymptotic cross-sections `lambda_{ab}` of a pure 2-dimensional
/// invariant subscheme, indexed by `PAIR_ORDER`.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct LambdaSet {
    parts: [FinitePartition; 6],
}

impl LambdaSet {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn set(&mut self, a: usize, b: usize, p: FinitePartition) {
        self.parts[pair_index(a, b)] = p;
    }

    pub fn get(&self, a: usize, b: usize) -> &FinitePartition {
        &self.parts[pair_index(a, b)]
    }

    /// Cross-section for an unordered pair given in any order.
    pub fn get_pair_sorted(&self, a: usize, b: usize) -> &FinitePartition {
        if a < b {
            self.get(a, b)
        } else {
            self.get(b, a)
        }
    }

    pub fn is_empty(&self) -> bool {
        self.parts.iter().all(|p| p.is_empty())
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &FinitePartition)> {
        PAIR_ORDER
            .iter()
            .enumerate()
            .map(move |(i, &(a, b))| ((a, b), &self.parts[i]))
    }

    pub fn extent(&self) -> i32 {
        self.parts.iter().map(|p| p.extent()).max().unwrap_or(0).max(1)
    }

    /// Is the site in the pure 2-dimensional subscheme the cross-sections
    /// span?
    pub fn site_in_surface(&self, w: [i32; 4]) -> bool {
        if w.iter().any(|&x| x < 0) {
            return false;
        }
        self.iter().any(|((a, b), lam)| {
            let (c, d) = pair_slots(a, b);
            lam.contains(w[c], w[d])
        })
    }

    /// Membership in one of the two pure surface groups: pairs not involving
    /// the last axis (`group4 = false`) or involving it (`group4 = true`).
    fn site_in_group(&self, w: [i32; 4], group4: bool) -> bool {
        self.iter().any(|((a, b), lam)| {
            if (b == 3) != group4 {
                return false;
            }
            let (c, d) = pair_slots(a, b);
            !lam.is_empty() && lam.contains(w[c], w[d])
        })
    }
}

impl fmt::Debug for LambdaSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let entries: Vec<String> = self
            .iter()
            .filter(|(_, p)| !p.is_empty())
            .map(|((a, b), p)| format!("{}{}:[{}]", a + 1, b + 1, p))
            .collect();
        write!(f, "LambdaSet({})", entries.join(" "))
    }
}

/// Cohen-Macaulay classification of the surface spanned by the
/// cross-sections.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CmCase {
    /// `W` empty: Cohen-Macaulay.
    EmptyIntersection,
    /// `W` 0-dimensional: not Cohen-Macaulay.
    ZeroDimensional,
    /// `W` 1-dimensional with torsion: not Cohen-Macaulay.
    OneDimensionalImpure,
    /// `W` 1-dimensional and pure: Cohen-Macaulay.
    OneDimensionalPure,
}

impl CmCase {
    pub fn is_cohen_macaulay(&self) -> bool {
        matches!(self, CmCase::EmptyIntersection | CmCase::OneDimensionalPure)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NotASurface;

impl fmt::Display for NotASurface {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "not a surface")
    }
}

impl std::error::Error for NotASurface {}

/// Sites of the intersection scheme
/// `W = (Z_{l12} u Z_{l13} u Z_{l23}) cap (Z_{l14} u Z_{l24} u Z_{l34})`
/// inside the window `[0, bound)^4`.
fn w_sites(lambda: &LambdaSet, bound: i32) -> BTreeSet<[i32; 4]> {
    let mut sites = BTreeSet::new();
    for x0 in 0..bound {
        for x1 in 0..bound {
            for x2 in 0..bound {
                for x3 in 0..bound {
                    let w = [x0, x1, x2, x3];
                    if lambda.site_in_group(w, false) && lambda.site_in_group(w, true) {
                        sites.insert(w);
                    }
                }
            }
        }
    }
    sites
}

/// Torsion sites of a monomial module support: the upward reachability set
/// must stay away from the window shell.
fn torsion_sites(sites: &BTreeSet<[i32; 4]>, bound: i32) -> Vec<[i32; 4]> {
    let mut torsion = Vec::new();
    'outer: for &w in sites.iter() {
        // upward closure from w within the support
        let mut stack = vec![w];
        let mut seen = BTreeSet::new();
        seen.insert(w);
        while let Some(p) = stack.pop() {
            if p.iter().any(|&x| x >= bound - 1) {
                continue 'outer; // escapes: generates an infinite submodule
            }
            for i in 0..4 {
                let mut n = p;
                n[i] += 1;
                if sites.contains(&n) && seen.insert(n) {
                    stack.push(n);
                }
            }
        }
        torsion.push(w);
    }
    torsion
}

/// Classifies the Cohen-Macaulay property of the pure surface with the given
/// cross-sections and returns the witness intersection-scheme character.
pub fn cm_classify(lambda: &LambdaSet) -> Result<(CmCase, LaurentPoly), NotASurface> {
    if lambda.is_empty() {
        return Err(NotASurface);
    }
    let bound = lambda.extent() + 2;
    let sites = w_sites(lambda, bound);
    let mut witness = LaurentPoly::zero();
    for w in &sites {
        witness.add_assign(&LaurentPoly::monomial_whole([w[0], w[1], w[2], w[3], 0]));
    }
    if sites.is_empty() {
        return Ok((CmCase::EmptyIntersection, witness));
    }
    let unbounded = sites.iter().any(|w| w.iter().any(|&x| x >= bound - 1));
    if !unbounded {
        return Ok((CmCase::ZeroDimensional, witness));
    }
    let torsion = torsion_sites(&sites, bound);
    if torsion.is_empty() {
        Ok((CmCase::OneDimensionalPure, witness))
    } else {
        Ok((CmCase::OneDimensionalImpure, witness))
    }
}

/// Finite character of the torsion `T_0(O_W)` of the intersection scheme.
pub fn compute_t0_ow(lambda: &LambdaSet) -> Result<LaurentPoly, NotASurface> {
    if lambda.is_empty() {
        return Err(NotASurface);
    }
    let bound = lambda.extent() + 2;
    let sites = w_sites(lambda, bound);
    let torsion = torsion_sites(&sites, bound);
    let mut p = LaurentPoly::zero();
    for w in torsion {
        p.add_assign(&LaurentPoly::monomial_whole([w[0], w[1], w[2], w[3], 0]));
    }
    Ok(p)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_planes() -> LambdaSet {
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::one());
        l.set(2, 3, FinitePartition::one());
        l
    }

    #[test]
    fn classify_two_planes() {
        let (case, _) = cm_classify(&two_planes()).unwrap();
        assert_eq!(case, CmCase::ZeroDimensional);
        assert!(!case.is_cohen_macaulay());
    }

    #[test]
    fn classify_three_planes_pure() {
        // lambda_12 = lambda_13 = lambda_34 = 1: W is a pure line
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::one());
        l.set(0, 2, FinitePartition::one());
        l.set(2, 3, FinitePartition::one());
        let (case, _) = cm_classify(&l).unwrap();
        assert_eq!(case, CmCase::OneDimensionalPure);
        assert!(case.is_cohen_macaulay());
    }

    #[test]
    fn classify_single_plane() {
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::one());
        let (case, _) = cm_classify(&l).unwrap();
        assert_eq!(case, CmCase::EmptyIntersection);
    }

    #[test]
    fn classify_impure() {
        // lambda_12 = 1 + t4, lambda_13 = lambda_34 = 1: embedded point in W
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::from_cols(vec![2]));
        l.set(0, 2, FinitePartition::one());
        l.set(2, 3, FinitePartition::one());
        let (case, _) = cm_classify(&l).unwrap();
        assert_eq!(case, CmCase::OneDimensionalImpure);
    }

    #[test]
    fn torsion_of_two_planes() {
        let t0 = compute_t0_ow(&two_planes()).unwrap();
        assert_eq!(t0, LaurentPoly::one());
    }

    #[test]
    fn torsion_of_pure_case_vanishes() {
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::one());
        l.set(0, 2, FinitePartition::one());
        l.set(2, 3, FinitePartition::one());
        assert!(compute_t0_ow(&l).unwrap().is_zero());
    }

    #[test]
    fn torsion_of_thick_planes() {
        // doubled x1x2-plane (lambda_12 has two boxes along t3) meeting the
        // 2x2-thickened x3x4-plane: torsion of length 8
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::from_cols(vec![1, 1]));
        l.set(2, 3, FinitePartition::from_cols(vec![2, 2]));
        let t0 = compute_t0_ow(&l).unwrap();
        use num_traits::ToPrimitive;
        assert_eq!(t0.rank().to_integer().to_i64().unwrap(), 8);
    }

    #[test]
    fn all_empty_is_error() {
        assert_eq!(cm_classify(&LambdaSet::empty()), Err(NotASurface));
    }
}
