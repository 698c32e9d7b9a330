use super::vertex::{vertex_term, VertexInput};
use super::{Flavor, TermError};
use crate::algebra::ZPoly;
use crate::partitions::{pair_index, PAIR_ORDER};
use num_traits::ToPrimitive;

/// Rank identity of the twisted vertex term, computed two ways: from the
/// assembled class with `t = 1`, and from the closed formula
/// `(W + dual W - y^{-1} W - y dual W - sum W_ij dual W_kl)` at `t = 1`,
/// which is independent of the `W_i`.
///
/// Returns the common `y`-graded rank polynomial, or an error on mismatch.
pub fn rank_check(input: &VertexInput) -> Result<ZPoly, TermError> {
    let vt = vertex_term(input, Flavor::Tilde)?;
    let mut assembled = ZPoly::zero();
    for (w, m) in vt.iter() {
        assembled.add_term(2 * w[4], &crate::algebra::rat(*m));
    }
    let rw = input.decomp.rank();
    let mut formula = ZPoly::zero();
    formula.add_term(0, &crate::algebra::rat(2 * rw));
    formula.add_term(2, &crate::algebra::rat(-rw));
    formula.add_term(-2, &crate::algebra::rat(-rw));
    for &(i, j) in PAIR_ORDER.iter() {
        let (k, l) = crate::partitions::pair_slots(i, j);
        let (lo, hi) = if k < l { (k, l) } else { (l, k) };
        let rij = input.decomp.wij[pair_index(i, j)]
            .rank()
            .to_integer()
            .to_i64()
            .unwrap();
        let rkl = input.decomp.wij[pair_index(lo, hi)]
            .rank()
            .to_integer()
            .to_i64()
            .unwrap();
        // ordered pairs (ij), (kl): each unordered complementary pair occurs
        // twice in the formula
        formula.add_term(0, &crate::algebra::rat(-rij * rkl));
    }
    if assembled != formula {
        return Err(TermError::RedistributionFailed("rank identity"));
    }
    Ok(assembled)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::SolidPartition;

    #[test]
    fn empty_rank() {
        let p = rank_check(&VertexInput::new(SolidPartition::empty().decompose())).unwrap();
        assert!(p.is_zero());
    }

    #[test]
    fn point_rank_both_ways() {
        // rank polynomial 2 - y - y^{-1}
        let p = rank_check(&VertexInput::new(SolidPartition::point().decompose())).unwrap();
        let mut expect = ZPoly::zero();
        expect.add_term(0, &crate::algebra::rat(2));
        expect.add_term(2, &crate::algebra::rat(-1));
        expect.add_term(-2, &crate::algebra::rat(-1));
        assert_eq!(p, expect);
    }

    #[test]
    fn embedded_box_keeps_tilde_rank_shape() {
        // adding an embedded box changes W but the identity still holds
        let mut pi = SolidPartition::point();
        pi.push_box([1, 0, 0, 0]);
        rank_check(&VertexInput::new(pi.decompose())).unwrap();
    }
}
