use super::topvertex::FixedPointTerm;
use crate::algebra::{cohomological_value, SRat, ZPoly};
use std::collections::BTreeMap;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CohoMode {
    /// Replace every bracket by its linear equivariant weight in
    /// `s1, s2, s3, m`.
    Tautological,
    /// Same, after dropping the `y`-carrying blocks (handled upstream by
    /// using plain instead of twisted classes).
    Cohomological,
}

/// Cohomological limit of a vertex series given through its factored
/// fixed-point terms: coefficient-wise substitution of brackets by linear
/// forms.  The input terms must already be bar-normalized (divide the
/// brackets by the leading one before calling).
pub fn cohomological_limit(
    terms: &[(i8, FixedPointTerm)],
    _mode: CohoMode,
) -> BTreeMap<i64, SRat> {
    let mut out: BTreeMap<i64, SRat> = BTreeMap::new();
    for (sign, t) in terms {
        if t.bracket.is_zero() {
            continue;
        }
        let mut lf = cohomological_value(&t.bracket);
        lf.scalar *= crate::algebra::rat(*sign as i64);
        let v = lf.to_srat();
        let entry = out.entry(t.q_order).or_insert_with(SRat::zero);
        *entry = entry.add(&v);
    }
    out
}

/// Checks that `y^{vd/2} f` is palindromic of degree at most `vd`, i.e.
/// that `f` (a Laurent polynomial in `y^{1/2}`) is symmetric under
/// `y -> 1/y` with support inside `[-vd/2, vd/2]`.
pub fn palindromy_check(f: &ZPoly, vd: i64) -> bool {
    if !f.is_palindromic() {
        return false;
    }
    match (f.min_deg(), f.max_deg()) {
        (Some(lo), Some(hi)) => (-(vd as i32)..=vd as i32).contains(&lo) && hi <= vd as i32,
        _ => true,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn palindromy_examples() {
        // y + y^{-1}
        let mut f = ZPoly::zero();
        f.add_term(2, &rat(1));
        f.add_term(-2, &rat(1));
        assert!(palindromy_check(&f, 2));
        // y alone is not palindromic
        let g = ZPoly::monomial(2);
        assert!(!palindromy_check(&g, 2));
        // 7y^3 + 12y^2 + 15y + 16 + 15/y + 12/y^2 + 7/y^3
        let mut h = ZPoly::zero();
        for (k, c) in [(3, 7), (2, 12), (1, 15), (0, 16)] {
            h.add_term(2 * k, &rat(c));
            if k != 0 {
                h.add_term(-2 * k, &rat(c));
            }
        }
        assert!(palindromy_check(&h, 6));
        assert!(!palindromy_check(&h, 2)); // degree bound matters
    }
}
