use crate::algebra::{BracketProduct, MonomialFraction};
use std::collections::BTreeMap;
use std::fmt;

/// Truncated Laurent series in `q` with exact rational-function
/// coefficients.  Coefficients are stored for exponents strictly below
/// `trunc`; arithmetic respects the truncation.
#[derive(Clone, Debug)]
pub struct QSeries {
    pub trunc: i64,
    pub coeffs: BTreeMap<i64, MonomialFraction>,
}

impl QSeries {
    pub fn zero(trunc: i64) -> Self {
        QSeries {
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn one(trunc: i64) -> Self {
        let mut s = Self::zero(trunc);
        s.set(0, MonomialFraction::one());
        s
    }

    pub fn set(&mut self, order: i64, c: MonomialFraction) {
        if order >= self.trunc {
            return;
        }
        if c.is_zero() {
            self.coeffs.remove(&order);
        } else {
            self.coeffs.insert(order, c);
        }
    }

    pub fn coeff(&self, order: i64) -> MonomialFraction {
        self.coeffs.get(&order).cloned().unwrap_or_default()
    }

    pub fn add_to(&mut self, order: i64, c: &MonomialFraction) {
        if order >= self.trunc || c.is_zero() {
            return;
        }
        let cur = self.coeff(order);
        self.set(order, cur.add(c));
    }

    pub fn min_order(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.trunc = self.trunc.min(other.trunc);
        out.coeffs.retain(|k, _| *k < out.trunc);
        for (k, c) in other.coeffs.iter() {
            out.add_to(*k, c);
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        // truncation of a product of truncated series: valid up to
        // min(trunc_a + min_b, trunc_b + min_a)
        let min_a = self.min_order().unwrap_or(0);
        let min_b = other.min_order().unwrap_or(0);
        let trunc = (self.trunc + min_b).min(other.trunc + min_a);
        let mut out = Self::zero(trunc);
        for (i, a) in self.coeffs.iter() {
            for (j, b) in other.coeffs.iter() {
                if i + j >= trunc {
                    continue;
                }
                out.add_to(i + j, &a.mul(b));
            }
        }
        out
    }

    pub fn scale(&self, c: &MonomialFraction) -> Self {
        let mut out = Self::zero(self.trunc);
        for (k, a) in self.coeffs.iter() {
            out.set(*k, a.mul(c));
        }
        out
    }

    /// Divides every coefficient by a factored bracket product.
    pub fn div_bracket(&self, b: &BracketProduct) -> Self {
        let mut inv = b.clone();
        for m in inv.factors.values_mut() {
            *m = -*m;
        }
        inv.scalar = inv.scalar.recip();
        let frac = inv.to_fraction();
        let mut out = Self::zero(self.trunc);
        for (k, a) in self.coeffs.iter() {
            let mut v = a.mul(&frac);
            v.reduce();
            out.set(*k, v);
        }
        out
    }

    /// Normalizes by the leading term: shifts the exponents so the series
    /// starts at `q^0` and divides by the leading bracket.  The leading
    /// coefficient must be a bracket product, handed in by the caller.
    pub fn bar_normalize(&self, leading: &BracketProduct) -> Self {
        let lead = self.min_order().expect("empty series");
        let shifted = QSeries {
            trunc: self.trunc - lead,
            coeffs: self.coeffs.iter().map(|(k, c)| (k - lead, c.clone())).collect(),
        };
        shifted.div_bracket(leading)
    }

    /// Structural equality of all coefficients up to `order` (exclusive),
    /// as rational functions.
    pub fn eq_up_to(&self, other: &Self, order: i64) -> bool {
        assert!(order <= self.trunc && order <= other.trunc);
        let keys: std::collections::BTreeSet<i64> = self
            .coeffs
            .keys()
            .chain(other.coeffs.keys())
            .copied()
            .filter(|k| *k < order)
            .collect();
        keys.iter().all(|k| self.coeff(*k).eq_rational(&other.coeff(*k)))
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0 + O(q^{})", self.trunc);
        }
        for (k, c) in self.coeffs.iter() {
            writeln!(f, "q^{}: {}", k, c)?;
        }
        write!(f, "O(q^{})", self.trunc)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::LaurentPoly;

    #[test]
    fn truncated_product() {
        let mut a = QSeries::one(3);
        a.set(1, MonomialFraction::from_poly(LaurentPoly::var(0)));
        let b = a.clone();
        let p = a.mul(&b);
        assert_eq!(p.trunc, 3);
        assert!(p.coeff(0).eq_rational(&MonomialFraction::one()));
        assert!(!p.coeff(2).is_zero()); // t1^2 q^2
    }
}
