use super::qseries::QSeries;
use crate::algebra::{rat, BracketProduct, LaurentPoly, MonomialFraction, Rat, WeightClass};
use num_traits::One;
use std::collections::BTreeMap;

/// The closed reference series for rank-one point counting on the affine
/// chart: the plethystic exponential
/// `Exp( [t1t2][t1t3][t2t3][y] / ([t1][t2][t3][t4][y^{1/2}q][y^{1/2}q^{-1}]) )`
/// expanded through `q^order` (inclusive lower orders, truncation
/// exclusive at `order + 1`).
pub fn magnificent_four(order: i64) -> QSeries {
    let trunc = order + 1;
    // q-dependent factor: 1/([y^{1/2} q][y^{1/2} q^{-1}]) as a q-series.
    // With c = y^{1/2} + y^{-1/2} the product is -(q + q^{-1} - c), and the
    // series h = sum h_k q^k solves h_1 = -1, h_{k+1} = c h_k - h_{k-1}.
    let exponent_sum = {
        let mut total = QSeries::zero(trunc);
        for n in 1..=order.max(0) {
            let g = stretched_prefactor(n as i32);
            let h = h_series(trunc, n);
            // f_n(q) = g(t^n, y^n) * h(q^n; y^n), weighted by 1/n
            let scale = Rat::new(1.into(), n.into());
            for (k, coeff) in h.iter() {
                if *k >= trunc {
                    continue;
                }
                let mut v = g.to_fraction().mul_poly(coeff);
                v = v.scale(&scale);
                v.reduce();
                total.add_to(*k, &v);
            }
        }
        total
    };
    // exp of the exponent: E_0 = 1, j E_j = sum_{k=1..j} k S_k E_{j-k}
    let mut exp = QSeries::one(trunc);
    for j in 1..trunc {
        let mut acc = MonomialFraction::zero();
        for k in 1..=j {
            let s = exponent_sum.coeff(k);
            if s.is_zero() {
                continue;
            }
            let e = exp.coeff(j - k);
            if e.is_zero() {
                continue;
            }
            acc = acc.add(&s.mul(&e).scale(&rat(k)));
        }
        let mut v = acc.scale(&Rat::new(1.into(), j.into()));
        v.reduce();
        exp.set(j, v);
    }
    exp
}

/// `[t1t2][t1t3][t2t3][y] / ([t1][t2][t3][t4])` with all weights stretched
/// by `n` (the plethysm substitution `t -> t^n, y -> y^n`).
fn stretched_prefactor(n: i32) -> BracketProduct {
    let mut c = WeightClass::empty();
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let mut w = [0i32; 5];
        w[i] = n;
        w[j] = n;
        c.add(w, 1);
    }
    c.add([0, 0, 0, 0, n], 1);
    for i in 0..4 {
        let mut w = [0i32; 5];
        w[i] = n;
        c.add(w, -1);
    }
    c.bracket().expect("no fixed weights in the prefactor")
}

/// Coefficients of `1/([y^{n/2} q^n][y^{n/2} q^{-n}])` as a series in `q`
/// (only exponents that are multiples of `n` appear); coefficients are
/// Laurent polynomials in `y^{n/2}`.
fn h_series(trunc: i64, n: i64) -> BTreeMap<i64, LaurentPoly> {
    let c = {
        // y^{n/2} + y^{-n/2}
        let mut p = LaurentPoly::monomial([0, 0, 0, 0, n as i32]);
        p.add_term([0, 0, 0, 0, -(n as i32)], &Rat::one());
        p
    };
    let mut out = BTreeMap::new();
    let mut prev = LaurentPoly::zero(); // h_0
    let mut cur = LaurentPoly::constant(-Rat::one()); // h_1
    let mut k = 1i64;
    while k * n < trunc {
        if !cur.is_zero() {
            out.insert(k * n, cur.clone());
        }
        let next = &(&c * &cur) - &prev;
        prev = cur;
        cur = next;
        k += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_zero_is_one() {
        let s = magnificent_four(0);
        assert!(s.coeff(0).eq_rational(&MonomialFraction::one()));
        assert!(s.coeff(1).is_zero());
    }

    #[test]
    fn first_coefficient_is_minus_prefactor() {
        let s = magnificent_four(1);
        let expect = stretched_prefactor(1)
            .scaled(&-Rat::one())
            .to_fraction();
        assert!(s.coeff(1).eq_rational(&expect));
    }

    #[test]
    fn geometric_plethysm_of_single_monomial() {
        // Exp(a q) = 1 + a q + a^2 q^2 for a single monomial a = t1:
        // exercised through the same exp/plethysm recursion
        let trunc = 3;
        let mut sum = QSeries::zero(trunc);
        for n in 1..trunc {
            // f(p; q) = t1 q => f(p^n; q^n) = t1^n q^n, weight 1/n
            let mono = MonomialFraction::from_poly(LaurentPoly::monomial([2 * n as i32, 0, 0, 0, 0]))
                .scale(&Rat::new(1.into(), n.into()));
            sum.add_to(n, &mono);
        }
        let mut exp = QSeries::one(trunc);
        for j in 1..trunc {
            let mut acc = MonomialFraction::zero();
            for k in 1..=j {
                let s = sum.coeff(k);
                if s.is_zero() {
                    continue;
                }
                acc = acc.add(&s.mul(&exp.coeff(j - k)).scale(&rat(k)));
            }
            exp.set(j, acc.scale(&Rat::new(1.into(), j.into())));
        }
        assert!(exp
            .coeff(1)
            .eq_rational(&MonomialFraction::from_poly(LaurentPoly::var(0))));
        assert!(exp.coeff(2).eq_rational(&MonomialFraction::from_poly(
            LaurentPoly::monomial([4, 0, 0, 0, 0])
        )));
    }
}
