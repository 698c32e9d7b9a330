use super::laurent::Rat;
use super::linform::{LinearFactors, SPoly, SRat};
use super::weights::BracketProduct;
use super::zrat::{EpsSeries, ZRat};
use std::fmt;

/// Default generic cocharacter for the `t -> 1` specialization.
pub const DEFAULT_COCHARACTER: [i64; 4] = [1, 7, -3, -5];

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LimitError {
    /// A denominator bracket vanished on the chosen cocharacter.
    NonGenericCocharacter,
    /// A pole survived at `u = 1`: the signed sum does not specialize.
    SpecializationPole,
}

impl fmt::Display for LimitError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LimitError::NonGenericCocharacter => write!(f, "non-generic cocharacter"),
            LimitError::SpecializationPole => write!(f, "specialization pole"),
        }
    }
}

impl std::error::Error for LimitError {}

/// Expands one factored bracket product along the cocharacter
/// `t_i = u^{a_i}` with `u = (1 + eps)^2`, to `len` coefficients past its
/// leading exponent.
///
/// A bracket `[eta^w y^k]` becomes `(1+eps)^j z^k - (1+eps)^{-j} z^{-k}` with
/// `j = <a, w>` and `z = y^{1/2}`; for `j != 0, k = 0` this vanishes to first
/// order in `eps`, which is the only source of poles and zeros at `u = 1`.
fn bracket_eps_series(
    b: &BracketProduct,
    a: &[i64; 4],
    len: usize,
) -> Result<EpsSeries, LimitError> {
    if b.is_zero() {
        return Ok(EpsSeries {
            lead: i32::MAX / 2,
            coeffs: vec![],
        });
    }
    let mut acc = EpsSeries::constant(ZRat::from_poly(super::zrat::ZPoly::constant(b.scalar.clone())), len);
    for (w, mult) in b.factors.iter() {
        let j: i64 = (0..4).map(|i| a[i] * w[i] as i64).sum();
        let k = w[4];
        if j == 0 && k == 0 {
            // the CY relation was already imposed; this would be [1]
            return Err(LimitError::NonGenericCocharacter);
        }
        let pos = EpsSeries::binomial_pow(j, k, len + 2);
        let neg = EpsSeries::binomial_pow(-j, -k, len + 2);
        let factor = pos.add(&neg.scale(&ZRat::from_poly(super::zrat::ZPoly::constant(
            -Rat::from_integer(1.into()),
        ))))
        .normalized_public();
        if factor.is_empty() {
            // [u^j] with j = 0 handled above; an identically zero factor can
            // only come from truncation, which len + 2 guards against
            return Err(LimitError::NonGenericCocharacter);
        }
        if *mult > 0 {
            for _ in 0..*mult {
                acc = acc.mul(&factor, len);
            }
        } else {
            let inv = factor.inverse(len);
            for _ in 0..(-*mult) {
                acc = acc.mul(&inv, len);
            }
        }
    }
    Ok(acc)
}

impl EpsSeries {
    pub(crate) fn normalized_public(self) -> Self {
        let mut s = self;
        while let Some(first) = s.coeffs.first() {
            if first.is_zero() {
                s.coeffs.remove(0);
                s.lead += 1;
            } else {
                break;
            }
        }
        s
    }
}

/// Expansion of a single bracket product along the cocharacter, exposed for
/// per-term pole analysis (sign searches).  `len` coefficients starting from
/// the true leading exponent.
pub fn bracket_eps(
    b: &BracketProduct,
    a: &[i64; 4],
    len: usize,
) -> Result<EpsSeries, LimitError> {
    Ok(bracket_eps_series(b, a, len)?.normalized_public())
}

/// Specializes a signed sum of bracket products at `t_i -> 1` along the
/// cocharacter `a` (which must satisfy `sum a_i = 0` so the Calabi-Yau
/// relation degenerates onto `u^0 = 1`), keeping `y` symbolic.
///
/// Per-term poles in `u` must cancel in the sum; a surviving pole is an
/// error.  The result is an exact rational function in `y^{1/2}`.
pub fn cocharacter_value(
    terms: &[(Rat, BracketProduct)],
    a: &[i64; 4],
) -> Result<ZRat, LimitError> {
    assert_eq!(a.iter().sum::<i64>(), 0, "cocharacter must be Calabi-Yau");
    // worst-case pole order: count negative-multiplicity pure-t factors
    let mut max_pole = 0i64;
    for (_, b) in terms {
        if b.is_zero() {
            continue;
        }
        let mut pole = 0i64;
        for (w, m) in b.factors.iter() {
            if w[4] == 0 {
                // pure t bracket vanishes to order 1 at u = 1
                pole -= m;
            }
        }
        max_pole = max_pole.max(pole);
    }
    let len = (max_pole.max(0) as usize) + 1;
    let mut total: Option<EpsSeries> = None;
    for (c, b) in terms {
        if b.is_zero() || c == &Rat::from_integer(0.into()) {
            continue;
        }
        let s = bracket_eps_series(&b.scaled(c), a, len + 4)?;
        total = Some(match total {
            None => s,
            Some(t) => t.add(&s),
        });
    }
    let total = match total {
        None => return Ok(ZRat::zero()),
        Some(t) => t.normalized_public(),
    };
    if total.is_empty() || total.lead > 0 {
        return Ok(ZRat::zero());
    }
    if total.lead < 0 {
        return Err(LimitError::SpecializationPole);
    }
    Ok(total.coeffs[0].clone())
}

/// Cohomological limit of one bracket product: every factor `[eta^w y^k]`
/// degenerates to its equivariant weight `sum_i w_i s_i + k m`.
pub fn cohomological_value(b: &BracketProduct) -> LinearFactors {
    if b.is_zero() {
        return LinearFactors {
            scalar: Rat::from_integer(0.into()),
            factors: vec![],
        };
    }
    LinearFactors {
        scalar: b.scalar.clone(),
        factors: b
            .factors
            .iter()
            .map(|(w, m)| (SPoly::linear_form(w), *m))
            .collect(),
    }
}

/// Cohomological limit of a signed sum, collapsed to a single rational
/// function in `s1, s2, s3, m`.
pub fn cohomological_sum(terms: &[(Rat, BracketProduct)]) -> SRat {
    let mut total = SRat::zero();
    for (c, b) in terms {
        let mut lf = cohomological_value(b);
        lf.scalar *= c;
        total = total.add(&lf.to_srat());
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{rat, WeightClass};
    use num_traits::One;

    #[test]
    fn cocharacter_cancellation() {
        // [t1 t2] / [t2 t1] = 1 for any cocharacter
        let c = WeightClass::from_weights([([1, 1, 0, 0, 0], 1), ([1, 1, 0, 0, 0], -1)]);
        let b = c.bracket().unwrap();
        let v = cocharacter_value(&[(Rat::one(), b)], &[1, 2, -1, -2]).unwrap();
        assert_eq!(v, ZRat::one());
    }

    #[test]
    fn cocharacter_y_untouched() {
        // [y] * [t1]/[t1] -> [y] = z - z^{-1}
        let c = WeightClass::from_weights([
            ([0, 0, 0, 0, 1], 1),
            ([1, 0, 0, 0, 0], 1),
            ([1, 0, 0, 0, 0], -1),
        ]);
        let b = c.bracket().unwrap();
        let v = cocharacter_value(&[(Rat::one(), b)], &DEFAULT_COCHARACTER).unwrap();
        let mut expect = super::super::zrat::ZPoly::zero();
        expect.add_term(1, &rat(1));
        expect.add_term(-1, &rat(-1));
        assert_eq!(v.as_poly().unwrap(), expect);
    }

    #[test]
    fn lone_pole_is_detected() {
        // 1/[t1] has a genuine pole at t -> 1
        let c = WeightClass::from_weights([([1, 0, 0, 0, 0], -1)]);
        let b = c.bracket().unwrap();
        assert_eq!(
            cocharacter_value(&[(Rat::one(), b)], &DEFAULT_COCHARACTER),
            Err(LimitError::SpecializationPole)
        );
    }

    #[test]
    fn pair_of_poles_cancels() {
        // [t2]/[t1] - [t2]/[t1] = 0
        let c = WeightClass::from_weights([([0, 1, 0, 0, 0], 1), ([1, 0, 0, 0, 0], -1)]);
        let b = c.bracket().unwrap();
        let v = cocharacter_value(
            &[(Rat::one(), b.clone()), (-Rat::one(), b)],
            &DEFAULT_COCHARACTER,
        )
        .unwrap();
        assert!(v.is_zero());
        // and [t2]/[t1] alone specializes to a2/a1 = 7
        let c = WeightClass::from_weights([([0, 1, 0, 0, 0], 1), ([1, 0, 0, 0, 0], -1)]);
        let v = cocharacter_value(&[(Rat::one(), c.bracket().unwrap())], &DEFAULT_COCHARACTER)
            .unwrap();
        assert_eq!(v, ZRat::from_poly(super::super::zrat::ZPoly::constant(rat(7))));
    }

    #[test]
    fn cohomological_ratio() {
        // [t1]/[t2] -> s1/s2
        let c = WeightClass::from_weights([([1, 0, 0, 0, 0], 1), ([0, 1, 0, 0, 0], -1)]);
        let lf = cohomological_value(&c.bracket().unwrap());
        let r = lf.to_srat();
        let s1 = SPoly::linear_form(&[1, 0, 0, 0, 0]);
        let s2 = SPoly::linear_form(&[0, 1, 0, 0, 0]);
        assert!(r.eq_rational(&SRat { num: s1, den: s2 }));
    }
}
