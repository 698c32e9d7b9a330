use super::fraction::MonomialFraction;
use super::laurent::{Exp, LaurentPoly, Rat, N_VARS};
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Integer weight vector `(t1..t4 exponents, y exponent)` of a character.
pub type Wt = [i32; N_VARS];

/// Virtual torus character: finite signed multiset of weight vectors.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct WeightClass {
    weights: BTreeMap<Wt, i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WeightError {
    /// `to_weight_class` saw a non-integer coefficient or half-integer exponent.
    NotACharacter,
    /// A zero weight with negative multiplicity: bracket would divide by zero.
    PoleAtFixedWeight,
}

impl fmt::Display for WeightError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightError::NotACharacter => write!(f, "not an integral character"),
            WeightError::PoleAtFixedWeight => write!(f, "pole at T-fixed weight"),
        }
    }
}

impl std::error::Error for WeightError {}

/// Outcome of splitting a self-dual class into a half.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SqrtSplit {
    /// Canonical half `D` with `c = D + conjugate(D)`.
    Half(WeightClass),
    /// The class contains the zero weight with positive even multiplicity:
    /// the square-root Euler class vanishes.
    Zero,
    /// Not self-dual (or zero weight with odd/negative multiplicity).
    Degenerate,
}

impl WeightClass {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn from_weights(ws: impl IntoIterator<Item = (Wt, i64)>) -> Self {
        let mut c = Self::empty();
        for (w, m) in ws {
            c.add(w, m);
        }
        c
    }

    pub fn add(&mut self, w: Wt, mult: i64) {
        if mult == 0 {
            return;
        }
        let e = self.weights.entry(w).or_insert(0);
        *e += mult;
        if *e == 0 {
            self.weights.remove(&w);
        }
    }

    pub fn add_class(&mut self, other: &Self) {
        for (w, m) in other.weights.iter() {
            self.add(*w, *m);
        }
    }

    pub fn sub_class(&mut self, other: &Self) {
        for (w, m) in other.weights.iter() {
            self.add(*w, -*m);
        }
    }

    pub fn negate(&self) -> Self {
        Self {
            weights: self.weights.iter().map(|(w, m)| (*w, -m)).collect(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Wt, &i64)> {
        self.weights.iter()
    }

    pub fn multiplicity(&self, w: &Wt) -> i64 {
        self.weights.get(w).copied().unwrap_or(0)
    }

    /// Rank: sum of multiplicities.
    pub fn rank(&self) -> i64 {
        self.weights.values().sum()
    }

    /// Conjugate (dual): negates every weight vector.
    pub fn conjugate(&self) -> Self {
        let mut c = Self::empty();
        for (w, m) in self.weights.iter() {
            let mut v = *w;
            for x in v.iter_mut() {
                *x = -*x;
            }
            c.add(v, *m);
        }
        c
    }

    /// Reads an integral Laurent polynomial as a virtual character.
    pub fn from_poly(p: &LaurentPoly) -> Result<Self, WeightError> {
        let mut c = Self::empty();
        for (e, coeff) in p.iter() {
            if !coeff.is_integer() {
                return Err(WeightError::NotACharacter);
            }
            let mut w = [0i32; N_VARS];
            for i in 0..N_VARS {
                if e[i] % 2 != 0 {
                    return Err(WeightError::NotACharacter);
                }
                w[i] = e[i] / 2;
            }
            let m: i64 = num_traits::ToPrimitive::to_i64(&coeff.to_integer())
                .ok_or(WeightError::NotACharacter)?;
            c.add(w, m);
        }
        Ok(c)
    }

    pub fn to_poly(&self) -> LaurentPoly {
        let mut p = LaurentPoly::zero();
        for (w, m) in self.weights.iter() {
            let mut e: Exp = [0; N_VARS];
            for i in 0..N_VARS {
                e[i] = w[i] * 2;
            }
            p.add_term(e, &super::rat(*m));
        }
        p
    }

    /// Reduces each weight's `t`-part modulo the Calabi-Yau relation
    /// `t1 t2 t3 t4 = 1`: subtracts the minimum `t`-exponent so the canonical
    /// representative has minimum 0.  Colliding weights merge.
    pub fn cy_normalize(&self) -> Self {
        let mut c = Self::empty();
        for (w, m) in self.weights.iter() {
            let mut v = *w;
            let min = v[..4].iter().min().copied().unwrap();
            for x in v[..4].iter_mut() {
                *x -= min;
            }
            c.add(v, *m);
        }
        c
    }

    /// Eliminates `t4` via `t4 = (t1 t2 t3)^{-1}`.
    fn eliminate_t4(w: &Wt) -> Wt {
        [w[0] - w[3], w[1] - w[3], w[2] - w[3], 0, w[4]]
    }

    /// Is the weight trivial for the Calabi-Yau torus (t-part on the diagonal
    /// and y-part zero)?
    fn is_cy_trivial(w: &Wt) -> bool {
        let e = Self::eliminate_t4(w);
        e == [0; N_VARS]
    }

    /// The symmetrized K-theoretic Euler class `prod_w [eta^w]^{mult}` as a
    /// factored bracket product, with `t4` eliminated through the Calabi-Yau
    /// relation.  A zero weight with positive multiplicity gives 0; with
    /// negative multiplicity it is a pole.
    pub fn bracket(&self) -> Result<BracketProduct, WeightError> {
        let mut factors: BTreeMap<Wt, i64> = BTreeMap::new();
        let mut flips: i64 = 0;
        let mut zero = false;
        for (w, m) in self.weights.iter() {
            if Self::is_cy_trivial(w) {
                if *m < 0 {
                    return Err(WeightError::PoleAtFixedWeight);
                }
                zero = true;
                continue;
            }
            let mut e = Self::eliminate_t4(w);
            // canonical orientation: lexicographically positive weight, each
            // flip contributing [x^{-1}] = -[x]
            if e < [0; N_VARS] {
                for x in e.iter_mut() {
                    *x = -*x;
                }
                flips += m;
            }
            *factors.entry(e).or_insert(0) += m;
        }
        factors.retain(|_, m| *m != 0);
        Ok(BracketProduct {
            zero,
            scalar: if flips % 2 == 0 { Rat::one() } else { -Rat::one() },
            factors,
        })
    }

    /// Splits a self-dual class (after CY normalization) into a canonical
    /// half: for each `+/-` pair the lexicographically positive
    /// representative is kept.
    pub fn sqrt_split(&self) -> SqrtSplit {
        let c = self.cy_normalize();
        // pair weights with their CY-normalized negatives
        let mut half = WeightClass::empty();
        let mut seen: BTreeMap<Wt, i64> = BTreeMap::new();
        for (w, m) in c.weights.iter() {
            if Self::is_cy_trivial(w) {
                if *m < 0 || *m % 2 != 0 {
                    return SqrtSplit::Degenerate;
                }
                return SqrtSplit::Zero;
            }
            seen.insert(Self::eliminate_t4(w), *m);
        }
        for (w, m) in seen.iter() {
            let mut neg = *w;
            for x in neg.iter_mut() {
                *x = -*x;
            }
            match seen.get(&neg) {
                Some(mn) if *mn == *m => {}
                _ => return SqrtSplit::Degenerate,
            }
            // keep the lexicographically positive representative
            if *w > neg {
                half.add(*w, *m);
            }
        }
        SqrtSplit::Half(half)
    }

    /// Specializes the `y`-weight to the `t4`-weight (the dimensional
    /// reduction `y = t4`).
    pub fn specialize_y_to_t4(&self) -> Self {
        let mut c = Self::empty();
        for (w, m) in self.weights.iter() {
            c.add([w[0], w[1], w[2], w[3] + w[4], 0], *m);
        }
        c
    }

    /// Restriction to the weights with the given `y`-exponent, with the `y`
    /// component dropped.
    pub fn y_graded_part(&self, k: i32) -> Self {
        let mut c = Self::empty();
        for (w, m) in self.weights.iter() {
            if w[4] == k {
                c.add([w[0], w[1], w[2], w[3], 0], *m);
            }
        }
        c
    }

    /// Largest positive multiplicity of a CY-trivial weight (0 when none):
    /// detects violations of the no-positive-fixed-term lemma.
    pub fn fixed_part_multiplicity(&self) -> i64 {
        self.weights
            .iter()
            .filter(|(w, _)| Self::is_cy_trivial(w))
            .map(|(_, m)| *m)
            .sum()
    }

    pub fn sorted_weights(&self) -> Vec<(Wt, i64)> {
        self.weights.iter().map(|(w, m)| (*w, *m)).collect()
    }
}

impl fmt::Display for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_poly())
    }
}

impl fmt::Debug for WeightClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Factored bracket value `scalar * prod_w [eta^w]^{mult}` with
/// `[x] = x^{1/2} - x^{-1/2}`.  The `zero` flag marks a vanished `[1]` factor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketProduct {
    pub zero: bool,
    pub scalar: Rat,
    /// weight (t4 already eliminated) -> signed multiplicity
    pub factors: BTreeMap<Wt, i64>,
}

impl BracketProduct {
    pub fn one() -> Self {
        BracketProduct {
            zero: false,
            scalar: Rat::one(),
            factors: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.zero || self.scalar.is_zero()
    }

    pub fn scaled(&self, c: &Rat) -> Self {
        let mut out = self.clone();
        out.scalar *= c;
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.zero |= other.zero;
        out.scalar *= &other.scalar;
        for (w, m) in other.factors.iter() {
            let e = out.factors.entry(*w).or_insert(0);
            *e += m;
            if *e == 0 {
                out.factors.remove(w);
            }
        }
        out
    }

    /// Expands to an exact rational function `num / prod (1 - eta^w)`.
    ///
    /// `[eta^w] = eta^{w/2} - eta^{-w/2}` goes to the numerator for positive
    /// multiplicity; `[eta^w]^{-1} = -eta^{w/2} / (1 - eta^w)` for negative.
    pub fn to_fraction(&self) -> MonomialFraction {
        if self.is_zero() {
            return MonomialFraction::zero();
        }
        let mut out = MonomialFraction::from_poly(LaurentPoly::constant(self.scalar.clone()));
        for (w, m) in self.factors.iter() {
            let mut half: Exp = [0; N_VARS];
            let mut full: Exp = [0; N_VARS];
            for i in 0..N_VARS {
                half[i] = w[i];
                full[i] = 2 * w[i];
            }
            if *m > 0 {
                let mut bracket = LaurentPoly::monomial(half);
                bracket.add_term(super::laurent::exp_neg(half), &-Rat::one());
                for _ in 0..*m {
                    out = out.mul_poly(&bracket);
                }
            } else {
                let k = (-*m) as u32;
                let sign = if k % 2 == 1 { -Rat::one() } else { Rat::one() };
                let mut shift: Exp = [0; N_VARS];
                for i in 0..N_VARS {
                    shift[i] = half[i] * k as i32;
                }
                out.num = out.num.mul_monomial(shift, &sign);
                out.div_by_binomial(full, k);
            }
        }
        out
    }

    /// Exact evaluation at squares; `None` on a pole.
    pub fn eval_squares(&self, vals: &[Rat; N_VARS]) -> Option<Rat> {
        if self.is_zero() {
            return Some(Rat::zero());
        }
        let mut total = self.scalar.clone();
        for (w, m) in self.factors.iter() {
            let mut v = Rat::one();
            for i in 0..N_VARS {
                v *= super::laurent::pow_rat(&vals[i], w[i]);
            }
            let b = v.clone() - v.recip();
            if b.is_zero() {
                if *m > 0 {
                    return Some(Rat::zero());
                }
                return None;
            }
            let p = b.pow(m.unsigned_abs().try_into().unwrap());
            if *m > 0 {
                total *= p;
            } else {
                total /= p;
            }
        }
        Some(total)
    }

    /// Number of bracket factors counted with signed multiplicity.
    pub fn degree(&self) -> i64 {
        self.factors.values().sum()
    }

    /// Multiplicative inverse (poles and zeros swap).
    pub fn inverse(&self) -> Self {
        assert!(!self.is_zero(), "inverting a vanished bracket");
        BracketProduct {
            zero: false,
            scalar: self.scalar.recip(),
            factors: self.factors.iter().map(|(w, m)| (*w, -m)).collect(),
        }
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inverse())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn read_character() {
        // t1 t2 - t3^{-1}
        let mut p = LaurentPoly::monomial([2, 2, 0, 0, 0]);
        p.add_term([0, 0, -2, 0, 0], &-Rat::one());
        let c = WeightClass::from_poly(&p).unwrap();
        assert_eq!(c.multiplicity(&[1, 1, 0, 0, 0]), 1);
        assert_eq!(c.multiplicity(&[0, 0, -1, 0, 0]), -1);
        assert_eq!(c.rank(), 0);
    }

    #[test]
    fn read_character_rejects_halves() {
        let p = LaurentPoly::monomial([1, 0, 0, 0, 0]);
        assert_eq!(
            WeightClass::from_poly(&p),
            Err(WeightError::NotACharacter)
        );
    }

    #[test]
    fn cy_normalize_examples() {
        let c = WeightClass::from_weights([([1, 1, 1, 1, 0], 1)]);
        assert_eq!(
            c.cy_normalize(),
            WeightClass::from_weights([([0, 0, 0, 0, 0], 1)])
        );
        let c = WeightClass::from_weights([([2, 1, 1, 1, 0], 1)]);
        assert_eq!(
            c.cy_normalize(),
            WeightClass::from_weights([([1, 0, 0, 0, 0], 1)])
        );
        let c = WeightClass::from_weights([([1, 0, 0, 0, 0], 1), ([0, -1, -1, -1, 0], -1)]);
        assert!(c.cy_normalize().is_empty());
    }

    #[test]
    fn cy_normalize_idempotent_and_additive() {
        let c = WeightClass::from_weights([([3, 1, 0, 2, 1], 2), ([-1, -1, -1, -1, 0], 5)]);
        let n = c.cy_normalize();
        assert_eq!(n.cy_normalize(), n);
    }

    #[test]
    fn bracket_single_weight() {
        // [t1 t2] = t1^{1/2} t2^{1/2} - t1^{-1/2} t2^{-1/2}
        let c = WeightClass::from_weights([([1, 1, 0, 0, 0], 1)]);
        let b = c.bracket().unwrap().to_fraction();
        let mut expect = LaurentPoly::monomial([1, 1, 0, 0, 0]);
        expect.add_term([-1, -1, 0, 0, 0], &-Rat::one());
        assert!(b.eq_rational(&MonomialFraction::from_poly(expect)));
    }

    #[test]
    fn bracket_empty_is_one() {
        let b = WeightClass::empty().bracket().unwrap();
        assert!(b.to_fraction().eq_rational(&MonomialFraction::one()));
    }

    #[test]
    fn bracket_zero_weight() {
        let c = WeightClass::from_weights([([0, 0, 0, 0, 0], 1)]);
        assert!(c.bracket().unwrap().is_zero());
        let c = WeightClass::from_weights([([0, 0, 0, 0, 0], -1)]);
        assert_eq!(c.bracket(), Err(WeightError::PoleAtFixedWeight));
    }

    #[test]
    fn bracket_conjugation_sign() {
        // [conj c] = (-1)^{rank} [c]
        let c = WeightClass::from_weights([([1, 0, 0, 0, 0], 1), ([0, 1, 2, 0, 1], 1)]);
        let b = c.bracket().unwrap().to_fraction();
        let bc = c.conjugate().bracket().unwrap().to_fraction();
        assert!(bc.eq_rational(&b)); // rank 2: even
        let c1 = WeightClass::from_weights([([1, 2, 0, 0, 0], 1)]);
        let b1 = c1.bracket().unwrap().to_fraction();
        let b1c = c1.conjugate().bracket().unwrap().to_fraction();
        assert!(b1c.eq_rational(&b1.neg()));
    }

    #[test]
    fn sqrt_split_pair() {
        let c = WeightClass::from_weights([([1, 0, 0, 0, 0], 1), ([-1, 0, 0, 0, 0], 1)]);
        match c.sqrt_split() {
            SqrtSplit::Half(h) => {
                assert_eq!(h, WeightClass::from_weights([([1, 0, 0, 0, 0], 1)]));
            }
            other => panic!("expected half, got {:?}", other),
        }
    }

    #[test]
    fn sqrt_split_zero_and_degenerate() {
        let c = WeightClass::from_weights([([0, 0, 0, 0, 0], 2)]);
        assert_eq!(c.sqrt_split(), SqrtSplit::Zero);
        let c = WeightClass::from_weights([([1, 0, 0, 0, 0], 1)]);
        assert_eq!(c.sqrt_split(), SqrtSplit::Degenerate);
    }

    #[test]
    fn sqrt_square_identity() {
        // bracket(half)^2 = (-1)^{rank/2} bracket(c)
        let c = WeightClass::from_weights([
            ([1, 2, 0, 0, 0], 1),
            ([-1, -2, 0, 0, 0], 1),
            ([0, 1, 0, 0, 1], 2),
            ([0, -1, 0, 0, -1], 2),
        ]);
        let half = match c.sqrt_split() {
            SqrtSplit::Half(h) => h,
            _ => panic!(),
        };
        let hb = half.bracket().unwrap().to_fraction();
        let cb = c.cy_normalize().bracket().unwrap().to_fraction();
        let lhs = hb.mul(&hb);
        let sign = if (c.rank() / 2) % 2 == 0 {
            cb
        } else {
            cb.neg()
        };
        assert!(lhs.eq_rational(&sign));
    }
}
