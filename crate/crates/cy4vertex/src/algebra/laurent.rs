use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

pub type Rat = num_rational::BigRational;

/// Number of ambient variables: `t1, t2, t3, t4, y`.
pub const N_VARS: usize = 5;

/// Exponent vector in the doubled lattice.  Entry `i` is twice the exponent
/// of the `i`-th variable, so `t1^{1/2}` is `[1,0,0,0,0]` and `t1` is
/// `[2,0,0,0,0]`.
pub type Exp = [i32; N_VARS];

pub(crate) const ZERO_EXP: Exp = [0; N_VARS];

// Exponents are packed into a u64: four 13-bit lanes for the t variables
// and one 12-bit lane for y, each biased to the middle of its range.
// Lane-wise addition of two stored keys cannot cross lanes because stored
// values are checked against STORE_MAX on every insertion and
// 2 * STORE_MAX + BIAS stays inside a lane.
const SHIFT: [u32; N_VARS] = [0, 13, 26, 39, 52];
const WIDTH: [u32; N_VARS] = [13, 13, 13, 13, 12];
const STORE_MAX: i64 = 2000;

#[inline]
fn lane_bias(i: usize) -> i64 {
    1 << (WIDTH[i] - 1)
}

#[inline]
fn pack(e: Exp) -> u64 {
    let mut k = 0u64;
    for i in 0..N_VARS {
        let v = e[i] as i64;
        assert!(v.abs() <= STORE_MAX, "exponent {} out of packing range", v);
        k |= ((v + lane_bias(i)) as u64) << SHIFT[i];
    }
    k
}

#[inline]
fn unpack(k: u64) -> Exp {
    let mut e = ZERO_EXP;
    for i in 0..N_VARS {
        let lane = (k >> SHIFT[i]) & ((1 << WIDTH[i]) - 1);
        e[i] = (lane as i64 - lane_bias(i)) as i32;
    }
    e
}

const PACKED_ZERO: u64 = {
    let mut k = 0u64;
    let mut i = 0;
    while i < N_VARS {
        k |= (1u64 << (WIDTH[i] - 1)) << SHIFT[i];
        i += 1;
    }
    k
};

#[inline]
fn packed_add(a: u64, b: u64) -> u64 {
    // per-lane arithmetic is exact modulo 2^64 as long as the resulting
    // lanes stay in range, which `check_key` enforces on every store
    a.wrapping_add(b).wrapping_sub(PACKED_ZERO)
}

#[inline]
fn packed_neg(a: u64) -> u64 {
    PACKED_ZERO.wrapping_mul(2).wrapping_sub(a)
}

#[inline]
fn check_key(k: u64) -> u64 {
    for i in 0..N_VARS {
        let lane = ((k >> SHIFT[i]) & ((1 << WIDTH[i]) - 1)) as i64 - lane_bias(i);
        assert!(lane.abs() <= STORE_MAX, "exponent overflow in lane {}", i);
    }
    k
}

pub(crate) fn exp_add(a: Exp, b: Exp) -> Exp {
    let mut r = a;
    for i in 0..N_VARS {
        r[i] += b[i];
    }
    r
}

pub(crate) fn exp_neg(a: Exp) -> Exp {
    let mut r = a;
    for x in r.iter_mut() {
        *x = -*x;
    }
    r
}

/// Coefficient with a small-integer fast path; promoted to a big rational
/// only when needed.
#[derive(Clone, PartialEq, Eq)]
pub(crate) enum Coef {
    I(i64),
    R(Box<Rat>),
}

impl Coef {
    #[inline]
    fn is_zero(&self) -> bool {
        match self {
            Coef::I(v) => *v == 0,
            Coef::R(r) => r.is_zero(),
        }
    }

    fn from_rat(r: &Rat) -> Self {
        if r.denom().is_one() {
            if let Some(v) = r.numer().to_i64() {
                return Coef::I(v);
            }
        }
        Coef::R(Box::new(r.clone()))
    }

    fn to_rat(&self) -> Rat {
        match self {
            Coef::I(v) => Rat::from_integer((*v).into()),
            Coef::R(r) => (**r).clone(),
        }
    }

    fn demote(self) -> Self {
        if let Coef::R(ref r) = self {
            if r.denom().is_one() {
                if let Some(v) = r.numer().to_i64() {
                    return Coef::I(v);
                }
            }
        }
        self
    }

    #[inline]
    fn add_ref(&self, other: &Coef) -> Coef {
        match (self, other) {
            (Coef::I(a), Coef::I(b)) => match a.checked_add(*b) {
                Some(v) => Coef::I(v),
                None => Coef::R(Box::new(self.to_rat() + other.to_rat())),
            },
            _ => Coef::R(Box::new(self.to_rat() + other.to_rat())).demote(),
        }
    }

    #[inline]
    fn mul_ref(&self, other: &Coef) -> Coef {
        match (self, other) {
            (Coef::I(a), Coef::I(b)) => {
                let wide = *a as i128 * *b as i128;
                match i64::try_from(wide) {
                    Ok(v) => Coef::I(v),
                    Err(_) => Coef::R(Box::new(self.to_rat() * other.to_rat())),
                }
            }
            _ => Coef::R(Box::new(self.to_rat() * other.to_rat())).demote(),
        }
    }

    #[inline]
    fn neg_ref(&self) -> Coef {
        match self {
            Coef::I(v) => Coef::I(-v),
            Coef::R(r) => Coef::R(Box::new(-(**r).clone())),
        }
    }
}

/// Sparse exact Laurent polynomial in `t1..t4, y` over big rationals (with
/// an internal small-integer fast path).
///
/// Invariants: no zero coefficients are stored, so equality is structural.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct LaurentPoly {
    terms: FxHashMap<u64, Coef>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(ZERO_EXP)
    }

    /// A single monomial with coefficient 1 and the given doubled exponent.
    pub fn monomial(e: Exp) -> Self {
        let mut terms = FxHashMap::default();
        terms.insert(pack(e), Coef::I(1));
        Self { terms }
    }

    /// Monomial in whole (undoubled) exponents.
    pub fn monomial_whole(e: [i32; N_VARS]) -> Self {
        let mut d = e;
        for x in d.iter_mut() {
            *x *= 2;
        }
        Self::monomial(d)
    }

    pub fn term(c: Rat, e: Exp) -> Self {
        let mut terms = FxHashMap::default();
        if !c.is_zero() {
            terms.insert(pack(e), Coef::from_rat(&c));
        }
        Self { terms }
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(c, ZERO_EXP)
    }

    pub fn from_i64(c: i64) -> Self {
        let mut terms = FxHashMap::default();
        if c != 0 {
            terms.insert(pack(ZERO_EXP), Coef::I(c));
        }
        Self { terms }
    }

    /// The variable `t_i` (0-based index; index 4 is `y`).
    pub fn var(i: usize) -> Self {
        let mut e = ZERO_EXP;
        e[i] = 2;
        Self::monomial(e)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Exp, Rat)> + '_ {
        self.terms.iter().map(|(k, c)| (unpack(*k), c.to_rat()))
    }

    pub fn coeff(&self, e: &Exp) -> Rat {
        self.terms
            .get(&pack(*e))
            .map(|c| c.to_rat())
            .unwrap_or_else(Rat::zero)
    }

    pub fn add_term(&mut self, e: Exp, c: &Rat) {
        if c.is_zero() {
            return;
        }
        self.add_coef_packed(pack(e), &Coef::from_rat(c));
    }

    #[inline]
    fn add_coef_packed(&mut self, k: u64, c: &Coef) {
        if c.is_zero() {
            return;
        }
        use std::collections::hash_map::Entry;
        match self.terms.entry(check_key(k)) {
            Entry::Occupied(mut o) => {
                let v = o.get().add_ref(c);
                if v.is_zero() {
                    o.remove();
                } else {
                    *o.get_mut() = v;
                }
            }
            Entry::Vacant(v) => {
                v.insert(c.clone());
            }
        }
    }

    pub fn add_assign(&mut self, other: &Self) {
        for (k, c) in other.terms.iter() {
            self.add_coef_packed(*k, c);
        }
    }

    pub fn sub_assign(&mut self, other: &Self) {
        for (k, c) in other.terms.iter() {
            self.add_coef_packed(*k, &c.neg_ref());
        }
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let cf = Coef::from_rat(c);
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v.mul_ref(&cf)))
                .collect(),
        }
    }

    pub fn mul_monomial(&self, e: Exp, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let pe = pack(e);
        let cf = Coef::from_rat(c);
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (check_key(packed_add(*k, pe)), v.mul_ref(&cf)))
                .collect(),
        }
    }

    /// One-pass multiplication by `1 - eta^w`.
    pub fn mul_one_minus(&self, w: Exp) -> Self {
        let pw = pack(w);
        let mut out = Self {
            terms: FxHashMap::with_capacity_and_hasher(self.terms.len() * 2, Default::default()),
        };
        for (k, c) in self.terms.iter() {
            out.add_coef_packed(*k, c);
            out.add_coef_packed(packed_add(*k, pw), &c.neg_ref());
        }
        out
    }

    /// Dual representation: inverts every variable.
    pub fn conjugate(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (packed_neg(*k), v.clone()))
                .collect(),
        }
    }

    /// Substitutes each variable by a monomial: variable `i` maps to the
    /// monomial with doubled exponent vector `map[i]`.
    pub fn substitute(&self, map: &[Exp; N_VARS]) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.terms.iter() {
            let e = unpack(*k);
            let mut f = ZERO_EXP;
            for i in 0..N_VARS {
                for j in 0..N_VARS {
                    let prod = e[i] as i64 * map[i][j] as i64;
                    if prod % 2 != 0 {
                        panic!("substitution leaves the doubled exponent lattice");
                    }
                    f[j] += (prod / 2) as i32;
                }
            }
            out.add_coef_packed(pack(f), c);
        }
        out
    }

    /// Sum of coefficients (the value at `t = y = 1`); the rank when `self`
    /// is a character.
    pub fn rank(&self) -> Rat {
        let mut int_part: i128 = 0;
        let mut big = Rat::zero();
        for c in self.terms.values() {
            match c {
                Coef::I(v) => int_part += *v as i128,
                Coef::R(r) => big += &**r,
            }
        }
        big + Rat::from_integer(int_part.into())
    }

    /// Exact division by `1 - eta^w` (`w` a doubled exponent, nonzero).
    /// Returns `None` when `self` is not divisible.
    ///
    /// Terms are grouped into cosets of the *primitive* direction `v = w/g`
    /// (`g` the content of `w`); within a coset the polynomial is univariate
    /// in `x = eta^v` and division by `1 - x^g` runs `g` interleaved
    /// telescoping chains, all of which must cancel exactly.
    pub fn div_binomial(&self, w: Exp) -> Option<Self> {
        assert!(w != ZERO_EXP, "division by 1 - 1");
        let mut g: i64 = 0;
        for &x in w.iter() {
            g = num_integer::Integer::gcd(&g, &(x as i64));
        }
        let g = g.unsigned_abs() as i64;
        let mut v = w;
        for x in v.iter_mut() {
            *x = (*x as i64 / g) as i32;
        }
        let pivot = (0..N_VARS).find(|&i| v[i] != 0).unwrap();
        let pv = v[pivot] as i64;
        let mut cosets: FxHashMap<[i64; N_VARS], Vec<(i64, u64, Coef)>> = FxHashMap::default();
        for (k, c) in self.terms.iter() {
            let e = unpack(*k);
            let mut key = [0i64; N_VARS];
            for j in 0..N_VARS {
                key[j] = e[j] as i64 * pv - e[pivot] as i64 * v[j] as i64;
            }
            cosets
                .entry(key)
                .or_default()
                .push((e[pivot] as i64, *k, c.clone()));
        }
        let pv_packed = pack(v);
        let mut out = Self::zero();
        for (_, mut terms) in cosets {
            // sort along ascending powers of x = eta^v
            terms.sort_by_key(|(s, _, _)| if pv > 0 { *s } else { -*s });
            let s0 = terms[0].0;
            let u_max = (terms[terms.len() - 1].0 - s0) / pv;
            let base_key = terms[0].1;
            let mut acc: Vec<Coef> = (0..g).map(|_| Coef::I(0)).collect();
            let mut idx = 0;
            let mut key_cur = base_key;
            for u in 0..=u_max {
                let r = (u % g) as usize;
                while idx < terms.len() && (terms[idx].0 - s0) / pv == u {
                    acc[r] = acc[r].add_ref(&terms[idx].2);
                    idx += 1;
                }
                if u <= u_max - g {
                    if !acc[r].is_zero() {
                        out.add_coef_packed(key_cur, &acc[r]);
                    }
                } else if !acc[r].is_zero() {
                    // a nonzero trailing accumulator means non-divisibility
                    return None;
                }
                key_cur = packed_add(key_cur, pv_packed);
            }
        }
        Some(out)
    }

    /// Divides repeatedly by `1 - eta^w`, `mult` times.
    pub fn div_binomial_power(&self, w: Exp, mult: u32) -> Option<Self> {
        let mut cur = self.clone();
        for _ in 0..mult {
            cur = cur.div_binomial(w)?;
        }
        Some(cur)
    }

    /// Evaluates at the point with variable `i` equal to `vals[i]^2` (so that
    /// half powers are the exact rationals `vals[i]^{e_i doubled}`).
    pub fn eval_squares(&self, vals: &[Rat; N_VARS]) -> Rat {
        let mut total = Rat::zero();
        for (e, c) in self.iter() {
            let mut v = c;
            for i in 0..N_VARS {
                v *= pow_rat(&vals[i], e[i]);
            }
            total += v;
        }
        total
    }

    /// Exponents sorted for deterministic display and serialization.
    pub fn sorted_terms(&self) -> Vec<(Exp, Rat)> {
        let mut v: Vec<(Exp, Rat)> = self.iter().collect();
        v.sort_by_key(|(e, _)| *e);
        v
    }

    /// Removes the rational content, returning (content, primitive part).
    pub fn primitive(&self) -> (Rat, Self) {
        use num_bigint::BigInt;
        use num_integer::Integer;
        if self.is_zero() {
            return (Rat::one(), Self::zero());
        }
        let mut num_gcd = BigInt::zero();
        let mut den_lcm = BigInt::one();
        for c in self.terms.values() {
            let r = c.to_rat();
            num_gcd = num_gcd.gcd(r.numer());
            den_lcm = den_lcm.lcm(r.denom());
        }
        let mut content = Rat::new(num_gcd, den_lcm);
        let lead = self.sorted_terms().pop().unwrap().1;
        if lead.is_negative() {
            content = -content;
        }
        let inv = content.recip();
        (content.clone(), self.scale(&inv))
    }
}

pub(crate) fn pow_rat(base: &Rat, doubled_exp: i32) -> Rat {
    if doubled_exp == 0 {
        return Rat::one();
    }
    base.pow(doubled_exp)
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: Self) -> LaurentPoly {
        let mut out = self.clone();
        out.add_assign(rhs);
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: Self) -> LaurentPoly {
        let mut out = self.clone();
        out.sub_assign(rhs);
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, v)| (*k, v.neg_ref()))
                .collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: Self) -> LaurentPoly {
        let (small, big) = if self.num_terms() <= rhs.num_terms() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = LaurentPoly {
            terms: FxHashMap::with_capacity_and_hasher(
                small.num_terms().saturating_mul(big.num_terms()) / 2 + 8,
                Default::default(),
            ),
        };
        for (e, c) in small.terms.iter() {
            for (f, d) in big.terms.iter() {
                out.add_coef_packed(packed_add(*e, *f), &c.mul_ref(d));
            }
        }
        out
    }
}

const VAR_NAMES: [&str; N_VARS] = ["t1", "t2", "t3", "t4", "y"];

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.sorted_terms().into_iter().rev() {
            let neg = c.is_negative();
            let mag = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mono: Vec<String> = (0..N_VARS)
                .filter(|&i| e[i] != 0)
                .map(|i| {
                    if e[i] == 2 {
                        VAR_NAMES[i].to_string()
                    } else if e[i] % 2 == 0 {
                        format!("{}^{}", VAR_NAMES[i], e[i] / 2)
                    } else {
                        format!("{}^({}/2)", VAR_NAMES[i], e[i])
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", mag)?;
            } else if mag.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", mag, mono.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn difference_of_squares() {
        let t1 = LaurentPoly::var(0);
        let one = LaurentPoly::one();
        let prod = &(&t1 + &one) * &(&t1 - &one);
        let t1sq = LaurentPoly::monomial([4, 0, 0, 0, 0]);
        assert_eq!(prod, &t1sq - &one);
    }

    #[test]
    fn additive_identity() {
        let p = &LaurentPoly::var(2) + &LaurentPoly::from_i64(7);
        assert_eq!(&p + &LaurentPoly::zero(), p);
    }

    #[test]
    fn half_exponents_multiply() {
        let h = LaurentPoly::monomial([1, 0, 0, 0, 0]);
        assert_eq!(&h * &h, LaurentPoly::var(0));
    }

    #[test]
    fn packing_round_trip() {
        let e = [-1999, 1999, 0, -37, 256];
        assert_eq!(unpack(pack(e)), e);
        let f = [1, -1, 255, 0, -255];
        let g = [-3, 5, 0, 7, 19];
        assert_eq!(unpack(packed_add(pack(g), pack(f))), exp_add(g, f));
        assert_eq!(unpack(packed_neg(pack(f))), exp_neg(f));
    }

    #[test]
    fn coefficient_promotion() {
        // force an i64 overflow through scaling and verify exactness
        let big = Rat::from_integer(num_bigint::BigInt::from(i64::MAX));
        let p = LaurentPoly::constant(big.clone());
        let q = p.scale(&big);
        assert_eq!(q.coeff(&ZERO_EXP), &big * &big);
    }

    #[test]
    fn binomial_division_geometric() {
        let num = &LaurentPoly::one() - &LaurentPoly::monomial([4, 0, 0, 0, 0]);
        let q = num.div_binomial([2, 0, 0, 0, 0]).unwrap();
        assert_eq!(q, &LaurentPoly::one() + &LaurentPoly::var(0));
    }

    #[test]
    fn binomial_division_failure() {
        let num = &LaurentPoly::one() - &LaurentPoly::monomial([2, 2, 0, 0, 0]);
        assert!(num.div_binomial([2, 0, 0, 0, 0]).is_none());
    }

    #[test]
    fn division_round_trip() {
        let w = [2, -2, 0, 4, 0];
        let mut p = LaurentPoly::zero();
        for (i, e) in [[0, 0, 0, 0, 0], [2, 2, 0, 0, 0], [-2, 0, 2, 0, 2], [4, 0, 0, -2, 0]]
            .into_iter()
            .enumerate()
        {
            p.add_term(e, &rat(i as i64 + 1));
        }
        let prod = p.mul_one_minus(w);
        let q = prod.div_binomial(w).unwrap();
        assert_eq!(q, p);
    }

    #[test]
    fn imprimitive_binomial_division() {
        // (1 - t1^2 t2^2 t3^4) has content 2: it factors through the
        // primitive direction, and quotients interleave two chains
        let w = [4, 4, 8, 0, 0];
        let v = [2, 2, 4, 0, 0];
        let num = &LaurentPoly::one() - &LaurentPoly::monomial(w);
        let q = num.div_binomial(w).unwrap();
        assert_eq!(q, LaurentPoly::one());
        // (1 - eta^v)(1 + eta^v) = 1 - eta^w: quotient by w of a v-shifted
        // polynomial
        let p = &LaurentPoly::one() + &LaurentPoly::monomial(v);
        let prod = p.mul_one_minus(w);
        assert_eq!(prod.div_binomial(w).unwrap(), p);
        // and a poly NOT divisible by (1 - eta^w) even though divisible by
        // (1 - eta^v)
        let almost = LaurentPoly::one().mul_one_minus(v);
        assert!(almost.div_binomial(w).is_none());
        // random-ish mixed polynomial round trip
        let mut m = LaurentPoly::var(1);
        m.add_term([2, 0, 2, 0, 2], &rat(5));
        m.add_term([-2, 2, 4, 0, 0], &rat(-3));
        m.add_term([0, 0, 0, 2, 0], &rat(7));
        let prod = m.mul_one_minus(w);
        assert_eq!(prod.div_binomial(w).unwrap(), m);
    }

    #[test]
    fn divide_by_negative_direction() {
        let num = &LaurentPoly::one() - &LaurentPoly::monomial([-6, 0, 0, 0, 0]);
        let q = num.div_binomial([-2, 0, 0, 0, 0]).unwrap();
        let mut expect = LaurentPoly::one();
        expect.add_term([-2, 0, 0, 0, 0], &rat(1));
        expect.add_term([-4, 0, 0, 0, 0], &rat(1));
        assert_eq!(q, expect);
    }

    #[test]
    fn mul_one_minus_matches_generic() {
        let mut p = LaurentPoly::var(0);
        p.add_term([0, 2, 0, 0, 0], &rat(-3));
        let w = [0, 0, 2, 2, 0];
        let factor = &LaurentPoly::one() - &LaurentPoly::monomial(w);
        assert_eq!(p.mul_one_minus(w), &p * &factor);
    }
}
