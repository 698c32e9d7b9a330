use super::laurent::Rat;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Laurent polynomial in one variable `z = y^{1/2}` over big rationals.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct ZPoly {
    terms: BTreeMap<i32, Rat>,
}

impl ZPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0)
    }

    pub fn monomial(k: i32) -> Self {
        Self::term(Rat::one(), k)
    }

    pub fn term(c: Rat, k: i32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    pub fn constant(c: Rat) -> Self {
        Self::term(c, 0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, k: i32, c: &Rat) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry(k).or_insert_with(Rat::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&k);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms.iter() {
            out.add_term(*k, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in other.terms.iter() {
            out.add_term(*k, &-c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (k, c) in self.terms.iter() {
            for (l, d) in other.terms.iter() {
                out.add_term(k + l, &(c * d));
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = (&i32, &Rat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: i32) -> Rat {
        self.terms.get(&k).cloned().unwrap_or_else(Rat::zero)
    }

    pub fn min_deg(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_deg(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// `z^k * self`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(l, c)| (l + k, c.clone())).collect(),
        }
    }

    /// Substitutes `z -> z^n` (plethysm support).
    pub fn stretch(&self, n: i32) -> Self {
        Self {
            terms: self.terms.iter().map(|(l, c)| (l * n, c.clone())).collect(),
        }
    }

    /// Is the polynomial symmetric under `z -> 1/z`?
    pub fn is_palindromic(&self) -> bool {
        self.terms
            .iter()
            .all(|(k, c)| self.coeff(-*k) == *c)
    }

    /// Ordinary-polynomial view: lowest exponent shifted to zero.
    fn to_dense(&self) -> (i32, Vec<Rat>) {
        if self.is_zero() {
            return (0, vec![]);
        }
        let lo = self.min_deg().unwrap();
        let hi = self.max_deg().unwrap();
        let mut v = vec![Rat::zero(); (hi - lo + 1) as usize];
        for (k, c) in self.terms.iter() {
            v[(k - lo) as usize] = c.clone();
        }
        (lo, v)
    }

    fn from_dense(lo: i32, v: Vec<Rat>) -> Self {
        let mut p = Self::zero();
        for (i, c) in v.into_iter().enumerate() {
            p.add_term(lo + i as i32, &c);
        }
        p
    }

    /// Euclidean division of the underlying ordinary polynomials; `self` and
    /// `d` are first shifted to have lowest exponent zero, which is harmless
    /// for gcd purposes.
    fn rem(&self, d: &Self) -> Self {
        let (_, mut a) = self.to_dense();
        let (_, b) = d.to_dense();
        assert!(!b.is_empty());
        let bl = b.len();
        let lead = b[bl - 1].clone();
        while a.len() >= bl && !a.is_empty() {
            let c = a.last().unwrap() / &lead;
            if c.is_zero() {
                a.pop();
                continue;
            }
            let off = a.len() - bl;
            for i in 0..bl {
                let sub = &b[i] * &c;
                a[off + i] -= sub;
            }
            while a.last().is_some_and(|x| x.is_zero()) {
                a.pop();
            }
        }
        Self::from_dense(0, a)
    }

    fn gcd(&self, other: &Self) -> Self {
        let (_, a) = self.to_dense();
        let (_, b) = other.to_dense();
        let mut x = Self::from_dense(0, a);
        let mut y = Self::from_dense(0, b);
        while !y.is_zero() {
            let r = x.rem(&y);
            x = y;
            y = r;
        }
        if x.is_zero() {
            return Self::zero();
        }
        // make monic
        let lead = x.terms.values().next_back().unwrap().clone();
        x.scale(&lead.recip())
    }

    /// Exact division (panics if not exact).
    fn div_exact(&self, d: &Self) -> Self {
        let (alo, mut a) = self.to_dense();
        let (blo, b) = d.to_dense();
        let bl = b.len();
        let lead = b[bl - 1].clone();
        let mut q = vec![Rat::zero(); a.len().saturating_sub(bl) + 1];
        while a.len() >= bl && !a.is_empty() {
            let c = a.last().unwrap() / &lead;
            let off = a.len() - bl;
            q[off] = c.clone();
            for i in 0..bl {
                let sub = &b[i] * &c;
                a[off + i] -= sub;
            }
            while a.last().is_some_and(|x| x.is_zero()) {
                a.pop();
            }
        }
        assert!(a.is_empty(), "non-exact polynomial division");
        Self::from_dense(alo - blo, q)
    }

    pub fn eval(&self, z: &Rat) -> Rat {
        let mut total = Rat::zero();
        for (k, c) in self.terms.iter() {
            total += c * super::laurent::pow_rat(z, *k);
        }
        total
    }
}

impl fmt::Display for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.terms.iter().rev() {
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
            if *k == 0 {
                write!(f, "{}", mag)?;
            } else {
                let var = if k % 2 == 0 {
                    if *k == 2 {
                        "y".to_string()
                    } else {
                        format!("y^{}", k / 2)
                    }
                } else {
                    format!("y^({}/2)", k)
                };
                if mag.is_one() {
                    write!(f, "{}", var)?;
                } else {
                    write!(f, "{}*{}", mag, var)?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for ZPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Rational function in `z = y^{1/2}`, kept reduced by monic gcd.
#[derive(Clone, PartialEq, Eq)]
pub struct ZRat {
    pub num: ZPoly,
    pub den: ZPoly,
}

impl ZRat {
    pub fn zero() -> Self {
        Self {
            num: ZPoly::zero(),
            den: ZPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_poly(ZPoly::one())
    }

    pub fn from_poly(p: ZPoly) -> Self {
        Self {
            num: p,
            den: ZPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn reduce(mut self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        // normalize monomial content: shift both to lowest exponent 0
        let ns = self.num.min_deg().unwrap();
        let ds = self.den.min_deg().unwrap();
        self.num = self.num.shift(-ns);
        self.den = self.den.shift(-ds);
        let g = self.num.gcd(&self.den);
        if !g.is_zero() && g.max_deg() != Some(0) {
            self.num = self.num.div_exact(&g);
            self.den = self.den.div_exact(&g);
        }
        // restore exponents: num/den = z^{ns-ds} * num'/den'; fold into num
        self.num = self.num.shift(ns - ds);
        // normalize denominator: constant term (lowest coefficient) = 1
        let c = self.den.terms.values().next().unwrap().clone();
        self.num = self.num.scale(&c.recip());
        self.den = self.den.scale(&c.recip());
        self
    }

    pub fn new(num: ZPoly, den: ZPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        (Self { num, den }).reduce()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::new(
            self.num.mul(&other.den).sub(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn neg(&self) -> Self {
        Self {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero");
        Self::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self {
            num: self.num.scale(c),
            den: self.den.clone(),
        }
    }

    /// Returns the Laurent polynomial when the denominator is trivial.
    pub fn as_poly(&self) -> Option<ZPoly> {
        if self.den == ZPoly::one() {
            Some(self.num.clone())
        } else {
            let q = ZRat::new(self.num.clone(), self.den.clone());
            if q.den == ZPoly::one() {
                Some(q.num)
            } else {
                None
            }
        }
    }
}

impl fmt::Display for ZRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == ZPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for ZRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Truncated Laurent series in a nilpotent-ish expansion parameter, with
/// `ZRat` coefficients: used for the `u -> 1` cocharacter limits with
/// `u = (1 + eps)^2`.
#[derive(Clone, Debug)]
pub struct EpsSeries {
    /// Exponent of the leading stored coefficient.
    pub lead: i32,
    /// Coefficients of `eps^{lead}, eps^{lead+1}, ...`.
    pub coeffs: Vec<ZRat>,
}

impl EpsSeries {
    /// `(1 + eps)^n z^k` truncated to `len` coefficients.
    pub fn binomial_pow(n: i64, k: i32, len: usize) -> Self {
        let mut coeffs = Vec::with_capacity(len);
        let mut c = Rat::one();
        for j in 0..len {
            coeffs.push(ZRat::from_poly(ZPoly::term(c.clone(), k)));
            // next binomial coefficient: C(n, j+1) = C(n, j) * (n - j)/(j + 1)
            let j = j as i64;
            c *= Rat::new((n - j).into(), (j + 1).into());
        }
        EpsSeries { lead: 0, coeffs }
    }

    pub fn constant(c: ZRat, len: usize) -> Self {
        let mut coeffs = vec![ZRat::zero(); len];
        if len > 0 {
            coeffs[0] = c;
        }
        EpsSeries { lead: 0, coeffs }
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn normalized(mut self) -> Self {
        while let Some(first) = self.coeffs.first() {
            if first.is_zero() {
                self.coeffs.remove(0);
                self.lead += 1;
            } else {
                break;
            }
        }
        self
    }

    pub fn mul(&self, other: &Self, len: usize) -> Self {
        let lead = self.lead + other.lead;
        let mut coeffs = vec![ZRat::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if i >= len || a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b));
            }
        }
        EpsSeries { lead, coeffs }
    }

    pub fn add(&self, other: &Self) -> Self {
        let lead = self.lead.min(other.lead);
        let end = (self.lead + self.coeffs.len() as i32).min(other.lead + other.coeffs.len() as i32);
        let mut coeffs = vec![ZRat::zero(); (end - lead).max(0) as usize];
        for (i, a) in self.coeffs.iter().enumerate() {
            let k = self.lead + i as i32 - lead;
            if (k as usize) < coeffs.len() {
                coeffs[k as usize] = coeffs[k as usize].add(a);
            }
        }
        for (j, b) in other.coeffs.iter().enumerate() {
            let k = other.lead + j as i32 - lead;
            if (k as usize) < coeffs.len() {
                coeffs[k as usize] = coeffs[k as usize].add(b);
            }
        }
        EpsSeries { lead, coeffs }
    }

    pub fn scale(&self, c: &ZRat) -> Self {
        EpsSeries {
            lead: self.lead,
            coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect(),
        }
    }

    /// Multiplicative inverse; the leading coefficient must be nonzero.
    pub fn inverse(&self, len: usize) -> Self {
        let s = self.clone().normalized();
        assert!(!s.coeffs.is_empty() && !s.coeffs[0].is_zero(), "inverting zero series");
        let lead = -s.lead;
        let inv0 = ZRat::one().div(&s.coeffs[0]);
        let mut coeffs = vec![ZRat::zero(); len];
        if len > 0 {
            coeffs[0] = inv0.clone();
        }
        for n in 1..len {
            // c_n = -inv0 * sum_{k=1..=n} a_k c_{n-k}
            let mut acc = ZRat::zero();
            for k in 1..=n {
                if k < s.coeffs.len() {
                    acc = acc.add(&s.coeffs[k].mul(&coeffs[n - k]));
                }
            }
            coeffs[n] = acc.neg().mul(&inv0);
        }
        EpsSeries { lead, coeffs }
    }

    /// Coefficient of `eps^k`.
    pub fn coeff(&self, k: i32) -> ZRat {
        let idx = k - self.lead;
        if idx < 0 || idx as usize >= self.coeffs.len() {
            ZRat::zero()
        } else {
            self.coeffs[idx as usize].clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::rat;

    #[test]
    fn zrat_reduction() {
        // (z^2 - 1)/(z - 1) = z + 1
        let num = ZPoly::monomial(2).sub(&ZPoly::one());
        let den = ZPoly::monomial(1).sub(&ZPoly::one());
        let r = ZRat::new(num, den);
        assert_eq!(r.as_poly().unwrap(), ZPoly::monomial(1).add(&ZPoly::one()));
    }

    #[test]
    fn eps_inverse() {
        // (1 + eps)^3 * (1 + eps)^{-3} = 1
        let a = EpsSeries::binomial_pow(3, 0, 6);
        let b = a.inverse(6);
        let prod = a.mul(&b, 6);
        assert_eq!(prod.lead, 0);
        assert_eq!(prod.coeffs[0], ZRat::one());
        for c in &prod.coeffs[1..] {
            assert!(c.is_zero());
        }
    }

    #[test]
    fn palindromic_check() {
        let mut p = ZPoly::zero();
        p.add_term(2, &rat(1));
        p.add_term(-2, &rat(1));
        p.add_term(0, &rat(5));
        assert!(p.is_palindromic());
        p.add_term(4, &rat(2));
        assert!(!p.is_palindromic());
    }
}
