use super::laurent::Rat;
use super::weights::Wt;
use num_traits::{One, Signed, Zero};
use std::collections::BTreeMap;
use std::fmt;

/// Polynomial in the cohomological equivariant parameters `s1, s2, s3, m`
/// (with `s4 = -s1 - s2 - s3` already eliminated).
#[derive(Clone, Default, PartialEq, Eq)]
pub struct SPoly {
    terms: BTreeMap<[u16; 4], Rat>,
}

impl SPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert([0; 4], c);
        }
        Self { terms }
    }

    /// The equivariant weight of `eta^w`: `w1 s1 + ... + w4 s4 + w_y m`
    /// with `s4` eliminated.
    pub fn linear_form(w: &Wt) -> Self {
        let mut p = Self::zero();
        let coeffs = [
            Rat::from_integer((w[0] - w[3]).into()),
            Rat::from_integer((w[1] - w[3]).into()),
            Rat::from_integer((w[2] - w[3]).into()),
            Rat::from_integer(w[4].into()),
        ];
        for (i, c) in coeffs.into_iter().enumerate() {
            if !c.is_zero() {
                let mut e = [0u16; 4];
                e[i] = 1;
                p.add_term(e, &c);
            }
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, e: [u16; 4], c: &Rat) {
        if c.is_zero() {
            return;
        }
        let v = self.terms.entry(e).or_insert_with(Rat::zero);
        *v += c;
        if v.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(*e, c);
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in other.terms.iter() {
            out.add_term(*e, &-c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (e, c) in self.terms.iter() {
            for (f, d) in other.terms.iter() {
                let mut g = *e;
                for i in 0..4 {
                    g[i] += f[i];
                }
                out.add_term(g, &(c * d));
            }
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }
}

const S_NAMES: [&str; 4] = ["s1", "s2", "s3", "m"];

impl fmt::Display for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter() {
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
            let mono: Vec<String> = (0..4)
                .filter(|&i| e[i] != 0)
                .map(|i| {
                    if e[i] == 1 {
                        S_NAMES[i].to_string()
                    } else {
                        format!("{}^{}", S_NAMES[i], e[i])
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

impl fmt::Debug for SPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

/// Signed product of linear equivariant weights: the cohomological shadow of
/// a factored bracket product.
#[derive(Clone, Debug)]
pub struct LinearFactors {
    pub scalar: Rat,
    pub factors: Vec<(SPoly, i64)>,
}

impl LinearFactors {
    /// Collapses into a single rational function `num / den`.
    pub fn to_srat(&self) -> SRat {
        let mut num = SPoly::constant(self.scalar.clone());
        let mut den = SPoly::one();
        for (p, m) in self.factors.iter() {
            for _ in 0..m.unsigned_abs() {
                if *m > 0 {
                    num = num.mul(p);
                } else {
                    den = den.mul(p);
                }
            }
        }
        SRat { num, den }
    }
}

/// Rational function in `s1, s2, s3, m` (unreduced; equality is by cross
/// multiplication).
#[derive(Clone, Debug)]
pub struct SRat {
    pub num: SPoly,
    pub den: SPoly,
}

impl SRat {
    pub fn zero() -> Self {
        Self {
            num: SPoly::zero(),
            den: SPoly::one(),
        }
    }

    pub fn from_poly(p: SPoly) -> Self {
        Self {
            num: p,
            den: SPoly::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            num: self.num.mul(&other.den).add(&other.num.mul(&self.den)),
            den: self.den.mul(&other.den),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        Self {
            num: self.num.mul(&other.num),
            den: self.den.mul(&other.den),
        }
    }

    pub fn eq_rational(&self, other: &Self) -> bool {
        self.num.mul(&other.den) == other.num.mul(&self.den)
    }
}

impl fmt::Display for SRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == SPoly::one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}
