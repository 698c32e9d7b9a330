use crate::algebra::BracketProduct;
use crate::partitions::SolidPartition;
use num_traits::{Signed, ToPrimitive};
use std::collections::BTreeMap;
use std::fmt;

/// How the signs of a series were obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SignProvenance {
    FormulaZeroDim,
    FormulaTwoDim,
    Searched,
    Explicit,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignMode {
    /// `(-1)^{|pi| + #diagonal}` for finite solid partitions.
    FormulaZeroDim,
    /// `(-1)^{|pi| + mu_pi}` for partitions supported on the hyperplane.
    FormulaTwoDim,
    /// Order-by-order search.
    Search,
    /// Explicit table by fixed-point label.
    Explicit(BTreeMap<String, i8>),
}

/// Total sign assignment: fixed-point label -> sign.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SignAssignment {
    pub provenance: Option<SignProvenance>,
    pub signs: BTreeMap<String, i8>,
}

impl SignAssignment {
    pub fn get(&self, label: &str) -> Option<i8> {
        self.signs.get(label).copied()
    }
}

impl fmt::Display for SignAssignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (label, s) in self.signs.iter() {
            writeln!(f, "{} {}", if *s >= 0 { "+" } else { "-" }, label)?;
        }
        Ok(())
    }
}

/// Sign `(-1)^{|pi| + #{(i,i,i,j) in pi, i < j}}` for a finite solid
/// partition over empty asymptotics, applied to the halved bracket.
pub fn sign_zero_dim(pi: &SolidPartition) -> Result<i8, String> {
    if pi.asymptotics().iter().any(|m| !m.is_empty()) {
        return Err("zero-dimensional sign formula needs empty asymptotics".into());
    }
    let n = pi.num_extra() as i64;
    let diag = pi
        .extra_boxes()
        .filter(|b| b[0] == b[1] && b[1] == b[2] && b[0] < b[3])
        .count() as i64;
    Ok(if (n + diag) % 2 == 0 { 1 } else { -1 })
}

/// Sign `(-1)^{|pi| + mu_pi}` where `mu_pi` sums the coefficients of the
/// diagonal monomials `t1^i t2^i t3^i t4^j`, `(i,i,i,j) in pi`, `i < j`, in
/// the finite part `W` of the decomposition.  Needs the support
/// set-theoretically inside `Z(x4)`.
pub fn sign_two_dim(pi: &SolidPartition) -> Result<i8, String> {
    if !pi.asymptotics()[3].is_empty() {
        return Err("two-dimensional sign formula needs support on Z(x4)".into());
    }
    for a in 0..3 {
        // no surface asymptotics wrapping the fibre direction
        if !pi.lambda(a, 3).is_empty() {
            return Err("two-dimensional sign formula needs support on Z(x4)".into());
        }
    }
    let d = pi.decompose();
    let volume = d.rank();
    let mut mu = 0i64;
    for (e, c) in d.w.sorted_terms() {
        if e[4] != 0 || e[0] != e[1] || e[1] != e[2] {
            continue;
        }
        let (i, j) = (e[0] / 2, e[3] / 2);
        if i < j && pi.contains([i, i, i, j]) {
            mu += c.to_integer().to_i64().unwrap();
        }
    }
    Ok(if (volume + mu) % 2 == 0 { 1 } else { -1 })
}

/// Evaluation of bracket products in a prime field, for the fast
/// (non-authoritative) sign-search path.  Points are squares so that half
/// powers stay in the field.
#[derive(Clone, Debug)]
pub struct ModEval {
    pub p: u64,
    /// square roots of the evaluation point per variable (t1..t4, y)
    roots: [u64; 5],
}

pub const MOD_P: u64 = (1 << 61) - 1;

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

impl ModEval {
    /// Deterministic pseudo-random evaluation point from a seed.
    pub fn new(seed: u64) -> Self {
        let mut roots = [0u64; 5];
        let mut state = seed.wrapping_mul(0x9e3779b97f4a7c15).wrapping_add(12345);
        for r in roots.iter_mut() {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            *r = state % (MOD_P - 3) + 2;
        }
        ModEval { p: MOD_P, roots }
    }

    /// Value of a factored bracket product; `None` on a pole (vanishing
    /// denominator factor, astronomically unlikely at random points).
    pub fn eval(&self, b: &BracketProduct) -> Option<u64> {
        if b.is_zero() {
            return Some(0);
        }
        let p = self.p;
        let mut acc = self.eval_rat_scalar(&b.scalar)?;
        for (w, m) in b.factors.iter() {
            let mut v: u64 = 1;
            for i in 0..5 {
                let e = w[i];
                if e == 0 {
                    continue;
                }
                let base = if e > 0 {
                    self.roots[i]
                } else {
                    inv_mod(self.roots[i], p)
                };
                v = ((v as u128 * pow_mod(base, e.unsigned_abs() as u64, p) as u128) % p as u128)
                    as u64;
            }
            // bracket value: v - v^{-1}
            let bval = (v + p - inv_mod(v, p)) % p;
            if bval == 0 {
                if *m > 0 {
                    return Some(0);
                }
                return None;
            }
            let powed = pow_mod(bval, m.unsigned_abs(), p);
            let powed = if *m < 0 { inv_mod(powed, p) } else { powed };
            acc = ((acc as u128 * powed as u128) % p as u128) as u64;
        }
        Some(acc)
    }

    pub fn eval_poly(&self, p: &crate::algebra::LaurentPoly) -> Option<u64> {
        let pr = self.p;
        let mut total: u64 = 0;
        for (e, c) in p.iter() {
            let mut v = self.eval_rat_scalar(&c)?;
            for i in 0..5 {
                if e[i] == 0 {
                    continue;
                }
                let base = if e[i] > 0 {
                    self.roots[i]
                } else {
                    inv_mod(self.roots[i], pr)
                };
                v = self.mul(v, pow_mod(base, e[i].unsigned_abs() as u64, pr));
            }
            total = self.add(total, v);
        }
        Some(total)
    }

    pub fn eval_fraction(&self, f: &crate::algebra::MonomialFraction) -> Option<u64> {
        let mut v = self.eval_poly(&f.num)?;
        for (w, m) in f.den_factors() {
            let mono = crate::algebra::LaurentPoly::monomial(*w);
            let d = self.sub(1, self.eval_poly(&mono)?);
            if d == 0 {
                return None;
            }
            v = self.mul(v, self.inv(pow_mod(d, *m as u64, self.p)));
        }
        Some(v)
    }

    fn eval_rat_scalar(&self, r: &crate::algebra::Rat) -> Option<u64> {
        let p = self.p;
        let modint = |x: &num_bigint::BigInt| -> u64 {
            let m = (x % num_bigint::BigInt::from(p)).to_i64().unwrap();
            if m < 0 {
                (m + p as i64) as u64
            } else {
                m as u64
            }
        };
        let n = modint(r.numer());
        let d = modint(r.denom());
        if d == 0 {
            return None;
        }
        Some(((n as u128 * inv_mod(d, p) as u128) % p as u128) as u64)
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        (a + b) % self.p
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        (a + self.p - b) % self.p
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        (self.p - a) % self.p
    }

    pub fn inv(&self, a: u64) -> u64 {
        inv_mod(a, self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::WeightClass;

    #[test]
    fn formula_signs_on_small_partitions() {
        let mut pi = SolidPartition::empty();
        assert_eq!(sign_zero_dim(&pi).unwrap(), 1);
        pi.push_box([0, 0, 0, 0]);
        assert_eq!(sign_zero_dim(&pi).unwrap(), -1);
        // box at (0,0,0,1): |pi| = 2, one diagonal site
        let mut pi2 = pi.clone();
        pi2.push_box([0, 0, 0, 1]);
        assert_eq!(sign_zero_dim(&pi2).unwrap(), -1);
        // the two-dimensional formula agrees on finite hyperplane data
        assert_eq!(sign_two_dim(&pi2).unwrap(), -1);
    }

    #[test]
    fn modular_eval_consistency() {
        // the modular value of a product equals the product of values
        let c1 = WeightClass::from_weights([([1, 1, 0, 0, 0], 1), ([1, 0, 0, 0, 0], -1)]);
        let c2 = WeightClass::from_weights([([0, 1, 2, 0, 1], 2)]);
        let b1 = c1.bracket().unwrap();
        let b2 = c2.bracket().unwrap();
        let prod = b1.mul(&b2);
        let ev = ModEval::new(42);
        let v1 = ev.eval(&b1).unwrap();
        let v2 = ev.eval(&b2).unwrap();
        let vp = ev.eval(&prod).unwrap();
        assert_eq!(ev.mul(v1, v2), vp);
    }

    #[test]
    fn modular_matches_exact_rational() {
        use crate::algebra::Rat;
        // cross-check one bracket against the exact rational evaluation at
        // the same (small) point lifted to the rationals
        let c = WeightClass::from_weights([([1, 0, 0, 0, 0], 1), ([0, 1, 0, 0, 1], -1)]);
        let b = c.bracket().unwrap();
        let vals: [Rat; 5] = std::array::from_fn(|i| crate::algebra::rat(i as i64 + 2));
        let exact = b.eval_squares(&vals).unwrap();
        // evaluate modulo p by mapping the rational value
        let ev = ModEval {
            p: MOD_P,
            roots: [2, 3, 4, 5, 6],
        };
        let got = ev.eval(&b).unwrap();
        let expect = ev.eval_rat_scalar(&exact).unwrap();
        assert_eq!(got, expect);
    }
}
