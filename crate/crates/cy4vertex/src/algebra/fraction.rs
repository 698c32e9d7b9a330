use super::laurent::{exp_neg, Exp, LaurentPoly, Rat, N_VARS, ZERO_EXP};
use num_traits::One;
use std::collections::BTreeMap;
use std::fmt;

/// Exact rational function `num / prod_w (1 - eta^w)^mult`.
///
/// Denominator weights are kept in a canonical orientation (first nonzero
/// doubled exponent positive); `1/(1 - eta^{-w})` is rewritten as
/// `-eta^w/(1 - eta^w)` on construction.  No series expansion is ever stored.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MonomialFraction {
    pub num: LaurentPoly,
    den: BTreeMap<Exp, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FractionError {
    /// A substitution produced a denominator factor `1 - 1`.
    DegenerateSubstitution,
    /// `expand_to_laurent` hit a non-divisible numerator.
    NotLaurent,
}

impl fmt::Display for FractionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FractionError::DegenerateSubstitution => write!(f, "degenerate substitution"),
            FractionError::NotLaurent => write!(f, "not a Laurent polynomial"),
        }
    }
}

impl std::error::Error for FractionError {}

fn canonical_weight(w: Exp) -> (Exp, bool) {
    let first = w.iter().find(|&&x| x != 0).copied().unwrap_or(0);
    if first < 0 {
        (exp_neg(w), true)
    } else {
        (w, false)
    }
}

impl MonomialFraction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn from_poly(num: LaurentPoly) -> Self {
        Self {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn den_factors(&self) -> impl Iterator<Item = (&Exp, &u32)> {
        self.den.iter()
    }

    pub fn den_degree(&self) -> u32 {
        self.den.values().sum()
    }

    /// Multiplies the denominator by `(1 - eta^w)^mult`, normalizing the
    /// orientation of `w`.
    pub fn div_by_binomial(&mut self, w: Exp, mult: u32) {
        assert!(w != ZERO_EXP, "denominator factor 1 - 1");
        if mult == 0 || self.num.is_zero() {
            return;
        }
        let (cw, flipped) = canonical_weight(w);
        if flipped {
            // 1/(1 - eta^w) = -eta^{-w}/(1 - eta^{-w}) with -w canonical
            let mut shift = ZERO_EXP;
            for i in 0..N_VARS {
                shift[i] = cw[i] * mult as i32;
            }
            let sign = if mult % 2 == 1 { -Rat::one() } else { Rat::one() };
            self.num = self.num.mul_monomial(shift, &sign);
        }
        *self.den.entry(cw).or_insert(0) += mult;
    }

    /// `self / (1 - eta^w)` for a whole (undoubled) weight vector.
    pub fn div_by_one_minus(&mut self, w_whole: [i32; N_VARS]) {
        let mut d = w_whole;
        for x in d.iter_mut() {
            *x *= 2;
        }
        self.div_by_binomial(d, 1);
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> Self {
        let mut out = self.clone();
        out.num = &out.num * p;
        if out.num.is_zero() {
            out.den.clear();
        }
        out
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = self.clone();
        out.num = out.num.scale(c);
        if out.num.is_zero() {
            out.den.clear();
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self {
            num: &self.num * &other.num,
            den: self.den.clone(),
        };
        if out.num.is_zero() {
            return Self::zero();
        }
        for (w, m) in other.den.iter() {
            *out.den.entry(*w).or_insert(0) += m;
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        // common denominator: max multiplicity per weight
        let mut den: BTreeMap<Exp, u32> = self.den.clone();
        for (w, m) in other.den.iter() {
            let e = den.entry(*w).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |f: &Self| -> LaurentPoly {
            let mut n = f.num.clone();
            for (w, m) in den.iter() {
                let have = f.den.get(w).copied().unwrap_or(0);
                for _ in have..*m {
                    n = n.mul_one_minus(*w);
                }
            }
            n
        };
        let num = &lift(self) + &lift(other);
        let mut out = Self { num, den };
        out.reduce();
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    /// Diagnostic twin of `add` that re-verifies every reduction step by
    /// evaluation; returns a human-readable trace.
    pub fn add_checked(&self, other: &Self, vals: &[Rat; super::laurent::N_VARS]) -> String {
        use std::fmt::Write as _;
        let mut log = String::new();
        let mut den: BTreeMap<Exp, u32> = self.den.clone();
        for (w, m) in other.den.iter() {
            let e = den.entry(*w).or_insert(0);
            *e = (*e).max(*m);
        }
        let lift = |f: &Self| -> LaurentPoly {
            let mut n = f.num.clone();
            for (w, m) in den.iter() {
                let have = f.den.get(w).copied().unwrap_or(0);
                for _ in have..*m {
                    n = n.mul_one_minus(*w);
                }
            }
            n
        };
        let n1 = lift(self);
        let n2 = lift(other);
        let dval = |d: &BTreeMap<Exp, u32>| -> Rat {
            let mut v = Rat::one();
            for (w, m) in d.iter() {
                let mv = LaurentPoly::monomial(*w).eval_squares(vals);
                for _ in 0..*m {
                    v *= Rat::one() - mv.clone();
                }
            }
            v
        };
        let expect1 = self.eval_squares(vals).unwrap() * dval(&den);
        let _ = writeln!(log, "lift1 ok: {}", n1.eval_squares(vals) == expect1);
        let expect2 = other.eval_squares(vals).unwrap() * dval(&den);
        let _ = writeln!(log, "lift2 ok: {}", n2.eval_squares(vals) == expect2);
        let num = &n1 + &n2;
        let _ = writeln!(
            log,
            "sum ok: {}",
            num.eval_squares(vals) == n1.eval_squares(vals) + n2.eval_squares(vals)
        );
        // replay reduce with re-multiplication checks
        let mut cur = num.clone();
        let weights: Vec<Exp> = den.keys().copied().collect();
        for w in weights {
            while den.get(&w).copied().unwrap_or(0) > 0 {
                match cur.div_binomial(w) {
                    Some(q) => {
                        let back = q.mul_one_minus(w);
                        if back != cur {
                            let _ = writeln!(log, "BAD DIVISION by {:?}", w);
                            return log;
                        }
                        cur = q;
                        let m = den.get_mut(&w).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            den.remove(&w);
                        }
                    }
                    None => break,
                }
            }
        }
        let _ = writeln!(log, "reduce replay complete");
        log
    }

    pub fn neg(&self) -> Self {
        self.scale(&-Rat::one())
    }

    /// Dual representation: inverts every variable; denominators are
    /// re-canonicalized.
    pub fn conjugate(&self) -> Self {
        let mut out = Self::from_poly(self.num.conjugate());
        for (w, m) in self.den.iter() {
            out.div_by_binomial(exp_neg(*w), *m);
        }
        out
    }

    /// Substitutes variables by monomials (doubled exponents; scalar 1).
    pub fn substitute(&self, map: &[Exp; N_VARS]) -> Result<Self, FractionError> {
        let mut out = Self::from_poly(self.num.substitute(map));
        for (w, m) in self.den.iter() {
            let img = LaurentPoly::monomial(*w).substitute(map);
            let (e, _) = img.sorted_terms().pop().expect("monomial image");
            if e == ZERO_EXP {
                return Err(FractionError::DegenerateSubstitution);
            }
            out.div_by_binomial(e, *m);
        }
        if out.num.is_zero() {
            return Ok(Self::zero());
        }
        Ok(out)
    }

    /// Cancels denominator factors that divide the numerator exactly.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        let weights: Vec<Exp> = self.den.keys().copied().collect();
        for w in weights {
            while self.den.get(&w).copied().unwrap_or(0) > 0 {
                match self.num.div_binomial(w) {
                    Some(q) => {
                        self.num = q;
                        let m = self.den.get_mut(&w).unwrap();
                        *m -= 1;
                        if *m == 0 {
                            self.den.remove(&w);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    /// The exact quotient as a Laurent polynomial; errors when the numerator
    /// is not divisible by the denominator product.
    pub fn expand_to_laurent(&self) -> Result<LaurentPoly, FractionError> {
        let mut num = self.num.clone();
        for (w, m) in self.den.iter() {
            num = num
                .div_binomial_power(*w, *m)
                .ok_or(FractionError::NotLaurent)?;
        }
        Ok(num)
    }

    /// Sums fractions over the common denominator of the given slice in one
    /// pass, with a single reduction at the end.
    fn sum_over_union(parts: &[Self]) -> Self {
        let mut union: BTreeMap<Exp, u32> = BTreeMap::new();
        for p in parts {
            if p.is_zero() {
                continue;
            }
            for (w, m) in p.den.iter() {
                let e = union.entry(*w).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let mut total = LaurentPoly::zero();
        for p in parts {
            if p.is_zero() {
                continue;
            }
            let mut n = p.num.clone();
            for (w, m) in union.iter() {
                let have = p.den.get(w).copied().unwrap_or(0);
                for _ in have..*m {
                    n = n.mul_one_minus(*w);
                }
            }
            total.add_assign(&n);
        }
        let mut out = Self {
            num: total,
            den: union,
        };
        out.reduce();
        out
    }

    /// Instrumented variant of [`MonomialFraction::sum`] printing merge
    /// statistics; diagnostics only.
    pub fn sum_verbose(parts: &[Self]) -> Self {
        Self::sum_impl(parts, true)
    }

    /// Sums many fractions exactly.  Localization sums cancel their poles in
    /// small clusters, so rather than lifting everything to the full common
    /// denominator (which explodes combinatorially) this repeatedly merges
    /// the group of terms sharing the least popular pole weight; the merged
    /// fraction reduces and the pole pool shrinks monotonically.
    pub fn sum(parts: &[Self]) -> Self {
        Self::sum_impl(parts, false)
    }

    fn sum_impl(parts: &[Self], verbose: bool) -> Self {
        let mut terms: Vec<Self> = parts.iter().filter(|p| !p.is_zero()).cloned().collect();
        loop {
            match terms.len() {
                0 => return Self::zero(),
                1 => return terms.pop().unwrap(),
                _ => {}
            }
            let mut by_w: BTreeMap<Exp, Vec<usize>> = BTreeMap::new();
            for (i, t) in terms.iter().enumerate() {
                for w in t.den.keys() {
                    by_w.entry(*w).or_default().push(i);
                }
            }
            // smallest nontrivial pole group first
            let group: Vec<usize> = match by_w
                .values()
                .filter(|g| g.len() >= 2)
                .min_by_key(|g| g.len())
            {
                Some(g) => g.clone(),
                None => {
                    // no shared poles left: merge the pair sharing the most
                    // denominator weights, or just the first two
                    let mut best = (0usize, 1usize, usize::MAX);
                    for i in 0..terms.len() {
                        for j in (i + 1)..terms.len() {
                            let shared = terms[i]
                                .den
                                .keys()
                                .filter(|w| terms[j].den.contains_key(*w))
                                .count();
                            let cost = terms[i].den.len() + terms[j].den.len() - 2 * shared;
                            if cost < best.2 {
                                best = (i, j, cost);
                            }
                        }
                    }
                    vec![best.0, best.1]
                }
            };
            let picked: Vec<Self> = group.iter().map(|&i| terms[i].clone()).collect();
            if verbose {
                let mut union: BTreeMap<Exp, u32> = BTreeMap::new();
                for p in &picked {
                    for (w, m) in p.den.iter() {
                        let e = union.entry(*w).or_insert(0);
                        *e = (*e).max(*m);
                    }
                }
                let nums: Vec<usize> = picked.iter().map(|p| p.num.num_terms()).collect();
                eprintln!(
                    "merge {} terms, union {} factors (mult {}), nums {:?}",
                    picked.len(),
                    union.len(),
                    union.values().sum::<u32>(),
                    nums
                );
            }
            let t_merge = std::time::Instant::now();
            let merged = Self::sum_over_union(&picked);
            if verbose {
                eprintln!(
                    "  -> {:?}, result num {} den {}",
                    t_merge.elapsed(),
                    merged.num.num_terms(),
                    merged.den.len()
                );
            }
            let group_set: std::collections::BTreeSet<usize> = group.into_iter().collect();
            let mut next: Vec<Self> = terms
                .into_iter()
                .enumerate()
                .filter(|(i, _)| !group_set.contains(i))
                .map(|(_, t)| t)
                .collect();
            if !merged.is_zero() {
                next.push(merged);
            }
            terms = next;
        }
    }

    /// Equality as rational functions via cross multiplication.
    pub fn eq_rational(&self, other: &Self) -> bool {
        let lift = |a: &Self, extra: &BTreeMap<Exp, u32>| -> LaurentPoly {
            let mut n = a.num.clone();
            for (w, m) in extra.iter() {
                let have = a.den.get(w).copied().unwrap_or(0);
                for _ in 0..m.saturating_sub(have) {
                    n = n.mul_one_minus(*w);
                }
            }
            n
        };
        let mut den: BTreeMap<Exp, u32> = self.den.clone();
        for (w, m) in other.den.iter() {
            let e = den.entry(*w).or_insert(0);
            *e = (*e).max(*m);
        }
        lift(self, &den) == lift(other, &den)
    }

    /// Evaluates at a point given by squares (exact, fails on a zero
    /// denominator factor).
    pub fn eval_squares(&self, vals: &[Rat; N_VARS]) -> Option<Rat> {
        let mut v = self.num.eval_squares(vals);
        for (w, m) in self.den.iter() {
            let d = Rat::one() - LaurentPoly::monomial(*w).eval_squares(vals);
            if num_traits::Zero::is_zero(&d) {
                return None;
            }
            for _ in 0..*m {
                v /= d.clone();
            }
        }
        Some(v)
    }

    /// The rank (value at `t = y = 1`) when the fraction is secretly a
    /// Laurent polynomial.
    pub fn rank(&self) -> Result<Rat, FractionError> {
        Ok(self.expand_to_laurent()?.rank())
    }
}

impl fmt::Display for MonomialFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({})", self.num)?;
        for (w, m) in self.den.iter() {
            let mono = LaurentPoly::monomial(*w);
            if *m == 1 {
                write!(f, " / (1 - {})", mono)?;
            } else {
                write!(f, " / (1 - {})^{}", mono, m)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MonomialFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t(i: usize) -> LaurentPoly {
        LaurentPoly::var(i)
    }

    #[test]
    fn expand_geometric_factor() {
        // (1 - t1^2)/(1 - t1) = 1 + t1
        let mut f = MonomialFraction::from_poly(
            &LaurentPoly::one() - &LaurentPoly::monomial([4, 0, 0, 0, 0]),
        );
        f.div_by_one_minus([1, 0, 0, 0, 0]);
        assert_eq!(
            f.expand_to_laurent().unwrap(),
            &LaurentPoly::one() + &t(0)
        );
    }

    #[test]
    fn expand_cancels_everything() {
        // (1-t1)(1-t2)/((1-t1)(1-t2)) = 1
        let p = &(&LaurentPoly::one() - &t(0)) * &(&LaurentPoly::one() - &t(1));
        let mut f = MonomialFraction::from_poly(p);
        f.div_by_one_minus([1, 0, 0, 0, 0]);
        f.div_by_one_minus([0, 1, 0, 0, 0]);
        assert_eq!(f.expand_to_laurent().unwrap(), LaurentPoly::one());
    }

    #[test]
    fn expand_error_on_nondivisible() {
        let mut f = MonomialFraction::from_poly(
            &LaurentPoly::one() - &LaurentPoly::monomial([2, 2, 0, 0, 0]),
        );
        f.div_by_one_minus([1, 0, 0, 0, 0]);
        assert_eq!(f.expand_to_laurent(), Err(FractionError::NotLaurent));
    }

    #[test]
    fn substitution_rewrites_denominator() {
        // 1/(1-t2) under t2 -> t2*t1 becomes 1/(1-t1t2)
        let mut f = MonomialFraction::one();
        f.div_by_one_minus([0, 1, 0, 0, 0]);
        let mut map = [[0i32; 5]; 5];
        for i in 0..5 {
            map[i][i] = 2;
        }
        map[1] = [2, 2, 0, 0, 0]; // t2 -> t1 t2
        let g = f.substitute(&map).unwrap();
        let mut expect = MonomialFraction::one();
        expect.div_by_one_minus([1, 1, 0, 0, 0]);
        assert_eq!(g, expect);
    }

    #[test]
    fn substitution_detects_degenerate() {
        let mut f = MonomialFraction::one();
        f.div_by_one_minus([0, 1, 0, 0, 0]);
        let mut map = [[0i32; 5]; 5];
        for i in 0..5 {
            map[i][i] = 2;
        }
        map[1] = [0, 0, 0, 0, 0]; // t2 -> 1
        assert_eq!(
            f.substitute(&map),
            Err(FractionError::DegenerateSubstitution)
        );
    }

    #[test]
    fn identity_substitution() {
        let mut f = MonomialFraction::from_poly(&t(0) + &t(3));
        f.div_by_one_minus([0, 0, 1, 0, 0]);
        let mut map = [[0i32; 5]; 5];
        for i in 0..5 {
            map[i][i] = 2;
        }
        assert_eq!(f.substitute(&map).unwrap(), f);
    }

    #[test]
    fn add_with_cancellation() {
        // 1/(1-t1) - t1/(1-t1) = 1
        let mut a = MonomialFraction::one();
        a.div_by_one_minus([1, 0, 0, 0, 0]);
        let b = a.mul_poly(&t(0)).neg();
        let s = a.add(&b);
        assert_eq!(s, MonomialFraction::one());
    }

    #[test]
    fn conjugate_flips_denominator() {
        // conj(1/(1-t1)) = 1/(1-t1^{-1}) = -t1/(1-t1)
        let mut a = MonomialFraction::one();
        a.div_by_one_minus([1, 0, 0, 0, 0]);
        let c = a.conjugate();
        let mut expect = MonomialFraction::from_poly(t(0).scale(&-Rat::one()));
        expect.div_by_one_minus([1, 0, 0, 0, 0]);
        assert_eq!(c, expect);
    }
}
