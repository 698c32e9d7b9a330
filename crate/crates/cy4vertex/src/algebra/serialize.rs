use super::laurent::{Exp, LaurentPoly, Rat, N_VARS};
use super::weights::{WeightClass, Wt};
use std::fmt::Write as _;
use std::str::FromStr;

/// Line-oriented text format shared by golden files: one term per line,
/// `coeff  e1 e2 e3 e4 ey` with doubled exponents.
pub fn format_laurent(p: &LaurentPoly) -> String {
    let mut out = String::new();
    for (e, c) in p.sorted_terms() {
        let _ = writeln!(out, "{}  {} {} {} {} {}", c, e[0], e[1], e[2], e[3], e[4]);
    }
    out
}

pub fn parse_laurent(s: &str) -> Result<LaurentPoly, String> {
    let mut p = LaurentPoly::zero();
    for (ln, line) in s.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let coeff = it
            .next()
            .ok_or_else(|| format!("line {}: missing coefficient", ln + 1))?;
        let c = Rat::from_str(coeff).map_err(|e| format!("line {}: {}", ln + 1, e))?;
        let mut e: Exp = [0; N_VARS];
        for slot in e.iter_mut() {
            let tok = it
                .next()
                .ok_or_else(|| format!("line {}: missing exponent", ln + 1))?;
            *slot = tok
                .parse()
                .map_err(|err| format!("line {}: {}", ln + 1, err))?;
        }
        if it.next().is_some() {
            return Err(format!("line {}: trailing tokens", ln + 1));
        }
        p.add_term(e, &c);
    }
    Ok(p)
}

/// Weight classes use the same layout with integer multiplicities and whole
/// (undoubled) weight vectors.
pub fn format_weight_class(c: &WeightClass) -> String {
    let mut out = String::new();
    for (w, m) in c.sorted_weights() {
        let _ = writeln!(out, "{}  {} {} {} {} {}", m, w[0], w[1], w[2], w[3], w[4]);
    }
    out
}

pub fn parse_weight_class(s: &str) -> Result<WeightClass, String> {
    let mut c = WeightClass::empty();
    for (ln, line) in s.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let m: i64 = it
            .next()
            .ok_or_else(|| format!("line {}: missing multiplicity", ln + 1))?
            .parse()
            .map_err(|e| format!("line {}: {}", ln + 1, e))?;
        let mut w: Wt = [0; N_VARS];
        for slot in w.iter_mut() {
            let tok = it
                .next()
                .ok_or_else(|| format!("line {}: missing weight entry", ln + 1))?;
            *slot = tok
                .parse()
                .map_err(|err| format!("line {}: {}", ln + 1, err))?;
        }
        c.add(w, m);
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn laurent_round_trip() {
        let mut p = LaurentPoly::monomial([1, -2, 0, 3, 0]);
        p.add_term([0, 0, 0, 0, 2], &super::super::rat(-7));
        let s = format_laurent(&p);
        assert_eq!(parse_laurent(&s).unwrap(), p);
    }

    #[test]
    fn weight_class_round_trip() {
        let c = WeightClass::from_weights([([1, 0, -2, 0, 1], 3), ([0, 0, 0, 0, 0], -1)]);
        let s = format_weight_class(&c);
        assert_eq!(parse_weight_class(&s).unwrap(), c);
    }
}
