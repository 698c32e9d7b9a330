use super::fixedpoints::{
    chart_vertex_input, edge_input, enumerate_global, face_input, global_to_local, EnumBudget,
    EnumError, GlobalFixedPoint, GlobalKind,
};
use super::geometry::ToricGeometry;
use crate::algebra::{
    bracket_eps, BracketProduct, EpsSeries, Exp, WeightClass, ZRat, DEFAULT_COCHARACTER,
};
use crate::local_terms::{edge_term, face_term, vertex_term, Flavor};
use crate::series::ModEval;
use num_traits::Signed;
use rayon::prelude::*;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone)]
pub struct GlobalError(pub String);

impl fmt::Display for GlobalError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl std::error::Error for GlobalError {}

impl From<EnumError> for GlobalError {
    fn from(e: EnumError) -> Self {
        GlobalError(e.0)
    }
}

/// One global fixed point with its class data and canonical bracket.
#[derive(Clone, Debug)]
pub struct GlobalTerm {
    pub label: String,
    /// Surface multiplicity.
    pub d: i64,
    /// Doubled curve degree (the `Q`-exponent may be a half-integer).
    pub m2: i64,
    /// Holomorphic Euler characteristic (the `q`-exponent).
    pub n: i64,
    /// Virtual dimension of the point's moduli contribution.
    pub vd: i64,
    /// Canonical bracket of the negated halved class; zero when the
    /// contribution vanishes.
    pub bracket: BracketProduct,
}

/// Total halved-and-twisted class of a fixed point in global coordinates,
/// with the line bundle `bundle` folded into the insertion.
pub fn total_class(
    g: &ToricGeometry,
    fp: &GlobalFixedPoint,
    bundle: &str,
    power: i64,
) -> Result<WeightClass, GlobalError> {
    let lb = g
        .bundles
        .get(bundle)
        .ok_or_else(|| GlobalError(format!("unknown bundle {}", bundle)))?;
    let local_weight = |chart: usize| -> Exp {
        let w = lb.weights[chart];
        let scaled = [w[0] * power, w[1] * power, w[2] * power, w[3] * power];
        let loc = global_to_local(&g.charts[chart], scaled);
        [
            2 * loc[0] as i32,
            2 * loc[1] as i32,
            2 * loc[2] as i32,
            2 * loc[3] as i32,
            0,
        ]
    };
    let mut total = WeightClass::empty();
    for chart in 0..g.charts.len() {
        let input = chart_vertex_input(g, fp, chart, local_weight(chart))?;
        let v = vertex_term(&input, Flavor::HalvedTilde)
            .map_err(|e| GlobalError(format!("chart {}: {}", chart, e)))?;
        total.add_class(&transport(&v, &g.charts[chart].exp_map()));
    }
    for (idx, e) in g.edges.iter().enumerate() {
        let input = edge_input(g, fp, idx, local_weight(e.charts.0));
        let t = edge_term(&input, Flavor::HalvedTilde)
            .map_err(|er| GlobalError(format!("edge {}: {}", idx, er)))?;
        total.add_class(&transport(&t, &g.charts[e.charts.0].exp_map()));
    }
    if g.the_face().is_some() {
        // face weights enter in global coordinates
        let face = g.the_face().unwrap();
        let l_weights: Vec<Exp> = (0..g.charts.len())
            .map(|c| {
                let w = lb.weights[c];
                [
                    2 * (w[0] * power) as i32,
                    2 * (w[1] * power) as i32,
                    2 * (w[2] * power) as i32,
                    2 * (w[3] * power) as i32,
                    0,
                ]
            })
            .collect();
        let _ = face;
        let input = face_input(g, fp, &l_weights);
        let t = face_term(&input, Flavor::HalvedTilde)
            .map_err(|e| GlobalError(format!("face: {}", e)))?;
        total.add_class(&t);
    }
    Ok(total)
}

fn transport(c: &WeightClass, map: &[[i32; 5]; 5]) -> WeightClass {
    let poly = c.to_poly().substitute(map);
    WeightClass::from_poly(&poly).expect("transported class stays integral")
}

/// Computes the class data and bracket of one fixed point.  The curve degree
/// and Euler characteristic come from the ranks of the twisted global
/// sections at bundle powers 0, 1, 2.
pub fn compute_term(
    g: &ToricGeometry,
    fp: &GlobalFixedPoint,
    polarization: &str,
    surface_selfint: i64,
) -> Result<GlobalTerm, GlobalError> {
    let class0 = total_class(g, fp, polarization, 0)?;
    let vd = class0.y_graded_part(0).rank();
    let chi0 = -class0.y_graded_part(1).rank();
    let class1 = total_class(g, fp, polarization, 1)?;
    let chi1 = -class1.y_graded_part(1).rank();
    let class2 = total_class(g, fp, polarization, 2)?;
    let chi2 = -class2.y_graded_part(1).rank();
    // chi_k = n + k m + k^2 d (L.L.S)/2
    let dd2 = chi2 - 2 * chi1 + chi0; // = d * L.L.S
    assert_eq!(dd2 % surface_selfint, 0, "class data not integral");
    let d = dd2 / surface_selfint;
    let m2 = 4 * chi1 - chi2 - 3 * chi0; // doubled curve degree
    let n = chi0;
    let bracket = class0
        .negate()
        .cy_normalize()
        .bracket()
        .map_err(|e| GlobalError(format!("{}: {}", fp.label(), e)))?;
    Ok(GlobalTerm {
        label: fp.label(),
        d,
        m2,
        n,
        vd,
        bracket,
    })
}

/// One coefficient of a global series: exact value in `y^{1/2}` plus
/// provenance.
#[derive(Clone, Debug)]
pub struct GlobalCoefficient {
    pub m2: i64,
    pub n: i64,
    pub value: ZRat,
    pub fixed_points: usize,
    pub signs: Vec<(String, i8)>,
    /// Number of essentially different sign solutions (after the global
    /// flip) that cancel all poles.
    pub solutions: usize,
}

#[derive(Clone, Debug)]
pub struct GlobalSeries {
    pub geometry: String,
    pub kind: GlobalKind,
    pub d: i64,
    pub coefficients: Vec<GlobalCoefficient>,
}

impl fmt::Display for GlobalSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{} series on {} at surface degree {}",
            self.kind, self.geometry, self.d
        )?;
        for c in &self.coefficients {
            writeln!(
                f,
                "q^{} Q^{}: {}   [{} fixed points]",
                c.n,
                if c.m2 % 2 == 0 {
                    format!("{}", c.m2 / 2)
                } else {
                    format!("{}/2", c.m2)
                },
                c.value,
                c.fixed_points
            )?;
        }
        Ok(())
    }
}

/// Computes the coefficients of the generating series in `q, Q` for fixed
/// surface degree `d` on a local surface geometry, with the equivariant
/// parameters specialized along the default cocharacter.  Signs are searched
/// per coefficient: the poles of the individual contributions must cancel in
/// the sum.
pub fn global_series(
    g: &ToricGeometry,
    kind: GlobalKind,
    d: u32,
    m2_range: (i64, i64),
    n_range: (i64, i64),
    budget: &EnumBudget,
) -> Result<GlobalSeries, GlobalError> {
    if !g.tot_ky {
        return Err(GlobalError(
            "global series needs the canonical-bundle structure".into(),
        ));
    }
    let (polarization, selfint) = polarization_of(g)?;
    let fps = enumerate_global(g, kind, d, budget)?;
    let terms: Result<Vec<GlobalTerm>, GlobalError> = fps
        .par_iter()
        .map(|fp| compute_term(g, fp, polarization, selfint))
        .collect();
    let mut groups: BTreeMap<(i64, i64), Vec<GlobalTerm>> = BTreeMap::new();
    for t in terms? {
        if t.d != d as i64 {
            continue;
        }
        if t.m2 < m2_range.0 || t.m2 > m2_range.1 || t.n < n_range.0 || t.n > n_range.1 {
            continue;
        }
        groups.entry((t.m2, t.n)).or_default().push(t);
    }
    let coefficients: Result<Vec<GlobalCoefficient>, GlobalError> = groups
        .into_iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|((m2, n), terms)| solve_group(m2, n, terms))
        .collect();
    Ok(GlobalSeries {
        geometry: g.name.clone(),
        kind,
        d: d as i64,
        coefficients: coefficients?,
    })
}

pub fn polarization_of(g: &ToricGeometry) -> Result<(&'static str, i64), GlobalError> {
    if g.bundles.contains_key("O(1)") {
        // L . L . [S]: 1 for the projective plane, 2 for the quadric surface
        let selfint = if g.name.starts_with("local-p1p1") { 2 } else { 1 };
        Ok(("O(1)", selfint))
    } else {
        Err(GlobalError("geometry has no polarization bundle".into()))
    }
}

/// Per-coefficient sign search and exact summation.
fn solve_group(m2: i64, n: i64, terms: Vec<GlobalTerm>) -> Result<GlobalCoefficient, GlobalError> {
    let a = DEFAULT_COCHARACTER;
    let live: Vec<&GlobalTerm> = terms.iter().filter(|t| !t.bracket.is_zero()).collect();
    if live.is_empty() {
        return Ok(GlobalCoefficient {
            m2,
            n,
            value: ZRat::zero(),
            fixed_points: terms.len(),
            signs: Vec::new(),
            solutions: 1,
        });
    }
    // expansion depth: enough coefficients to reach the constant term
    let mut max_pole = 0i64;
    for t in &live {
        let mut pole = 0i64;
        for (w, m) in t.bracket.factors.iter() {
            if w[4] == 0 {
                pole -= m;
            }
        }
        max_pole = max_pole.max(pole);
    }
    let len = max_pole.max(0) as usize + 2;
    let series: Result<Vec<EpsSeries>, _> = live
        .iter()
        .map(|t| bracket_eps(&t.bracket, &a, len + 4))
        .collect();
    let series = series.map_err(|e| GlobalError(format!("q^{} Q^{}/2: {}", n, m2, e)))?;
    // numeric signature of the pole part of each term
    let evals: Vec<ModEval> = [5u64, 13, 37].iter().map(|s| ModEval::new(*s)).collect();
    let zroots: Vec<u64> = vec![982451653, 217645199, 334214467];
    // aligned pole-coefficient signatures: for every evaluation point the
    // coefficients of eps^{-max_pole} .. eps^{-1}
    let mut rows: Vec<Vec<u64>> = Vec::new();
    let mut depths: Vec<i32> = Vec::new();
    for s in &series {
        let mut row = Vec::new();
        for (ev, zr) in evals.iter().zip(zroots.iter()) {
            for k in -(max_pole as i32)..0 {
                row.push(eval_zrat_mod(&s.coeff(k), *zr, ev));
            }
        }
        depths.push((-s.lead).max(0));
        rows.push(row);
    }
    let solutions = pole_sign_solutions(&rows, &depths, max_pole as i32, evals.len());
    if solutions.is_empty() {
        return Err(GlobalError(format!(
            "q^{} Q^{}/2: no sign assignment cancels the specialization poles",
            n, m2
        )));
    }
    // exact verification and value for each candidate, deduplicated up to
    // the global flip
    let mut values: Vec<(ZRat, Vec<i8>)> = Vec::new();
    'cand: for sol in &solutions {
        let mut total: Option<EpsSeries> = None;
        for (s, sign) in series.iter().zip(sol.iter()) {
            let scaled = s.scale(&ZRat::from_poly(crate::algebra::ZPoly::constant(
                crate::algebra::rat_pub(*sign as i64),
            )));
            total = Some(match total {
                None => scaled,
                Some(t) => t.add(&scaled),
            });
        }
        let total = total.unwrap().normalized_public();
        if !total.is_empty() && total.lead < 0 {
            continue 'cand; // numeric collision: poles did not really cancel
        }
        let value = if total.is_empty() || total.lead > 0 {
            ZRat::zero()
        } else {
            total.coeffs[0].clone()
        };
        // dedup up to global flip
        let flipped: Vec<i8> = sol.iter().map(|s| -s).collect();
        if values.iter().any(|(_, vs)| *vs == *sol || *vs == flipped) {
            continue;
        }
        values.push((value, sol.clone()));
    }
    if values.is_empty() {
        return Err(GlobalError(format!(
            "q^{} Q^{}/2: pole cancellation failed exact verification",
            n, m2
        )));
    }
    // canonical representative: positive leading coefficient
    let canonical = |v: &ZRat, signs: &[i8]| -> (ZRat, Vec<i8>) {
        let lead_positive = match v.num.max_deg() {
            Some(k) => v.num.coeff(k).is_positive(),
            None => true,
        };
        if lead_positive {
            (v.clone(), signs.to_vec())
        } else {
            (v.neg(), signs.iter().map(|s| -s).collect())
        }
    };
    let distinct: std::collections::BTreeSet<String> = values
        .iter()
        .map(|(v, s)| format!("{}", canonical(v, s).0))
        .collect();
    let (value, sol) = canonical(&values[0].0, &values[0].1);
    let mut signs: Vec<(String, i8)> = live
        .iter()
        .zip(sol.iter())
        .map(|(t, s)| (t.label.clone(), *s))
        .collect();
    signs.sort();
    Ok(GlobalCoefficient {
        m2,
        n,
        value,
        fixed_points: terms.len(),
        signs,
        solutions: distinct.len(),
    })
}

fn eval_zrat_mod(z: &ZRat, zroot: u64, ev: &ModEval) -> u64 {
    let evalp = |p: &crate::algebra::ZPoly| -> u64 {
        let mut total = 0u64;
        for (k, c) in p.iter() {
            let base = if *k >= 0 {
                pow_mod_p(zroot, *k as u64, ev.p)
            } else {
                ev.inv(pow_mod_p(zroot, (-*k) as u64, ev.p))
            };
            let cv = rat_mod(c, ev);
            total = ev.add(total, ev.mul(cv, base));
        }
        total
    };
    let n = evalp(&z.num);
    let d = evalp(&z.den);
    ev.mul(n, ev.inv(d))
}

fn rat_mod(r: &crate::algebra::Rat, ev: &ModEval) -> u64 {
    use num_traits::ToPrimitive;
    let m = |x: &num_bigint::BigInt| -> u64 {
        let v = (x % num_bigint::BigInt::from(ev.p)).to_i64().unwrap();
        if v < 0 {
            (v + ev.p as i64) as u64
        } else {
            v as u64
        }
    };
    ev.mul(m(r.numer()), ev.inv(m(r.denom())))
}

fn pow_mod_p(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
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

/// Depth-ordered branch-and-prune ±1 solver: the coefficient of a given
/// pole depth only involves the terms whose own pole reaches that depth, so
/// signs are assigned deepest-first and every completed depth class is
/// checked immediately.
fn pole_sign_solutions(
    rows: &[Vec<u64>],
    depths: &[i32],
    max_pole: i32,
    npoints: usize,
) -> Vec<Vec<i8>> {
    let n = rows.len();
    if n == 0 {
        return vec![Vec::new()];
    }
    const P: u64 = (1 << 61) - 1;
    // order terms by decreasing pole depth
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| -depths[i]);
    // checkpoint after the last term whose depth reaches a given level
    // (coefficient index): when all terms of depth >= level are placed, the
    // level's coordinates are final
    let coord = |point: usize, k: i32| -> usize { point * max_pole as usize + (k + max_pole) as usize };
    let mut out: Vec<Vec<i8>> = Vec::new();
    let mut signs = vec![0i8; n];
    let mut sums = vec![0u64; (max_pole.max(0) as usize) * npoints];
    const CAP: usize = 1 << 14;
    fn dfs(
        pos: usize,
        order: &[usize],
        rows: &[Vec<u64>],
        depths: &[i32],
        max_pole: i32,
        npoints: usize,
        signs: &mut Vec<i8>,
        sums: &mut Vec<u64>,
        out: &mut Vec<Vec<i8>>,
        coord: &dyn Fn(usize, i32) -> usize,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        // depth levels fully decided once all terms with depth >= level are
        // placed: check every level in (next_depth, current_depth]
        let placed_depth = if pos == 0 { i32::MAX } else { depths[order[pos - 1]] };
        let next_depth = if pos < order.len() { depths[order[pos]] } else { 0 };
        if pos > 0 {
            for level in (next_depth + 1)..=placed_depth.min(max_pole) {
                let k = -level;
                for point in 0..npoints {
                    if sums[coord(point, k)] != 0 {
                        return; // pruned: this pole cannot cancel any more
                    }
                }
            }
        }
        if pos == order.len() {
            out.push(signs.clone());
            return;
        }
        let idx = order[pos];
        for s in [1i8, -1] {
            signs[idx] = s;
            for c in 0..sums.len() {
                let v = rows[idx][c];
                sums[c] = if s == 1 { (sums[c] + v) % P } else { (sums[c] + P - v) % P };
            }
            dfs(
                pos + 1,
                order,
                rows,
                depths,
                max_pole,
                npoints,
                signs,
                sums,
                out,
                coord,
                cap,
            );
            for c in 0..sums.len() {
                let v = rows[idx][c];
                sums[c] = if s == 1 { (sums[c] + P - v) % P } else { (sums[c] + v) % P };
            }
            signs[idx] = 0;
        }
    }
    dfs(
        0, &order, rows, depths, max_pole, npoints, &mut signs, &mut sums, &mut out, &coord, CAP,
    );
    out.sort();
    out
}
