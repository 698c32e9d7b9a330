use super::qseries::QSeries;
use super::signs::{sign_two_dim, sign_zero_dim, SignAssignment, SignMode, SignProvenance};
use crate::algebra::{BracketProduct, SqrtSplit, WeightClass};
use crate::local_terms::{vertex_term, Flavor, VertexInput};
use crate::partitions::{
    enumerate_solid_partitions, pt0_enumerate, PlanePartition, SolidPartition,
};
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SeriesError {
    Asymptotics(String),
    Scope(String),
    Term(String),
    /// The square-root split failed for the named fixed point.
    DegenerateSqrt(String),
    /// Sign search exhausted its budget or found no solution.
    SignSearch(String),
}

impl fmt::Display for SeriesError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesError::Asymptotics(s) => write!(f, "inconsistent asymptotics: {}", s),
            SeriesError::Scope(s) => write!(f, "{}", s),
            SeriesError::Term(s) => write!(f, "term assembly failed: {}", s),
            SeriesError::DegenerateSqrt(s) => write!(f, "degenerate square root at {}", s),
            SeriesError::SignSearch(s) => write!(f, "sign search failed: {}", s),
        }
    }
}

impl std::error::Error for SeriesError {}

/// One enumerated fixed point with its canonical bracket contribution.
#[derive(Clone, Debug)]
pub struct FixedPointTerm {
    pub label: String,
    pub q_order: i64,
    /// Canonical bracket (sign-free); zero when the contribution vanishes.
    pub bracket: BracketProduct,
    /// Formula sign when a formula mode applies.
    pub formula_sign: Option<i8>,
}

/// Square-root contribution of a twisted class: splits `-C` and brackets the
/// canonical half.
pub fn sqrt_contribution(tilde: &WeightClass) -> Result<Option<BracketProduct>, String> {
    let neg = tilde.negate().cy_normalize();
    match neg.sqrt_split() {
        SqrtSplit::Half(h) => Ok(Some(h.bracket().map_err(|e| e.to_string())?)),
        SqrtSplit::Zero => Ok(None),
        SqrtSplit::Degenerate => Err("class is not self-dual".into()),
    }
}

/// Halved contribution `[-c]` of a halved twisted class.
pub fn halved_contribution(halved_tilde: &WeightClass) -> Result<Option<BracketProduct>, String> {
    let neg = halved_tilde.negate().cy_normalize();
    match neg.bracket() {
        Ok(b) => Ok(if b.is_zero() { None } else { Some(b) }),
        Err(e) => Err(e.to_string()),
    }
}

fn term_label(kind: &str, pi: &SolidPartition) -> String {
    let boxes: Vec<String> = pi
        .extra_boxes()
        .map(|b| format!("({},{},{},{})", b[0], b[1], b[2], b[3]))
        .collect();
    format!("{}[{}]", kind, boxes.join(""))
}

/// Enumerates the DT fixed points over the asymptotics `mu` through
/// `max_added` embedded boxes and computes their canonical brackets.
///
/// `halved` selects the explicit half (needs support on `Z(x4)`);
/// otherwise the square-root split of the twisted vertex is used.
pub fn dt_vertex_terms(
    mu: &[PlanePartition; 4],
    max_added: usize,
    halved: bool,
) -> Result<Vec<FixedPointTerm>, SeriesError> {
    let levels = enumerate_solid_partitions(mu, max_added)
        .map_err(|e| SeriesError::Asymptotics(e.to_string()))?;
    let mut out = Vec::new();
    for level in levels {
        for pi in level {
            let d = pi.decompose();
            let q_order = d.rank();
            let label = term_label("dt", &pi);
            let input = VertexInput::new(d);
            let bracket = if halved {
                let vt = vertex_term(&input, Flavor::HalvedTilde)
                    .map_err(|e| SeriesError::Term(format!("{} at {}", e, label)))?;
                halved_contribution(&vt)
            } else {
                let vt = vertex_term(&input, Flavor::Tilde)
                    .map_err(|e| SeriesError::Term(format!("{} at {}", e, label)))?;
                sqrt_contribution(&vt)
            }
            .map_err(|e| SeriesError::DegenerateSqrt(format!("{}: {}", label, e)))?;
            let formula_sign = if halved {
                if mu.iter().all(|m| m.is_empty()) {
                    sign_zero_dim(&pi).ok()
                } else {
                    sign_two_dim(&pi).ok()
                }
            } else {
                None
            };
            out.push(FixedPointTerm {
                label,
                q_order,
                bracket: bracket.unwrap_or_else(|| {
                    let mut b = BracketProduct::one();
                    b.zero = true;
                    b
                }),
                formula_sign,
            });
        }
    }
    Ok(out)
}

/// Enumerates the PT0 fixed points over `mu` through configurations of
/// `max_size` boxes.
pub fn pt0_vertex_terms(
    mu: &[PlanePartition; 4],
    max_size: usize,
    halved: bool,
) -> Result<Vec<FixedPointTerm>, SeriesError> {
    let base = SolidPartition::minimal(mu.clone())
        .map_err(|e| SeriesError::Asymptotics(e.to_string()))?;
    let base_decomp = base.decompose();
    let offset = base_decomp.rank();
    let levels = pt0_enumerate(mu, max_size).map_err(|e| SeriesError::Scope(e.to_string()))?;
    let mut out = Vec::new();
    for (size, level) in levels.into_iter().enumerate() {
        for cfg in level {
            let mut d = base_decomp.clone();
            // the pair character adds the box configuration to the finite
            // part
            d.w.add_assign(&cfg.character.num);
            debug_assert!(cfg.character.den_factors().count() == 0);
            let boxes: Vec<String> = cfg
                .boxes
                .iter()
                .map(|b| format!("({},{},{},{})", b[0], b[1], b[2], b[3]))
                .collect();
            let label = format!("pt0[{}]", boxes.join(""));
            let input = VertexInput::new(d);
            let bracket = if halved {
                let vt = vertex_term(&input, Flavor::HalvedTilde)
                    .map_err(|e| SeriesError::Term(format!("{} at {}", e, label)))?;
                halved_contribution(&vt)
            } else {
                let vt = vertex_term(&input, Flavor::Tilde)
                    .map_err(|e| SeriesError::Term(format!("{} at {}", e, label)))?;
                sqrt_contribution(&vt)
            }
            .map_err(|e| SeriesError::DegenerateSqrt(format!("{}: {}", label, e)))?;
            out.push(FixedPointTerm {
                label,
                q_order: offset + size as i64,
                bracket: bracket.unwrap_or_else(|| {
                    let mut b = BracketProduct::one();
                    b.zero = true;
                    b
                }),
                formula_sign: None,
            });
        }
    }
    Ok(out)
}

/// Assembles a series from fixed-point terms and a sign assignment.
pub fn assemble(terms: &[FixedPointTerm], signs: &SignAssignment, trunc: i64) -> QSeries {
    use crate::algebra::MonomialFraction;
    use std::collections::BTreeMap;
    let mut per_order: BTreeMap<i64, Vec<MonomialFraction>> = BTreeMap::new();
    for t in terms {
        if t.bracket.is_zero() || t.q_order >= trunc {
            continue;
        }
        let sign = signs.get(&t.label).unwrap_or(1);
        per_order
            .entry(t.q_order)
            .or_default()
            .push(t.bracket.scaled(&crate::algebra::rat(sign as i64)).to_fraction());
    }
    let mut s = QSeries::zero(trunc);
    for (order, parts) in per_order {
        s.set(order, MonomialFraction::sum(&parts));
    }
    s
}

fn formula_assignment(
    terms: &[FixedPointTerm],
    provenance: SignProvenance,
) -> Result<SignAssignment, SeriesError> {
    let mut signs = SignAssignment {
        provenance: Some(provenance),
        signs: Default::default(),
    };
    for t in terms {
        if t.bracket.is_zero() {
            continue;
        }
        let s = t.formula_sign.ok_or_else(|| {
            SeriesError::Term(format!("no formula sign available for {}", t.label))
        })?;
        signs.signs.insert(t.label.clone(), s);
    }
    Ok(signs)
}

/// DT topological vertex through `q^order` relative to the leading power.
pub fn dt_vertex_series(
    mu: &[PlanePartition; 4],
    order: i64,
    mode: &SignMode,
) -> Result<(QSeries, SignAssignment), SeriesError> {
    let halved = matches!(mode, SignMode::FormulaZeroDim | SignMode::FormulaTwoDim);
    let terms = dt_vertex_terms(mu, order.max(0) as usize, halved)?;
    let min_order = terms.iter().map(|t| t.q_order).min().unwrap_or(0);
    let trunc = min_order + order + 1;
    let signs = match mode {
        SignMode::FormulaZeroDim => formula_assignment(&terms, SignProvenance::FormulaZeroDim)?,
        SignMode::FormulaTwoDim => formula_assignment(&terms, SignProvenance::FormulaTwoDim)?,
        SignMode::Explicit(map) => SignAssignment {
            provenance: Some(SignProvenance::Explicit),
            signs: map.clone(),
        },
        SignMode::Search => {
            return Err(SeriesError::SignSearch(
                "use verify_correspondence to search signs".into(),
            ))
        }
    };
    Ok((assemble(&terms, &signs, trunc), signs))
}

/// PT0 topological vertex through box size `order`.
pub fn pt0_vertex_series(
    mu: &[PlanePartition; 4],
    order: i64,
    mode: &SignMode,
) -> Result<(QSeries, SignAssignment), SeriesError> {
    let halved = matches!(mode, SignMode::FormulaZeroDim | SignMode::FormulaTwoDim);
    let terms = pt0_vertex_terms(mu, order.max(0) as usize, halved)?;
    let min_order = terms.iter().map(|t| t.q_order).min().unwrap_or(0);
    let trunc = min_order + order + 1;
    let signs = match mode {
        SignMode::Explicit(map) => SignAssignment {
            provenance: Some(SignProvenance::Explicit),
            signs: map.clone(),
        },
        _ => {
            return Err(SeriesError::SignSearch(
                "PT0 signs come from search or explicit tables".into(),
            ))
        }
    };
    Ok((assemble(&terms, &signs, trunc), signs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{minimal_plane_partitions, FinitePartition, LambdaSet};

    fn empty_mu() -> [PlanePartition; 4] {
        Default::default()
    }

    #[test]
    fn magnificent_four_matches_enumeration() {
        // signed DT enumeration over solid partitions of size <= 4 equals
        // the plethystic expansion
        let order = 4;
        let terms = dt_vertex_terms(&empty_mu(), order as usize, true).unwrap();
        assert_eq!(terms.len(), 1 + 1 + 4 + 10 + 26);
        let signs = formula_assignment(&terms, SignProvenance::FormulaZeroDim).unwrap();
        let series = assemble(&terms, &signs, order + 1);
        let reference = super::super::plethystic::magnificent_four(order);
        for k in 0..=order {
            assert!(
                series.coeff(k).eq_rational(&reference.coeff(k)),
                "coefficient mismatch at q^{}",
                k
            );
        }
    }

    #[test]
    fn pt0_closed_form_two_planes() {
        // lambda_12 = lambda_34 = 1: V = [t1t3][t2t3]/[y] q^{-1} + [t1t2]
        let mut l = LambdaSet::empty();
        l.set(0, 1, FinitePartition::one());
        l.set(2, 3, FinitePartition::one());
        let mu = minimal_plane_partitions(&l);
        let terms = pt0_vertex_terms(&mu, 2, false).unwrap();
        assert_eq!(terms.len(), 2);
        assert_eq!(terms[0].q_order, -1);
        assert_eq!(terms[1].q_order, 0);
        // expected brackets
        let c0 = WeightClass::from_weights([
            ([1, 0, 1, 0, 0], 1),
            ([0, 1, 1, 0, 0], 1),
            ([0, 0, 0, 0, 1], -1),
        ]);
        let b0 = c0.bracket().unwrap().to_fraction();
        let t0 = terms[0].bracket.to_fraction();
        assert!(
            t0.eq_rational(&b0) || t0.eq_rational(&b0.neg()),
            "got {}",
            t0
        );
        let c1 = WeightClass::from_weights([([1, 1, 0, 0, 0], 1)]);
        let b1 = c1.bracket().unwrap().to_fraction();
        let t1 = terms[1].bracket.to_fraction();
        assert!(
            t1.eq_rational(&b1) || t1.eq_rational(&b1.neg()),
            "got {}",
            t1
        );
    }
}
