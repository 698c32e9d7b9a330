use super::{halved_content, trace_content, Flavor, TermError};
use crate::algebra::{Exp, LaurentPoly, MonomialFraction, Rat, WeightClass};
use crate::partitions::FinitePartition;
use num_traits::One;

/// One chart of a face: the images of the local coordinates (surface
/// directions `t1, t2`, normal directions `t3, t4`) in the reference
/// lattice, as doubled exponents, plus the local line-bundle weight.
#[derive(Clone, Debug)]
pub struct FaceChart {
    pub map: [Exp; 5],
    pub l_weight: Exp,
}

impl FaceChart {
    pub fn identity() -> Self {
        let mut map = [[0i32; 5]; 5];
        for i in 0..5 {
            map[i][i] = 2;
        }
        FaceChart {
            map,
            l_weight: [0; 5],
        }
    }
}

/// Face input: the normal-direction partition and the chart cycle.
#[derive(Clone, Debug)]
pub struct FaceInput {
    pub lambda: FinitePartition,
    pub charts: Vec<FaceChart>,
}

/// Assembles the face term by summing the per-chart fractions over a common
/// denominator and dividing exactly.
pub fn face_term(input: &FaceInput, flavor: Flavor) -> Result<WeightClass, TermError> {
    if input.lambda.is_empty() {
        return Ok(WeightClass::empty());
    }
    // local building blocks in (t3, t4)
    let z_local = input.lambda.character(2, 3);
    let content_local = if flavor.is_halved() {
        halved_content(&MonomialFraction::from_poly(z_local.clone()), &[2], 1)
    } else {
        trace_content(&MonomialFraction::from_poly(z_local.clone()), &[2, 3], 1)
    };
    let content_poly = content_local
        .expand_to_laurent()
        .map_err(|_| TermError::RedistributionFailed("face content"))?;
    let mut total = MonomialFraction::zero();
    for chart in &input.charts {
        let mapped = content_poly.substitute(&chart.map);
        let mut part = MonomialFraction::from_poly(mapped);
        let (w1, w2) = chart_surface_weights(chart);
        part.div_by_binomial(w1, 1);
        part.div_by_binomial(w2, 1);
        total = total.add(&part);
    }
    if flavor.is_tilde() {
        let y: Exp = [0, 0, 0, 0, 2];
        let y_inv: Exp = [0, 0, 0, 0, -2];
        for chart in &input.charts {
            let z_mapped = z_local
                .substitute(&chart.map)
                .mul_monomial(chart.l_weight, &Rat::one());
            let (w1, w2) = chart_surface_weights(chart);
            // - y conj(Z)/( (1 - eta^{-w1})(1 - eta^{-w2}) )
            let mut blk = MonomialFraction::from_poly(
                z_mapped.conjugate().mul_monomial(y, &-Rat::one()),
            );
            blk.div_by_binomial(neg(w1), 1);
            blk.div_by_binomial(neg(w2), 1);
            total = total.add(&blk);
            if !flavor.is_halved() {
                let mut blk = MonomialFraction::from_poly(
                    z_mapped.mul_monomial(y_inv, &-Rat::one()),
                );
                blk.div_by_binomial(w1, 1);
                blk.div_by_binomial(w2, 1);
                total = total.add(&blk);
            }
        }
    }
    let poly = total
        .expand_to_laurent()
        .map_err(|_| TermError::RedistributionFailed("face"))?;
    let class = WeightClass::from_poly(&poly).map_err(|_| TermError::BadCharacter)?;
    if !flavor.is_tilde() && class.cy_normalize().fixed_part_multiplicity() != 0 {
        return Err(TermError::PositiveFixedTerm("face"));
    }
    Ok(class)
}

fn chart_surface_weights(chart: &FaceChart) -> (Exp, Exp) {
    (chart.map[0], chart.map[1])
}

fn neg(e: Exp) -> Exp {
    let mut out = e;
    for x in out.iter_mut() {
        *x = -*x;
    }
    out
}

/// The per-chart face content `A_f` has no terms `(t3 t4)^n`; checked as a
/// cheap property on small partitions.
pub fn face_content_has_no_diagonal(lambda: &FinitePartition) -> bool {
    let z = lambda.character(2, 3);
    let content = trace_content(&MonomialFraction::from_poly(z), &[2, 3], 1)
        .expand_to_laurent()
        .expect("face content is polynomial");
    content
        .sorted_terms()
        .iter()
        .all(|(e, _)| !(e[0] == 0 && e[1] == 0 && e[2] == e[3] && e[4] == 0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_face_is_empty() {
        let input = FaceInput {
            lambda: FinitePartition::empty(),
            charts: vec![FaceChart::identity()],
        };
        assert!(face_term(&input, Flavor::Plain).unwrap().is_empty());
    }

    #[test]
    fn no_diagonal_terms_in_content() {
        for n in 0..=4u32 {
            for lam in FinitePartition::all_of_size(n) {
                assert!(face_content_has_no_diagonal(&lam), "lambda {:?}", lam);
            }
        }
    }
}
