use super::{halved_content, trace_content, Flavor, TermError};
use crate::algebra::{Exp, LaurentPoly, MonomialFraction, WeightClass};
use crate::partitions::{Decomposition, PAIR_ORDER};

/// Vertex input: the decomposition of the chart character of the pair
/// (solid partition plus any box-configuration modification already folded
/// in), together with the chart weight of the insertion line bundle.
#[derive(Clone, Debug)]
pub struct VertexInput {
    pub decomp: Decomposition,
    /// Doubled exponent of the line-bundle chart weight folded into `y`
    /// (identity for the trivial bundle).
    pub l_weight: Exp,
}

impl VertexInput {
    pub fn new(decomp: Decomposition) -> Self {
        VertexInput {
            decomp,
            l_weight: [0; 5],
        }
    }

    pub fn with_l_weight(decomp: Decomposition, l_weight: Exp) -> Self {
        VertexInput { decomp, l_weight }
    }

    /// `Z_{alpha beta_a}`: restriction of the character to the `a`-th
    /// punctured direction.
    pub(crate) fn edge_restriction(&self, a: usize) -> MonomialFraction {
        let mut out = MonomialFraction::from_poly(self.decomp.wi[a].clone());
        for b in 0..4 {
            if b == a {
                continue;
            }
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            let lam = &self.decomp.wij[crate::partitions::pair_index(lo, hi)];
            if lam.is_zero() {
                continue;
            }
            let mut part = MonomialFraction::from_poly(lam.clone());
            let mut dir = [0i32; 5];
            dir[b] = 1;
            part.div_by_one_minus(dir);
            out = out.add(&part);
        }
        out
    }
}

/// Assembles the vertex term of the requested flavor and expands it to a
/// weight class by exact division.
pub fn vertex_term(input: &VertexInput, flavor: Flavor) -> Result<WeightClass, TermError> {
    let d = &input.decomp;
    let z = d.character();
    let mut total = if flavor.is_halved() {
        // support must avoid asymptotic data in the fibre direction
        if !d.wi[3].is_zero()
            || PAIR_ORDER
                .iter()
                .enumerate()
                .any(|(k, &(_, b))| b == 3 && !d.wij[k].is_zero())
        {
            return Err(TermError::NotSupportedOnHyperplane);
        }
        let mut v = halved_content(&z, &[0, 1, 2], 1);
        for i in 0..3 {
            let zi = input.edge_restriction(i);
            let (j, k) = complement3(i);
            let mut a = halved_content(&zi, &[j, k], -1);
            let mut dir = [0i32; 5];
            dir[i] = 1;
            a.div_by_one_minus(dir);
            v = v.add(&a);
        }
        for (idx, &(i, j)) in PAIR_ORDER.iter().enumerate() {
            if j == 3 {
                continue;
            }
            let lam = &d.wij[idx];
            if lam.is_zero() {
                continue;
            }
            let k = (0..3).find(|&x| x != i && x != j).unwrap();
            let mut a = halved_content(&MonomialFraction::from_poly(lam.clone()), &[k], 1);
            let mut di = [0i32; 5];
            di[i] = 1;
            let mut dj = [0i32; 5];
            dj[j] = 1;
            a.div_by_one_minus(di);
            a.div_by_one_minus(dj);
            v = v.add(&a);
        }
        v
    } else {
        let mut v = trace_content(&z, &[0, 1, 2, 3], 1);
        for i in 0..4 {
            let zi = input.edge_restriction(i);
            let rest: Vec<usize> = (0..4).filter(|&x| x != i).collect();
            let mut a = trace_content(&zi, &rest, -1);
            let mut dir = [0i32; 5];
            dir[i] = 1;
            a.div_by_one_minus(dir);
            v = v.add(&a);
        }
        for (idx, &(i, j)) in PAIR_ORDER.iter().enumerate() {
            let lam = &d.wij[idx];
            if lam.is_zero() {
                continue;
            }
            let rest: Vec<usize> = (0..4).filter(|&x| x != i && x != j).collect();
            let mut a = trace_content(&MonomialFraction::from_poly(lam.clone()), &rest, 1);
            let mut di = [0i32; 5];
            di[i] = 1;
            let mut dj = [0i32; 5];
            dj[j] = 1;
            a.div_by_one_minus(di);
            a.div_by_one_minus(dj);
            v = v.add(&a);
        }
        v
    };
    if flavor.is_tilde() {
        // the y-insertion blocks collapse onto the finite part W of the
        // decomposition, twisted by the line-bundle chart weight
        let y: Exp = [0, 0, 0, 0, 2];
        let y_inv: Exp = [0, 0, 0, 0, -2];
        let chi_w = d.w.mul_monomial(input.l_weight, &num_traits::One::one());
        let y_block = chi_w
            .conjugate()
            .mul_monomial(y, &-num_traits::one::<crate::algebra::Rat>());
        total = total.add(&MonomialFraction::from_poly(y_block));
        if !flavor.is_halved() {
            let y_inv_block = chi_w.mul_monomial(y_inv, &-num_traits::one::<crate::algebra::Rat>());
            total = total.add(&MonomialFraction::from_poly(y_inv_block));
        }
    }
    let poly = total
        .expand_to_laurent()
        .map_err(|_| TermError::RedistributionFailed("vertex"))?;
    let class = WeightClass::from_poly(&poly).map_err(|_| TermError::BadCharacter)?;
    if !flavor.is_tilde() && class.cy_normalize().fixed_part_multiplicity() > 0 {
        return Err(TermError::PositiveFixedTerm("vertex"));
    }
    Ok(class)
}

fn complement3(i: usize) -> (usize, usize) {
    match i {
        0 => (1, 2),
        1 => (0, 2),
        _ => (0, 1),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::SolidPartition;

    #[test]
    fn empty_vertex_is_empty() {
        let input = VertexInput::new(SolidPartition::empty().decompose());
        for flavor in [Flavor::Plain, Flavor::Tilde, Flavor::Halved, Flavor::HalvedTilde] {
            let v = vertex_term(&input, flavor).unwrap();
            assert!(v.is_empty(), "{:?}", flavor);
        }
    }

    #[test]
    fn single_point_plain_vertex() {
        // V = sum_i (t_i + t_i^{-1}) - sum_{i<j} t_i t_j modulo the CY
        // relation
        let input = VertexInput::new(SolidPartition::point().decompose());
        let v = vertex_term(&input, Flavor::Plain).unwrap();
        let mut expect = WeightClass::empty();
        for i in 0..4 {
            let mut w = [0i32; 5];
            w[i] = 1;
            expect.add(w, 1);
            let mut nw = [0i32; 5];
            nw[i] = -1;
            expect.add(nw, 1);
        }
        for i in 0..4 {
            for j in (i + 1)..4 {
                let mut w = [0i32; 5];
                w[i] = 1;
                w[j] = 1;
                expect.add(w, -1);
            }
        }
        assert_eq!(v.cy_normalize(), expect.cy_normalize());
        assert_eq!(v.rank(), 2);
    }

    #[test]
    fn single_point_halves_add_up() {
        let input = VertexInput::new(SolidPartition::point().decompose());
        let v = vertex_term(&input, Flavor::Plain).unwrap();
        let h = vertex_term(&input, Flavor::Halved).unwrap();
        let mut sum = h.clone();
        sum.add_class(&h.conjugate());
        assert_eq!(sum.cy_normalize(), v.cy_normalize());
        // tilde versions as well
        let vt = vertex_term(&input, Flavor::Tilde).unwrap();
        let ht = vertex_term(&input, Flavor::HalvedTilde).unwrap();
        let mut sum = ht.clone();
        sum.add_class(&ht.conjugate());
        assert_eq!(sum.cy_normalize(), vt.cy_normalize());
    }

    #[test]
    fn single_point_tilde_rank_vanishes() {
        let input = VertexInput::new(SolidPartition::point().decompose());
        let vt = vertex_term(&input, Flavor::Tilde).unwrap();
        assert_eq!(vt.rank(), 0);
    }
}
