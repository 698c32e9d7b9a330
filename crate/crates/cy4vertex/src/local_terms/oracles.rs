use super::{trace_content, TermError};
use crate::algebra::{LaurentPoly, MonomialFraction, WeightClass};
use crate::partitions::PlanePartition;
use num_traits::One;

/// Ambient space of the trace oracle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Ambient {
    /// Full affine chart; trace over directions 1..4.
    C4,
    /// Edge chart: one inverted coordinate (taken to be direction 1); the
    /// delta factor is handled symbolically and never expanded, so the
    /// oracle returns the bracket content over directions 2..4.
    C3Star,
    /// Face chart: two inverted coordinates; content over directions 3..4.
    C2StarStar,
}

/// Character of the structure sheaf cut out by a monomial ideal, via
/// inclusion-exclusion over the generator lattice (the shape of the Taylor
/// complex): `char(O_Z) = sum_{S subset gens} (-1)^{|S|} lcm(S) / prod (1 - t_i)`.
pub fn taylor_z_character(generators: &[[i32; 4]], dirs: &[usize]) -> MonomialFraction {
    assert!(generators.len() <= 8, "too many generators");
    let n = generators.len();
    let mut num = LaurentPoly::zero();
    for mask in 0u32..(1 << n) {
        let mut lcm = [0i32; 4];
        for (i, g) in generators.iter().enumerate() {
            if mask >> i & 1 == 1 {
                for k in 0..4 {
                    lcm[k] = lcm[k].max(g[k]);
                }
            }
        }
        let sign = if mask.count_ones() % 2 == 0 {
            crate::algebra::rat(1)
        } else {
            crate::algebra::rat(-1)
        };
        num.add_term([2 * lcm[0], 2 * lcm[1], 2 * lcm[2], 2 * lcm[3], 0], &sign);
    }
    let mut out = MonomialFraction::from_poly(num);
    for &d in dirs {
        let mut w = [0i32; 5];
        w[d] = 1;
        out.div_by_one_minus(w);
    }
    out
}

/// Independent computation of the local trace of `RHom(I, I)_0[1]` directly
/// from the closed formulas, with no redistribution.
pub fn taylor_oracle(
    generators: &[[i32; 4]],
    ambient: Ambient,
) -> Result<MonomialFraction, TermError> {
    if generators.len() > 8 {
        return Err(TermError::RedistributionFailed("too many generators"));
    }
    match ambient {
        Ambient::C4 => {
            for g in generators {
                assert!(g.iter().all(|&e| e >= 0));
            }
            let z = taylor_z_character(generators, &[0, 1, 2, 3]);
            Ok(trace_content(&z, &[0, 1, 2, 3], 1))
        }
        Ambient::C3Star => {
            for g in generators {
                assert_eq!(g[0], 0, "generators must not involve the circle direction");
            }
            let z = taylor_z_character(generators, &[1, 2, 3]);
            // edge shape: Z - dual(Z)/T + (P/T) Z dual(Z)
            Ok(trace_content(&z, &[1, 2, 3], -1).neg())
        }
        Ambient::C2StarStar => {
            for g in generators {
                assert_eq!(g[0], 0);
                assert_eq!(g[1], 0);
            }
            let z = taylor_z_character(generators, &[2, 3]);
            Ok(trace_content(&z, &[2, 3], 1))
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThreefoldKind {
    Dt,
    Pt,
}

/// Equivariant vertex term of 3-dimensional theory in the variables
/// `t1, t2, t3`, used as a dimensional-reduction oracle.
///
/// `curve` describes the (possibly infinite) curve character: a plane
/// partition in slots `(0, 1, 2)`; for the PT flavor the finite box
/// configuration is passed as an extra character summand.
pub fn threefold_vertex(
    curve: &PlanePartition,
    boxes: &LaurentPoly,
) -> Result<WeightClass, TermError> {
    let z = curve.character([0, 1, 2]).add(&MonomialFraction::from_poly(boxes.clone()));
    threefold_vertex_of_character(&z, curve)
}

/// Same oracle with the character handed over directly (the legs still come
/// from `curve`).
pub fn threefold_vertex_of_character(
    z: &MonomialFraction,
    curve: &PlanePartition,
) -> Result<WeightClass, TermError> {
    // V3D = Z - dual(Z)/t1t2t3 + (P123/t1t2t3) Z dual(Z)
    //       - sum_a A_face(leg_a)/(1 - t_a)
    let mut v = trace_content(z, &[0, 1, 2], -1).neg();
    for a in 0..3 {
        let (b, c) = match a {
            0 => (1, 2),
            1 => (0, 2),
            _ => (0, 1),
        };
        let leg = curve.leg(a).character(b, c);
        if leg.is_zero() {
            continue;
        }
        let af = trace_content(&MonomialFraction::from_poly(leg), &[b, c], 1);
        let mut part = af;
        let mut dir = [0i32; 5];
        dir[a] = 1;
        part.div_by_one_minus(dir);
        v = v.sub(&part);
    }
    let poly = v
        .expand_to_laurent()
        .map_err(|_| TermError::RedistributionFailed("threefold vertex"))?;
    WeightClass::from_poly(&poly).map_err(|_| TermError::BadCharacter)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::local_terms::{vertex_term, Flavor, VertexInput};
    use crate::partitions::{FinitePartition, SolidPartition};

    #[test]
    fn unit_ideal_vanishes() {
        // I = (1): Z = 0
        let tr = taylor_oracle(&[[0, 0, 0, 0]], Ambient::C4).unwrap();
        assert!(tr.expand_to_laurent().unwrap().is_zero());
    }

    #[test]
    fn maximal_ideal_matches_vertex() {
        let gens = [
            [1, 0, 0, 0],
            [0, 1, 0, 0],
            [0, 0, 1, 0],
            [0, 0, 0, 1],
        ];
        let tr = taylor_oracle(&gens, Ambient::C4).unwrap();
        let direct = WeightClass::from_poly(&tr.expand_to_laurent().unwrap()).unwrap();
        let v = vertex_term(
            &VertexInput::new(SolidPartition::point().decompose()),
            Flavor::Plain,
        )
        .unwrap();
        assert_eq!(direct, v);
    }

    #[test]
    fn face_character_one_box() {
        // I = (x3, x4) on the doubly punctured chart: content is A_f for a
        // single box
        let tr = taylor_oracle(&[[0, 0, 1, 0], [0, 0, 0, 1]], Ambient::C2StarStar).unwrap();
        let direct = tr.expand_to_laurent().unwrap();
        let af = trace_content(
            &MonomialFraction::from_poly(FinitePartition::one().character(2, 3)),
            &[2, 3],
            1,
        )
        .expand_to_laurent()
        .unwrap();
        assert_eq!(direct, af);
    }

    #[test]
    fn threefold_point_vertex() {
        // single point in C^3
        let mut pp = PlanePartition::empty();
        pp.push_box([0, 0, 0]);
        let v = threefold_vertex(&pp, &LaurentPoly::zero()).unwrap();
        // direct formula evaluation: sum t_i^{-1} - sum (t_i t_j)^{-1},
        // i < j <= 3; in particular rank 0 (the 3-fold theory is virtually
        // 0-dimensional at points)
        assert_eq!(v.rank(), 0);
        let mut expect = WeightClass::empty();
        for i in 0..3 {
            let mut w = [0i32; 5];
            w[i] = -1;
            expect.add(w, 1);
        }
        for i in 0..3 {
            for j in (i + 1)..3 {
                let mut w = [0i32; 5];
                w[i] = -1;
                w[j] = -1;
                expect.add(w, -1);
            }
        }
        assert_eq!(v, expect);
    }

    #[test]
    fn empty_threefold_vertex() {
        let v = threefold_vertex(&PlanePartition::empty(), &LaurentPoly::zero()).unwrap();
        assert!(v.is_empty());
    }
}
