//! Redistributed localization contributions.
//!
//! The virtual tangent character of a fixed pair decomposes into vertex,
//! edge, and face terms attached to the fixed points, invariant lines, and
//! invariant surfaces of the geometry.  Each term is assembled as an exact
//! monomial-denominator fraction and expanded by exact division; the
//! redistribution theorem guarantees the division succeeds, so a failure
//! signals a formula or enumeration bug and is reported as an error.
//!
//! Four flavors are computed from the same inputs:
//!
//! * `Plain` — the tangent character itself;
//! * `Tilde` — with the tautological `-y (..)^dual - y^{-1} (..)` insertion
//!   blocks folded in (the `y`-blocks reduce to the finite part `W` of the
//!   character decomposition);
//! * `Halved` / `HalvedTilde` — the explicit K-theoretic halves available
//!   when the support lies set-theoretically in the hyperplane `x4 = 0`
//!   (fibre direction of `Tot(K_Y)`).

mod edge;
mod face;
mod oracles;
mod rank;
mod vertex;

pub use edge::{edge_term, EdgeInput};
pub use face::{face_term, FaceChart, FaceInput};
pub use oracles::{taylor_oracle, taylor_z_character, threefold_vertex, threefold_vertex_of_character, Ambient, ThreefoldKind};
pub use rank::rank_check;
pub use vertex::{vertex_term, VertexInput};

use crate::algebra::{LaurentPoly, MonomialFraction};
use std::fmt;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    Plain,
    Tilde,
    Halved,
    HalvedTilde,
}

impl Flavor {
    pub fn is_halved(self) -> bool {
        matches!(self, Flavor::Halved | Flavor::HalvedTilde)
    }

    pub fn is_tilde(self) -> bool {
        matches!(self, Flavor::Tilde | Flavor::HalvedTilde)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermError {
    /// Exact division failed: the term is not a Laurent polynomial.
    RedistributionFailed(&'static str),
    /// A plain or halved term acquired a positive fixed part.
    PositiveFixedTerm(&'static str),
    /// Halved flavors need the support inside `Z(x4)`.
    NotSupportedOnHyperplane,
    /// The character data is not an integral character.
    BadCharacter,
}

impl fmt::Display for TermError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermError::RedistributionFailed(what) => {
                write!(f, "redistribution cancellation failed in {}", what)
            }
            TermError::PositiveFixedTerm(what) => {
                write!(f, "violates no-positive-fixed lemma in {}", what)
            }
            TermError::NotSupportedOnHyperplane => {
                write!(f, "halved term needs support on the hyperplane x4 = 0")
            }
            TermError::BadCharacter => write!(f, "character is not integral"),
        }
    }
}

impl std::error::Error for TermError {}

/// `prod_{i in dirs} (1 - t_i)`.
pub(crate) fn p_factor(dirs: &[usize]) -> LaurentPoly {
    let mut p = LaurentPoly::one();
    for &i in dirs {
        let factor = &LaurentPoly::one() - &LaurentPoly::var(i);
        p = &p * &factor;
    }
    p
}

/// Monomial `prod_{i in dirs} t_i^{-1}` as an exponent shift.
pub(crate) fn inv_monomial(dirs: &[usize]) -> [i32; 5] {
    let mut e = [0i32; 5];
    for &i in dirs {
        e[i] = -2;
    }
    e
}

/// Trace content `sign * Z + dual(Z)/T - (P/T) Z dual(Z)` over the
/// directions `dirs`: `sign = +1` is the vertex/face shape, `sign = -1` the
/// edge correction shape.
pub(crate) fn trace_content(z: &MonomialFraction, dirs: &[usize], sign: i64) -> MonomialFraction {
    let zbar = z.conjugate();
    let p = p_factor(dirs);
    let shift = inv_monomial(dirs);
    let s = crate::algebra::rat(sign);
    let mid = zbar.mul_poly(&LaurentPoly::monomial(shift));
    let last = z
        .mul(&zbar)
        .mul_poly(&p.mul_monomial(shift, &num_traits::One::one()))
        .neg();
    z.scale(&s).add(&mid).add(&last)
}

/// Halved trace content `Z + (P/T) Z dual(Z)` over the directions `dirs`
/// (`sign = -1` for the edge shape `-Z + (P/T) Z dual(Z)`).
pub(crate) fn halved_content(z: &MonomialFraction, dirs: &[usize], sign: i64) -> MonomialFraction {
    let zbar = z.conjugate();
    let p = p_factor(dirs);
    let shift = inv_monomial(dirs);
    let s = crate::algebra::rat(sign);
    let prod = z
        .mul(&zbar)
        .mul_poly(&p.mul_monomial(shift, &num_traits::One::one()));
    z.scale(&s).add(&prod)
}
