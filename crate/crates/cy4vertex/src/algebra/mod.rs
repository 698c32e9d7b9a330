//! Exact symbolic substrate.
//!
//! Everything downstream reduces to four kinds of values:
//!
//! * [`LaurentPoly`] — sparse Laurent polynomial in `t1, t2, t3, t4, y` with
//!   exact rational coefficients.  Half-integer exponents are stored doubled,
//!   so all exponent arithmetic stays integral.
//! * [`MonomialFraction`] — `num / prod (1 - eta^w)^mult`, never expanded into
//!   a series.  Characters of infinite box configurations live here.
//! * [`WeightClass`] — a virtual torus character: finite signed multiset of
//!   integer weight vectors.  Vertex/edge/face terms land here after exact
//!   division.
//! * bracket values — products `prod [eta^w]^mult` with
//!   `[x] = x^{1/2} - x^{-1/2}`, kept factored for the specialization limits.
//!
//! The Calabi-Yau relation `t1 t2 t3 t4 = 1` is imposed only at bracket and
//! evaluation time ([`WeightClass::cy_normalize`]); the redistribution
//! formulas upstream need four independent variables.

mod fraction;
mod laurent;
mod limits;
mod linform;
mod serialize;
mod weights;
mod zrat;

pub use fraction::MonomialFraction;
pub use laurent::{Exp, LaurentPoly, Rat, N_VARS};
pub use limits::{bracket_eps, cocharacter_value, cohomological_sum, cohomological_value, LimitError, DEFAULT_COCHARACTER};
pub use linform::{LinearFactors, SPoly, SRat};
pub use serialize::{format_laurent, format_weight_class, parse_laurent, parse_weight_class};
pub use weights::{BracketProduct, SqrtSplit, WeightClass, Wt};
pub use zrat::{EpsSeries, ZPoly, ZRat};

pub(crate) fn rat(n: i64) -> Rat {
    num_rational::BigRational::from_integer(n.into())
}

/// Integer as a big rational (handy in tests and binaries).
pub fn rat_pub(n: i64) -> Rat {
    rat(n)
}
