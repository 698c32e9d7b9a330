//! Exact equivariant computations for surface counting on toric Calabi-Yau 4-folds.
//!
//! This crate enumerates torus-fixed points of DT / PT0 / PT1 moduli of
//! 2-dimensional subschemes and stable pairs on toric Calabi-Yau 4-folds,
//! computes their K-theoretic localization contributions through a
//! redistributed vertex/edge/face formalism, and assembles topological-vertex
//! generating series.  All arithmetic is exact: Laurent polynomials over big
//! rationals, monomial-denominator fractions, and integer weight classes.
//! There is no floating point anywhere.
//!
//! The main layers, bottom up:
//!
//! * [`algebra`] — the exact symbolic substrate: sparse Laurent polynomials in
//!   `t1..t4, y` with half-integer exponents, fractions with denominators of
//!   the shape `prod (1 - eta^w)`, virtual characters ([`algebra::WeightClass`]),
//!   symmetrized K-theoretic brackets and square roots, and exact
//!   specialization limits.
//! * [`partitions`] — solid partitions with plane-partition asymptotics,
//!   Cohen-Macaulay classification of monomial surfaces, and PT0/PT1 box
//!   configurations stacked in their containers.
//! * [`local_terms`] — the redistributed vertex, edge and face terms (plain,
//!   y-twisted, halved) together with independent oracles.
//! * [`series`] — q-series assembly: DT and PT0 topological vertices, the
//!   Magnificent Four reference series, sign search, and the DT-PT0 vertex
//!   correspondence checks.
//! * [`toric`] — global geometries (local surfaces, `Tot(K_Y)`), global
//!   fixed-point enumeration with gluing, and the specialized generating
//!   series in `q, Q, y`.
//!
//! A command-line front end lives in the `cy4vertex` binary; see the README
//! and the book under `book/` for a guided tour.

pub mod algebra;
pub mod cli;
pub mod local_terms;
pub mod partitions;
pub mod series;
pub mod toric;

pub use algebra::{LaurentPoly, MonomialFraction, WeightClass};
