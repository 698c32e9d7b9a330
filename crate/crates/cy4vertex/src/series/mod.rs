//! Topological-vertex generating series: DT and PT0 vertices, the
//! Magnificent Four reference expansion, sign assignment and search, the
//! DT-PT0 vertex correspondence, and cohomological limits.

mod coho;
mod plethystic;
mod qseries;
mod signs;
mod topvertex;
mod verify;

pub use coho::{cohomological_limit, palindromy_check, CohoMode};
pub use plethystic::magnificent_four;
pub use qseries::QSeries;
pub use signs::{sign_zero_dim, sign_two_dim, ModEval, SignAssignment, SignMode, SignProvenance};
pub use topvertex::{assemble as assemble_pub, 
    dt_vertex_series, dt_vertex_terms, pt0_vertex_series, pt0_vertex_terms, sqrt_contribution,
    FixedPointTerm, SeriesError,
};
pub use verify::{verify_correspondence, CaseSpec, VerifyOutcome, VerifyReport};
