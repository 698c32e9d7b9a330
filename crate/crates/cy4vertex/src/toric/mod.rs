//! Global geometry model and gluing: toric Calabi-Yau 4-folds given by
//! charts, edges, and faces; enumeration of global fixed points on local
//! surfaces; assembly of the specialized generating series in `q, Q, y`;
//! and the vertex-level dimensional reduction report.

mod fixedpoints;
mod geometry;
mod reduction;
mod series;

pub use fixedpoints::{
    chart_asymptotics, chart_vertex_input, edge_input, enumerate_global, face_input,
    global_to_local, ChartData, EdgeCurveData, EnumBudget, EnumError, GlobalFixedPoint, GlobalKind,
};
pub use geometry::{
    format_geometry, parse_geometry, Chart, Edge, Face, GeometryError, GlobalWt, LineBundle,
    ToricGeometry,
};
pub use reduction::{dimensional_reduction_check, ReductionReport};
pub use series::{
    compute_term, global_series, polarization_of, total_class, GlobalCoefficient, GlobalError,
    GlobalSeries, GlobalTerm,
};
