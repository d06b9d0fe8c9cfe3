//! Metrics on S⁶ in two stereographic charts, finite-difference connection
//! and curvature, the octonionic almost complex structure and its covariant
//! derivative.
//!
//! Curvature leaves this module in a g-orthonormal frame.

mod acs;
mod chart;
mod connection;
mod fd;
mod g2;
mod metric;
mod sampling;

pub use acs::{canonical_connection_check, nabla_j, AcsField, CanonicalReport, FrameNablaJ};
pub use chart::{ambient_jacobian, ambient_of, Chart, ChartPoint, CHART_RADIUS};
pub use connection::{
    christoffel, metricity_residual, riemann, riemann_sample, ConnectionCoefficients,
    RiemannSample, MAX_METRIC_CONDITION,
};
pub use fd::{FdConfig, FdScheme, MAX_STEP, MIN_STEP};
pub use g2::{cross, cross_matrix, g2_structure, structure_constants, OCTONION_TRIPLES};
pub use metric::{chart_metric, ConformalFactor, MetricField, Monomial, PolyEntry};
pub use sampling::{
    map_points, perturbation_estimate, perturbation_from_sample, sample_points, PerturbationEstimate,
};
