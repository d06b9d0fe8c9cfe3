//! Shared fixtures for the benchmarks.

use occert_core::curvature::{kulkarni_nomizu_square, random_curvature_tensor, CurvatureTensor};
use occert_core::sphere::{sample_points, ChartPoint, MetricField};
use occert_core::{rng, Matrix};

/// `g⊼g + t·D` with `D` a fixed random curvature tensor of unit Frobenius norm.
pub fn near_round_tensor(t: f64) -> CurvatureTensor {
    let d = random_curvature_tensor(&mut rng::stream(1, 0xbe4c), 6);
    kulkarni_nomizu_square(&Matrix::identity(6, 6)).add(&d.scaled(t / d.frobenius_norm()))
}

pub fn conformal_metric(c: f64) -> MetricField {
    MetricField::conformal_linear([c, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0])
}

pub fn point() -> ChartPoint {
    sample_points(1, 0).expect("one point")[0]
}
