use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::chart::ChartPoint;
use super::connection::{riemann_sample, RiemannSample};
use super::fd::FdConfig;
use super::metric::MetricField;
use crate::curvature::{kulkarni_nomizu_square, sup_norm_bounds_with, SupNormBounds, SupNormConfig};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng;

const SAMPLE_STREAM: u64 = 0x5350_4845;

/// `n` points uniform on S⁶ (normalised Gaussians), each in the chart where
/// `|x| ≤ 1`. Deterministic in `seed`.
pub fn sample_points(n: usize, seed: u64) -> Result<Vec<ChartPoint>> {
    if n == 0 {
        return Err(Error::Input("need at least one point".into()));
    }
    let mut s = rng::stream(seed, SAMPLE_STREAM);
    (0..n)
        .map(|_| {
            let v = rng::unit_vector(&mut s, 7);
            ChartPoint::from_ambient(&std::array::from_fn(|i| v[i]))
        })
        .collect()
}

/// Applies `f` to every point in parallel; output order follows input order.
pub fn map_points<T, F>(points: &[ChartPoint], f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, &ChartPoint) -> T + Sync,
{
    points.par_iter().enumerate().map(|(i, p)| f(i, p)).collect()
}

/// Pointwise deviations of a metric from the unit round metric, measured in
/// a round-orthonormal frame. Sampled values, not global suprema.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationEstimate {
    /// `‖R_g − g₀⊼g₀‖∞` bounds.
    pub eps1: SupNormBounds,
    /// `‖g − g₀‖∞` (exact: the spectral norm).
    pub eps2: f64,
}

pub fn perturbation_estimate(
    field: &MetricField,
    p: &ChartPoint,
    fd: &FdConfig,
    sup: &SupNormConfig,
) -> Result<PerturbationEstimate> {
    perturbation_from_sample(&riemann_sample(field, p, fd)?, p, sup)
}

/// As [`perturbation_estimate`], reusing an already computed curvature
/// sample at `p`.
pub fn perturbation_from_sample(
    sample: &RiemannSample,
    p: &ChartPoint,
    sup: &SupNormConfig,
) -> Result<PerturbationEstimate> {
    let g0 = MetricField::round().eval_raw(p.chart(), p.coords());
    let e0 = linalg::orthonormal_frame(&g0)?;
    let dg = e0.transpose() * &sample.metric * &e0 - nalgebra::DMatrix::identity(6, 6);
    let r0 = sample.coordinate_tensor.in_frame(&e0);
    let dev = r0.sub(&kulkarni_nomizu_square(&nalgebra::DMatrix::identity(6, 6)));
    Ok(PerturbationEstimate {
        eps1: sup_norm_bounds_with(&dev, sup),
        eps2: linalg::bilinear_sup_norm(&dg),
    })
}
