use nalgebra::DMatrix;

use super::chart::{Chart, ChartPoint};
use super::fd::FdConfig;
use super::metric::{chart_metric, MetricField};
use crate::curvature::{project_to_curvature, validate_symmetries, CurvatureTensor, SymmetryReport};
use crate::error::{Error, Result};
use crate::linalg;

const DIM: usize = 6;
/// Condition number above which Christoffel symbols are refused.
pub const MAX_METRIC_CONDITION: f64 = 1e8;

/// Levi-Civita connection coefficients at a point, in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct ConnectionCoefficients {
    /// `gamma[a][(k, j)] = Γ^k_{aj}`, so `∇_a V = ∂_a V + gamma[a]·V`.
    gamma: Vec<DMatrix<f64>>,
}

impl ConnectionCoefficients {
    pub fn matrices(&self) -> &[DMatrix<f64>] {
        &self.gamma
    }

    /// `Γ^k_{ij}`.
    pub fn get(&self, k: usize, i: usize, j: usize) -> f64 {
        self.gamma[i][(k, j)]
    }

    fn flatten(&self) -> Vec<f64> {
        self.gamma.iter().flat_map(|m| m.iter().copied()).collect()
    }
}

fn metric_flat(field: &MetricField, chart: Chart, x: &[f64; 6]) -> Vec<f64> {
    field.eval_raw(chart, x).iter().copied().collect()
}

/// `dg[l][(i, j)] = ∂_l g_ij`.
fn metric_derivatives(field: &MetricField, chart: Chart, x: &[f64; 6], fd: &FdConfig) -> Vec<DMatrix<f64>> {
    let f = |y: &[f64; 6]| metric_flat(field, chart, y);
    (0..DIM)
        .map(|l| DMatrix::from_vec(DIM, DIM, fd.derivative(&f, x, l)))
        .collect()
}

fn christoffel_raw(field: &MetricField, chart: Chart, x: &[f64; 6], fd: &FdConfig) -> Result<ConnectionCoefficients> {
    let g = field.eval_raw(chart, x);
    let g_inv = g
        .clone()
        .try_inverse()
        .ok_or_else(|| Error::Conditioning("metric is singular".into()))?;
    let dg = metric_derivatives(field, chart, x, fd);
    let mut gamma = vec![DMatrix::zeros(DIM, DIM); DIM];
    for i in 0..DIM {
        for j in i..DIM {
            // lowered symbol Γ_{ijl}
            let lowered: Vec<f64> = (0..DIM)
                .map(|l| 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]))
                .collect();
            for k in 0..DIM {
                let v: f64 = (0..DIM).map(|l| g_inv[(k, l)] * lowered[l]).sum();
                gamma[i][(k, j)] = v;
                gamma[j][(k, i)] = v;
            }
        }
    }
    Ok(ConnectionCoefficients { gamma })
}

fn check_metric(field: &MetricField, p: &ChartPoint) -> Result<DMatrix<f64>> {
    let g = chart_metric(field, p)?;
    let cond = linalg::spd_condition_number(&g);
    if !(cond <= MAX_METRIC_CONDITION) {
        return Err(Error::Conditioning(format!("metric condition number {cond:e}")));
    }
    Ok(g)
}

/// `Γ^k_{ij} = ½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij)` with finite
/// differences; symmetric in `i, j` by construction.
pub fn christoffel(field: &MetricField, p: &ChartPoint, fd: &FdConfig) -> Result<ConnectionCoefficients> {
    fd.validate()?;
    check_metric(field, p)?;
    christoffel_raw(field, p.chart(), p.coords(), fd)
}

/// `max |∇_a g_ij|`, with `∂g` re-evaluated at half the step so that the
/// residual measures the discretisation rather than vanishing identically.
pub fn metricity_residual(field: &MetricField, p: &ChartPoint, fd: &FdConfig, conn: &ConnectionCoefficients) -> f64 {
    let g = field.eval_raw(p.chart(), p.coords());
    let half = FdConfig { h: fd.h / 2.0, ..*fd };
    let dg = metric_derivatives(field, p.chart(), p.coords(), &half);
    let mut worst = 0.0_f64;
    for (a, ga) in conn.matrices().iter().enumerate() {
        // ∂_a g − Γ_aᵀ g − g Γ_a
        let r = &dg[a] - ga.transpose() * &g - &g * ga;
        worst = worst.max(linalg::max_abs(&r));
    }
    worst
}

/// Curvature at a chart point together with the data needed to interpret it.
#[derive(Debug, Clone, PartialEq)]
pub struct RiemannSample {
    /// Components in the g-orthonormal frame, projected onto algebraic
    /// curvature tensors.
    pub tensor: CurvatureTensor,
    /// Coordinate components `R(∂_i, ∂_j, ∂_k, ∂_l)` before projection.
    pub coordinate_tensor: CurvatureTensor,
    /// Symmetry defects of the unprojected orthonormal components.
    pub raw_symmetry: SymmetryReport,
    pub metric: DMatrix<f64>,
    /// Gram–Schmidt frame of the coordinate basis (columns).
    pub frame: DMatrix<f64>,
}

/// Riemann tensor in a g-orthonormal frame, normalised so that the round
/// metric gives `g⊼g`.
pub fn riemann(field: &MetricField, p: &ChartPoint, fd: &FdConfig) -> Result<CurvatureTensor> {
    Ok(riemann_sample(field, p, fd)?.tensor)
}

pub fn riemann_sample(field: &MetricField, p: &ChartPoint, fd: &FdConfig) -> Result<RiemannSample> {
    fd.validate()?;
    let g = check_metric(field, p)?;
    let (chart, x) = (p.chart(), p.coords());
    let conn = christoffel_raw(field, chart, x, fd)?;
    let gamma_flat = |y: &[f64; 6]| {
        christoffel_raw(field, chart, y, fd)
            .map(|c| c.flatten())
            .unwrap_or_else(|_| vec![f64::NAN; DIM * DIM * DIM])
    };
    // dgamma[i][a*36 + col*6 + row] = ∂_i Γ^row_{a col}, column-major per matrix
    let dgamma: Vec<Vec<f64>> = (0..DIM).map(|i| fd.derivative(&gamma_flat, x, i)).collect();
    let d = |i: usize, m: usize, j: usize, l: usize| dgamma[i][j * DIM * DIM + l * DIM + m];
    let gm = conn.matrices();
    // R^m_{ijl} = ∂_iΓ^m_{jl} − ∂_jΓ^m_{il} + Γ^m_{ip}Γ^p_{jl} − Γ^m_{jp}Γ^p_{il}
    let mut up = vec![0.0; DIM.pow(4)];
    for i in 0..DIM {
        for j in 0..DIM {
            let comm = &gm[i] * &gm[j] - &gm[j] * &gm[i];
            for m in 0..DIM {
                for l in 0..DIM {
                    up[((i * DIM + j) * DIM + m) * DIM + l] = d(i, m, j, l) - d(j, m, i, l) + comm[(m, l)];
                }
            }
        }
    }
    if up.iter().any(|v| !v.is_finite()) {
        return Err(Error::FiniteDifferenceQuality(
            "stencil left the domain of the metric".into(),
        ));
    }
    // R_ijkl = g(R(∂_i, ∂_j)∂_l, ∂_k)
    let coordinate_tensor = CurvatureTensor::from_fn(DIM, |i, j, k, l| {
        (0..DIM).map(|m| g[(k, m)] * up[((i * DIM + j) * DIM + m) * DIM + l]).sum()
    });
    let frame = linalg::orthonormal_frame(&g)?;
    let on = coordinate_tensor.in_frame(&frame);
    let raw_symmetry = validate_symmetries(&on);
    let threshold = fd.quality_threshold() * on.max_abs().max(1.0);
    if raw_symmetry.max() > threshold {
        return Err(Error::FiniteDifferenceQuality(format!(
            "curvature symmetry defect {:e} exceeds {threshold:e}",
            raw_symmetry.max()
        )));
    }
    Ok(RiemannSample {
        tensor: project_to_curvature(&on),
        coordinate_tensor,
        raw_symmetry,
        metric: g,
        frame,
    })
}
