use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::chart::{ambient_jacobian, ambient_of, Chart, ChartPoint};
use super::connection::christoffel;
use super::fd::FdConfig;
use super::g2::cross_matrix;
use super::metric::{chart_metric, MetricField};
use crate::curvature::NablaJ;
use crate::error::{Error, Result};
use crate::hermitian::{ComplexStructure, EuclideanSpace};
use crate::linalg;

/// Almost complex structure field on a chart domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AcsField {
    /// `J_p v = p × v` on the sphere.
    G2Octonionic,
    /// The same matrix in every chart coordinate system (flat toys).
    ConstantInChart { matrix: Vec<f64> },
}

impl AcsField {
    pub fn constant(j: &DMatrix<f64>) -> Self {
        AcsField::ConstantInChart {
            matrix: j.iter().copied().collect(),
        }
    }

    /// `J` acting on chart coordinate vectors at arbitrary coordinates.
    pub fn chart_matrix_raw(&self, chart: Chart, x: &[f64; 6]) -> DMatrix<f64> {
        match self {
            AcsField::G2Octonionic => {
                let p = ambient_of(chart, x);
                let jac = ambient_jacobian(chart, x);
                // J maps p^⊥ to itself, so pull back with the left inverse of ∂p/∂x.
                let gram_inv = (jac.transpose() * &jac)
                    .try_inverse()
                    .expect("stereographic Jacobian has full rank");
                gram_inv * jac.transpose() * cross_matrix(&p) * jac
            }
            AcsField::ConstantInChart { matrix } => DMatrix::from_column_slice(6, 6, matrix),
        }
    }

    pub fn chart_matrix(&self, p: &ChartPoint) -> Result<DMatrix<f64>> {
        if let AcsField::ConstantInChart { matrix } = self {
            if matrix.len() != 36 {
                return Err(Error::Input("constant structure needs 36 entries".into()));
            }
        }
        Ok(self.chart_matrix_raw(p.chart(), p.coords()))
    }
}

/// `J` and `∇J` at a point, in the g-orthonormal Gram–Schmidt frame.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameNablaJ {
    pub j: ComplexStructure,
    pub nabla: NablaJ,
    /// Coordinate versions: `J` and `(∇_a J)` for each chart direction.
    pub chart_j: DMatrix<f64>,
    pub chart_nabla: Vec<DMatrix<f64>>,
    pub frame: DMatrix<f64>,
    pub metric: DMatrix<f64>,
}

/// `∇_a J = ∂_a J + Γ_a J − J Γ_a`, with `∂J` by finite differences, then
/// transported to the orthonormal frame. Constraints are checked to the
/// finite-difference quality threshold.
pub fn nabla_j(field: &MetricField, acs: &AcsField, p: &ChartPoint, fd: &FdConfig) -> Result<FrameNablaJ> {
    fd.validate()?;
    let g = chart_metric(field, p)?;
    let conn = christoffel(field, p, fd)?;
    let (chart, x) = (p.chart(), p.coords());
    let jc = acs.chart_matrix(p)?;
    let flat = |y: &[f64; 6]| acs.chart_matrix_raw(chart, y).iter().copied().collect::<Vec<f64>>();
    let chart_nabla: Vec<DMatrix<f64>> = (0..6)
        .map(|a| {
            let raw = DMatrix::from_vec(6, 6, fd.derivative(&flat, x, a));
            // The exact ∂J anticommutes with J; drop the part of the
            // difference quotient that cannot belong to it.
            let dj = (&raw + &jc * &raw * &jc) * 0.5;
            let ga = &conn.matrices()[a];
            dj + ga * &jc - &jc * ga
        })
        .collect();
    let frame = linalg::orthonormal_frame(&g)?;
    let frame_inv = frame.transpose() * &g;
    let to_frame = |m: &DMatrix<f64>| &frame_inv * m * &frame;
    let j_on = to_frame(&jc);
    let std = EuclideanSpace::standard(6);
    let j = ComplexStructure::with_tolerance(&std, j_on, 1e-9)?;
    let components: Vec<DMatrix<f64>> = (0..6)
        .map(|k| {
            let along = (0..6).fold(DMatrix::zeros(6, 6), |acc, a| acc + &chart_nabla[a] * frame[(a, k)]);
            to_frame(&along)
        })
        .collect();
    let nabla = NablaJ::new(&j, components, fd.quality_threshold())?;
    Ok(FrameNablaJ {
        j,
        nabla,
        chart_j: jc,
        chart_nabla,
        frame,
        metric: g,
    })
}

/// Residuals of the canonical connection `Δ = ∇ − ½ J(∇J)` at a point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalReport {
    /// `max |Δ g|`.
    pub metric_residual: f64,
    /// `max |Δ J|`.
    pub complex_residual: f64,
    /// `max |T_Δ(X, Y) − ½((∇_X J)JY − (∇_Y J)JX)|` over coordinate pairs.
    pub torsion_formula_residual: f64,
    /// Largest coordinate component of `T_Δ`.
    pub torsion_size: f64,
    /// The finite-difference threshold the residuals are compared with.
    pub threshold: f64,
}

impl CanonicalReport {
    pub fn passes(&self) -> bool {
        self.metric_residual < self.threshold
            && self.complex_residual < self.threshold
            && self.torsion_formula_residual < self.threshold
    }
}

pub fn canonical_connection_check(
    field: &MetricField,
    acs: &AcsField,
    p: &ChartPoint,
    fd: &FdConfig,
) -> Result<CanonicalReport> {
    let data = nabla_j(field, acs, p, fd)?;
    let conn = christoffel(field, p, fd)?;
    let (chart, x) = (p.chart(), p.coords());
    let g = &data.metric;
    let jc = &data.chart_j;
    // Δ_a = Γ_a − ½ J (∇_a J)
    let delta: Vec<DMatrix<f64>> = (0..6)
        .map(|a| &conn.matrices()[a] - jc * &data.chart_nabla[a] * 0.5)
        .collect();
    let gflat = |y: &[f64; 6]| field.eval_raw(chart, y).iter().copied().collect::<Vec<f64>>();
    let jflat = |y: &[f64; 6]| AcsField::chart_matrix_raw(acs, chart, y).iter().copied().collect::<Vec<f64>>();
    let mut metric_residual = 0.0_f64;
    let mut complex_residual = 0.0_f64;
    for (a, da) in delta.iter().enumerate() {
        let dg = DMatrix::from_vec(6, 6, fd.derivative(&gflat, x, a));
        let dj = DMatrix::from_vec(6, 6, fd.derivative(&jflat, x, a));
        metric_residual = metric_residual.max(linalg::max_abs(&(dg - da.transpose() * g - g * da)));
        complex_residual = complex_residual.max(linalg::max_abs(&(dj + da * jc - jc * da)));
    }
    let mut torsion_formula_residual = 0.0_f64;
    let mut torsion_size = 0.0_f64;
    for a in 0..6 {
        for b in 0..6 {
            for k in 0..6 {
                // T^k_{ab} = Δ^k_{ab} − Δ^k_{ba}
                let direct = delta[a][(k, b)] - delta[b][(k, a)];
                let formula = 0.5
                    * ((&data.chart_nabla[a] * jc)[(k, b)] - (&data.chart_nabla[b] * jc)[(k, a)]);
                torsion_formula_residual = torsion_formula_residual.max((direct - formula).abs());
                torsion_size = torsion_size.max(direct.abs());
            }
        }
    }
    Ok(CanonicalReport {
        metric_residual,
        complex_residual,
        torsion_formula_residual,
        torsion_size,
        threshold: fd.quality_threshold(),
    })
}
