use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::chart::{ambient_jacobian, ambient_of, Chart, ChartPoint};
use crate::error::{Error, Result};

fn one() -> f64 {
    1.0
}

/// A Riemannian metric on S⁶ (or, for `Custom`, on a chart-sized toy
/// domain), evaluated in stereographic coordinates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum MetricField {
    /// Unit round metric times `scale`.
    Round {
        #[serde(default = "one")]
        scale: f64,
    },
    /// `e^{2f(p)}` times the round metric.
    Conformal {
        f: ConformalFactor,
        #[serde(default = "one")]
        scale: f64,
    },
    /// Induced by `p ↦ (a₁p₁, …, a₇p₇)` from flat R⁷.
    Ellipsoid {
        semi_axes: [f64; 7],
        #[serde(default = "one")]
        scale: f64,
    },
    /// Polynomial `g_ij(x)` in chart coordinates, identical in both charts.
    /// Debug family; not a metric on the sphere in general.
    Custom {
        entries: Vec<PolyEntry>,
        #[serde(default = "one")]
        scale: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum ConformalFactor {
    /// `f(p) = Σ c_i p_i` on ambient coordinates.
    AmbientLinear { coeffs: [f64; 7] },
}

impl ConformalFactor {
    pub fn eval(&self, p: &[f64; 7]) -> f64 {
        match self {
            ConformalFactor::AmbientLinear { coeffs } => {
                coeffs.iter().zip(p).map(|(c, v)| c * v).sum()
            }
        }
    }
}

/// Entry `(i, j)` (and, by symmetry, `(j, i)`) of a polynomial metric.
/// Repeated entries add up.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolyEntry {
    pub i: usize,
    pub j: usize,
    pub terms: Vec<Monomial>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Monomial {
    pub coeff: f64,
    #[serde(default)]
    pub powers: [u32; 6],
}

impl Monomial {
    fn eval(&self, x: &[f64; 6]) -> f64 {
        self.powers
            .iter()
            .zip(x)
            .fold(self.coeff, |acc, (&k, v)| acc * v.powi(k as i32))
    }
}

impl MetricField {
    pub fn round() -> Self {
        MetricField::Round { scale: 1.0 }
    }

    /// `f = Σ c_i p_i`.
    pub fn conformal_linear(coeffs: [f64; 7]) -> Self {
        MetricField::Conformal {
            f: ConformalFactor::AmbientLinear { coeffs },
            scale: 1.0,
        }
    }

    /// Constant Euclidean metric in chart coordinates.
    pub fn flat() -> Self {
        MetricField::Custom {
            entries: (0..6)
                .map(|i| PolyEntry {
                    i,
                    j: i,
                    terms: vec![Monomial {
                        coeff: 1.0,
                        powers: [0; 6],
                    }],
                })
                .collect(),
            scale: 1.0,
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            MetricField::Round { .. } => "round",
            MetricField::Conformal { .. } => "conformal",
            MetricField::Ellipsoid { .. } => "ellipsoid",
            MetricField::Custom { .. } => "custom",
        }
    }

    pub fn scale(&self) -> f64 {
        match self {
            MetricField::Round { scale }
            | MetricField::Conformal { scale, .. }
            | MetricField::Ellipsoid { scale, .. }
            | MetricField::Custom { scale, .. } => *scale,
        }
    }

    /// Parameter checks; error messages name the offending field.
    pub fn validate(&self) -> Result<()> {
        let scale = self.scale();
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Input(format!("scale must be positive, got {scale}")));
        }
        match self {
            MetricField::Round { .. } => {}
            MetricField::Conformal { f, .. } => match f {
                ConformalFactor::AmbientLinear { coeffs } => {
                    if coeffs.iter().any(|c| !c.is_finite()) {
                        return Err(Error::Input("f.coeffs must be finite".into()));
                    }
                }
            },
            MetricField::Ellipsoid { semi_axes, .. } => {
                if semi_axes.iter().any(|a| !(a.is_finite() && *a > 0.0)) {
                    return Err(Error::Input("semi_axes must be positive".into()));
                }
            }
            MetricField::Custom { entries, .. } => {
                for e in entries {
                    if e.i >= 6 || e.j >= 6 {
                        return Err(Error::Input(format!(
                            "entries: index ({}, {}) out of range 0..6",
                            e.i, e.j
                        )));
                    }
                    if e.terms.iter().any(|t| !t.coeff.is_finite()) {
                        return Err(Error::Input("entries: coefficients must be finite".into()));
                    }
                }
            }
        }
        Ok(())
    }

    /// Metric matrix at arbitrary chart coordinates, without SPD checks.
    pub fn eval_raw(&self, chart: Chart, x: &[f64; 6]) -> DMatrix<f64> {
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let round = |s: f64| DMatrix::identity(6, 6) * (s * 4.0 / ((1.0 + r2) * (1.0 + r2)));
        match self {
            MetricField::Round { scale } => round(*scale),
            MetricField::Conformal { f, scale } => {
                let p = ambient_of(chart, x);
                round(*scale * (2.0 * f.eval(&p)).exp())
            }
            MetricField::Ellipsoid { semi_axes, scale } => {
                let mut jac = ambient_jacobian(chart, x);
                for (i, a) in semi_axes.iter().enumerate() {
                    jac.row_mut(i).scale_mut(*a);
                }
                jac.transpose() * jac * *scale
            }
            MetricField::Custom { entries, scale } => {
                let mut g = DMatrix::zeros(6, 6);
                for e in entries {
                    let v: f64 = e.terms.iter().map(|t| t.eval(x)).sum();
                    g[(e.i, e.j)] += v;
                    if e.i != e.j {
                        g[(e.j, e.i)] += v;
                    }
                }
                g * *scale
            }
        }
    }
}

/// Metric at a chart point; errors if the matrix is not positive definite.
pub fn chart_metric(field: &MetricField, p: &ChartPoint) -> Result<DMatrix<f64>> {
    let g = field.eval_raw(p.chart(), p.coords());
    if nalgebra::Cholesky::new(g.clone()).is_none() || g.iter().any(|v| !v.is_finite()) {
        return Err(Error::Metric(format!(
            "{} metric is not positive definite at {:?}",
            field.family(),
            p.coords()
        )));
    }
    Ok(g)
}
