use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stereographic chart from the pole `∓e₇`. The south chart is the north
/// chart composed with `P = diag(−1, 1, 1, 1, 1, 1, −1)`, so both charts
/// induce the same orientation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Chart {
    North,
    South,
}

/// Largest coordinate norm accepted in a chart.
pub const CHART_RADIUS: f64 = 1.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChartPoint {
    chart: Chart,
    x: [f64; 6],
}

fn norm2(x: &[f64; 6]) -> f64 {
    x.iter().map(|v| v * v).sum()
}

/// `P` as a sign on ambient coordinate `i`.
fn flip(i: usize) -> f64 {
    if i == 0 || i == 6 {
        -1.0
    } else {
        1.0
    }
}

impl ChartPoint {
    pub fn new(chart: Chart, x: [f64; 6]) -> Result<Self> {
        if x.iter().any(|v| !v.is_finite()) {
            return Err(Error::Input("chart coordinates must be finite".into()));
        }
        if norm2(&x).sqrt() > CHART_RADIUS {
            return Err(Error::Input(format!(
                "|x| = {:.3} exceeds the chart radius {CHART_RADIUS}",
                norm2(&x).sqrt()
            )));
        }
        Ok(Self { chart, x })
    }

    /// The chart in which `p` has `|x| ≤ 1`.
    pub fn from_ambient(p: &[f64; 7]) -> Result<Self> {
        let chart = if p[6] <= 0.0 { Chart::North } else { Chart::South };
        Self::from_ambient_in(p, chart)
    }

    pub fn from_ambient_in(p: &[f64; 7], chart: Chart) -> Result<Self> {
        let n = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        if (n - 1.0).abs() > 1e-9 {
            return Err(Error::Input(format!("|p| = {n} is not 1")));
        }
        let q: [f64; 7] = match chart {
            Chart::North => *p,
            Chart::South => std::array::from_fn(|i| flip(i) * p[i]),
        };
        let denom = 1.0 - q[6];
        if denom <= 0.0 {
            return Err(Error::Input("point is the pole of the requested chart".into()));
        }
        Self::new(chart, std::array::from_fn(|i| q[i] / denom))
    }

    pub fn chart(&self) -> Chart {
        self.chart
    }

    pub fn coords(&self) -> &[f64; 6] {
        &self.x
    }

    pub fn coords_vector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.x)
    }

    /// Same point in the other chart, if it lies within its radius.
    pub fn in_other_chart(&self) -> Result<Self> {
        let other = match self.chart {
            Chart::North => Chart::South,
            Chart::South => Chart::North,
        };
        Self::from_ambient_in(&self.ambient(), other)
    }

    /// Re-expressed in the other chart when `|x| > 1`.
    pub fn recentred(&self) -> Self {
        if norm2(&self.x) > 1.0 {
            self.in_other_chart().unwrap_or(*self)
        } else {
            *self
        }
    }

    pub fn ambient(&self) -> [f64; 7] {
        ambient_of(self.chart, &self.x)
    }
}

/// Inverse chart map evaluated at arbitrary coordinates (used by the
/// finite-difference stencils, which may step slightly outside the radius).
pub fn ambient_of(chart: Chart, x: &[f64; 6]) -> [f64; 7] {
    let r2 = norm2(x);
    let d = 1.0 + r2;
    let mut p = [0.0; 7];
    for i in 0..6 {
        p[i] = 2.0 * x[i] / d;
    }
    p[6] = (r2 - 1.0) / d;
    if chart == Chart::South {
        for (i, v) in p.iter_mut().enumerate() {
            *v *= flip(i);
        }
    }
    p
}

/// `∂p/∂x`, a 7×6 matrix whose columns are the coordinate vectors in R⁷.
pub fn ambient_jacobian(chart: Chart, x: &[f64; 6]) -> DMatrix<f64> {
    let r2 = norm2(x);
    let d = 1.0 + r2;
    let mut jac = DMatrix::zeros(7, 6);
    for a in 0..6 {
        for i in 0..6 {
            let delta = if i == a { 1.0 } else { 0.0 };
            jac[(i, a)] = 2.0 * delta / d - 4.0 * x[i] * x[a] / (d * d);
        }
        jac[(6, a)] = 4.0 * x[a] / (d * d);
    }
    if chart == Chart::South {
        for i in 0..7 {
            let s = flip(i);
            for a in 0..6 {
                jac[(i, a)] *= s;
            }
        }
    }
    jac
}
