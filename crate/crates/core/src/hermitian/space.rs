use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::linalg;

/// A real vector space of dimension 2n with a positive-definite metric and a
/// reference orientation.
#[derive(Debug, Clone, PartialEq)]
pub struct EuclideanSpace {
    g: DMatrix<f64>,
    g_inv: DMatrix<f64>,
    frame: DMatrix<f64>,
    orientation: f64,
}

impl EuclideanSpace {
    /// `R^dim` with the Euclidean metric; the standard basis is positive.
    pub fn standard(dim: usize) -> Self {
        Self::new(DMatrix::identity(dim, dim)).expect("identity metric is valid")
    }

    pub fn new(g: DMatrix<f64>) -> Result<Self> {
        Self::with_orientation(g, 1.0)
    }

    pub fn with_orientation(g: DMatrix<f64>, orientation: f64) -> Result<Self> {
        let dim = g.nrows();
        if dim == 0 || dim != g.ncols() {
            return Err(Error::Metric("metric must be a non-empty square matrix".into()));
        }
        if dim % 2 != 0 {
            return Err(Error::Metric(format!("dimension {dim} is odd")));
        }
        let asym = linalg::max_abs(&(&g - g.transpose()));
        if asym > 1e-12 * linalg::max_abs(&g).max(1.0) {
            return Err(Error::Metric(format!("metric not symmetric (deviation {asym:e})")));
        }
        let g = linalg::symmetric_part(&g);
        let frame = linalg::orthonormal_frame(&g)?;
        let g_inv = &frame * frame.transpose();
        Ok(Self {
            g,
            g_inv,
            frame,
            orientation: if orientation < 0.0 { -1.0 } else { 1.0 },
        })
    }

    pub fn dim(&self) -> usize {
        self.g.nrows()
    }

    /// Complex dimension n.
    pub fn n(&self) -> usize {
        self.dim() / 2
    }

    pub fn metric(&self) -> &DMatrix<f64> {
        &self.g
    }

    pub fn metric_inverse(&self) -> &DMatrix<f64> {
        &self.g_inv
    }

    /// Gram–Schmidt orthonormalisation of the working basis (columns).
    pub fn orthonormal_frame(&self) -> &DMatrix<f64> {
        &self.frame
    }

    /// +1 or −1: sign of the reference volume form on the working basis.
    pub fn orientation(&self) -> f64 {
        self.orientation
    }

    pub fn inner(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.g * y)[(0, 0)]
    }

    pub fn is_standard(&self) -> bool {
        self.g == DMatrix::identity(self.dim(), self.dim())
    }

    /// Components of a bilinear form in the orthonormal frame.
    pub fn bilinear_to_orthonormal(&self, b: &DMatrix<f64>) -> DMatrix<f64> {
        self.frame.transpose() * b * &self.frame
    }

    /// Components of an endomorphism in the orthonormal frame.
    pub fn endomorphism_to_orthonormal(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        let inv = self.frame_inverse();
        inv * a * &self.frame
    }

    pub fn endomorphism_from_orthonormal(&self, a: &DMatrix<f64>) -> DMatrix<f64> {
        &self.frame * a * self.frame_inverse()
    }

    fn frame_inverse(&self) -> DMatrix<f64> {
        // Eᵀ g E = I, so E⁻¹ = Eᵀ g.
        self.frame.transpose() * &self.g
    }
}
