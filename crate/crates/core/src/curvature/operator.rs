use nalgebra::{DMatrix, DVector};

use super::tensor::{validate_symmetries, CurvatureTensor};
use crate::error::{Error, Result};
use crate::hermitian::TwoForm;
use crate::linalg;

/// Symmetry violation above which a tensor is refused by [`curvature_operator`].
pub const OPERATOR_SYMMETRY_TOL: f64 = 1e-6;

/// The curvature operator on 2-forms in the orthonormal basis
/// `{e^i∧e^j}_{i<j}` (lexicographic order), with its sorted spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvatureOperator {
    matrix: DMatrix<f64>,
    spectrum: Vec<f64>,
    pairs: Vec<(usize, usize)>,
}

impl CurvatureOperator {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Eigenvalues ascending.
    pub fn spectrum(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn lambda_min(&self) -> f64 {
        self.spectrum[0]
    }

    pub fn lambda_max(&self) -> f64 {
        self.spectrum[self.spectrum.len() - 1]
    }

    /// `R̃(β)`, for β given in the same orthonormal basis as the tensor.
    pub fn apply(&self, beta: &TwoForm) -> TwoForm {
        let coeffs = DVector::from_iterator(
            self.pairs.len(),
            self.pairs.iter().map(|&(i, j)| beta.matrix()[(i, j)]),
        );
        let image = &self.matrix * coeffs;
        let dim = beta.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for (p, &(i, j)) in self.pairs.iter().enumerate() {
            m[(i, j)] = image[p];
            m[(j, i)] = -image[p];
        }
        TwoForm::antisymmetrized(&m)
    }
}

/// Index pairs `i < j` labelling the basis of Λ².
pub fn lambda2_pairs(dim: usize) -> Vec<(usize, usize)> {
    (0..dim)
        .flat_map(|i| (i + 1..dim).map(move |j| (i, j)))
        .collect()
}

/// `R̃_{(ij),(kl)} = R_ijkl` for a tensor given in an orthonormal frame.
pub fn curvature_operator(r: &CurvatureTensor) -> Result<CurvatureOperator> {
    let report = validate_symmetries(r);
    if report.max() > OPERATOR_SYMMETRY_TOL {
        return Err(Error::InvalidCurvature(format!(
            "symmetry violation {:e} exceeds {:e}",
            report.max(),
            OPERATOR_SYMMETRY_TOL
        )));
    }
    let pairs = lambda2_pairs(r.dim());
    let m = pairs.len();
    let matrix = DMatrix::from_fn(m, m, |a, b| {
        let (i, j) = pairs[a];
        let (k, l) = pairs[b];
        r[[i, j, k, l]]
    });
    let spectrum = linalg::sorted_eigenvalues(&matrix);
    Ok(CurvatureOperator {
        matrix,
        spectrum,
        pairs,
    })
}
