use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{ComplexStructure, EuclideanSpace, CLASSIFICATION_TOL, CONSTRUCTION_TOL};
use crate::error::{Error, Result};
use crate::linalg;

/// Real 2-form, `ζ[(i, j)] = ζ(e_i, e_j)`; antisymmetric by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoForm(DMatrix<f64>);

impl TwoForm {
    /// Rejects matrices whose antisymmetry defect exceeds 1e-12 (relative).
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        let defect = linalg::max_abs(&(&m + m.transpose()));
        if defect > CONSTRUCTION_TOL * linalg::max_abs(&m).max(1.0) {
            return Err(Error::Skewness(format!("2-form not antisymmetric ({defect:e})")));
        }
        Ok(Self::antisymmetrized(&m))
    }

    /// Antisymmetric part of an arbitrary square matrix, with the lower
    /// triangle set to the exact negative of the upper one.
    pub fn antisymmetrized(m: &DMatrix<f64>) -> Self {
        let n = m.nrows();
        let mut out = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i + 1..n {
                let v = 0.5 * (m[(i, j)] - m[(j, i)]);
                out[(i, j)] = v;
                out[(j, i)] = -v;
            }
        }
        Self(out)
    }

    pub fn zero(dim: usize) -> Self {
        Self(DMatrix::zeros(dim, dim))
    }

    /// The elementary form `e^i ∧ e^j` (0-based indices).
    pub fn elementary(dim: usize, i: usize, j: usize) -> Self {
        let mut m = DMatrix::zeros(dim, dim);
        m[(i, j)] += 1.0;
        m[(j, i)] -= 1.0;
        Self(m)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.0
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn eval(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        (x.transpose() * &self.0 * y)[(0, 0)]
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self(&self.0 * s)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(&self.0 + &other.0)
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self(&self.0 - &other.0)
    }

    /// The (1,1) part ½(ζ + J*ζ).
    pub fn type_11_part(&self, j: &ComplexStructure) -> Self {
        let jm = j.matrix();
        Self::antisymmetrized(&((&self.0 + jm.transpose() * &self.0 * jm) * 0.5))
    }
}

/// Endomorphism `A` with `g(AX, Y) = −g(X, AY)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewEndomorphism(DMatrix<f64>);

impl SkewEndomorphism {
    pub fn new(space: &EuclideanSpace, a: DMatrix<f64>) -> Result<Self> {
        let ga = space.metric() * &a;
        let defect = linalg::max_abs(&(&ga + ga.transpose()));
        if defect > CONSTRUCTION_TOL * linalg::max_abs(&ga).max(1.0) {
            return Err(Error::Skewness(format!("endomorphism not g-skew ({defect:e})")));
        }
        Ok(Self(a))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }
}

/// ω(X, Y) = g(JX, Y).
pub fn fundamental_two_form(space: &EuclideanSpace, j: &ComplexStructure) -> Result<TwoForm> {
    let g = space.metric();
    let jm = j.matrix();
    let compat = linalg::max_abs(&(jm.transpose() * g * jm - g));
    if compat > CONSTRUCTION_TOL * linalg::max_abs(g).max(1.0) {
        return Err(Error::Compatibility(format!("J is not g-orthogonal ({compat:e})")));
    }
    Ok(TwoForm::antisymmetrized(&(jm.transpose() * g)))
}

/// Lowers indices: `Â(v, w) = g(v, Aw)`.
pub fn hat(space: &EuclideanSpace, a: &SkewEndomorphism) -> TwoForm {
    TwoForm::antisymmetrized(&(space.metric() * a.matrix()))
}

/// Inverse of [`hat`].
pub fn sharp(space: &EuclideanSpace, zeta: &TwoForm) -> SkewEndomorphism {
    SkewEndomorphism(space.metric_inverse() * zeta.matrix())
}

/// `(α∧β)(X, Y) = α(X)β(Y) − α(Y)β(X)`.
pub fn wedge(alpha: &DVector<f64>, beta: &DVector<f64>) -> TwoForm {
    TwoForm::antisymmetrized(&(alpha * beta.transpose() - beta * alpha.transpose()))
}

/// Pull-back of a covector: `(A*α)(v) = α(Av)`.
pub fn pullback_covector(a: &DMatrix<f64>, alpha: &DVector<f64>) -> DVector<f64> {
    a.transpose() * alpha
}

/// Inner product on Λ² for which `{e^i∧e^j}_{i<j}` is orthonormal whenever
/// `{e_i}` is g-orthonormal.
pub fn inner_lambda2(space: &EuclideanSpace, a: &TwoForm, b: &TwoForm) -> f64 {
    let gi = space.metric_inverse();
    let m = gi * a.matrix() * gi * b.matrix().transpose();
    0.5 * m.trace()
}

/// Λ² norm: square root of `Σ_{i<j} ζ_ij²` in an orthonormal frame.
pub fn norm_lambda2(space: &EuclideanSpace, zeta: &TwoForm) -> f64 {
    let z = space.bilinear_to_orthonormal(zeta.matrix());
    let mut s = 0.0;
    for i in 0..z.nrows() {
        for j in i + 1..z.ncols() {
            s += z[(i, j)] * z[(i, j)];
        }
    }
    s.sqrt()
}

/// Endomorphism (Frobenius) norm of the skew matrix identified with ζ.
pub fn norm_e(space: &EuclideanSpace, zeta: &TwoForm) -> f64 {
    let z = space.bilinear_to_orthonormal(zeta.matrix());
    z.iter().map(|v| v * v).sum::<f64>().sqrt()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FormClass {
    Positive,
    Nonnegative,
    /// (1,1) but `ζ(·, J·)` has a negative eigenvalue.
    Indefinite,
    /// Not J-invariant.
    Not11,
}

impl FormClass {
    pub fn is_nonnegative(self) -> bool {
        matches!(self, FormClass::Positive | FormClass::Nonnegative)
    }
}

pub fn is_positive_form(space: &EuclideanSpace, zeta: &TwoForm, j: &ComplexStructure) -> FormClass {
    is_positive_form_with_tol(space, zeta, j, CLASSIFICATION_TOL)
}

/// Tests J-invariance first, then the spectrum of `b(X, Y) = ζ(X, JY)`.
/// Both decisions use `tol` scaled by `max(1, |ζ|_max)`.
pub fn is_positive_form_with_tol(
    space: &EuclideanSpace,
    zeta: &TwoForm,
    j: &ComplexStructure,
    tol: f64,
) -> FormClass {
    let z = space.bilinear_to_orthonormal(zeta.matrix());
    let jm = space.endomorphism_to_orthonormal(j.matrix());
    let scale = linalg::max_abs(&z).max(1.0);
    let invariance = linalg::max_abs(&(jm.transpose() * &z * &jm - &z));
    if invariance > tol * scale {
        return FormClass::Not11;
    }
    let b = linalg::symmetric_part(&(&z * &jm));
    let lambda_min = linalg::sorted_eigenvalues(&b)[0];
    if lambda_min > tol * scale {
        FormClass::Positive
    } else if lambda_min >= -tol * scale {
        FormClass::Nonnegative
    } else {
        FormClass::Indefinite
    }
}
