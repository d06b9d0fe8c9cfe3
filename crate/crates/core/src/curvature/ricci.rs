//! Ricci-type contractions against an orthogonal complex structure, and the
//! 2-forms ψ, φ that enter the pointwise first Chern form.
//!
//! All inputs are components in an orthonormal frame.

use nalgebra::DMatrix;

use super::tensor::CurvatureTensor;
use crate::error::{Error, Result};
use crate::hermitian::{ComplexStructure, TwoForm, CLASSIFICATION_TOL};
use crate::linalg;

/// `Ric(X, Y) = Σ_i R(X, e_i, Y, e_i)`.
pub fn ricci(r: &CurvatureTensor) -> DMatrix<f64> {
    let n = r.dim();
    DMatrix::from_fn(n, n, |a, b| (0..n).map(|i| r[[a, i, b, i]]).sum())
}

/// `Ric*(X, Y) = Σ_i R(X, e_i, JY, Je_i)`. Not symmetric in general.
pub fn ricci_star(r: &CurvatureTensor, j: &ComplexStructure) -> DMatrix<f64> {
    ricci_star_raw(r, j.matrix())
}

/// [`ricci_star`] on an unvalidated matrix; for inner loops of searches
/// whose iterates are orthogonal by construction.
pub(crate) fn ricci_star_raw(r: &CurvatureTensor, jm: &DMatrix<f64>) -> DMatrix<f64> {
    let n = r.dim();
    // K[a, c] = Σ_{i,d} R[a, i, c, d] J[d, i]
    let k = DMatrix::from_fn(n, n, |a, c| {
        let mut s = 0.0;
        for i in 0..n {
            for d in 0..n {
                s += r[[a, i, c, d]] * jm[(d, i)];
            }
        }
        s
    });
    k * jm
}

/// The half-trace form `½ Σ_i R(X, JY, e_i, Je_i)`; equals [`ricci_star`]
/// on algebraic curvature tensors and is kept as a cross-check.
pub fn ricci_star_half_trace(r: &CurvatureTensor, j: &ComplexStructure) -> DMatrix<f64> {
    let n = r.dim();
    let jm = j.matrix();
    let l = DMatrix::from_fn(n, n, |a, c| {
        let mut s = 0.0;
        for i in 0..n {
            for d in 0..n {
                s += r[[a, c, i, d]] * jm[(d, i)];
            }
        }
        s
    });
    l * jm * 0.5
}

/// `ψ(X, Y) = Σ_i R(X, Y, e_i, Je_i)`, verified against `−2 Ric*(X, JY)`
/// to the classification tolerance.
pub fn psi(r: &CurvatureTensor, j: &ComplexStructure) -> Result<TwoForm> {
    psi_checked(r, j, CLASSIFICATION_TOL)
}

/// As [`psi`], with the agreement tolerance (relative to `max(1, |ψ|)`)
/// supplied by the caller, e.g. for finite-difference curvature.
pub fn psi_checked(r: &CurvatureTensor, j: &ComplexStructure, tol: f64) -> Result<TwoForm> {
    let (trace_form, ricci_form) = psi_expressions(r, j);
    let scale = linalg::max_abs(&trace_form).max(1.0);
    let gap = linalg::max_abs(&(&trace_form - &ricci_form));
    if gap > tol * scale {
        return Err(Error::ConventionMismatch(format!(
            "ΣR(X,Y,e_i,Je_i) and −2Ric*(X,JY) differ by {gap:e}"
        )));
    }
    Ok(TwoForm::antisymmetrized(&trace_form))
}

/// Both expressions of ψ: `(ΣR(X,Y,e_i,Je_i), −2Ric*(X,JY))`.
pub fn psi_expressions(r: &CurvatureTensor, j: &ComplexStructure) -> (DMatrix<f64>, DMatrix<f64>) {
    let n = r.dim();
    let jm = j.matrix();
    let trace_form = DMatrix::from_fn(n, n, |a, b| {
        let mut s = 0.0;
        for i in 0..n {
            for d in 0..n {
                s += r[[a, b, i, d]] * jm[(d, i)];
            }
        }
        s
    });
    let ricci_form = ricci_star(r, j) * jm * -2.0;
    (trace_form, ricci_form)
}

/// Pointwise covariant derivative of J: `components[k] = ∇_{e_k} J`.
#[derive(Debug, Clone, PartialEq)]
pub struct NablaJ {
    components: Vec<DMatrix<f64>>,
    /// Tolerance the constraints were verified to.
    tol: f64,
}

/// Default tolerance for the algebraic constraints on ∇J.
pub const NABLA_J_TOL: f64 = 1e-9;

impl NablaJ {
    /// Checks `(∇_X J) J + J (∇_X J) = 0` and skewness for every basis
    /// direction to `tol` (relative to `max(1, |∇J|)`).
    pub fn new(j: &ComplexStructure, components: Vec<DMatrix<f64>>, tol: f64) -> Result<Self> {
        let n = j.dim();
        if components.len() != n || components.iter().any(|c| c.shape() != (n, n)) {
            return Err(Error::Input(format!("∇J needs {n} components of shape {n}x{n}")));
        }
        let jm = j.matrix();
        let scale = components.iter().map(linalg::max_abs).fold(1.0, f64::max);
        for (k, a) in components.iter().enumerate() {
            let anti = linalg::max_abs(&(a * jm + jm * a));
            if anti > tol * scale {
                return Err(Error::Input(format!(
                    "∇_{k}J does not anticommute with J ({anti:e})"
                )));
            }
            let skew = linalg::max_abs(&(a + a.transpose()));
            if skew > tol * scale {
                return Err(Error::Input(format!("∇_{k}J is not skew ({skew:e})")));
            }
        }
        Ok(Self { components, tol })
    }

    pub fn zero(dim: usize) -> Self {
        Self {
            components: vec![DMatrix::zeros(dim, dim); dim],
            tol: NABLA_J_TOL,
        }
    }

    pub fn components(&self) -> &[DMatrix<f64>] {
        &self.components
    }

    pub fn tolerance(&self) -> f64 {
        self.tol
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    /// `∇_X J` for `X = Σ x_k e_k`.
    pub fn along(&self, x: &nalgebra::DVector<f64>) -> DMatrix<f64> {
        let n = self.dim();
        self.components
            .iter()
            .zip(x.iter())
            .fold(DMatrix::zeros(n, n), |acc, (c, xk)| acc + c * *xk)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.norm_squared())
            .sum::<f64>()
            .sqrt()
    }
}

/// `φ(X, Y) = ½[Tr(∇_X J ∇_{JY} J) − Tr(∇_Y J ∇_{JX} J)]`.
///
/// Always J-invariant with `φ(X, JX) = ½(‖∇_X J‖² + ‖∇_{JX} J‖²)`, which is
/// `‖∇_X J‖²` whenever `‖∇_{JX}J‖ = ‖∇_X J‖` (Hermitian and quasi-Kähler
/// types, in particular every integrable J and the nearly Kähler six-sphere).
pub fn phi(j: &ComplexStructure, nabla: &NablaJ) -> Result<TwoForm> {
    // re-validate against this J at the tolerance ∇J was built with
    let checked = NablaJ::new(j, nabla.components.clone(), nabla.tol)?;
    let n = j.dim();
    let c = &checked.components;
    let traces = DMatrix::from_fn(n, n, |a, k| (&c[a] * &c[k]).trace());
    let tj = traces * j.matrix();
    Ok(TwoForm::antisymmetrized(&tj))
}

/// Pointwise first Chern form `γ₁ = (2ψ + φ) / 8π`.
pub fn chern_form(r: &CurvatureTensor, j: &ComplexStructure, nabla: &NablaJ) -> Result<TwoForm> {
    chern_form_checked(r, j, nabla, CLASSIFICATION_TOL)
}

pub fn chern_form_checked(
    r: &CurvatureTensor,
    j: &ComplexStructure,
    nabla: &NablaJ,
    psi_tol: f64,
) -> Result<TwoForm> {
    let psi = psi_checked(r, j, psi_tol)?;
    let phi = phi(j, nabla)?;
    Ok(psi.scaled(2.0).add(&phi).scaled(1.0 / (8.0 * std::f64::consts::PI)))
}

/// Ricci, star-Ricci, ψ and φ at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct StarRicciData {
    pub ric: DMatrix<f64>,
    pub ric_star: DMatrix<f64>,
    pub psi: TwoForm,
    pub phi: TwoForm,
}

pub fn star_ricci_data(
    r: &CurvatureTensor,
    j: &ComplexStructure,
    nabla: &NablaJ,
    psi_tol: f64,
) -> Result<StarRicciData> {
    Ok(StarRicciData {
        ric: ricci(r),
        ric_star: ricci_star(r, j),
        psi: psi_checked(r, j, psi_tol)?,
        phi: phi(j, nabla)?,
    })
}

/// Which Gray–Hervella half a random ∇J is drawn from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NablaJKind {
    /// `∇_{JX} J = J ∇_X J`, the type of every integrable J.
    Hermitian,
    /// `∇_{JX} J = −J ∇_X J`, e.g. nearly Kähler structures.
    QuasiKahler,
    /// No relation between directions.
    General,
}

/// Random ∇J compatible with `j` (orthonormal frame).
pub fn random_nabla_j<R: rand::Rng + ?Sized>(
    rng: &mut R,
    j: &ComplexStructure,
    kind: NablaJKind,
) -> NablaJ {
    let n = j.dim();
    let jm = j.matrix();
    let raw: Vec<DMatrix<f64>> = (0..n)
        .map(|_| {
            let s = crate::rng::gaussian_skew(rng, n);
            (&s + jm * &s * jm) * 0.5
        })
        .collect();
    let sign = match kind {
        NablaJKind::Hermitian => -1.0,
        NablaJKind::QuasiKahler => 1.0,
        NablaJKind::General => 0.0,
    };
    let components = (0..n)
        .map(|k| {
            let b_jx = (0..n).fold(DMatrix::zeros(n, n), |acc, l| acc + &raw[l] * jm[(l, k)]);
            (&raw[k] + jm * b_jx * sign) * if sign == 0.0 { 1.0 } else { 0.5 }
        })
        .collect();
    NablaJ {
        components,
        tol: NABLA_J_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::{kulkarni_nomizu_square, random_curvature_tensor};
    use crate::hermitian::{
        is_positive_form, random_orthogonal_complex_structure, standard_complex_structure,
        EuclideanSpace, FormClass,
    };
    use crate::rng;
    use nalgebra::DVector;

    fn id6() -> DMatrix<f64> {
        DMatrix::identity(6, 6)
    }

    #[test]
    fn constant_curvature_contractions() {
        let space = EuclideanSpace::standard(6);
        for k in [0.5, 1.0, 2.0] {
            let r = CurvatureTensor::constant_curvature(&id6(), k);
            assert!((ricci(&r) - id6() * (5.0 * k)).abs().max() < 1e-12);
            for seed in 0..10 {
                let j = random_orthogonal_complex_structure(&space, seed, seed % 2 == 0);
                assert!((ricci_star(&r, &j) - id6() * k).abs().max() < 1e-12);
                assert!((ricci_star_half_trace(&r, &j) - id6() * k).abs().max() < 1e-12);
                let p = psi(&r, &j).unwrap();
                let expected = j.omega(&space).scaled(2.0 * k);
                assert!((p.matrix() - expected.matrix()).abs().max() < 1e-12);
            }
        }
    }

    #[test]
    fn psi_of_round_tensor_is_positive() {
        let space = EuclideanSpace::standard(6);
        let j = standard_complex_structure(6);
        let p = psi(&kulkarni_nomizu_square(&id6()), &j).unwrap();
        assert_eq!(is_positive_form(&space, &p.scaled(0.5), &j), FormClass::Positive);
    }

    #[test]
    fn star_ricci_forms_agree_on_random_tensors() {
        let space = EuclideanSpace::standard(6);
        let mut s = rng::stream(21, 0);
        for seed in 0..200 {
            let r = random_curvature_tensor(&mut s, 6);
            let j = random_orthogonal_complex_structure(&space, seed, true);
            let a = ricci_star(&r, &j);
            let b = ricci_star_half_trace(&r, &j);
            assert!((a - b).abs().max() < 1e-10);
            psi(&r, &j).unwrap();
        }
    }

    #[test]
    fn psi_surfaces_a_convention_mismatch_without_bianchi() {
        let j = standard_complex_structure(6);
        // pair symmetries only: the Bianchi component is left in
        let mut r = CurvatureTensor::zeros(6);
        for p in [[0, 1, 2, 3], [2, 3, 0, 1]] {
            r[p] = 1.0;
            r[[p[1], p[0], p[2], p[3]]] = -1.0;
            r[[p[0], p[1], p[3], p[2]]] = -1.0;
            r[[p[1], p[0], p[3], p[2]]] = 1.0;
        }
        assert!(matches!(psi(&r, &j), Err(Error::ConventionMismatch(_))));
    }

    #[test]
    fn contractions_are_frame_independent() {
        let space = EuclideanSpace::standard(6);
        let mut s = rng::stream(31, 0);
        let r = random_curvature_tensor(&mut s, 6);
        let j = random_orthogonal_complex_structure(&space, 5, true);
        let ric = ricci(&r);
        let ric_star = ricci_star(&r, &j);
        let ps = psi(&r, &j).unwrap();
        for _ in 0..10 {
            let q = rng::haar_orthogonal(&mut s, 6);
            let rq = r.in_frame(&q);
            let jq = ComplexStructure::new(&space, q.transpose() * j.matrix() * &q).unwrap();
            let back = |m: &DMatrix<f64>| &q * m * q.transpose();
            assert!((back(&ricci(&rq)) - &ric).abs().max() < 1e-12);
            assert!((back(&ricci_star(&rq, &jq)) - &ric_star).abs().max() < 1e-12);
            assert!((back(psi(&rq, &jq).unwrap().matrix()) - ps.matrix()).abs().max() < 1e-12);
        }
    }

    #[test]
    fn phi_vanishes_for_kahler() {
        let j = standard_complex_structure(6);
        assert_eq!(phi(&j, &NablaJ::zero(6)).unwrap(), TwoForm::zero(6));
        let r = kulkarni_nomizu_square(&id6());
        let gamma = chern_form(&r, &j, &NablaJ::zero(6)).unwrap();
        let expected = j
            .omega(&EuclideanSpace::standard(6))
            .scaled(1.0 / (2.0 * std::f64::consts::PI));
        assert!((gamma.matrix() - expected.matrix()).abs().max() < 1e-15);
        let zero = chern_form(&CurvatureTensor::zeros(6), &j, &NablaJ::zero(6)).unwrap();
        assert_eq!(zero, TwoForm::zero(6));
    }

    #[test]
    fn phi_on_j_rotated_vector_is_the_squared_norm() {
        let space = EuclideanSpace::standard(6);
        let mut s = rng::stream(41, 0);
        for (seed, kind) in [(1, NablaJKind::Hermitian), (2, NablaJKind::QuasiKahler)] {
            let j = random_orthogonal_complex_structure(&space, seed, true);
            let nabla = random_nabla_j(&mut s, &j, kind);
            let nabla = NablaJ::new(&j, nabla.components, 1e-12).unwrap();
            let f = phi(&j, &nabla).unwrap();
            for _ in 0..100 {
                let x = rng::gaussian_vector(&mut s, 6);
                let jx = j.matrix() * &x;
                let lhs = f.eval(&x, &jx);
                let rhs = nabla.along(&x).norm_squared();
                assert!((lhs - rhs).abs() < 1e-9 * rhs.max(1.0));
            }
            assert!(is_positive_form(&space, &f, &j).is_nonnegative());
        }
    }

    #[test]
    fn general_nabla_j_still_gives_a_nonnegative_11_form() {
        let space = EuclideanSpace::standard(6);
        let mut s = rng::stream(43, 0);
        let j = random_orthogonal_complex_structure(&space, 3, true);
        let nabla = random_nabla_j(&mut s, &j, NablaJKind::General);
        let f = phi(&j, &nabla).unwrap();
        assert!(is_positive_form(&space, &f, &j).is_nonnegative());
        let x = DVector::from_fn(6, |i, _| i as f64 - 2.0);
        let jx = j.matrix() * &x;
        let avg = 0.5 * (nabla.along(&x).norm_squared() + nabla.along(&jx).norm_squared());
        assert!((f.eval(&x, &jx) - avg).abs() < 1e-10 * avg);
    }

    #[test]
    fn incompatible_nabla_j_is_rejected() {
        let j = standard_complex_structure(6);
        let mut comps = vec![DMatrix::zeros(6, 6); 6];
        comps[0] = j.matrix().clone(); // commutes with J
        assert!(matches!(NablaJ::new(&j, comps, 1e-9), Err(Error::Input(_))));
    }
}
