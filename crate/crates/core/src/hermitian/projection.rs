use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{
    forms::{hat, inner_lambda2, SkewEndomorphism, TwoForm},
    ComplexStructure, EuclideanSpace, CLASSIFICATION_TOL, CONSTRUCTION_TOL,
};
use crate::error::{Error, Result};
use crate::linalg;

/// Scalar by which `π₀ A* π₀*` acts on the canonical line `Λ^{n,0}`,
/// computed as `−i (Â, ω)` with the Λ² inner product.
pub fn canonical_projection_scalar(
    space: &EuclideanSpace,
    a: &SkewEndomorphism,
    j: &ComplexStructure,
) -> Result<Complex64> {
    check_square_minus_identity(j)?;
    let pairing = inner_lambda2(space, &hat(space, a), &j.omega(space));
    Ok(Complex64::new(0.0, -pairing))
}

fn check_square_minus_identity(j: &ComplexStructure) -> Result<()> {
    let dim = j.dim();
    let dev = linalg::max_abs(&(j.matrix() * j.matrix() + DMatrix::identity(dim, dim)));
    if dev > CONSTRUCTION_TOL {
        return Err(Error::Structure(format!("J² + Id has entry {dev:e}")));
    }
    Ok(())
}

/// Unitary (1,0)-coframe `θ^a = (f_a + i J f_a)^♭ / √2`, written in the
/// orthonormal frame of `space`, from a J-adapted orthonormal basis
/// `(f₁, Jf₁, …, f_n, Jf_n)` built by Gram–Schmidt.
pub fn unitary_coframe(space: &EuclideanSpace, j: &ComplexStructure) -> Vec<DVector<Complex64>> {
    let dim = space.dim();
    let jm = space.endomorphism_to_orthonormal(j.matrix());
    let mut adapted: Vec<DVector<f64>> = Vec::with_capacity(dim);
    let mut coframe = Vec::with_capacity(dim / 2);
    for k in 0..dim {
        if coframe.len() == dim / 2 {
            break;
        }
        let mut v = DVector::from_fn(dim, |i, _| if i == k { 1.0 } else { 0.0 });
        for _ in 0..2 {
            for u in &adapted {
                v -= u * u.dot(&v);
            }
        }
        let norm = v.norm();
        if norm < 0.5 {
            continue;
        }
        let f = v / norm;
        let jf = &jm * &f;
        coframe.push(DVector::from_fn(dim, |i, _| {
            Complex64::new(f[i], jf[i]) / std::f64::consts::SQRT_2
        }));
        adapted.push(f);
        adapted.push(jf);
    }
    coframe
}

/// Independent route to [`canonical_projection_scalar`]: builds the
/// holomorphic volume form `Ω = θ¹∧…∧θⁿ` as a full antisymmetric tensor,
/// applies `A*` as a derivation and returns `⟨A*Ω, Ω⟩ / ⟨Ω, Ω⟩`.
pub fn projection_scalar_by_coframe(
    space: &EuclideanSpace,
    a: &SkewEndomorphism,
    j: &ComplexStructure,
) -> Result<Complex64> {
    check_square_minus_identity(j)?;
    let dim = space.dim();
    let n = dim / 2;
    let theta = unitary_coframe(space, j);
    let am = space.endomorphism_to_orthonormal(a.matrix());

    let size = dim.pow(n as u32);
    let decode = |mut flat: usize| -> Vec<usize> {
        let mut idx = vec![0; n];
        for slot in (0..n).rev() {
            idx[slot] = flat % dim;
            flat /= dim;
        }
        idx
    };
    let encode = |idx: &[usize]| idx.iter().fold(0, |acc, &i| acc * dim + i);

    let perms = permutations(n);
    let volume: Vec<Complex64> = (0..size)
        .map(|flat| {
            let idx = decode(flat);
            perms
                .iter()
                .map(|(perm, sign)| {
                    perm.iter()
                        .enumerate()
                        .fold(Complex64::new(*sign, 0.0), |acc, (slot, &a)| acc * theta[a][idx[slot]])
                })
                .sum()
        })
        .collect();

    // (A*Ω)(v₁, …, v_n) = Σ_k Ω(v₁, …, A v_k, …, v_n)
    let derived: Vec<Complex64> = (0..size)
        .map(|flat| {
            let mut idx = decode(flat);
            let mut acc = Complex64::new(0.0, 0.0);
            for slot in 0..n {
                let original = idx[slot];
                for target in 0..dim {
                    let coeff = am[(target, original)];
                    if coeff != 0.0 {
                        idx[slot] = target;
                        acc += volume[encode(&idx)] * coeff;
                    }
                }
                idx[slot] = original;
            }
            acc
        })
        .collect();

    let increasing = |flat: usize| decode(flat).windows(2).all(|w| w[0] < w[1]);
    let hermitian = |s: &[Complex64], t: &[Complex64]| -> Complex64 {
        (0..size)
            .filter(|&f| increasing(f))
            .map(|f| s[f] * t[f].conj())
            .sum()
    };
    let norm2 = hermitian(&volume, &volume);
    if norm2.norm() < 1e-300 {
        return Err(Error::Structure("degenerate holomorphic volume form".into()));
    }
    Ok(hermitian(&derived, &volume) / norm2)
}

fn permutations(n: usize) -> Vec<(Vec<usize>, f64)> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], sign: f64, out: &mut Vec<(Vec<usize>, f64)>) {
        let n = used.len();
        if prefix.len() == n {
            out.push((prefix.clone(), sign));
            return;
        }
        for k in 0..n {
            if !used[k] {
                // inversions contributed by placing k after the current prefix
                let inversions = prefix.iter().filter(|&&p| p > k).count();
                let s = if inversions % 2 == 0 { sign } else { -sign };
                used[k] = true;
                prefix.push(k);
                rec(prefix, used, s, out);
                prefix.pop();
                used[k] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::with_capacity(n), &mut vec![false; n], 1.0, &mut out);
    out
}

/// A 1-form on `V` with values in linear maps `W₀ → W₁` between Hermitian
/// spaces, extended complex-linearly. `components[k] = Φ(e_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HomValuedOneForm {
    components: Vec<DMatrix<Complex64>>,
}

impl HomValuedOneForm {
    pub fn new(components: Vec<DMatrix<Complex64>>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::Input("empty 1-form".into()))?
            .shape();
        if components.iter().any(|c| c.shape() != first) {
            return Err(Error::Input("inconsistent component shapes".into()));
        }
        Ok(Self { components })
    }

    /// `Φ = θ ⊗ L` for a complex covector θ.
    pub fn from_covector(theta: &DVector<Complex64>, l: &DMatrix<Complex64>) -> Self {
        Self {
            components: theta.iter().map(|t| l * *t).collect(),
        }
    }

    pub fn zero(dim: usize, target: usize, source: usize) -> Self {
        Self {
            components: vec![DMatrix::zeros(target, source); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn source_dim(&self) -> usize {
        self.components[0].ncols()
    }

    pub fn eval(&self, x: &DVector<f64>) -> DMatrix<Complex64> {
        let (r, c) = self.components[0].shape();
        self.components
            .iter()
            .zip(x.iter())
            .fold(DMatrix::zeros(r, c), |acc, (m, xi)| acc + m * Complex64::new(*xi, 0.0))
    }

    fn eval_j(&self, j: &ComplexStructure, k: usize) -> DMatrix<Complex64> {
        self.eval(&j.matrix().column(k).into_owned())
    }

    /// Largest entry of `Φ(J e_k) − i Φ(e_k)` over the basis.
    pub fn type_10_defect(&self, j: &ComplexStructure) -> f64 {
        let i = Complex64::new(0.0, 1.0);
        (0..self.dim())
            .map(|k| {
                let d = self.eval_j(j, k) - &self.components[k] * i;
                d.iter().fold(0.0_f64, |acc, z| acc.max(z.norm()))
            })
            .fold(0.0, f64::max)
    }

    pub fn is_type_10(&self, j: &ComplexStructure, tol: f64) -> bool {
        let scale = self
            .components
            .iter()
            .flat_map(|m| m.iter())
            .fold(1.0_f64, |acc, z| acc.max(z.norm()));
        self.type_10_defect(j) <= tol * scale
    }

    /// `½(Φ(X) − iΦ(JX))`, the (1,0) part.
    pub fn type_10_part(&self, j: &ComplexStructure) -> Self {
        let i = Complex64::new(0.0, 1.0);
        Self {
            components: (0..self.dim())
                .map(|k| (&self.components[k] - self.eval_j(j, k) * i) * Complex64::new(0.5, 0.0))
                .collect(),
        }
    }
}

/// Scalar 2-form `⟨(−iΦ*∧Φ) w, w⟩` for a fixed vector `w` of the source
/// space (normalised to unit length), with
/// `(α∧β)(X, Y) = α(X)β(Y) − α(Y)β(X)` and `Φ*(X) = Φ(X)*`.
///
/// For `Φ` of type (1,0) the result is nonnegative in the sense of
/// [`super::is_positive_form`]; other inputs are rejected.
pub fn phi_wedge_negativity(
    phi: &HomValuedOneForm,
    j: &ComplexStructure,
    w: &DVector<Complex64>,
) -> Result<TwoForm> {
    if phi.dim() != j.dim() {
        return Err(Error::Input("1-form and J live on different spaces".into()));
    }
    if w.len() != phi.source_dim() {
        return Err(Error::Input("w has the wrong dimension".into()));
    }
    if !phi.is_type_10(j, CLASSIFICATION_TOL) {
        return Err(Error::Type(format!(
            "Φ is not of type (1,0) (defect {:e})",
            phi.type_10_defect(j)
        )));
    }
    let wn = w.norm();
    if wn == 0.0 {
        return Err(Error::Input("w must be non-zero".into()));
    }
    let w = w.unscale(wn);
    let images: Vec<DVector<Complex64>> = phi.components.iter().map(|m| m * &w).collect();
    let dim = phi.dim();
    // −i(a_X* a_Y − a_Y* a_X) = 2 Im(a_X* a_Y)
    let m = DMatrix::from_fn(dim, dim, |x, y| 2.0 * images[x].dotc(&images[y]).im);
    Ok(TwoForm::antisymmetrized(&m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::{is_positive_form, random_orthogonal_complex_structure, standard_complex_structure, FormClass};
    use crate::rng;

    #[test]
    fn j0_acts_on_the_canonical_line_by_3i() {
        let space = EuclideanSpace::standard(6);
        let j = standard_complex_structure(6);
        let a = SkewEndomorphism::new(&space, j.matrix().clone()).unwrap();
        let lemma = canonical_projection_scalar(&space, &a, &j).unwrap();
        let oracle = projection_scalar_by_coframe(&space, &a, &j).unwrap();
        assert!((lemma - Complex64::new(0.0, 3.0)).norm() < 1e-14);
        assert!((oracle - Complex64::new(0.0, 3.0)).norm() < 1e-12, "{oracle}");
    }

    #[test]
    fn endomorphism_orthogonal_to_omega_gives_zero() {
        let space = EuclideanSpace::standard(6);
        let j = standard_complex_structure(6);
        // e¹∧e³ is orthogonal to ω in Λ².
        let a = SkewEndomorphism::new(&space, TwoForm::elementary(6, 0, 2).into_matrix()).unwrap();
        let lemma = canonical_projection_scalar(&space, &a, &j).unwrap();
        assert_eq!(lemma, Complex64::new(0.0, 0.0));
        let oracle = projection_scalar_by_coframe(&space, &a, &j).unwrap();
        assert!(oracle.norm() < 1e-12);
    }

    #[test]
    fn coframe_is_unitary_and_of_type_10() {
        let space = EuclideanSpace::standard(6);
        let j = random_orthogonal_complex_structure(&space, 9, false);
        let theta = unitary_coframe(&space, &j);
        assert_eq!(theta.len(), 3);
        for (a, ta) in theta.iter().enumerate() {
            for (b, tb) in theta.iter().enumerate() {
                let h = ta.dotc(tb);
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((h - Complex64::new(expect, 0.0)).norm() < 1e-12);
            }
            // θ(Jv) = iθ(v)
            let jt: DVector<Complex64> = j.matrix().transpose().map(|v| Complex64::new(v, 0.0)) * ta;
            assert!((jt - ta * Complex64::new(0.0, 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn zero_phi_is_nonnegative() {
        let space = EuclideanSpace::standard(6);
        let j = standard_complex_structure(6);
        let phi = HomValuedOneForm::zero(6, 2, 2);
        let w = DVector::from_vec(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]);
        let form = phi_wedge_negativity(&phi, &j, &w).unwrap();
        assert_eq!(form, TwoForm::zero(6));
        assert_eq!(is_positive_form(&space, &form, &j), FormClass::Nonnegative);
    }

    #[test]
    fn rank_one_phi_has_one_positive_complex_direction() {
        let space = EuclideanSpace::standard(6);
        let j = standard_complex_structure(6);
        let i = Complex64::new(0.0, 1.0);
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        // e¹ + i e² is (1,0) for J e₁ = e₂.
        let theta = DVector::from_vec(vec![one, i, zero, zero, zero, zero]);
        let l = DMatrix::from_row_slice(2, 2, &[one, zero, zero * 2.0, zero]);
        let phi = HomValuedOneForm::from_covector(&theta, &l);
        let w = DVector::from_vec(vec![one, zero]);
        let form = phi_wedge_negativity(&phi, &j, &w).unwrap();
        assert_eq!(is_positive_form(&space, &form, &j), FormClass::Nonnegative);
        let b = form.matrix() * j.matrix();
        let eig = linalg::sorted_eigenvalues(&b);
        let positive = eig.iter().filter(|&&v| v > 1e-9).count();
        // one complex line = two real directions
        assert_eq!(positive, 2);

        // The conjugate covector e¹ − i e² has type (0,1) and is rejected.
        let conj_theta = theta.map(|z| z.conj());
        let bad = HomValuedOneForm::from_covector(&conj_theta, &l);
        assert!(matches!(phi_wedge_negativity(&bad, &j, &w), Err(Error::Type(_))));
    }

    #[test]
    fn type_10_projection_is_idempotent() {
        let space = EuclideanSpace::standard(6);
        let j = random_orthogonal_complex_structure(&space, 2, true);
        let mut r = rng::stream(4, 4);
        let comps = (0..6)
            .map(|_| {
                let re = rng::gaussian_matrix(&mut r, 3, 2);
                let im = rng::gaussian_matrix(&mut r, 3, 2);
                DMatrix::from_fn(3, 2, |a, b| Complex64::new(re[(a, b)], im[(a, b)]))
            })
            .collect();
        let phi = HomValuedOneForm::new(comps).unwrap();
        assert!(!phi.is_type_10(&j, 1e-9));
        let p = phi.type_10_part(&j);
        assert!(p.is_type_10(&j, 1e-12));
        let pp = p.type_10_part(&j);
        assert!(pp.components.iter().zip(&p.components).all(|(a, b)| (a - b).norm() < 1e-12));
    }
}
