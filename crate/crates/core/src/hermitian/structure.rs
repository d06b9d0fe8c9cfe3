use nalgebra::DMatrix;

use super::{forms::fundamental_two_form, EuclideanSpace, CONSTRUCTION_TOL, FRAME_TOL};
use crate::error::{Error, Result};
use crate::linalg;
use crate::rng;

/// Orthogonal almost complex structure on a Euclidean space.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexStructure {
    matrix: DMatrix<f64>,
    compatible_orientation: bool,
}

impl ComplexStructure {
    /// Validates `J² = −Id` and `Jᵀ g J = g` to [`CONSTRUCTION_TOL`].
    pub fn new(space: &EuclideanSpace, j: DMatrix<f64>) -> Result<Self> {
        Self::with_tolerance(space, j, CONSTRUCTION_TOL)
    }

    pub fn with_tolerance(space: &EuclideanSpace, j: DMatrix<f64>, tol: f64) -> Result<Self> {
        let dim = space.dim();
        if j.nrows() != dim || j.ncols() != dim {
            return Err(Error::Structure(format!(
                "expected a {dim}x{dim} matrix, got {}x{}",
                j.nrows(),
                j.ncols()
            )));
        }
        let square = &j * &j + DMatrix::identity(dim, dim);
        let dev = linalg::max_abs(&square);
        if dev > tol {
            return Err(Error::Structure(format!("J² + Id has entry {dev:e}")));
        }
        let g = space.metric();
        let compat = linalg::max_abs(&(j.transpose() * g * &j - g));
        if compat > tol * linalg::max_abs(g).max(1.0) {
            return Err(Error::Compatibility(format!("Jᵀ g J − g has entry {compat:e}")));
        }
        let compatible_orientation = orientation_sign(space, &j) > 0.0;
        Ok(Self {
            matrix: j,
            compatible_orientation,
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn compatible_orientation(&self) -> bool {
        self.compatible_orientation
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// `J` conjugated by an orthogonal change `Q`, i.e. `Q J Qᵀ` in an
    /// orthonormal working basis. Used by the frame searches.
    pub fn conjugated(&self, q: &DMatrix<f64>) -> DMatrix<f64> {
        q * &self.matrix * q.transpose()
    }
}

/// Sign of the Pfaffian of ω in the orthonormal frame, times the reference
/// orientation. Positive exactly when `(e₁, Je₁, …, e_n, Je_n)` is positive.
fn orientation_sign(space: &EuclideanSpace, j: &DMatrix<f64>) -> f64 {
    let omega = j.transpose() * space.metric();
    let omega_on = space.bilinear_to_orthonormal(&omega);
    let omega_on = (&omega_on - omega_on.transpose()) * 0.5;
    linalg::pfaffian(&omega_on).signum() * space.orientation()
}

/// `J₀` on the standard basis: `J₀ e₁ = e₂`, `J₀ e₂ = −e₁`, and so on.
pub fn standard_block(dim: usize) -> DMatrix<f64> {
    let mut j = DMatrix::zeros(dim, dim);
    for k in 0..dim / 2 {
        j[(2 * k + 1, 2 * k)] = 1.0;
        j[(2 * k, 2 * k + 1)] = -1.0;
    }
    j
}

/// `J₀` of the standard Euclidean space, declared orientation-compatible.
pub fn standard_complex_structure(dim: usize) -> ComplexStructure {
    let space = EuclideanSpace::standard(dim);
    ComplexStructure::new(&space, standard_block(dim)).expect("J₀ is a complex structure")
}

/// Builds the structure with `J e_i = (−1)^{i−1} e_{i#}`, `i# = i − (−1)^i`
/// (1-based), from an ordered g-orthonormal frame given as matrix columns.
pub fn make_complex_structure(
    space: &EuclideanSpace,
    frame: &DMatrix<f64>,
) -> Result<ComplexStructure> {
    let dim = space.dim();
    if frame.nrows() != dim || frame.ncols() != dim {
        return Err(Error::Frame(format!("frame must be {dim}x{dim}")));
    }
    let gram = frame.transpose() * space.metric() * frame;
    let dev = linalg::max_abs(&(&gram - DMatrix::identity(dim, dim)));
    if dev > FRAME_TOL {
        return Err(Error::Frame(format!("Gram matrix deviates from identity by {dev:e}")));
    }
    // Löwdin clean-up so that J is orthogonal to machine precision.
    let (vals, vecs) = linalg::sorted_symmetric_eigen(&gram);
    let inv_sqrt = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
        dim,
        vals.iter().map(|v| 1.0 / v.sqrt()),
    ));
    let frame = frame * (&vecs * inv_sqrt * vecs.transpose());
    // F⁻¹ = Fᵀ g for a g-orthonormal F.
    let frame_inv = frame.transpose() * space.metric();
    let j = &frame * standard_block(dim) * frame_inv;
    ComplexStructure::new(space, j)
}

/// `J = Q J₀ Qᵀ` (in the orthonormal frame) with `Q` Haar on O(2n),
/// restricted to the requested orientation component.
pub fn random_orthogonal_complex_structure(
    space: &EuclideanSpace,
    seed: u64,
    compatible_orientation: bool,
) -> ComplexStructure {
    let mut rng = rng::stream(seed, 0x6a5f_0001);
    random_structure_from_rng(space, &mut rng, compatible_orientation)
}

pub(crate) fn random_structure_from_rng<R: rand::Rng + ?Sized>(
    space: &EuclideanSpace,
    rng: &mut R,
    compatible_orientation: bool,
) -> ComplexStructure {
    let dim = space.dim();
    let mut q = rng::haar_orthogonal(rng, dim);
    let want = if compatible_orientation { 1.0 } else { -1.0 };
    if q.determinant().signum() * space.orientation() != want {
        let col = -q.column(0);
        q.set_column(0, &col);
    }
    let j_on = &q * standard_block(dim) * q.transpose();
    let j = space.endomorphism_from_orthonormal(&j_on);
    ComplexStructure::new(space, j).expect("Haar conjugate of J₀ is a complex structure")
}

impl ComplexStructure {
    /// Fundamental form ω(X, Y) = g(JX, Y).
    pub fn omega(&self, space: &EuclideanSpace) -> super::TwoForm {
        fundamental_two_form(space, self).expect("validated structure")
    }
}
