//! Linear algebra of a Euclidean space of even dimension carrying orthogonal
//! complex structures: 2-forms, type decomposition, positivity, and the
//! pointwise projection/positivity facts for the canonical line.
//!
//! Matrices are written in a fixed working basis. A bilinear form `b` is
//! stored as `b[(i, j)] = b(e_i, e_j)`, an endomorphism `A` as
//! `A e_j = Σ_i A[(i, j)] e_i`.

mod forms;
mod projection;
mod space;
mod structure;

pub use forms::{
    fundamental_two_form, hat, inner_lambda2, is_positive_form, is_positive_form_with_tol,
    norm_e, norm_lambda2, pullback_covector, sharp, wedge, FormClass, SkewEndomorphism, TwoForm,
};
pub use projection::{
    canonical_projection_scalar, phi_wedge_negativity, projection_scalar_by_coframe,
    unitary_coframe, HomValuedOneForm,
};
pub use space::EuclideanSpace;
pub use structure::{
    make_complex_structure, random_orthogonal_complex_structure, standard_block,
    standard_complex_structure,
    ComplexStructure,
};

/// Tolerance for construction invariants (J² = −Id, J*g = g, skewness).
pub const CONSTRUCTION_TOL: f64 = 1e-12;
/// Tolerance for classification decisions (type, sign of a spectrum).
pub const CLASSIFICATION_TOL: f64 = 1e-9;
/// Gram matrix deviation accepted for an input frame before it is rejected.
pub const FRAME_TOL: f64 = 1e-9;
