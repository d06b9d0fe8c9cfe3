//! Algebraic curvature tensors, the curvature operator on 2-forms, Ricci
//! type contractions, frame matrices and sup-norm estimates.
//!
//! Tensors are components in an orthonormal frame unless stated otherwise.

mod frame;
mod operator;
mod ricci;
mod supnorm;
mod tensor;

pub use frame::{star_matrix, FrameMatrix, FrameRelation};
pub use operator::{curvature_operator, lambda2_pairs, CurvatureOperator, OPERATOR_SYMMETRY_TOL};
pub use ricci::{
    chern_form, chern_form_checked, phi, psi, psi_checked, psi_expressions, random_nabla_j,
    ricci, ricci_star, ricci_star_half_trace, star_ricci_data, NablaJ, NablaJKind, StarRicciData,
    NABLA_J_TOL,
};
pub(crate) use ricci::ricci_star_raw;
pub use supnorm::{sup_norm_bounds, sup_norm_bounds_with, SupNormBounds, SupNormConfig};
pub use tensor::{
    kulkarni_nomizu_square, project_to_curvature, random_curvature_tensor, validate_symmetries,
    CurvatureTensor, SymmetryReport,
};
