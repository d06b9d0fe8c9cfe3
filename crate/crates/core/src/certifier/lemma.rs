use serde::{Deserialize, Serialize};

use crate::hermitian::{
    is_positive_form, norm_lambda2, ComplexStructure, EuclideanSpace, FormClass, TwoForm,
};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LemmaLlResult {
    pub hypotheses_met: bool,
    pub zeta0_type_11: bool,
    pub zeta_type_11: bool,
    /// `ζ₀ − ω` is a nonnegative (1,1)-form.
    pub zeta0_dominates_omega: bool,
    /// `‖ζ − ζ₀‖_{Λ²}`.
    pub distance: f64,
    /// `1/(2√n)`.
    pub radius: f64,
    pub nondegenerate: bool,
    /// Determinant of ζ in a g-orthonormal frame.
    pub det_value: f64,
}

/// Below this `|det|` (per real dimension) a form counts as degenerate.
pub const DEGENERACY_SCALE: f64 = 1e-9;

/// Evaluates the hypotheses of the nondegeneracy lemma for `ζ` near `ζ₀`
/// and decides nondegeneracy of `ζ` independently of them.
pub fn check_lemma_ll(
    zeta0: &TwoForm,
    zeta: &TwoForm,
    j: &ComplexStructure,
    space: &EuclideanSpace,
) -> LemmaLlResult {
    let omega = j.omega(space);
    let zeta0_type_11 = is_positive_form(space, zeta0, j) != FormClass::Not11;
    let zeta_type_11 = is_positive_form(space, zeta, j) != FormClass::Not11;
    let zeta0_dominates_omega = is_positive_form(space, &zeta0.sub(&omega), j).is_nonnegative();
    let distance = norm_lambda2(space, &zeta.sub(zeta0));
    let radius = 1.0 / (2.0 * (space.n() as f64).sqrt());
    let det_value = space.bilinear_to_orthonormal(zeta.matrix()).determinant();
    LemmaLlResult {
        hypotheses_met: zeta0_type_11 && zeta_type_11 && zeta0_dominates_omega && distance <= radius,
        zeta0_type_11,
        zeta_type_11,
        zeta0_dominates_omega,
        distance,
        radius,
        nondegenerate: det_value.abs() > DEGENERACY_SCALE.powi(space.dim() as i32),
        det_value,
    }
}
