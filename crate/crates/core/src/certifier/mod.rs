//! Decision layer: spectral pinching, the curvature class defined by
//! `Ric*(X, X) ≥ 0` for all orthogonal structures, the nondegeneracy lemma
//! for (1,1)-forms and the perturbation budget.
//!
//! Membership is three-valued. `Certified` only comes from the sufficient
//! sup-norm bound, `Refuted` only with a witness.

mod bhl;
mod budget;
mod certificate;
mod lemma;
mod membership;

pub use bhl::{check_bhl, BhlResult, BOUNDARY_TOL, SPECTRUM_LEN};
pub use budget::{
    linear_coefficient, perturbation_budget_check, BudgetCheck, PerturbationBudget,
    BUDGET_THRESHOLD,
};
pub use certificate::{
    certify_point, CertifyOptions, Certificate, PMembership, SearchSummary, MAX_CONDITION,
};
pub use lemma::{check_lemma_ll, LemmaLlResult, DEGENERACY_SCALE};
pub use membership::{
    certify_p_sufficient, certify_p_sufficient_with, orthonormal_components, refute_p, PStatus,
    RefuteConfig, RefuteOutcome, SufficientResult, Witness,
};
