use serde::{Deserialize, Serialize};

use super::bhl::{check_bhl, BhlResult};
use super::lemma::{check_lemma_ll, LemmaLlResult};
use super::membership::{
    certify_p_sufficient_with, orthonormal_components, refute_p, PStatus, RefuteConfig,
    SufficientResult, Witness,
};
use crate::curvature::{curvature_operator, CurvatureTensor, SupNormConfig};
use crate::error::{Error, Result};
use crate::hermitian::{standard_complex_structure, EuclideanSpace};
use crate::linalg;

/// Metrics with a larger condition number are rejected before certification.
pub const MAX_CONDITION: f64 = 1e8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertifyOptions {
    pub p_sufficient: bool,
    /// Run the refutation search when the sufficient test does not certify.
    pub refute: bool,
    pub refute_config: RefuteConfig,
    pub sup_norm: SupNormConfig,
    pub override_bound: Option<f64>,
    pub lemma_ll_demo: bool,
}

impl Default for CertifyOptions {
    fn default() -> Self {
        Self {
            p_sufficient: true,
            refute: true,
            refute_config: RefuteConfig::default(),
            sup_norm: SupNormConfig::default(),
            override_bound: None,
            lemma_ll_demo: false,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub best_value: f64,
    pub starts_run: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PMembership {
    pub status: PStatus,
    pub sufficient: Option<SufficientResult>,
    pub search: Option<SearchSummary>,
    pub witness: Option<Witness>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub spectrum: Vec<f64>,
    pub bhl: BhlResult,
    pub p_membership: PMembership,
    pub lemma_ll: Option<LemmaLlResult>,
    pub verdict_notes: Vec<String>,
}

/// Runs the pinching test, the sufficient membership bound and, if that is
/// inconclusive, the refutation search. `R` is given in the coordinates of
/// `space`.
pub fn certify_point(r: &CurvatureTensor, space: &EuclideanSpace, opts: &CertifyOptions) -> Result<Certificate> {
    let cond = linalg::spd_condition_number(space.metric());
    if !(cond <= MAX_CONDITION) {
        return Err(Error::Conditioning(format!(
            "metric condition number {cond:e} exceeds {MAX_CONDITION:e}"
        )));
    }
    let r_on = orthonormal_components(r, space)?;
    let std = EuclideanSpace::standard(space.dim());
    let op = curvature_operator(&r_on)?;
    let spectrum = op.spectrum().to_vec();
    let bhl = check_bhl(&spectrum)?;
    let mut notes = Vec::new();
    if bhl.boundary {
        notes.push("pinching inequality within the tie band; counted as failure".to_string());
    }

    let sufficient = if opts.p_sufficient {
        Some(certify_p_sufficient_with(&r_on, &std, opts.override_bound, &opts.sup_norm)?)
    } else {
        None
    };
    let mut membership = PMembership {
        status: sufficient.map_or(PStatus::Unknown, |s| s.status),
        sufficient,
        search: None,
        witness: None,
    };
    if membership.status != PStatus::Certified && opts.refute {
        let out = refute_p(r, space, &opts.refute_config)?;
        membership.search = Some(SearchSummary {
            best_value: out.best_value,
            starts_run: out.starts_run,
        });
        if let Some(w) = out.witness {
            membership.status = PStatus::Refuted;
            notes.push(format!("Ric*(X, X) = {:.6e} < 0 at the returned (J, X)", w.value));
            membership.witness = Some(w);
        } else {
            notes.push(format!(
                "no witness in {} starts (best λ_min {:.6e}); this is not a membership proof",
                out.starts_run, out.best_value
            ));
        }
    }
    if let Some(s) = sufficient {
        if s.status == PStatus::Unknown {
            notes.push(format!(
                "sufficient bound {:.6e} exceeds {:.6e}",
                s.bound_used, s.threshold
            ));
        }
    }

    let lemma_ll = if opts.lemma_ll_demo {
        Some(lemma_ll_demo(&op, &std))
    } else {
        None
    };
    Ok(Certificate {
        spectrum,
        bhl,
        p_membership: membership,
        lemma_ll,
        verdict_notes: notes,
    })
}

/// `ζ₀ = ω` against the (1,1) part of `s·R̃(ω)`, with `s` normalising the
/// spectrum to be centred at one.
fn lemma_ll_demo(op: &crate::curvature::CurvatureOperator, std: &EuclideanSpace) -> LemmaLlResult {
    let j = standard_complex_structure(std.dim());
    let omega = j.omega(std);
    let centre = op.lambda_min() + op.lambda_max();
    let s = if centre.abs() > f64::EPSILON { 2.0 / centre } else { 1.0 };
    let zeta = op.apply(&omega).scaled(s).type_11_part(&j);
    check_lemma_ll(&omega, &zeta, &j, std)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curvature::kulkarni_nomizu_square;
    use nalgebra::DMatrix;

    fn id6() -> DMatrix<f64> {
        DMatrix::identity(6, 6)
    }

    #[test]
    fn round_point() {
        let space = EuclideanSpace::standard(6);
        let opts = CertifyOptions {
            lemma_ll_demo: true,
            ..Default::default()
        };
        let c = certify_point(&kulkarni_nomizu_square(&id6()), &space, &opts).unwrap();
        assert!(c.bhl.pass);
        assert_eq!(c.p_membership.status, PStatus::Certified);
        assert!(c.p_membership.search.is_none());
        let ll = c.lemma_ll.unwrap();
        assert!(ll.hypotheses_met && ll.nondegenerate && ll.distance < 1e-12);
    }

    #[test]
    fn negative_point() {
        let space = EuclideanSpace::standard(6);
        let c = certify_point(&kulkarni_nomizu_square(&id6()).scaled(-1.0), &space, &Default::default()).unwrap();
        assert!(!c.bhl.pass);
        assert_eq!(c.p_membership.status, PStatus::Refuted);
        assert!(c.p_membership.witness.as_ref().unwrap().value < -1e-9);
    }

    #[test]
    fn uniformly_scaled_point_records_both_outcomes() {
        let space = EuclideanSpace::standard(6);
        let c = certify_point(&kulkarni_nomizu_square(&id6()).scaled(1.3), &space, &Default::default()).unwrap();
        assert!(c.bhl.pass);
        assert!((c.bhl.lambda_min - 1.3).abs() < 1e-12);
        assert_eq!(c.p_membership.status, PStatus::Unknown);
        let s = c.p_membership.sufficient.unwrap();
        assert!((s.deviation.upper - 0.3 * 60f64.sqrt()).abs() < 1e-12);
        assert!((s.deviation.lower - 0.3).abs() < 1e-6);
        assert!(c.p_membership.search.unwrap().best_value > 1.0);
    }

    #[test]
    fn ill_conditioned_metric_rejected() {
        let mut g = id6();
        g[(0, 0)] = 1e-9;
        let space = EuclideanSpace::new(g.clone()).unwrap();
        let r = kulkarni_nomizu_square(&g);
        assert!(matches!(
            certify_point(&r, &space, &Default::default()),
            Err(Error::Conditioning(_))
        ));
    }

    #[test]
    fn coordinates_do_not_change_the_verdict() {
        let mut s = crate::rng::stream(8, 8);
        let a = crate::rng::gaussian_matrix(&mut s, 6, 6);
        let g = &a * a.transpose() + id6();
        let space = EuclideanSpace::new(g.clone()).unwrap();
        let c = certify_point(&kulkarni_nomizu_square(&g), &space, &Default::default()).unwrap();
        assert!(c.bhl.pass);
        assert!(c.spectrum.iter().all(|v| (v - 1.0).abs() < 1e-10));
        assert_eq!(c.p_membership.status, PStatus::Certified);
    }
}
