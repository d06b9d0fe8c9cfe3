use std::panic::{catch_unwind, AssertUnwindSafe};

use occert_core::certifier::{
    certify_point, perturbation_budget_check, CertifyOptions, PStatus, PerturbationBudget,
    RefuteConfig,
};
use occert_core::curvature::SupNormConfig;
use occert_core::hermitian::EuclideanSpace;
use occert_core::sphere::{map_points, perturbation_from_sample, riemann_sample, sample_points, ChartPoint};

use crate::config::{Check, RunConfig};
use crate::error::{exit, CliError};
use crate::report::*;

/// Row-major nested vectors, the report's matrix layout.
fn matrix_rows(m: &occert_core::Matrix) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect()).collect()
}

/// Per-point seed derivation; keeps streams of different points disjoint.
fn point_seed(seed: u64, index: usize) -> u64 {
    seed.wrapping_mul(0x9e37_79b9_7f4a_7c15) ^ (index as u64).wrapping_add(1)
}

fn base_record(index: usize, p: &ChartPoint) -> PointRecord {
    PointRecord {
        index,
        chart: p.chart(),
        x: p.coords().to_vec(),
        ambient: p.ambient().to_vec(),
        status: PointStatus::Error,
        spectrum: None,
        lambda_min: None,
        lambda_max: None,
        bhl: None,
        p_membership: None,
        lemma_ll: None,
        perturbation: None,
        fd_symmetry_defect: None,
        notes: Vec::new(),
        error: None,
    }
}

fn certify_inner(cfg: &RunConfig, index: usize, p: &ChartPoint) -> occert_core::Result<PointRecord> {
    let mut rec = base_record(index, p);
    let sample = riemann_sample(&cfg.metric, p, &cfg.fd)?;
    rec.fd_symmetry_defect = Some(sample.raw_symmetry.max());
    let seed = point_seed(cfg.seed, index);
    let opts = CertifyOptions {
        p_sufficient: cfg.wants(Check::PSufficient),
        refute: cfg.wants(Check::PRefute),
        refute_config: RefuteConfig {
            multistarts: cfg.multistarts,
            tol: cfg.tol,
            seed,
            ..Default::default()
        },
        sup_norm: SupNormConfig {
            multistarts: cfg.multistarts,
            seed,
            ..Default::default()
        },
        override_bound: None,
        lemma_ll_demo: cfg.wants(Check::LemmaLlDemo),
    };
    let cert = certify_point(&sample.tensor, &EuclideanSpace::standard(6), &opts)?;
    rec.lambda_min = Some(cert.bhl.lambda_min);
    rec.lambda_max = Some(cert.bhl.lambda_max);
    rec.spectrum = Some(cert.spectrum.clone());
    if cfg.wants(Check::Bhl) {
        rec.bhl = Some(cert.bhl);
    }
    let wants_p = cfg.wants(Check::PSufficient) || cfg.wants(Check::PRefute);
    if wants_p {
        let m = &cert.p_membership;
        rec.p_membership = Some(MembershipRecord {
            status: m.status,
            sup_norm: m.sufficient.map(|s| SupNormRecord {
                lower: s.deviation.lower,
                upper: s.deviation.upper,
                threshold: s.threshold,
            }),
            search: m.search,
            witness: m.witness.as_ref().map(|w| WitnessRecord {
                j: matrix_rows(w.j.matrix()),
                x: w.x.iter().copied().collect(),
                value: w.value,
            }),
        });
        // Frobenius bound only; the budget consumes upper bounds.
        let est = perturbation_from_sample(&sample, p, &SupNormConfig { multistarts: 0, ..Default::default() })?;
        rec.perturbation = Some(PerturbationRecord {
            eps1: est.eps1.upper,
            eps2: est.eps2,
        });
    }
    rec.lemma_ll = cert.lemma_ll;
    rec.notes = cert.verdict_notes.clone();
    let bhl_ok = !cfg.wants(Check::Bhl) || cert.bhl.pass;
    let p_ok = !wants_p || cert.p_membership.status == PStatus::Certified;
    rec.status = if wants_p && cert.p_membership.status == PStatus::Refuted {
        PointStatus::Refuted
    } else if bhl_ok && p_ok {
        PointStatus::Certified
    } else {
        PointStatus::Unknown
    };
    if cfg.wants(Check::Bhl) && !cert.bhl.pass {
        rec.notes.push("pinching hypothesis not met at this point".into());
    }
    Ok(rec)
}

fn certify_one(cfg: &RunConfig, index: usize, p: &ChartPoint) -> PointRecord {
    match catch_unwind(AssertUnwindSafe(|| certify_inner(cfg, index, p))) {
        Ok(Ok(rec)) => rec,
        Ok(Err(e)) => PointRecord {
            error: Some(e.to_string()),
            ..base_record(index, p)
        },
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            PointRecord {
                error: Some(format!("internal failure: {msg}")),
                ..base_record(index, p)
            }
        }
    }
}

fn aggregate(points: &[PointRecord]) -> Aggregate {
    let count = |s: PointStatus| points.iter().filter(|p| p.status == s).count();
    let (certified, refuted, unknown, errors) = (
        count(PointStatus::Certified),
        count(PointStatus::Refuted),
        count(PointStatus::Unknown),
        count(PointStatus::Error),
    );
    let min_pinching_margin = points
        .iter()
        .filter_map(|p| p.bhl.map(|b| b.pinching_margin))
        .reduce(f64::min);
    let perturbation_budget = {
        let recs: Vec<&PerturbationRecord> = points.iter().filter_map(|p| p.perturbation.as_ref()).collect();
        if recs.is_empty() {
            None
        } else {
            let eps1 = recs.iter().map(|r| r.eps1).fold(0.0, f64::max);
            let eps2 = recs.iter().map(|r| r.eps2).fold(0.0, f64::max);
            PerturbationBudget::new(eps1, eps2).ok().map(|b| {
                let c = perturbation_budget_check(&b);
                BudgetRecord {
                    eps1,
                    eps2,
                    quadratic_ok: c.quadratic_ok,
                    linear_ok: c.linear_ok,
                    implied_bound: c.implied_bound,
                }
            })
        }
    };
    let (verdict, exit_code) = if refuted > 0 {
        (VERDICT_REFUTED.to_string(), exit::REFUTED)
    } else if certified == points.len() {
        (VERDICT_CERTIFIED.to_string(), exit::CERTIFIED)
    } else {
        (
            format!("not certified: {} of {} points undecided or failed", unknown + errors, points.len()),
            exit::UNKNOWN,
        )
    };
    Aggregate {
        points: points.len(),
        certified,
        refuted,
        unknown,
        errors,
        min_pinching_margin,
        perturbation_budget,
        verdict,
        exit_code,
    }
}

fn run(cfg: &RunConfig, command: &str) -> Result<Report, CliError> {
    let points = sample_points(cfg.points, cfg.seed).map_err(|e| CliError::Config(format!("points: {e}")))?;
    let records = map_points(&points, |i, p| certify_one(cfg, i, p));
    let aggregate = aggregate(&records);
    Ok(Report {
        tool: ToolInfo {
            name: "occert".into(),
            version: env!("CARGO_PKG_VERSION").into(),
        },
        command: command.into(),
        config: cfg.clone(),
        points: records,
        aggregate,
    })
}

/// Samples points, runs curvature and certification per point, and
/// assembles the report. Point failures are recorded, never propagated.
pub fn run_certify(cfg: &RunConfig) -> Result<Report, CliError> {
    run(cfg, "certify")
}

/// Curvature spectra and the pinching test only.
pub fn run_spectrum(cfg: &RunConfig) -> Result<Report, CliError> {
    let cfg = RunConfig {
        checks: vec![Check::Bhl],
        ..cfg.clone()
    };
    run(&cfg, "spectrum")
}

/// Writes the JSON report to `cfg.out` if set.
pub fn emit_report(report: &Report, path: Option<&std::path::Path>) -> Result<(), CliError> {
    let Some(path) = path else { return Ok(()) };
    let text = crate::json::to_json_string(report).map_err(|e| CliError::Io(e.to_string()))?;
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}
