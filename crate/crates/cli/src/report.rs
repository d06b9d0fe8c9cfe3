use occert_core::certifier::{BhlResult, LemmaLlResult, PStatus, SearchSummary};
use occert_core::sphere::Chart;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointStatus {
    Certified,
    Refuted,
    Unknown,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SupNormRecord {
    pub lower: f64,
    pub upper: f64,
    pub threshold: f64,
}

/// `J` and `X` in the g-orthonormal Gram–Schmidt frame of the chart basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRecord {
    /// Row-major 6×6.
    pub j: Vec<Vec<f64>>,
    pub x: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembershipRecord {
    pub status: PStatus,
    pub sup_norm: Option<SupNormRecord>,
    pub search: Option<SearchSummary>,
    pub witness: Option<WitnessRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PerturbationRecord {
    /// Frobenius upper bound of `‖R − g₀⊼g₀‖∞`.
    pub eps1: f64,
    /// `‖g − g₀‖∞`.
    pub eps2: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointRecord {
    pub index: usize,
    pub chart: Chart,
    pub x: Vec<f64>,
    pub ambient: Vec<f64>,
    pub status: PointStatus,
    pub spectrum: Option<Vec<f64>>,
    pub lambda_min: Option<f64>,
    pub lambda_max: Option<f64>,
    pub bhl: Option<BhlResult>,
    pub p_membership: Option<MembershipRecord>,
    pub lemma_ll: Option<LemmaLlResult>,
    pub perturbation: Option<PerturbationRecord>,
    /// Largest symmetry defect of the finite-difference tensor before
    /// projection.
    pub fd_symmetry_defect: Option<f64>,
    pub notes: Vec<String>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BudgetRecord {
    pub eps1: f64,
    pub eps2: f64,
    pub quadratic_ok: bool,
    pub linear_ok: bool,
    pub implied_bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Aggregate {
    pub points: usize,
    pub certified: usize,
    pub refuted: usize,
    pub unknown: usize,
    pub errors: usize,
    /// Minimum over points of `7 λ_min − 5 λ_max`.
    pub min_pinching_margin: Option<f64>,
    /// Budget check on the largest sampled deviations from the round metric.
    pub perturbation_budget: Option<BudgetRecord>,
    pub verdict: String,
    pub exit_code: i32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ToolInfo {
    pub name: String,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: ToolInfo,
    pub command: String,
    pub config: RunConfig,
    pub points: Vec<PointRecord>,
    pub aggregate: Aggregate,
}

pub const VERDICT_CERTIFIED: &str = "hypotheses certified at all sampled points";
pub const VERDICT_REFUTED: &str = "refuted with witness";

impl Report {
    /// Fixed-width summary table for standard output.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:>5}  {:<5}  {:>12}  {:>12}  {:>12}  {:<4}  {:<9}  {:<9}\n",
            "point", "chart", "lambda_min", "lambda_max", "7min-5max", "bhl", "P", "status"
        ));
        let num = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.6e}"));
        for p in &self.points {
            let bhl = match &p.bhl {
                Some(b) if b.pass => "pass",
                Some(_) => "fail",
                None => "-",
            };
            let pm = p
                .p_membership
                .as_ref()
                .map_or("-", |m| match m.status {
                    PStatus::Certified => "certified",
                    PStatus::Refuted => "refuted",
                    PStatus::Unknown => "unknown",
                });
            let status = match p.status {
                PointStatus::Certified => "certified",
                PointStatus::Refuted => "refuted",
                PointStatus::Unknown => "unknown",
                PointStatus::Error => "error",
            };
            out.push_str(&format!(
                "{:>5}  {:<5}  {:>12}  {:>12}  {:>12}  {:<4}  {:<9}  {:<9}\n",
                p.index,
                match p.chart {
                    Chart::North => "north",
                    Chart::South => "south",
                },
                num(p.lambda_min),
                num(p.lambda_max),
                num(p.bhl.map(|b| b.pinching_margin)),
                bhl,
                pm,
                status
            ));
            if let Some(e) = &p.error {
                out.push_str(&format!("       error: {e}\n"));
            }
        }
        let a = &self.aggregate;
        out.push_str(&format!(
            "certified {} / refuted {} / unknown {} / errors {} of {} points\n",
            a.certified, a.refuted, a.unknown, a.errors, a.points
        ));
        if let Some(m) = a.min_pinching_margin {
            out.push_str(&format!("min 7*lambda_min - 5*lambda_max: {m:.6e}\n"));
        }
        if let Some(b) = &a.perturbation_budget {
            out.push_str(&format!(
                "perturbation budget: eps1 {:.3e}, eps2 {:.3e}, quadratic_ok {}, linear_ok {}\n",
                b.eps1, b.eps2, b.quadratic_ok, b.linear_ok
            ));
        }
        out.push_str(&format!("verdict: {} (exit {})\n", a.verdict, a.exit_code));
        out
    }
}
