use std::path::{Path, PathBuf};

use occert_core::sphere::{FdConfig, FdScheme, MetricField};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const FAMILIES: [&str; 4] = ["round", "conformal", "ellipsoid", "custom"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Check {
    #[value(name = "bhl")]
    Bhl,
    #[value(name = "p_sufficient")]
    PSufficient,
    #[value(name = "p_refute")]
    PRefute,
    #[value(name = "lemma_ll_demo")]
    LemmaLlDemo,
}

pub const DEFAULT_CHECKS: [Check; 3] = [Check::Bhl, Check::PSufficient, Check::PRefute];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub metric: MetricField,
    /// Where the metric came from: a built-in name, `inline` or a file path.
    pub metric_source: String,
    pub points: usize,
    pub seed: u64,
    pub fd: FdConfig,
    pub multistarts: usize,
    pub tol: f64,
    /// Sorted, without duplicates.
    pub checks: Vec<Check>,
    /// Not echoed: the report must not depend on where it is written.
    #[serde(skip)]
    pub out: Option<PathBuf>,
}

/// Raw inputs before validation, as given on the command line.
#[derive(Debug, Clone, Default)]
pub struct RunInputs {
    pub metric: Option<String>,
    pub spec: Option<PathBuf>,
    pub points: usize,
    pub seed: u64,
    pub fd_step: f64,
    pub richardson: bool,
    pub multistarts: usize,
    pub tol: f64,
    pub checks: Vec<Check>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_inputs(inp: RunInputs) -> Result<Self, CliError> {
        let (metric, metric_source) = match (&inp.metric, &inp.spec) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config("--metric and --spec are mutually exclusive".into()))
            }
            (None, Some(path)) => (load_spec_file(path)?, path.display().to_string()),
            (Some(m), None) => resolve_metric_flag(m)?,
            (None, None) => (MetricField::round(), "round".to_string()),
        };
        if inp.points == 0 {
            return Err(CliError::Config("points: must be at least 1".into()));
        }
        if inp.multistarts == 0 {
            return Err(CliError::Config("multistarts: must be at least 1".into()));
        }
        if !(inp.tol.is_finite() && inp.tol > 0.0) {
            return Err(CliError::Config(format!("tol: must be positive, got {}", inp.tol)));
        }
        let scheme = if inp.richardson {
            FdScheme::Richardson4th
        } else {
            FdScheme::Central2nd
        };
        let fd = FdConfig::new(inp.fd_step, scheme)
            .map_err(|e| CliError::Config(format!("fd-step: {e}")))?;
        let mut checks = inp.checks.clone();
        checks.sort();
        checks.dedup();
        if checks.is_empty() {
            return Err(CliError::Config("checks: at least one check is required".into()));
        }
        Ok(Self {
            metric,
            metric_source,
            points: inp.points,
            seed: inp.seed,
            fd,
            multistarts: inp.multistarts,
            tol: inp.tol,
            checks,
            out: inp.out,
        })
    }

    pub fn wants(&self, c: Check) -> bool {
        self.checks.contains(&c)
    }
}

fn resolve_metric_flag(m: &str) -> Result<(MetricField, String), CliError> {
    let m = m.trim();
    if m.starts_with('{') {
        return Ok((parse_metric_spec(m)?, "inline".into()));
    }
    match m {
        "round" => Ok((MetricField::round(), "round".into())),
        "flat" => Ok((MetricField::flat(), "flat".into())),
        other => Err(CliError::Config(format!(
            "metric: unknown built-in `{other}` (expected round, flat, or an inline JSON spec)"
        ))),
    }
}

fn load_spec_file(path: &Path) -> Result<MetricField, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("spec: cannot read {}: {e}", path.display())))?;
    parse_metric_spec(&text)
}

/// Parses and validates a metric spec. Unknown keys are rejected and
/// messages name the offending field.
pub fn parse_metric_spec(text: &str) -> Result<MetricField, CliError> {
    let value: serde_json::Value =
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("spec: malformed JSON: {e}")))?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::Config("spec: expected a JSON object".into()))?;
    match obj.get("family") {
        None => return Err(CliError::Config("family: missing".into())),
        Some(serde_json::Value::String(f)) if FAMILIES.contains(&f.as_str()) => {}
        Some(other) => {
            return Err(CliError::Config(format!(
                "family: unknown metric family {other} (expected one of {})",
                FAMILIES.join(", ")
            )))
        }
    }
    let field: MetricField =
        serde_json::from_value(value).map_err(|e| CliError::Config(format!("spec: {e}")))?;
    field
        .validate()
        .map_err(|e| CliError::Config(format!("spec: {e}")))?;
    Ok(field)
}
