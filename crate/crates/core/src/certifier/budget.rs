use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sampled deviations of a connection's curvature (`eps1`) and of the metric
/// (`eps2`) from the round reference, both in sup norm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerturbationBudget {
    eps1: f64,
    eps2: f64,
}

impl PerturbationBudget {
    pub fn new(eps1: f64, eps2: f64) -> Result<Self> {
        if !(eps1 >= 0.0 && eps1.is_finite()) {
            return Err(Error::Input(format!("eps1 must be finite and >= 0, got {eps1}")));
        }
        if !(eps2 >= 0.0 && eps2.is_finite()) {
            return Err(Error::Input(format!("eps2 must be finite and >= 0, got {eps2}")));
        }
        Ok(Self { eps1, eps2 })
    }

    pub fn eps1(&self) -> f64 {
        self.eps1
    }

    pub fn eps2(&self) -> f64 {
        self.eps2
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BudgetCheck {
    pub quadratic_ok: bool,
    pub linear_ok: bool,
    /// `ε₁ + 2ε₂(2 + ε₂)`, the resulting bound on the curvature deviation
    /// from `g⊼g`.
    pub implied_bound: f64,
}

pub const BUDGET_THRESHOLD: f64 = 1.0 / 6.0;

pub fn linear_coefficient() -> f64 {
    2.0 + (13.0f64 / 3.0).sqrt()
}

pub fn perturbation_budget_check(b: &PerturbationBudget) -> BudgetCheck {
    let (e1, e2) = (b.eps1, b.eps2);
    BudgetCheck {
        quadratic_ok: e1 + 4.0 * e2 + 2.0 * e2 * e2 <= BUDGET_THRESHOLD,
        linear_ok: e1 + linear_coefficient() * e2 <= BUDGET_THRESHOLD,
        implied_bound: e1 + 2.0 * e2 * (2.0 + e2),
    }
}
