use nalgebra::DVector;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::tensor::CurvatureTensor;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNormConfig {
    pub multistarts: usize,
    pub iterations: usize,
    pub gradient_tol: f64,
    pub seed: u64,
}

impl Default for SupNormConfig {
    fn default() -> Self {
        Self {
            multistarts: 64,
            iterations: 200,
            gradient_tol: 1e-10,
            seed: 0x5eed,
        }
    }
}

/// Two-sided estimate of `‖R‖∞ = max |R(v₁, v₂, v₃, v₄)|` over unit vectors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SupNormBounds {
    /// Best value found (a true lower bound: it is attained).
    pub lower: f64,
    /// `‖R‖_F`, a rigorous upper bound.
    pub upper: f64,
}

pub fn sup_norm_bounds(r: &CurvatureTensor) -> SupNormBounds {
    sup_norm_bounds_with(r, &SupNormConfig::default())
}

pub fn sup_norm_bounds_with(r: &CurvatureTensor, cfg: &SupNormConfig) -> SupNormBounds {
    let upper = r.frobenius_norm();
    let axis = r.max_abs();
    if upper == 0.0 {
        return SupNormBounds { lower: 0.0, upper };
    }
    let searched = (0..cfg.multistarts)
        .into_par_iter()
        .map(|s| ascend(r, cfg, s as u64))
        .reduce(|| 0.0, f64::max);
    SupNormBounds {
        lower: axis.max(searched).min(upper),
        upper,
    }
}

/// Projected-gradient ascent of `R(v₁, …, v₄)` on a product of unit spheres.
fn ascend(r: &CurvatureTensor, cfg: &SupNormConfig, start: u64) -> f64 {
    let n = r.dim();
    let mut rng = rng::stream(cfg.seed, start);
    let mut v: [DVector<f64>; 4] = std::array::from_fn(|_| rng::unit_vector(&mut rng, n));
    let eval = |v: &[DVector<f64>; 4]| r.eval(&v[0], &v[1], &v[2], &v[3]);
    let mut value = eval(&v);
    if value < 0.0 {
        v[0] = -&v[0];
        value = -value;
    }
    let mut step = 0.5;
    for _ in 0..cfg.iterations {
        let tangents: Vec<DVector<f64>> = (0..4)
            .map(|slot| {
                let grad = r.contract_slot(slot, [&v[0], &v[1], &v[2], &v[3]]);
                &grad - &v[slot] * grad.dot(&v[slot])
            })
            .collect();
        let gnorm = tangents.iter().map(|t| t.norm_squared()).sum::<f64>().sqrt();
        if gnorm < cfg.gradient_tol {
            break;
        }
        loop {
            let trial: [DVector<f64>; 4] = std::array::from_fn(|k| {
                let w = &v[k] + &tangents[k] * step;
                let nw = w.norm();
                w / nw
            });
            let tv = eval(&trial);
            if tv > value {
                v = trial;
                value = tv;
                step *= 1.5;
                break;
            }
            step *= 0.5;
            if step < 1e-14 {
                return value;
            }
        }
    }
    value
}
