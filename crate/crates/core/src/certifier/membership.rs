use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::curvature::{
    kulkarni_nomizu_square, ricci_star_raw, sup_norm_bounds_with, CurvatureTensor,
    SupNormBounds, SupNormConfig,
};
use crate::error::{Error, Result};
use crate::hermitian::{standard_block, ComplexStructure, EuclideanSpace};
use crate::linalg;
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PStatus {
    Certified,
    Refuted,
    Unknown,
}

/// `R` expressed in the g-orthonormal frame of `space`.
pub fn orthonormal_components(r: &CurvatureTensor, space: &EuclideanSpace) -> Result<CurvatureTensor> {
    if r.dim() != space.dim() {
        return Err(Error::Input(format!(
            "tensor dimension {} does not match space dimension {}",
            r.dim(),
            space.dim()
        )));
    }
    if space.is_standard() {
        return Ok(r.clone());
    }
    Ok(r.in_frame(space.orthonormal_frame()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SufficientResult {
    pub status: PStatus,
    /// Sup-norm bounds of `R − g⊼g`.
    pub deviation: SupNormBounds,
    /// `1/(2n)`.
    pub threshold: f64,
    /// The bound compared against the threshold: the override if supplied,
    /// otherwise `deviation.upper`.
    pub bound_used: f64,
    pub override_used: bool,
}

/// Sufficient test `‖R − g⊼g‖∞ ≤ 1/(2n)`; returns `Unknown` when the upper
/// bound is too large. Never returns `Refuted`.
pub fn certify_p_sufficient(r: &CurvatureTensor, space: &EuclideanSpace) -> Result<SufficientResult> {
    certify_p_sufficient_with(r, space, None, &SupNormConfig::default())
}

/// As [`certify_p_sufficient`], with an externally established sup-norm
/// bound. The override is rejected if it is below a value actually attained
/// by the deviation tensor.
pub fn certify_p_sufficient_with(
    r: &CurvatureTensor,
    space: &EuclideanSpace,
    override_bound: Option<f64>,
    cfg: &SupNormConfig,
) -> Result<SufficientResult> {
    let r_on = orthonormal_components(r, space)?;
    let dim = space.dim();
    let dev = r_on.sub(&kulkarni_nomizu_square(&DMatrix::identity(dim, dim)));
    let deviation = sup_norm_bounds_with(&dev, cfg);
    let threshold = 1.0 / dim as f64;
    let bound_used = match override_bound {
        Some(b) => {
            if !(b.is_finite() && b >= 0.0) {
                return Err(Error::Input(format!("override bound must be >= 0, got {b}")));
            }
            if b < deviation.lower * (1.0 - 1e-12) {
                return Err(Error::Input(format!(
                    "override bound {b:e} is below the attained value {:e}",
                    deviation.lower
                )));
            }
            b
        }
        None => deviation.upper,
    };
    Ok(SufficientResult {
        status: if bound_used <= threshold {
            PStatus::Certified
        } else {
            PStatus::Unknown
        },
        deviation,
        threshold,
        bound_used,
        override_used: override_bound.is_some(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RefuteConfig {
    pub multistarts: usize,
    pub iterations: usize,
    /// A witness needs `Ric*(X, X) < −tol`.
    pub tol: f64,
    /// Also search the orientation-reversing component of structures.
    pub both_orientations: bool,
    pub seed: u64,
}

impl Default for RefuteConfig {
    fn default() -> Self {
        Self {
            multistarts: 64,
            iterations: 200,
            tol: 1e-9,
            both_orientations: false,
            seed: 0x7265_6675,
        }
    }
}

/// A pair `(J, X)` with `Ric*_R(X, X) = value < 0`, in the coordinates of
/// the space the tensor was given in; `X` is g-unit.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub j: ComplexStructure,
    pub x: DVector<f64>,
    pub value: f64,
}

impl Witness {
    /// Recomputes `Ric*(X, X)` from the stored pair.
    pub fn reevaluate(&self, r: &CurvatureTensor, space: &EuclideanSpace) -> Result<f64> {
        // Ric* traces over an orthonormal frame, so evaluate there.
        let r_on = orthonormal_components(r, space)?;
        let j_on = space.endomorphism_to_orthonormal(self.j.matrix());
        let x_on = space.orthonormal_frame().transpose() * space.metric() * &self.x;
        let value = (x_on.transpose() * ricci_star_raw(&r_on, &j_on) * &x_on)[(0, 0)];
        Ok(value)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefuteOutcome {
    pub witness: Option<Witness>,
    /// Smallest `λ_min(sym Ric*)` seen over all completed starts.
    pub best_value: f64,
    pub starts_run: usize,
}

const CHUNK: usize = 8;

/// Heuristic search for `(J, X)` with `Ric*(X, X) < 0`. Finding none is not
/// a proof of membership.
///
/// Starts run in parallel in fixed chunks; the search stops after the first
/// chunk containing a witness, so the result does not depend on scheduling.
pub fn refute_p(r: &CurvatureTensor, space: &EuclideanSpace, cfg: &RefuteConfig) -> Result<RefuteOutcome> {
    let r_on = orthonormal_components(r, space)?;
    let dim = space.dim();
    let mut best: Option<(f64, DMatrix<f64>, DVector<f64>)> = None;
    let mut starts_run = 0;
    let starts: Vec<usize> = (0..cfg.multistarts.max(1)).collect();
    for chunk in starts.chunks(CHUNK) {
        let results: Vec<_> = chunk
            .par_iter()
            .map(|&s| descend(&r_on, cfg, s, dim))
            .collect();
        starts_run += chunk.len();
        for res in results {
            if best.as_ref().map_or(true, |b| res.0 < b.0) {
                best = Some(res);
            }
        }
        if best.as_ref().is_some_and(|b| b.0 < -cfg.tol) {
            break;
        }
    }
    let (best_value, j_on, x_on) = best.expect("at least one start");
    let witness = if best_value < -cfg.tol {
        let j = ComplexStructure::new(space, space.endomorphism_from_orthonormal(&j_on))?;
        let x = space.orthonormal_frame() * &x_on;
        Some(Witness {
            j,
            x,
            value: best_value,
        })
    } else {
        None
    };
    Ok(RefuteOutcome {
        witness,
        best_value,
        starts_run,
    })
}

fn objective(r_on: &CurvatureTensor, j: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let m = linalg::symmetric_part(&ricci_star_raw(r_on, j));
    linalg::min_eigenpair(&m)
}

/// Directional derivatives of `λ_min(sym Ric*_J)` along `J ↦ e^{tS} J e^{−tS}`
/// for each `S`, using the eigenvector `x` at `J`. `Ric*_J = K(J)·J` with
/// `K` linear in `J`, so the derivative is `xᵀ(K(δJ)J + K(J)δJ)x` with
/// `δJ = SJ − JS`.
fn gradient(r_on: &CurvatureTensor, j: &DMatrix<f64>, x: &DVector<f64>, dirs: &[DMatrix<f64>]) -> Vec<f64> {
    let n = r_on.dim();
    let y = j * x;
    // xᵀK(δJ)Jx = Σ G[d, i] δJ[d, i] with G[d, i] = Σ_{a,c} x_a y_c R[a, i, c, d]
    let g = DMatrix::from_fn(n, n, |d, i| {
        let mut s = 0.0;
        for a in 0..n {
            for c in 0..n {
                s += x[a] * y[c] * r_on[[a, i, c, d]];
            }
        }
        s
    });
    let kt_x = (&ricci_star_raw(r_on, j) * j.transpose()).transpose() * x;
    dirs.iter()
        .map(|s| {
            let dj = s * j - j * s;
            g.dot(&dj) + kt_x.dot(&(&dj * x))
        })
        .collect()
}

/// Orthonormal basis of the skew matrices anticommuting with `J`: the
/// directions that actually move `J` under conjugation.
fn moving_directions(j: &DMatrix<f64>) -> Vec<DMatrix<f64>> {
    let dim = j.nrows();
    let mut basis: Vec<DMatrix<f64>> = Vec::new();
    for a in 0..dim {
        for b in a + 1..dim {
            let mut s = DMatrix::zeros(dim, dim);
            s[(a, b)] = 1.0;
            s[(b, a)] = -1.0;
            let mut p = (&s + j * &s * j) * 0.5;
            for e in &basis {
                let c = p.dot(e);
                p -= e * c;
            }
            let n = p.norm();
            if n > 1e-8 {
                basis.push(p / n);
            }
        }
    }
    basis
}

/// `exp(S)·Q`, re-orthonormalised so that `J = Q J₀ Qᵀ` stays a complex
/// structure to machine precision over many steps.
fn rotate(q: &DMatrix<f64>, s: &DMatrix<f64>) -> DMatrix<f64> {
    let moved = s.clone().exp() * q;
    let qr = moved.qr();
    let (mut out, r) = (qr.q(), qr.r());
    for k in 0..out.ncols() {
        if r[(k, k)] < 0.0 {
            let col = -out.column(k);
            out.set_column(k, &col);
        }
    }
    out
}

fn structure(q: &DMatrix<f64>) -> DMatrix<f64> {
    q * standard_block(q.nrows()) * q.transpose()
}

fn descend(r_on: &CurvatureTensor, cfg: &RefuteConfig, start: usize, dim: usize) -> (f64, DMatrix<f64>, DVector<f64>) {
    let compatible = !cfg.both_orientations || start % 2 == 0;
    let mut q = if start < 2 {
        DMatrix::identity(dim, dim)
    } else {
        let mut rng = rng::stream(cfg.seed, 0x7265_0000 + start as u64);
        rng::haar_orthogonal(&mut rng, dim)
    };
    let want = if compatible { 1.0 } else { -1.0 };
    if q.determinant().signum() != want {
        let col = -q.column(0);
        q.set_column(0, &col);
    }
    let mut j = structure(&q);
    let (mut value, mut x) = objective(r_on, &j);
    let mut step = 0.1;
    for _ in 0..cfg.iterations {
        let dirs = moving_directions(&j);
        let grad = gradient(r_on, &j, &x, &dirs);
        let gnorm = grad.iter().map(|g| g * g).sum::<f64>().sqrt();
        if gnorm < 1e-10 {
            break;
        }
        let dir = dirs
            .iter()
            .zip(&grad)
            .fold(DMatrix::zeros(dim, dim), |acc, (d, g)| acc - d * (*g / gnorm));
        let mut moved = false;
        while step > 1e-12 {
            let trial_q = rotate(&q, &(&dir * step));
            let trial = structure(&trial_q);
            let (tv, tx) = objective(r_on, &trial);
            if tv < value {
                q = trial_q;
                j = trial;
                value = tv;
                x = tx;
                step *= 1.5;
                moved = true;
                break;
            }
            step *= 0.5;
        }
        if !moved {
            break;
        }
    }
    (value, j, x)
}
