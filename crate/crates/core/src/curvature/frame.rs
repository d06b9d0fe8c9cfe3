use nalgebra::DMatrix;

use super::{ricci::ricci_star, tensor::CurvatureTensor};
use crate::error::{Error, Result};
use crate::hermitian::{standard_complex_structure, FRAME_TOL};
use crate::linalg;

/// Frame matrices of a curvature tensor with respect to an orthonormal
/// frame `e` and the structure `J e_i = (−1)^{i−1} e_{i#}` it defines.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameMatrix {
    /// `α_ij = Σ_k R(e_i, e_k, e_{j#}, e_{k#})`
    pub alpha: DMatrix<f64>,
    /// `a = ½(α + αᵀ)`
    pub a: DMatrix<f64>,
    /// `M_ij = sym Ric*(e_i, e_j)` for the frame's complex structure; the
    /// matrix used for positive-semidefiniteness decisions.
    pub reference: DMatrix<f64>,
    pub frame: DMatrix<f64>,
}

/// Relation found between `a` and the reference matrix `M`: the least
/// squares fit `a ≈ scale·M` and what it leaves over.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameRelation {
    pub scale: f64,
    pub residual: f64,
}

#[inline]
fn sharp_index(p: usize) -> usize {
    // 0-based form of i# = i − (−1)^i
    p ^ 1
}

impl FrameMatrix {
    /// `max |α_ij − α_{j#i#}|`; zero for every algebraic curvature tensor.
    pub fn index_swap_defect(&self) -> f64 {
        self.swap_defect(false)
    }

    /// `max |α_ij − (−1)^{i+j} α_{j#i#}|`. Coincides with
    /// [`Self::index_swap_defect`] on entries with `i + j` even; on the
    /// others it only vanishes when those entries of α vanish.
    pub fn signed_swap_defect(&self) -> f64 {
        self.swap_defect(true)
    }

    fn swap_defect(&self, signed: bool) -> f64 {
        let n = self.alpha.nrows();
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in 0..n {
                let sign = if signed && (i + j) % 2 == 1 { -1.0 } else { 1.0 };
                let d = self.alpha[(i, j)] - sign * self.alpha[(sharp_index(j), sharp_index(i))];
                worst = worst.max(d.abs());
            }
        }
        worst
    }

    pub fn relation(&self) -> FrameRelation {
        let mm = self.reference.norm_squared();
        let scale = if mm > 0.0 {
            self.a.dot(&self.reference) / mm
        } else {
            0.0
        };
        FrameRelation {
            scale,
            residual: (&self.a - &self.reference * scale).norm(),
        }
    }

    /// Sylvester sequence of `M`, available as a debug cross-check of the
    /// eigenvalue test.
    pub fn reference_minors(&self) -> Vec<f64> {
        linalg::leading_principal_minors(&self.reference)
    }
}

/// Builds α, a and `M` for `R` (orthonormal components) and an orthonormal
/// frame given as matrix columns.
pub fn star_matrix(r: &CurvatureTensor, frame: &DMatrix<f64>) -> Result<FrameMatrix> {
    let n = r.dim();
    if frame.shape() != (n, n) {
        return Err(Error::Frame(format!("frame must be {n}x{n}")));
    }
    let dev = linalg::max_abs(&(frame.transpose() * frame - DMatrix::identity(n, n)));
    if dev > FRAME_TOL {
        return Err(Error::Frame(format!("frame not orthonormal ({dev:e})")));
    }
    let rf = r.in_frame(frame);
    let alpha = DMatrix::from_fn(n, n, |i, j| {
        (0..n)
            .map(|k| rf[[i, k, sharp_index(j), sharp_index(k)]])
            .sum()
    });
    let a = linalg::symmetric_part(&alpha);
    // In its own frame the structure is the standard block J₀.
    let reference = linalg::symmetric_part(&ricci_star(&rf, &standard_complex_structure(n)));
    Ok(FrameMatrix {
        alpha,
        a,
        reference,
        frame: frame.clone(),
    })
}
