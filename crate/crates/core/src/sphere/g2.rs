use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Oriented triples `(i, j, k)` (1-based) with `e_i e_j = e_k` for the
/// imaginary octonions; each fixes a quaternionic subalgebra.
pub const OCTONION_TRIPLES: [[usize; 3]; 7] = [
    [1, 2, 3],
    [1, 4, 5],
    [1, 7, 6],
    [2, 4, 6],
    [2, 5, 7],
    [3, 4, 7],
    [3, 6, 5],
];

/// Structure constants `ε_ijk` of the cross product on R⁷ (0-based),
/// totally antisymmetric.
pub fn structure_constants() -> [[[f64; 7]; 7]; 7] {
    let mut eps = [[[0.0; 7]; 7]; 7];
    for t in OCTONION_TRIPLES {
        let [a, b, c] = t.map(|v| v - 1);
        for (p, q, r, s) in [(a, b, c, 1.0), (b, c, a, 1.0), (c, a, b, 1.0), (b, a, c, -1.0), (a, c, b, -1.0), (c, b, a, -1.0)] {
            eps[p][q][r] = s;
        }
    }
    eps
}

/// `u × v` with `(u × v)_k = Σ ε_ijk u_i v_j`.
pub fn cross(u: &[f64; 7], v: &[f64; 7]) -> [f64; 7] {
    let eps = structure_constants();
    std::array::from_fn(|k| {
        let mut s = 0.0;
        for i in 0..7 {
            for j in 0..7 {
                s += eps[i][j][k] * u[i] * v[j];
            }
        }
        s
    })
}

/// Matrix of `v ↦ p × v` on R⁷.
pub fn cross_matrix(p: &[f64; 7]) -> DMatrix<f64> {
    let eps = structure_constants();
    DMatrix::from_fn(7, 7, |k, j| (0..7).map(|i| eps[i][j][k] * p[i]).sum())
}

/// The nearly Kähler structure `J_p v = p × v` of the unit sphere, as an
/// operator on R⁷ that preserves `T_pS⁶ = p^⊥`.
pub fn g2_structure(p: &[f64; 7]) -> Result<DMatrix<f64>> {
    let n = DVector::from_column_slice(p).norm();
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::Input(format!("|p| = {n} is not 1")));
    }
    Ok(cross_matrix(p))
}
