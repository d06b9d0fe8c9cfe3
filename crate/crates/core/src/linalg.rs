//! Small dense helpers shared by the geometry modules.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Largest absolute entry.
pub fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()))
}

pub fn symmetric_part(m: &DMatrix<f64>) -> DMatrix<f64> {
    (m + m.transpose()) * 0.5
}

/// Eigen-decomposition of the symmetric part, eigenvalues ascending with
/// matching eigenvector columns.
///
/// Cyclic Jacobi rather than `nalgebra::SymmetricEigen`: the latter returns
/// non-eigenvectors for nearly diagonal input with repeated eigenvalues
/// (nalgebra 0.33), which is exactly the shape of curvature data near the
/// round metric. Matrices here are at most 15x15.
pub fn sorted_symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let (values, vectors) = jacobi_eigen(symmetric_part(m));
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let sorted = order.iter().map(|&i| values[i]).collect();
    let mut out = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        out.set_column(dst, &vectors.column(src));
    }
    (sorted, out)
}

pub fn sorted_eigenvalues(m: &DMatrix<f64>) -> Vec<f64> {
    sorted_symmetric_eigen(m).0
}

fn jacobi_eigen(mut a: DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut v = DMatrix::identity(n, n);
    let total = a.norm();
    if total == 0.0 || !total.is_finite() {
        return ((0..n).map(|i| a[(i, i)]).collect(), v);
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[(p, q)] * a[(p, q)];
            }
        }
        if off.sqrt() <= 0.1 * f64::EPSILON * total {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[(i, i)]).collect(), v)
}

/// Smallest eigenvalue of the symmetric part together with a unit eigenvector.
pub fn min_eigenpair(m: &DMatrix<f64>) -> (f64, DVector<f64>) {
    let (values, vectors) = sorted_symmetric_eigen(m);
    (values[0], vectors.column(0).into_owned())
}

/// Columns of the returned matrix form a g-orthonormal basis obtained by
/// Gram–Schmidt on the working basis (upper triangular, `Eᵀ g E = I`).
pub fn orthonormal_frame(g: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let chol = nalgebra::Cholesky::new(g.clone())
        .ok_or_else(|| Error::Metric("metric is not positive definite".into()))?;
    let l = chol.l();
    let l_inv = l
        .try_inverse()
        .ok_or_else(|| Error::Metric("singular Cholesky factor".into()))?;
    Ok(l_inv.transpose())
}

/// Condition number of a symmetric positive-definite matrix.
pub fn spd_condition_number(g: &DMatrix<f64>) -> f64 {
    let ev = sorted_eigenvalues(g);
    let lo = ev[0];
    let hi = ev[ev.len() - 1];
    if lo <= 0.0 {
        f64::INFINITY
    } else {
        hi / lo
    }
}

/// Pfaffian of an antisymmetric matrix by expansion along the first row.
pub fn pfaffian(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n == 0 {
        return 1.0;
    }
    if n % 2 == 1 {
        return 0.0;
    }
    let mut total = 0.0;
    for j in 1..n {
        let keep: Vec<usize> = (1..n).filter(|&k| k != j).collect();
        let minor = DMatrix::from_fn(n - 2, n - 2, |r, c| a[(keep[r], keep[c])]);
        let sign = if j % 2 == 1 { 1.0 } else { -1.0 };
        total += sign * a[(0, j)] * pfaffian(&minor);
    }
    total
}

/// Leading principal minors, the Sylvester sequence of a symmetric matrix.
pub fn leading_principal_minors(m: &DMatrix<f64>) -> Vec<f64> {
    (1..=m.nrows())
        .map(|k| m.view((0, 0), (k, k)).into_owned().determinant())
        .collect()
}

/// Operator norm of a bilinear form given by `m` in an orthonormal basis,
/// i.e. the sup of `|m(u, v)|` over unit vectors.
pub fn bilinear_sup_norm(m: &DMatrix<f64>) -> f64 {
    m.clone()
        .singular_values()
        .iter()
        .fold(0.0_f64, |acc, s| acc.max(*s))
}
