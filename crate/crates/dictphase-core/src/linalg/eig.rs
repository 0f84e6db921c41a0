use alloc::vec::Vec;
// Used by no_std builds; test builds resolve these methods from std.
#[allow(unused_imports)]
use num_traits::Float;

use super::Matrix;

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi rotations.
///
/// Returns the eigenvalues in increasing order together with the matrix
/// whose columns are the matching orthonormal eigenvectors. The input is
/// symmetrized (`(M + M^T)/2`) before iterating, so tiny asymmetries from
/// accumulated rounding are harmless.
pub fn symmetric_eigen(m: &Matrix) -> (Vec<f64>, Matrix) {
    assert_eq!(m.rows(), m.cols(), "symmetric_eigen needs a square matrix");
    let n = m.rows();
    if n == 0 {
        return (Vec::new(), Matrix::zeros(0, 0));
    }

    let mut a = Matrix::from_fn(n, n, |i, j| 0.5 * (m[(i, j)] + m[(j, i)]));
    let mut v = Matrix::identity(n);
    let scale = a.frobenius().max(f64::MIN_POSITIVE);

    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut off = 0.0;
        for i in 0..n {
            for j in i + 1..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..n - 1 {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-18 * scale {
                    continue;
                }
                let tau = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = super::sign_pm1(tau) / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;

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

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].partial_cmp(&a[(j, j)]).unwrap().then(i.cmp(&j)));
    let vals: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let vecs = v.select_cols(&order);
    (vals, vecs)
}

/// Smallest and largest eigenvalue of a symmetric matrix.
///
/// Convention for the empty matrix: `(0, 0)` — a Rayleigh quotient over an
/// empty space constrains nothing, and the certifiers treat it as such.
pub fn symmetric_eigen_extremes(m: &Matrix) -> (f64, f64) {
    let (vals, _) = symmetric_eigen(m);
    match (vals.first(), vals.last()) {
        (Some(&lo), Some(&hi)) => (lo, hi),
        _ => (0.0, 0.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonalizes_known_2x2() {
        // Eigenvalues of [[2,1],[1,2]] are 1 and 3.
        let m = Matrix::from_row_major(2, 2, &[2.0, 1.0, 1.0, 2.0]);
        let (vals, vecs) = symmetric_eigen(&m);
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
        assert!(vecs.gram().max_abs_dev_from_identity() < 1e-13);
    }

    #[test]
    fn reconstructs_random_symmetric() {
        // Deterministic pseudo-random fill.
        let n = 6;
        let mut x = 0.5f64;
        let mut next = || {
            x = (x * 1103515245.0 + 12345.0) % 65536.0;
            x / 65536.0 - 0.5
        };
        let raw = Matrix::from_fn(n, n, |_, _| next());
        let m = Matrix::from_fn(n, n, |i, j| 0.5 * (raw[(i, j)] + raw[(j, i)]));
        let (vals, vecs) = symmetric_eigen(&m);
        let mut rec = Matrix::zeros(n, n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    rec[(i, j)] += vals[k] * vecs[(i, k)] * vecs[(j, k)];
                }
            }
        }
        assert!(rec.sub(&m).max_abs() < 1e-13);
        for k in 0..n - 1 {
            assert!(vals[k] <= vals[k + 1]);
        }
    }

    #[test]
    fn empty_matrix_extremes() {
        assert_eq!(symmetric_eigen_extremes(&Matrix::zeros(0, 0)), (0.0, 0.0));
    }
}
