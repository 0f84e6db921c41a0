use alloc::vec;
use alloc::vec::Vec;
// Used by no_std builds; test builds resolve these methods from std.
#[allow(unused_imports)]
use num_traits::Float;

use super::Matrix;

/// Cholesky factor `L` of a symmetric positive definite matrix (`M = L L^T`).
///
/// The ADMM solvers factor their (fixed) normal matrix once and back-solve
/// every iteration.
#[derive(Debug, Clone)]
pub struct CholeskyFactor {
    l: Matrix,
}

impl CholeskyFactor {
    /// Factors `m`; returns `None` if the matrix is not numerically SPD.
    pub fn new(m: &Matrix) -> Option<CholeskyFactor> {
        assert_eq!(m.rows(), m.cols());
        let n = m.rows();
        let mut l = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let mut sum = m[(i, j)];
                for k in 0..j {
                    sum -= l[(i, k)] * l[(j, k)];
                }
                if i == j {
                    if sum <= 0.0 {
                        return None;
                    }
                    l[(i, i)] = sum.sqrt();
                } else {
                    l[(i, j)] = sum / l[(j, j)];
                }
            }
        }
        Some(CholeskyFactor { l })
    }

    /// Solves `M x = b`.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.l.rows();
        debug_assert_eq!(b.len(), n);
        let mut y = vec![0.0; n];
        for i in 0..n {
            let mut sum = b[i];
            for k in 0..i {
                sum -= self.l[(i, k)] * y[k];
            }
            y[i] = sum / self.l[(i, i)];
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut sum = y[i];
            for k in i + 1..n {
                sum -= self.l[(k, i)] * x[k];
            }
            x[i] = sum / self.l[(i, i)];
        }
        x
    }
}

/// Convenience wrapper: factor and solve in one call.
pub fn solve_cholesky(m: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    CholeskyFactor::new(m).map(|f| f.solve(b))
}

/// Solves a small square system by LU with partial pivoting.
///
/// Returns `None` when a pivot falls below `1e-12` relative to the matrix
/// scale — the vertex-enumeration oracle uses that as its "support not
/// invertible, skip" signal.
pub fn solve_lu(m: &Matrix, b: &[f64]) -> Option<Vec<f64>> {
    assert_eq!(m.rows(), m.cols());
    let n = m.rows();
    debug_assert_eq!(b.len(), n);
    if n == 0 {
        return Some(Vec::new());
    }
    let scale = m.max_abs().max(f64::MIN_POSITIVE);
    let mut a = m.clone();
    let mut x: Vec<f64> = b.to_vec();
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[(r, col)].abs() > a[(piv, col)].abs() {
                piv = r;
            }
        }
        if a[(piv, col)].abs() <= 1e-12 * scale {
            return None;
        }
        if piv != col {
            for j in 0..n {
                let tmp = a[(col, j)];
                a[(col, j)] = a[(piv, j)];
                a[(piv, j)] = tmp;
            }
            x.swap(col, piv);
        }
        for r in col + 1..n {
            let f = a[(r, col)] / a[(col, col)];
            if f == 0.0 {
                continue;
            }
            for j in col..n {
                a[(r, j)] -= f * a[(col, j)];
            }
            x[r] -= f * x[col];
        }
    }
    for i in (0..n).rev() {
        let mut sum = x[i];
        for j in i + 1..n {
            sum -= a[(i, j)] * x[j];
        }
        x[i] = sum / a[(i, i)];
    }
    Some(x)
}
