use alloc::vec;
use alloc::vec::Vec;
// Used by no_std builds; test builds resolve these methods from std.
#[allow(unused_imports)]
use num_traits::Float;

use super::Matrix;

/// Relative singular-value threshold for numerical rank decisions.
///
/// A singular value counts as nonzero when it exceeds `RANK_REL_TOL`
/// times the largest singular value.
pub const RANK_REL_TOL: f64 = 1e-10;

/// Singular value decomposition `A = U diag(s) V^T`.
///
/// `V` is always square (`cols x cols`, orthogonal), so the trailing
/// columns form an orthonormal basis of the null space — the certifiers
/// lean on that. `U` is `rows x cols` with valid columns wherever the
/// corresponding singular value is nonzero (zero columns elsewhere).
/// Singular values are sorted in decreasing order.
#[derive(Debug, Clone)]
pub struct Svd {
    pub u: Matrix,
    pub s: Vec<f64>,
    pub v: Matrix,
}

/// One-sided Jacobi SVD.
///
/// Orthogonalizes column pairs of `A` by plane rotations, accumulating
/// them into `V`. Quadratically convergent; at desk sizes it reaches
/// pairwise orthogonality within a handful of sweeps. Works for any
/// aspect ratio, including zero-row matrices.
pub fn svd(a: &Matrix) -> Svd {
    let m = a.rows();
    let n = a.cols();
    let mut b = a.clone();
    let mut v = Matrix::identity(n);

    let eps = 1e-15f64;
    let max_sweeps = 64;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let mut app = 0.0;
                let mut aqq = 0.0;
                let mut apq = 0.0;
                for i in 0..m {
                    let bp = b[(i, p)];
                    let bq = b[(i, q)];
                    app += bp * bp;
                    aqq += bq * bq;
                    apq += bp * bq;
                }
                if apq.abs() <= eps * (app * aqq).sqrt() || app == 0.0 || aqq == 0.0 {
                    continue;
                }
                rotated = true;
                let tau = (aqq - app) / (2.0 * apq);
                let t = super::sign_pm1(tau) / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for i in 0..m {
                    let bp = b[(i, p)];
                    let bq = b[(i, q)];
                    b[(i, p)] = c * bp - s * bq;
                    b[(i, q)] = s * bp + c * bq;
                }
                for i in 0..n {
                    let vp = v[(i, p)];
                    let vq = v[(i, q)];
                    v[(i, p)] = c * vp - s * vq;
                    v[(i, q)] = s * vp + c * vq;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut sv: Vec<(usize, f64)> = (0..n)
        .map(|j| {
            let norm = super::norm2(&b.col(j));
            (j, norm)
        })
        .collect();
    // Decreasing by value, ties by original index for determinism.
    sv.sort_by(|x, y| y.1.partial_cmp(&x.1).unwrap().then(x.0.cmp(&y.0)));

    let mut u = Matrix::zeros(m, n);
    let mut s = vec![0.0; n];
    let mut vv = Matrix::zeros(n, n);
    for (dst, &(src, sigma)) in sv.iter().enumerate() {
        s[dst] = sigma;
        for i in 0..n {
            vv[(i, dst)] = v[(i, src)];
        }
        if sigma > f64::MIN_POSITIVE {
            for i in 0..m {
                u[(i, dst)] = b[(i, src)] / sigma;
            }
        }
    }
    Svd { u, s, v: vv }
}

impl Svd {
    pub fn sigma_max(&self) -> f64 {
        self.s.first().copied().unwrap_or(0.0)
    }

    /// Numerical rank at threshold `rel_tol * sigma_max`.
    pub fn rank(&self, rel_tol: f64) -> usize {
        let cut = rel_tol * self.sigma_max();
        self.s.iter().filter(|&&x| x > cut && x > 0.0).count()
    }

    /// Orthonormal basis of the null space of `A` (columns; may be empty).
    pub fn null_basis(&self, rel_tol: f64) -> Matrix {
        let r = self.rank(rel_tol);
        let n = self.v.rows();
        self.v.select_cols(&(r..n).collect::<Vec<_>>())
    }

    /// Orthonormal basis of the range of `A` (columns of `U`).
    pub fn range_basis(&self, rel_tol: f64) -> Matrix {
        let r = self.rank(rel_tol);
        self.u.select_cols(&(0..r).collect::<Vec<_>>())
    }

    /// Minimum-norm least-squares solution `V diag(1/s) U^T y`.
    pub fn pinv_apply(&self, y: &[f64], rel_tol: f64) -> Vec<f64> {
        let r = self.rank(rel_tol);
        let n = self.v.rows();
        let mut x = vec![0.0; n];
        for j in 0..r {
            let coeff = super::dot(&self.u.col(j), y) / self.s[j];
            for i in 0..n {
                x[i] += coeff * self.v[(i, j)];
            }
        }
        x
    }
}

/// Least-squares solve returning the min-norm solution and the residual
/// norm `||A x - y||_2`.
pub fn least_squares(a: &Matrix, y: &[f64]) -> (Vec<f64>, f64) {
    let dec = svd(a);
    let x = dec.pinv_apply(y, RANK_REL_TOL);
    let r = super::sub(&a.matvec(&x), y);
    (x, super::norm2(&r))
}
