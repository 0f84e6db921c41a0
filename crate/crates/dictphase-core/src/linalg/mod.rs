//! Small dense linear algebra for desk-scale certification work.
//!
//! Everything here operates on row-major [`Matrix`] values a few tens of
//! rows/columns in size. The decompositions are Jacobi-style: slower than
//! blocked LAPACK kernels but simple, deterministic, and accurate to a few
//! ulps at these sizes, which is what the certifiers need.

pub mod eig;
mod matrix;
mod solve;
pub mod svd;

pub use eig::{symmetric_eigen, symmetric_eigen_extremes};
pub use matrix::Matrix;
pub use solve::{solve_cholesky, solve_lu, CholeskyFactor};
pub use svd::{least_squares, svd, Svd, RANK_REL_TOL};

use alloc::vec::Vec;
// Used by no_std builds; test builds resolve these methods from std.
#[allow(unused_imports)]
use num_traits::Float;

/// Dot product of two equal-length slices.
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Euclidean norm.
pub fn norm2(v: &[f64]) -> f64 {
    dot(v, v).sqrt()
}

/// Sum of absolute values.
pub fn norm1(v: &[f64]) -> f64 {
    v.iter().map(|x| x.abs()).sum()
}

/// Largest absolute entry (0 for the empty slice).
pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

/// `y += alpha * x`.
pub fn axpy(alpha: f64, x: &[f64], y: &mut [f64]) {
    debug_assert_eq!(x.len(), y.len());
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += alpha * xi;
    }
}

/// `a - b` as a new vector.
pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// `a + b` as a new vector.
pub fn add(a: &[f64], b: &[f64]) -> Vec<f64> {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// `alpha * v` as a new vector.
pub fn scaled(alpha: f64, v: &[f64]) -> Vec<f64> {
    v.iter().map(|x| alpha * x).collect()
}

/// Number of entries with magnitude above `tol`.
pub fn count_nonzero(v: &[f64], tol: f64) -> usize {
    v.iter().filter(|x| x.abs() > tol).count()
}

/// Sign with the convention `sign(0) = +1`.
///
/// Used everywhere a measurement sign pattern is extracted, so that ties
/// break identically across the whole crate.
pub fn sign_pm1(x: f64) -> f64 {
    if x < 0.0 {
        -1.0
    } else {
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vector_basics() {
        assert_eq!(dot(&[1.0, 2.0], &[3.0, -1.0]), 1.0);
        assert_eq!(norm1(&[3.0, -4.0]), 7.0);
        assert_eq!(norm2(&[3.0, 4.0]), 5.0);
        assert_eq!(norm_inf(&[]), 0.0);
        assert_eq!(sign_pm1(0.0), 1.0);
        assert_eq!(sign_pm1(-0.0), 1.0);
        assert_eq!(sign_pm1(-3.0), -1.0);
    }
}
