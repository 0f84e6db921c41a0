//! Exact ground truth by exhaustive sign enumeration.
//!
//! For noiseless magnitudes `b`, every solution of `|A x| = b` realizes
//! some sign pattern `s` with `A x = s . b`. Enumerating patterns (modulo
//! the global flip) and solving each equality-constrained `l1` problem
//! exactly yields the global minimizer of the phaseless program.
//!
//! The per-pattern problem `min ||D* x||_1 s.t. A x = y` is solved
//! exactly: parametrize the affine feasible set as `x_p + B w` with `B` a
//! null-space basis, so the objective becomes `||c + G w||_1` with
//! `G = D* B` of full column rank `d`. That function is convex, piecewise
//! linear, and coercive, so some minimizer has `d` independent active
//! zeros; enumerating all size-d zero sets (an active-set/vertex sweep)
//! is exact.

use alloc::vec;
use alloc::vec::Vec;

use crate::frames::Frame;
use crate::linalg::{self, solve_lu, svd::svd, Matrix, Svd, RANK_REL_TOL};
use crate::measure::MeasurementEnsemble;
use crate::subsets::combinations;

use super::{distance_mod_sign, RecoveryResult, SolverError};

/// Sign enumeration refuses beyond this many measurement rows.
pub const ORACLE_MAX_ROWS: usize = 16;

/// Output of the oracle: the best minimizer plus every global minimizer
/// up to tolerance, deduplicated modulo sign.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleOutcome {
    pub result: RecoveryResult,
    /// All global minimizers (objective within `1e-9` relative of the
    /// optimum), one representative per sign class.
    pub minimizers: Vec<Vec<f64>>,
    pub patterns_checked: u64,
}

impl OracleOutcome {
    /// True when the minimizer is unique modulo the global sign flip.
    pub fn unique_mod_sign(&self) -> bool {
        self.minimizers.len() == 1
    }
}

/// Exact minimizers of `min ||D* x||_1 s.t. A x = y` for one right-hand
/// side. Returns `None` when `y` is numerically outside the range of `A`;
/// otherwise the minimal objective and all vertex minimizers attaining it.
fn min_l1_on_affine(
    d: &Matrix,
    a: &Matrix,
    svd_a: &Svd,
    null_basis: &Matrix,
    y: &[f64],
) -> Option<(f64, Vec<Vec<f64>>)> {
    let x_p = svd_a.pinv_apply(y, RANK_REL_TOL);
    let feas = linalg::norm2(&linalg::sub(&a.matvec(&x_p), y));
    if feas > 1e-8 * (1.0 + linalg::norm2(y)) {
        return None;
    }
    let dim = null_basis.cols();
    if dim == 0 {
        let obj = linalg::norm1(&d.tr_matvec(&x_p));
        return Some((obj, vec![x_p]));
    }

    let c = d.tr_matvec(&x_p);
    let g = d.transpose().matmul(null_basis);
    let atoms = g.rows();

    // Pass 1: minimal objective over invertible active sets.
    let mut best = f64::INFINITY;
    let mut vertices: Vec<(f64, Vec<f64>)> = Vec::new();
    for active in combinations(atoms, dim) {
        let g_s = g.select_rows(&active);
        let rhs: Vec<f64> = active.iter().map(|&i| -c[i]).collect();
        let Some(w) = solve_lu(&g_s, &rhs) else {
            continue;
        };
        let mut residual_vec = c.clone();
        for j in 0..dim {
            linalg::axpy(w[j], &g.col(j), &mut residual_vec);
        }
        let obj = linalg::norm1(&residual_vec);
        if obj < best {
            best = obj;
        }
        vertices.push((obj, w));
    }
    if !best.is_finite() {
        return None;
    }

    // Pass 2: collect every vertex within the tie window.
    let window = 1e-9 * (1.0 + best);
    let mut minimizers = Vec::new();
    for (obj, w) in vertices {
        if obj <= best + window {
            let mut x = x_p.clone();
            for j in 0..dim {
                linalg::axpy(w[j], &null_basis.col(j), &mut x);
            }
            minimizers.push(x);
        }
    }
    Some((best, minimizers))
}

/// Exhaustive sign-pattern oracle for the noiseless phaseless program
/// `min ||D* x||_1 s.t. |A x| = b`.
pub fn oracle_sign_enumeration(
    a: &MeasurementEnsemble,
    b: &[f64],
    frame: &Frame,
) -> Result<OracleOutcome, SolverError> {
    let d = frame.matrix()?;
    if a.cols() != d.rows() {
        return Err(SolverError::ShapeMismatch {
            expected: d.rows(),
            got: a.cols(),
        });
    }
    if b.len() != a.rows() {
        return Err(SolverError::ShapeMismatch {
            expected: a.rows(),
            got: b.len(),
        });
    }
    if a.rows() > ORACLE_MAX_ROWS {
        return Err(SolverError::OracleBudget {
            rows: a.rows(),
            max: ORACLE_MAX_ROWS,
        });
    }
    assert!(b.iter().all(|&x| x >= 0.0), "magnitudes must be nonnegative");

    let amat = a.matrix();
    let dec = svd(amat);
    let null_basis = dec.null_basis(RANK_REL_TOL);

    // Rows with b_i = 0 need no sign; the first positive row is pinned to
    // +1 to quotient out the global flip.
    let free: Vec<usize> = (0..b.len()).filter(|&i| b[i] > 0.0).collect();
    let n_bits = free.len().saturating_sub(1);

    let mut best_obj = f64::INFINITY;
    let mut raw_minimizers: Vec<(f64, Vec<f64>)> = Vec::new();
    let mut patterns = 0u64;
    let mut best_infeasible: Option<(f64, Vec<f64>)> = None;

    for mask in 0u64..(1u64 << n_bits) {
        patterns += 1;
        let mut y: Vec<f64> = b.to_vec();
        for (bit, &row) in free.iter().skip(1).enumerate() {
            if mask >> bit & 1 == 1 {
                y[row] = -b[row];
            }
        }
        match min_l1_on_affine(d, amat, &dec, &null_basis, &y) {
            Some((obj, xs)) => {
                if obj < best_obj {
                    best_obj = obj;
                }
                for x in xs {
                    raw_minimizers.push((obj, x));
                }
            }
            None => {
                // Track a least-squares fallback in case no pattern is
                // consistent (junk data).
                let x = dec.pinv_apply(&y, RANK_REL_TOL);
                let res = linalg::norm2(&linalg::sub(&amat.matvec(&x), &y));
                if best_infeasible
                    .as_ref()
                    .map(|(r, _)| res < *r)
                    .unwrap_or(true)
                {
                    best_infeasible = Some((res, x));
                }
            }
        }
    }

    if !best_obj.is_finite() {
        // No consistent sign pattern: report the best least-squares fit,
        // flagged unconverged.
        let (_, x) = best_infeasible.expect("at least one pattern was examined");
        let objective = linalg::norm1(&d.tr_matvec(&x));
        let residual = phaseless_residual(amat, &x, b);
        let mut result = RecoveryResult::at_point(x.clone(), objective, residual);
        result.converged = false;
        return Ok(OracleOutcome {
            result,
            minimizers: vec![x],
            patterns_checked: patterns,
        });
    }

    let window = 1e-9 * (1.0 + best_obj);
    let mut minimizers: Vec<Vec<f64>> = Vec::new();
    let mut representative: Option<Vec<f64>> = None;
    for (obj, x) in raw_minimizers {
        if obj > best_obj + window {
            continue;
        }
        if representative.is_none() {
            representative = Some(x.clone());
        }
        let scale = 1.0 + linalg::norm2(&x);
        let fresh = minimizers
            .iter()
            .all(|known| distance_mod_sign(known, &x) > 1e-8 * scale);
        if fresh {
            minimizers.push(x);
        }
    }
    let x_best = representative.expect("a finite optimum has a witness");
    let residual = phaseless_residual(amat, &x_best, b);
    let objective = linalg::norm1(&d.tr_matvec(&x_best));
    let result = RecoveryResult::at_point(x_best, objective, residual);
    Ok(OracleOutcome {
        result,
        minimizers,
        patterns_checked: patterns,
    })
}

fn phaseless_residual(a: &Matrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.matvec(x);
    let dev: Vec<f64> = ax.iter().zip(b).map(|(v, bi)| v.abs() - bi).collect();
    linalg::norm2(&dev)
}
