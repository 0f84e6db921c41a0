//! Solvers for the `l1`-analysis recovery programs.
//!
//! Three layers:
//!
//! * [`analysis_basis_pursuit`] — the convex inner problem
//!   `min ||D* x||_1 s.t. ||A x - y||_2 <= eps` (equality-constrained for
//!   `eps = 0`), solved by operator splitting.
//! * [`pr_l1_analysis`] — the phaseless program
//!   `min ||D* x||_1 s.t. || |Ax| - b ||_2 <= eps`, attacked by
//!   alternating sign refinement with seeded restarts around the inner
//!   solver.
//! * [`oracle_sign_enumeration`] — exact ground truth at desk scale: an
//!   exhaustive sweep over measurement sign patterns, each reduced to an
//!   exact piecewise-linear minimization.

mod admm;
mod alternating;
mod oracle;

pub use admm::analysis_basis_pursuit;
pub use alternating::pr_l1_analysis;
pub use oracle::{oracle_sign_enumeration, OracleOutcome, ORACLE_MAX_ROWS};

use alloc::vec::Vec;

use crate::frames::FrameError;
use crate::linalg;
use crate::measure::MeasureError;

#[derive(Debug, Clone, PartialEq)]
pub enum SolverError {
    Frame(FrameError),
    Measure(MeasureError),
    /// Inner problem requires a real tight frame.
    NonTightFrame,
    ShapeMismatch {
        expected: usize,
        got: usize,
    },
    /// Equality-constrained solve with `y` outside the range of `A`.
    InfeasibleEquality {
        residual: f64,
    },
    /// Sign enumeration refused: too many measurement rows.
    OracleBudget {
        rows: usize,
        max: usize,
    },
    InvalidConfig(&'static str),
}

impl From<FrameError> for SolverError {
    fn from(e: FrameError) -> Self {
        SolverError::Frame(e)
    }
}

impl From<MeasureError> for SolverError {
    fn from(e: MeasureError) -> Self {
        SolverError::Measure(e)
    }
}

impl core::fmt::Display for SolverError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            SolverError::Frame(e) => write!(f, "frame error: {}", e),
            SolverError::Measure(e) => write!(f, "measurement error: {}", e),
            SolverError::NonTightFrame => write!(f, "solver requires a real tight frame"),
            SolverError::ShapeMismatch { expected, got } => {
                write!(f, "vector length {} does not match {}", got, expected)
            }
            SolverError::InfeasibleEquality { residual } => write!(
                f,
                "equality system is infeasible (distance to range {:e})",
                residual
            ),
            SolverError::OracleBudget { rows, max } => write!(
                f,
                "sign enumeration over {} rows exceeds the budget of {}",
                rows, max
            ),
            SolverError::InvalidConfig(msg) => write!(f, "invalid solver config: {}", msg),
        }
    }
}

impl core::error::Error for SolverError {}

/// Tunables for the splitting solver and the sign-refinement loop.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// ADMM penalty parameter (rescaled adaptively at runtime).
    pub rho_admm: f64,
    pub primal_tol: f64,
    pub dual_tol: f64,
    /// Iteration cap for one splitting solve.
    pub max_inner_iters: usize,
    /// Iteration cap for the sign-refinement loop.
    pub max_outer_iters: usize,
    /// Number of sign initializations tried (>= 1).
    pub restarts: usize,
    pub seed: u64,
    /// The noisy solve targets a residual in
    /// `[eps * (1 - slack), eps]`.
    pub residual_target_slack: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            rho_admm: 1.0,
            primal_tol: 1e-9,
            dual_tol: 1e-9,
            max_inner_iters: 20_000,
            max_outer_iters: 50,
            restarts: 16,
            seed: 0,
            residual_target_slack: 0.05,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.rho_admm > 0.0) {
            return Err(SolverError::InvalidConfig("rho_admm must be > 0"));
        }
        if !(self.primal_tol > 0.0 && self.dual_tol > 0.0) {
            return Err(SolverError::InvalidConfig("tolerances must be > 0"));
        }
        if self.max_inner_iters == 0 || self.max_outer_iters == 0 {
            return Err(SolverError::InvalidConfig("iteration caps must be >= 1"));
        }
        if self.restarts == 0 {
            return Err(SolverError::InvalidConfig("restarts must be >= 1"));
        }
        if !(0.0..1.0).contains(&self.residual_target_slack) {
            return Err(SolverError::InvalidConfig(
                "residual_target_slack must be in [0, 1)",
            ));
        }
        Ok(())
    }
}

/// Output of any of the solvers.
///
/// `objective` is always `||D* x||_1`. `residual` is the data-fit
/// residual of the producing operation: `||A x - y||_2` for the linear
/// inner solver, `|| |A x| - b ||_2` for the phaseless solvers.
#[derive(Debug, Clone, PartialEq)]
pub struct RecoveryResult {
    pub estimate: Vec<f64>,
    pub objective: f64,
    pub residual: f64,
    pub inner_iters: usize,
    pub outer_iters: usize,
    pub converged: bool,
    /// Stationarity + subgradient violation at the returned point, when
    /// the producing path computes one.
    pub kkt_residual: Option<f64>,
    /// Final ADMM residuals, when an iterative path produced the result.
    pub primal_residual: Option<f64>,
    pub dual_residual: Option<f64>,
}

impl RecoveryResult {
    /// Direct (non-iterative) result at a known point.
    pub(crate) fn at_point(estimate: Vec<f64>, objective: f64, residual: f64) -> Self {
        RecoveryResult {
            estimate,
            objective,
            residual,
            inner_iters: 0,
            outer_iters: 0,
            converged: true,
            kkt_residual: None,
            primal_residual: None,
            dual_residual: None,
        }
    }
}

/// Entrywise soft threshold `sign(v_i) * max(|v_i| - tau, 0)` — the
/// proximal map of `tau * ||.||_1`.
pub fn soft_threshold(v: &[f64], tau: f64) -> Vec<f64> {
    assert!(tau >= 0.0, "threshold must be nonnegative");
    v.iter()
        .map(|&x| {
            let shrunk = x.abs() - tau;
            if shrunk <= 0.0 {
                0.0
            } else {
                linalg::sign_pm1(x) * shrunk
            }
        })
        .collect()
}

/// Distance modulo the global sign ambiguity:
/// `min(||x - y||_2, ||x + y||_2)`.
pub fn distance_mod_sign(x: &[f64], y: &[f64]) -> f64 {
    assert_eq!(x.len(), y.len(), "distance_mod_sign length mismatch");
    let d_minus = linalg::norm2(&linalg::sub(x, y));
    let d_plus = linalg::norm2(&linalg::add(x, y));
    d_minus.min(d_plus)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn soft_threshold_examples() {
        assert_eq!(soft_threshold(&[3.0], 1.0), alloc::vec![2.0]);
        assert_eq!(soft_threshold(&[-0.5], 1.0), alloc::vec![0.0]);
        assert_eq!(soft_threshold(&[1.5, -2.0], 0.0), alloc::vec![1.5, -2.0]);
    }

    #[test]
    fn soft_threshold_shrinks_l1() {
        let mut rng = crate::rng::RngStream::from_seed(1);
        for _ in 0..50 {
            let v = rng.normal_vec(8);
            let tau = rng.uniform01();
            assert!(linalg::norm1(&soft_threshold(&v, tau)) <= linalg::norm1(&v) + 1e-15);
        }
    }

    #[test]
    fn distance_mod_sign_examples() {
        let x = [1.0, 2.0, -0.5];
        let neg: Vec<f64> = x.iter().map(|v| -v).collect();
        assert_eq!(distance_mod_sign(&x, &x), 0.0);
        assert_eq!(distance_mod_sign(&x, &neg), 0.0);
        let e1 = [1.0, 0.0];
        let e2 = [0.0, 1.0];
        assert!((distance_mod_sign(&e1, &e2) - 2.0f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn distance_mod_sign_is_symmetric() {
        let mut rng = crate::rng::RngStream::from_seed(2);
        for _ in 0..100 {
            let x = rng.normal_vec(5);
            let y = rng.normal_vec(5);
            assert_eq!(distance_mod_sign(&x, &y), distance_mod_sign(&y, &x));
        }
    }

    #[test]
    fn config_validation() {
        assert!(SolverConfig::default().validate().is_ok());
        let mut bad = SolverConfig::default();
        bad.restarts = 0;
        assert!(bad.validate().is_err());
        let mut bad2 = SolverConfig::default();
        bad2.rho_admm = -1.0;
        assert!(bad2.validate().is_err());
    }
}
