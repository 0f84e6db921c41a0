//! Executable certificates for the recovery conditions.
//!
//! * [`drip_exact`] / [`drip_montecarlo`] — restricted isometry of `A` on
//!   images of k-sparse coefficient vectors under `D`.
//! * [`sdrip_exact`] / [`sdrip_montecarlo`] — the two-sided row-subset
//!   isometry envelope over all subsets keeping at least half the rows.
//! * [`stability_constants`] / [`admissible_t`] / [`error_bound`] — the
//!   closed-form constants of the stability guarantee.
//! * [`nsp_real_check`] / [`nsp_real_counterexample_to_failure`] — the
//!   null-space condition equivalent to exact phaseless recovery, with
//!   constructive recovery-ambiguity witnesses.
//! * [`nsp_complex_check_tuple`] — the complex-case tuple condition.

mod complex;
mod drip;
mod nsp_real;
mod sdrip;
mod stability;

pub use complex::{
    complex_membership, nsp_complex_check_tuple, CMatrix, NspTupleError,
};
pub use drip::{drip_exact, drip_montecarlo};
pub use nsp_real::{nsp_real_check, nsp_real_counterexample_to_failure, NspSearchConfig};
pub use sdrip::{sdrip_exact, sdrip_montecarlo};
pub use stability::{admissible_t, error_bound, stability_constants};

use alloc::vec::Vec;

use crate::frames::FrameError;
use crate::measure::MeasureError;

/// Default enumeration budget for exact certifiers (support/subset pairs).
pub const DEFAULT_CERT_BUDGET: u128 = 5_000_000;

#[derive(Debug, Clone, PartialEq)]
pub enum CertifyError {
    Frame(FrameError),
    Measure(MeasureError),
    ShapeMismatch {
        expected: usize,
        got: usize,
    },
    /// Exact enumeration refused: the support/subset family is too large.
    BudgetExceeded {
        required: u128,
        budget: u128,
    },
    InvalidOrder {
        k: usize,
        atoms: usize,
    },
    DomainError(&'static str),
    /// A claimed null-space membership fails numerically.
    NullspaceViolation {
        row: usize,
        residual: f64,
    },
}

impl From<FrameError> for CertifyError {
    fn from(e: FrameError) -> Self {
        CertifyError::Frame(e)
    }
}

impl From<MeasureError> for CertifyError {
    fn from(e: MeasureError) -> Self {
        CertifyError::Measure(e)
    }
}

impl core::fmt::Display for CertifyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            CertifyError::Frame(e) => write!(f, "frame error: {}", e),
            CertifyError::Measure(e) => write!(f, "measurement error: {}", e),
            CertifyError::ShapeMismatch { expected, got } => {
                write!(f, "vector length {} does not match {}", got, expected)
            }
            CertifyError::BudgetExceeded { required, budget } => {
                write!(f, "enumeration needs {} evaluations, budget {}", required, budget)
            }
            CertifyError::InvalidOrder { k, atoms } => {
                write!(f, "order {} out of range for {} atoms", k, atoms)
            }
            CertifyError::DomainError(msg) => write!(f, "domain error: {}", msg),
            CertifyError::NullspaceViolation { row, residual } => write!(
                f,
                "null-space membership fails at row {} (residual {:e})",
                row, residual
            ),
        }
    }
}

impl core::error::Error for CertifyError {}

/// How a constant was computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CertMethod {
    /// Full support/subset enumeration.
    Exact,
    /// Random probing; the reported constant is only a bound in the
    /// direction the probes can certify.
    MonteCarloLowerBound,
}

/// Restricted-isometry constant of `A` over `D`-images of k-sparse
/// vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct DripReport {
    pub order: usize,
    pub delta: f64,
    pub method: CertMethod,
    pub supports_checked: u64,
    /// Support attaining `delta` (exact method only).
    pub argmax_support: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdripStatus {
    Satisfied,
    Violated,
    /// No verdict: zero trials, or Monte Carlo probing that found no
    /// violation (probes cannot certify satisfaction).
    Inconclusive,
}

/// Two-sided isometry envelope over row subsets `|I| >= m/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdripReport {
    pub order: usize,
    /// Tight lower envelope (exact) or smallest probed ratio (MC).
    pub theta_minus: Option<f64>,
    /// Tight upper envelope (exact) or largest probed ratio (MC).
    pub theta_plus: Option<f64>,
    pub status: SdripStatus,
    /// Subset attaining a violation, when one is found.
    pub witness_subset: Option<Vec<usize>>,
    pub method: CertMethod,
    pub checked: u64,
}

impl SdripReport {
    pub fn satisfied(&self) -> bool {
        self.status == SdripStatus::Satisfied
    }
}

/// Closed-form multipliers of the stability bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityConstants {
    pub t: f64,
    pub delta: f64,
    pub c1: f64,
    pub c2: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NspStatus {
    /// Every decidable branch of the tested family passed.
    HoldsOnTestedFamily,
    /// A verified recovery-ambiguity witness exists.
    Counterexample,
    /// Budget exhausted, or undecidable (sampled-only) branches remained.
    Inconclusive,
}

/// Witness for a real null-space-property violation: `u` in the null
/// space of the rows `t_rows`, `v` in the null space of the complement,
/// with `||D*(u+v)||_1 >= ||D*(u-v)||_1` and `u + v` dictionary-sparse.
#[derive(Debug, Clone, PartialEq)]
pub struct RealNspWitness {
    pub t_rows: Vec<usize>,
    pub u: Vec<f64>,
    pub v: Vec<f64>,
}

/// Witness for a complex tuple violation (stored as split re/im parts).
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexNspWitness {
    pub partition: Vec<Vec<usize>>,
    pub eta_re: Vec<Vec<f64>>,
    pub eta_im: Vec<Vec<f64>>,
    pub c_re: Vec<f64>,
    pub c_im: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum NspWitness {
    Real(RealNspWitness),
    Complex(ComplexNspWitness),
}

/// Outcome of a null-space-property check.
#[derive(Debug, Clone, PartialEq)]
pub struct NspVerdict {
    pub status: NspStatus,
    pub witness: Option<NspWitness>,
    /// Total branch evaluations (slices, samples, oracle harvests).
    pub trials: u64,
    /// Branches decided exactly.
    pub exact_slices: u64,
    /// Branches only probed (dimension too high for the exact analysis).
    pub sampled_slices: u64,
    pub budget_exhausted: bool,
}
