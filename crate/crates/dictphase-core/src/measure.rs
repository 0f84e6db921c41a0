//! Sensing ensembles and magnitude-only observations.

use alloc::vec::Vec;

use crate::linalg::{self, Matrix};
use crate::rng::{streams, RngStream};

#[derive(Debug, Clone, PartialEq)]
pub enum MeasureError {
    ShapeMismatch { expected: usize, got: usize },
    RowIndexOutOfRange { index: usize, rows: usize },
    DuplicateRowIndex { index: usize },
    NegativeNoiseBudget,
    NonFinite,
}

impl core::fmt::Display for MeasureError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            MeasureError::ShapeMismatch { expected, got } => {
                write!(f, "vector length {} does not match {}", got, expected)
            }
            MeasureError::RowIndexOutOfRange { index, rows } => {
                write!(f, "row index {} out of range for {} rows", index, rows)
            }
            MeasureError::DuplicateRowIndex { index } => {
                write!(f, "duplicate row index {}", index)
            }
            MeasureError::NegativeNoiseBudget => write!(f, "noise budget must be >= 0"),
            MeasureError::NonFinite => write!(f, "entries must be finite"),
        }
    }
}

impl core::error::Error for MeasureError {}

/// An `m x n` sensing matrix with the seed that generated it.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementEnsemble {
    matrix: Matrix,
    seed: u64,
}

impl MeasurementEnsemble {
    /// Wraps an explicit matrix (entries must be finite).
    pub fn from_matrix(matrix: Matrix, seed: u64) -> Result<Self, MeasureError> {
        if !matrix.is_finite() {
            return Err(MeasureError::NonFinite);
        }
        Ok(MeasurementEnsemble { matrix, seed })
    }

    pub fn rows(&self) -> usize {
        self.matrix.rows()
    }

    pub fn cols(&self) -> usize {
        self.matrix.cols()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Ensemble with every entry multiplied by `alpha` (e.g. `1/sqrt(m)`
    /// normalization, applied explicitly by experiments).
    pub fn scaled(&self, alpha: f64) -> MeasurementEnsemble {
        MeasurementEnsemble {
            matrix: self.matrix.scale(alpha),
            seed: self.seed,
        }
    }
}

/// I.i.d. standard-normal ensemble, deterministic per seed.
pub fn gaussian_ensemble(m: usize, n: usize, seed: u64) -> MeasurementEnsemble {
    assert!(m >= 1 && n >= 1, "ensemble needs m, n >= 1");
    let mut rng = RngStream::for_stream(seed, streams::ENSEMBLE);
    let matrix = Matrix::from_fn(m, n, |_, _| rng.normal());
    MeasurementEnsemble { matrix, seed }
}

/// Entrywise `|A x|`.
pub fn phaseless_forward(a: &MeasurementEnsemble, x: &[f64]) -> Result<Vec<f64>, MeasureError> {
    if x.len() != a.cols() {
        return Err(MeasureError::ShapeMismatch {
            expected: a.cols(),
            got: x.len(),
        });
    }
    Ok(a.matrix.matvec(x).iter().map(|v| v.abs()).collect())
}

/// Rows of `A` indexed by `t` (a subset of `0..m`), in ascending order.
pub fn row_restrict(
    a: &MeasurementEnsemble,
    t: &[usize],
) -> Result<MeasurementEnsemble, MeasureError> {
    let mut idx = t.to_vec();
    idx.sort_unstable();
    for pair in idx.windows(2) {
        if pair[0] == pair[1] {
            return Err(MeasureError::DuplicateRowIndex { index: pair[0] });
        }
    }
    if let Some(&bad) = idx.iter().find(|&&i| i >= a.rows()) {
        return Err(MeasureError::RowIndexOutOfRange {
            index: bad,
            rows: a.rows(),
        });
    }
    Ok(MeasurementEnsemble {
        matrix: a.matrix.select_rows(&idx),
        seed: a.seed,
    })
}

/// A magnitude observation `b ~ |A x0| + e` with `||e||_2 <= eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaselessObservation {
    magnitudes: Vec<f64>,
    noise_budget: f64,
    seed: u64,
    truth: Option<Vec<f64>>,
}

impl PhaselessObservation {
    /// Noiseless observation (`b` as given, budget 0).
    pub fn exact(magnitudes: Vec<f64>) -> PhaselessObservation {
        debug_assert!(magnitudes.iter().all(|&b| b >= 0.0));
        PhaselessObservation {
            magnitudes,
            noise_budget: 0.0,
            seed: 0,
            truth: None,
        }
    }

    /// Observation with an explicit noise budget (used when loading from
    /// files; `add_bounded_noise` is the generating counterpart).
    pub fn with_budget(
        magnitudes: Vec<f64>,
        noise_budget: f64,
        seed: u64,
    ) -> Result<PhaselessObservation, MeasureError> {
        if noise_budget < 0.0 {
            return Err(MeasureError::NegativeNoiseBudget);
        }
        if !magnitudes.iter().all(|b| b.is_finite()) {
            return Err(MeasureError::NonFinite);
        }
        Ok(PhaselessObservation {
            magnitudes,
            noise_budget,
            seed,
            truth: None,
        })
    }

    pub fn magnitudes(&self) -> &[f64] {
        &self.magnitudes
    }

    pub fn len(&self) -> usize {
        self.magnitudes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.magnitudes.is_empty()
    }

    pub fn noise_budget(&self) -> f64 {
        self.noise_budget
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Ground-truth signal, if attached for experiment bookkeeping.
    pub fn truth(&self) -> Option<&[f64]> {
        self.truth.as_deref()
    }

    pub fn set_truth(&mut self, x0: Vec<f64>) {
        self.truth = Some(x0);
    }
}

/// Adds noise with `||e||_2 <= eps` exactly: a Gaussian direction scaled
/// to a uniform radius in `[0, eps]`, then clipping of negative
/// magnitudes to zero.
///
/// Clipping can only shrink each entry's deviation (a clipped entry had
/// `b_i + e_i < 0 <= b_i`, so the effective perturbation `-b_i` is smaller
/// in magnitude than `e_i`), hence the budget survives clipping; the
/// constructor still re-verifies and rescales as a guard.
pub fn add_bounded_noise(
    b: &[f64],
    eps: f64,
    seed: u64,
) -> Result<PhaselessObservation, MeasureError> {
    if eps < 0.0 {
        return Err(MeasureError::NegativeNoiseBudget);
    }
    if !b.iter().all(|x| x.is_finite()) {
        return Err(MeasureError::NonFinite);
    }
    if eps == 0.0 {
        return Ok(PhaselessObservation {
            magnitudes: b.to_vec(),
            noise_budget: 0.0,
            seed,
            truth: None,
        });
    }
    let m = b.len();
    let mut rng = RngStream::for_stream(seed, streams::NOISE);
    let mut direction = rng.normal_vec(m);
    let norm = linalg::norm2(&direction);
    if norm == 0.0 {
        direction = alloc::vec![0.0; m];
    } else {
        for d in direction.iter_mut() {
            *d /= norm;
        }
    }
    let radius = rng.uniform01() * eps;

    let mut magnitudes: Vec<f64> = b
        .iter()
        .zip(&direction)
        .map(|(bi, di)| (bi + radius * di).max(0.0))
        .collect();
    // Unreachable in exact arithmetic; guards float corner cases.
    for _ in 0..4 {
        let eff = linalg::norm2(&linalg::sub(&magnitudes, b));
        if eff <= eps {
            break;
        }
        let shrink = eps / eff * (1.0 - 1e-12);
        magnitudes = b
            .iter()
            .zip(&magnitudes)
            .map(|(bi, mi)| (bi + shrink * (mi - bi)).max(0.0))
            .collect();
    }

    Ok(PhaselessObservation {
        magnitudes,
        noise_budget: eps,
        seed,
        truth: None,
    })
}
